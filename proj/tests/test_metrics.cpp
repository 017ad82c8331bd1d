#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "lingsel/metrics.hpp"

using namespace lingsel;

namespace {

std::vector<Sentence> sents(const std::vector<std::string> &lines) {
  std::vector<Sentence> out;
  for (const auto &line : lines) out.emplace_back(line);
  return out;
}

}  // namespace

TEST_CASE("perfect hypotheses score 1 (or 0 edits)") {
  const auto text = sents({"the quick brown fox", "jumps over the dog"});
  CHECK(bleu(text, text).value == doctest::Approx(1.0));
  CHECK(bleu(text, text, BleuMode::kPaperLiteral).value ==
        doctest::Approx(1.0));
  CHECK(char_bleu(text, text).value == doctest::Approx(1.0));
  CHECK(chrf(text, text).value == doctest::Approx(1.0));
  CHECK(ter(text, text).value == doctest::Approx(0.0));
}

TEST_CASE("chrF stays 1 on identical short text (empty orders skipped)") {
  const auto text = sents({"ab"});
  CHECK(chrf(text, text).value == doctest::Approx(1.0));
}

TEST_CASE("two-sentence corpus BLEU, hand-computed") {
  const auto hyp = sents({"the cat sat on mat", "a b c d"});
  const auto ref = sents({"the cat sat on the mat", "a b x d"});
  const MetricReport r = bleu(hyp, ref);
  CHECK(r.aux.at("precision_1") == doctest::Approx(8.0 / 9.0).epsilon(1e-9));
  CHECK(r.aux.at("precision_2") == doctest::Approx(4.0 / 7.0).epsilon(1e-9));
  CHECK(r.aux.at("precision_3") == doctest::Approx(2.0 / 5.0).epsilon(1e-9));
  CHECK(r.aux.at("precision_4") == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(r.aux.at("brevity_penalty") ==
        doctest::Approx(std::exp(-1.0 / 9.0)).epsilon(1e-9));
  const double expected =
      std::exp(-1.0 / 9.0) *
      std::pow((8.0 / 9.0) * (4.0 / 7.0) * (2.0 / 5.0) * (1.0 / 3.0), 0.25);
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("length-penalty-times-product mode, hand-computed") {
  // All precisions are 1; the penalty is the length ratio 4/5.
  const MetricReport r =
      bleu(sents({"a b c d"}), sents({"a b c d e"}), BleuMode::kPaperLiteral);
  CHECK(r.value == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(r.aux.at("length_penalty") == doctest::Approx(0.8));
  // Longer-than-reference output is not penalized in this mode.
  const MetricReport s =
      bleu(sents({"a b c d e"}), sents({"a b c d"}), BleuMode::kPaperLiteral);
  CHECK(s.aux.at("length_penalty") == doctest::Approx(1.0));
}

TEST_CASE("any zero precision zeroes BLEU") {
  const MetricReport r = bleu(sents({"q q q q"}), sents({"a b c d"}));
  CHECK(r.value == 0.0);
}

TEST_CASE("short hypotheses skip empty orders instead of zeroing") {
  // "ab" has no 3-grams; BLEU uses orders 1-2 only.
  const MetricReport r = char_bleu(sents({"ab"}), sents({"abc"}));
  CHECK(r.value == doctest::Approx(std::exp(-0.5)).epsilon(1e-9));
  CHECK(r.aux.count("precision_3") == 0);
}

TEST_CASE("character F-score, hand-computed") {
  const MetricReport r = chrf(sents({"abcd"}), sents({"abce"}));
  const double expected = (3.0 / 4.0 + 2.0 / 3.0 + 1.0 / 2.0 + 0.0) / 4.0;
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-9));
  CHECK(r.aux.at("f_1") == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(r.aux.count("f_5") == 0);  // no 5-grams on either side
}

TEST_CASE("character metrics ignore whitespace") {
  CHECK(chrf(sents({"a b c d"}), sents({"abcd"})).value ==
        doctest::Approx(1.0));
  CHECK(char_bleu(sents({"ab cd"}), sents({"a bcd"})).value ==
        doctest::Approx(1.0));
}

TEST_CASE("edit rate with a single substitution") {
  const MetricReport r = ter(sents({"a b x d e"}), sents({"a b c d e"}));
  CHECK(r.value == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(r.aux.at("substitutions") == 1.0);
  CHECK(r.aux.at("insertions") == 0.0);
  CHECK(r.aux.at("deletions") == 0.0);
  CHECK(r.aux.at("shifts") == 0.0);
}

TEST_CASE("a block shift counts as one edit") {
  const MetricReport r = ter(sents({"c d a b"}), sents({"a b c d"}));
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(r.aux.at("shifts") == 1.0);
  CHECK(r.aux.at("substitutions") == 0.0);
}

TEST_CASE("insertion and deletion breakdown") {
  // Hypothesis has one extra word and misses one.
  const MetricReport extra = ter(sents({"a b c d"}), sents({"a b c"}));
  CHECK(extra.aux.at("deletions") == 1.0);
  CHECK(extra.value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  const MetricReport missing = ter(sents({"a b"}), sents({"a b c"}));
  CHECK(missing.aux.at("insertions") == 1.0);
  CHECK(missing.value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("input validation") {
  const auto one = sents({"a"});
  const auto two = sents({"a", "b"});
  CHECK_THROWS_AS(bleu({}, one), Error);
  CHECK_THROWS_AS(bleu(one, two), Error);
  CHECK_THROWS_AS(chrf(one, two), Error);
  CHECK_THROWS_AS(ter(one, two), Error);
  CHECK_THROWS_AS(ter(sents({"a"}), sents({"   "})), Error);  // no ref tokens
}
