#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lingsel/selection.hpp"

using namespace lingsel;

namespace {

MonolingualCorpus corpus_from(const std::vector<std::string> &lines) {
  MonolingualCorpus c;
  c.language = "xx";
  for (const auto &line : lines) c.sentences.emplace_back(line);
  return c;
}

ParallelCorpus parallel_from(const std::vector<std::string> &src,
                             const std::vector<std::string> &tgt,
                             const std::string &name) {
  ParallelCorpus c;
  c.name = name;
  for (const auto &s : src) c.source.emplace_back(s);
  for (const auto &t : tgt) c.target.emplace_back(t);
  return c;
}

}  // namespace

TEST_CASE("min-max scaling pins the extremes and preserves order") {
  const ScoreRun run = scale_scores({-4.0, -2.0, -1.0, -3.0});
  CHECK(run.min_raw == -4.0);
  CHECK(run.max_raw == -1.0);
  CHECK_FALSE(run.degenerate);
  CHECK(run.scores[0].sss == doctest::Approx(0.0));
  CHECK(run.scores[2].sss == doctest::Approx(1.0));
  CHECK(run.scores[1].sss == doctest::Approx(2.0 / 3.0));
  CHECK(run.scores[3].sss == doctest::Approx(1.0 / 3.0));
  for (std::size_t i = 0; i < run.scores.size(); ++i)
    CHECK(run.scores[i].index == i);
  CHECK_THROWS_AS(scale_scores({}), Error);
}

TEST_CASE("scaling is invariant under affine transforms of the raw scores") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> raw(-10.0, -0.1);
  std::vector<double> scores;
  for (int i = 0; i < 50; ++i) scores.push_back(raw(rng));
  const ScoreRun a = scale_scores(scores);
  std::vector<double> shifted;
  for (double v : scores) shifted.push_back(3.5 * v + 11.0);
  const ScoreRun b = scale_scores(shifted);
  for (std::size_t i = 0; i < scores.size(); ++i)
    CHECK(std::fabs(a.scores[i].sss - b.scores[i].sss) < 1e-12);
}

TEST_CASE("identical raw scores degenerate to all ones") {
  const ScoreRun run = scale_scores({-2.0, -2.0, -2.0});
  CHECK(run.degenerate);
  for (const auto &s : run.scores) CHECK(s.sss == 1.0);
  // A degenerate run passes any threshold filter whole.
  CHECK(filter_by_threshold(run, 1.0).kept.size() == 3);
}

TEST_CASE("LM-based scores are per token by default, totals on request") {
  const auto train = corpus_from({"a b c", "b c a", "c a b"});
  const NGramModel model = estimate_kn(count_ngrams(train, 2));
  const auto pool = corpus_from({"a b", "a b a b a b"});

  ScoreOptions opts;
  opts.transliterate = false;
  const ScoreRun per_token = sss_scores(model, pool, opts);
  opts.raw_total = true;
  const ScoreRun totals = sss_scores(model, pool, opts);

  const SentenceScore s0 = lm_score(model, pool.sentences[0]);
  const SentenceScore s1 = lm_score(model, pool.sentences[1]);
  CHECK(per_token.scores[0].raw ==
        doctest::Approx(s0.total_log10 / double(s0.tokens_scored)));
  CHECK(totals.scores[0].raw == doctest::Approx(s0.total_log10));
  CHECK(totals.scores[1].raw == doctest::Approx(s1.total_log10));
  // The longer sentence has the smaller total but not necessarily the
  // smaller per-token score.
  CHECK(totals.scores[1].raw < totals.scores[0].raw);
}

TEST_CASE("multithreaded scoring is deterministic") {
  const auto train = corpus_from({"a b c d", "d c b a", "a c b d"});
  const NGramModel model = estimate_kn(count_ngrams(train, 3));
  std::vector<std::string> lines;
  std::mt19937 rng(808);
  std::uniform_int_distribution<int> word(0, 3);
  for (int i = 0; i < 64; ++i) {
    std::string line;
    for (int w = 0; w < 5; ++w) {
      if (w) line += ' ';
      line += static_cast<char>('a' + word(rng));
    }
    lines.push_back(line);
  }
  const auto pool = corpus_from(lines);
  ScoreOptions one, four;
  one.transliterate = four.transliterate = false;
  one.threads = 1;
  four.threads = 4;
  const ScoreRun a = sss_scores(model, pool, one);
  const ScoreRun b = sss_scores(model, pool, four);
  REQUIRE(a.scores.size() == b.scores.size());
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    CHECK(a.scores[i].index == b.scores[i].index);
    CHECK(a.scores[i].raw == b.scores[i].raw);
    CHECK(a.scores[i].sss == b.scores[i].sss);
  }
}

TEST_CASE("threshold filtering is inclusive and monotone") {
  ScoreRun run = scale_scores({-4.0, -3.0, -2.0, -1.0});
  const SelectionResult at_third =
      filter_by_threshold(run, run.scores[1].sss);
  // The sentence sitting exactly on the threshold is kept.
  CHECK(at_third.kept == std::vector<std::size_t>{1, 2, 3});
  const SelectionResult all = filter_by_threshold(run, 0.0);
  CHECK(all.kept.size() == 4);
  const SelectionResult top = filter_by_threshold(run, 1.0);
  CHECK(top.kept == std::vector<std::size_t>{3});
  // Raising the threshold never adds sentences.
  std::size_t prev = 5;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto kept = filter_by_threshold(run, t).kept.size();
    CHECK(kept <= prev);
    prev = kept;
  }
  CHECK_THROWS_AS(filter_by_threshold(run, -0.1), Error);
  CHECK_THROWS_AS(filter_by_threshold(run, 1.1), Error);
}

TEST_CASE("pool filtering keeps pairs whole and prepends in-domain data") {
  const ParallelCorpus in_domain = parallel_from(
      {"a b c", "b c a", "c a b", "a b"}, {"x y z", "y z x", "z x y", "x y"},
      "in");
  const ParallelCorpus pool = parallel_from(
      {"a b c", "q q q q", "b c a", "r r q"},
      {"x y z", "x y z", "q q q q", "y z x"}, "pool");
  DassaOptions opts;
  opts.order = 2;
  opts.transliterate = false;
  opts.threshold_source = 0.8;
  opts.threshold_target = 0.8;
  const DassaResult result = select_dassa(in_domain, pool, opts);

  // Recompute the expected kept sets with direct per-token scoring and
  // the min-max formula, without going through the selection module.
  const auto expected_kept = [&](const MonolingualCorpus &train,
                                 const std::vector<Sentence> &side,
                                 double threshold) {
    const NGramModel lm = estimate_kn(count_ngrams(train, opts.order));
    std::vector<double> raw;
    for (const auto &s : side) {
      const SentenceScore sc = lm_score(lm, s);
      raw.push_back(sc.total_log10 / double(sc.tokens_scored));
    }
    const double lo = *std::min_element(raw.begin(), raw.end());
    const double hi = *std::max_element(raw.begin(), raw.end());
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < raw.size(); ++i)
      if ((raw[i] - lo) / (hi - lo) >= threshold) kept.push_back(i);
    return kept;
  };
  const auto want_src = expected_kept(in_domain.source_side(), pool.source,
                                      opts.threshold_source);
  const auto want_tgt = expected_kept(in_domain.target_side(), pool.target,
                                      opts.threshold_target);
  CHECK(result.source_selection.kept == want_src);
  CHECK(result.target_selection.kept == want_tgt);

  // The best-matching pool sentence is always kept; the threshold never
  // keeps everything here because the pool contains off-domain junk.
  CHECK(!want_src.empty());
  CHECK(want_src.size() < pool.size());

  // Outputs are the in-domain corpus plus the kept pairs, pairs intact.
  REQUIRE(result.forward.size() == in_domain.size() + want_src.size());
  REQUIRE(result.backward.size() == in_domain.size() + want_tgt.size());
  for (std::size_t i = 0; i < in_domain.size(); ++i) {
    CHECK(result.forward.source[i].text == in_domain.source[i].text);
    CHECK(result.backward.target[i].text == in_domain.target[i].text);
  }
  for (std::size_t k = 0; k < want_src.size(); ++k) {
    CHECK(result.forward.source[in_domain.size() + k].text ==
          pool.source[want_src[k]].text);
    CHECK(result.forward.target[in_domain.size() + k].text ==
          pool.target[want_src[k]].text);
  }
  std::vector<std::size_t> both;
  std::set_intersection(want_src.begin(), want_src.end(), want_tgt.begin(),
                        want_tgt.end(), std::back_inserter(both));
  CHECK(result.kept_overlap == both.size());

  CHECK_THROWS_AS(select_dassa(ParallelCorpus{}, pool, opts), Error);
  CHECK_THROWS_AS(select_dassa(in_domain, ParallelCorpus{}, opts), Error);
}

TEST_CASE("cross-entropy difference separates domains") {
  const auto in_train = corpus_from({"a b c", "b c a", "c a b"});
  const auto pool_train = corpus_from({"q r s", "r s q", "s q r"});
  const NGramModel in_model = estimate_kn(count_ngrams(in_train, 2));
  const NGramModel pool_model = estimate_kn(count_ngrams(pool_train, 2));

  const auto cand = corpus_from({"a b c", "q r s"});
  const auto scores = moore_lewis_scores(in_model, pool_model, cand, false);
  REQUIRE(scores.size() == 2);
  CHECK(scores[0].first == 0);
  // The in-domain candidate must score strictly lower.
  CHECK(scores[0].second < scores[1].second);

  // Identical models give exactly zero for every candidate.
  const auto zero = moore_lewis_scores(in_model, in_model, cand, false);
  for (const auto &[idx, v] : zero) CHECK(v == doctest::Approx(0.0));
}
