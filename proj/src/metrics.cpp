#include "lingsel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lingsel/utf8.hpp"

namespace lingsel {
namespace {

using Tokens = std::vector<std::string>;

void check_inputs(const std::vector<Sentence> &hyp,
                  const std::vector<Sentence> &ref) {
  if (hyp.empty() || ref.empty()) throw Error("metrics: empty input");
  if (hyp.size() != ref.size())
    throw Error("metrics: " + std::to_string(hyp.size()) +
                " hypotheses vs " + std::to_string(ref.size()) +
                " references");
}

// Characters of the sentence with all whitespace removed, one codepoint
// per token.
Tokens char_tokens(const Sentence &s) {
  Tokens out;
  for (char32_t cp : utf8::to_codepoints(s.text)) {
    if (cp == U' ' || cp == U'\t' || cp == 0x00A0) continue;
    std::string t;
    utf8::append(t, cp);
    out.push_back(std::move(t));
  }
  return out;
}

std::map<Tokens, std::size_t> ngram_counts(const Tokens &tokens, int n) {
  std::map<Tokens, std::size_t> counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[Tokens(tokens.begin() + i, tokens.begin() + i + n)];
  return counts;
}

struct OrderStats {
  std::size_t matched = 0;  // clipped
  std::size_t hyp_total = 0;
  std::size_t ref_total = 0;
};

OrderStats accumulate_order(const std::vector<Tokens> &hyp,
                            const std::vector<Tokens> &ref, int n) {
  OrderStats stats;
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    const auto h = ngram_counts(hyp[i], n);
    const auto r = ngram_counts(ref[i], n);
    for (const auto &[gram, count] : h) {
      stats.hyp_total += count;
      const auto it = r.find(gram);
      if (it != r.end()) stats.matched += std::min(count, it->second);
    }
    for (const auto &[gram, count] : r) stats.ref_total += count;
  }
  return stats;
}

MetricReport bleu_tokens(const std::vector<Tokens> &hyp,
                         const std::vector<Tokens> &ref, BleuMode mode,
                         const std::string &name) {
  MetricReport report;
  report.name = name;
  report.note = mode == BleuMode::kStandard ? "standard" : "paper-literal";

  std::size_t hyp_len = 0, ref_len = 0;
  for (const auto &t : hyp) hyp_len += t.size();
  for (const auto &t : ref) ref_len += t.size();
  report.aux["hyp_length"] = static_cast<double>(hyp_len);
  report.aux["ref_length"] = static_cast<double>(ref_len);

  double log_sum = 0.0, product = 1.0;
  int used_orders = 0;
  bool zero_precision = false;
  for (int n = 1; n <= 4; ++n) {
    const OrderStats stats = accumulate_order(hyp, ref, n);
    if (stats.hyp_total == 0) continue;  // short-sequence rule
    const double p = static_cast<double>(stats.matched) /
                     static_cast<double>(stats.hyp_total);
    report.aux["precision_" + std::to_string(n)] = p;
    if (p == 0.0) zero_precision = true;
    ++used_orders;
    product *= p;
    if (p > 0.0) log_sum += std::log(p);
  }
  if (used_orders == 0 || zero_precision) {
    report.value = 0.0;
    return report;
  }

  if (mode == BleuMode::kStandard) {
    const double bp =
        hyp_len < ref_len
            ? std::exp(1.0 - static_cast<double>(ref_len) /
                                 static_cast<double>(hyp_len))
            : 1.0;
    report.aux["brevity_penalty"] = bp;
    report.value = bp * std::exp(log_sum / used_orders);
  } else {
    const double penalty =
        std::min(1.0, static_cast<double>(hyp_len) /
                          static_cast<double>(ref_len));
    report.aux["length_penalty"] = penalty;
    report.value = penalty * product;
  }
  return report;
}

std::vector<Tokens> word_tokens(const std::vector<Sentence> &sentences) {
  std::vector<Tokens> out;
  out.reserve(sentences.size());
  for (const auto &s : sentences) out.push_back(s.tokens);
  return out;
}

std::vector<Tokens> all_char_tokens(const std::vector<Sentence> &sentences) {
  std::vector<Tokens> out;
  out.reserve(sentences.size());
  for (const auto &s : sentences) out.push_back(char_tokens(s));
  return out;
}

std::size_t edit_distance(const Tokens &a, const Tokens &b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

struct EditBreakdown {
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
};

EditBreakdown edit_breakdown(const Tokens &a, const Tokens &b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1,
                                          std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  EditBreakdown out;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && a[i - 1] == b[j - 1] && d[i][j] == d[i - 1][j - 1]) {
      --i;
      --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      ++out.substitutions;
      --i;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++out.deletions;  // word in hypothesis, absent in reference
      --i;
    } else {
      ++out.insertions;
      --j;
    }
  }
  return out;
}

constexpr std::size_t kMaxShiftBlock = 10;
constexpr std::size_t kMaxShiftRounds = 50;

// Greedy block shifts: repeatedly apply the single contiguous-block move
// that most reduces the word-level edit distance, one shift edit each.
std::size_t ter_sentence(Tokens hyp, const Tokens &ref,
                         EditBreakdown *breakdown, std::size_t *shifts) {
  std::size_t dist = edit_distance(hyp, ref);
  std::size_t shift_edits = 0;
  for (std::size_t round = 0; round < kMaxShiftRounds && dist > 0; ++round) {
    std::size_t best = dist;
    Tokens best_hyp;
    for (std::size_t start = 0; start < hyp.size(); ++start) {
      const std::size_t max_len =
          std::min(kMaxShiftBlock, hyp.size() - start);
      for (std::size_t len = 1; len <= max_len; ++len) {
        Tokens rest;
        rest.reserve(hyp.size() - len);
        rest.insert(rest.end(), hyp.begin(), hyp.begin() + start);
        rest.insert(rest.end(), hyp.begin() + start + len, hyp.end());
        for (std::size_t pos = 0; pos <= rest.size(); ++pos) {
          if (pos == start) continue;  // no-op move
          Tokens moved;
          moved.reserve(hyp.size());
          moved.insert(moved.end(), rest.begin(), rest.begin() + pos);
          moved.insert(moved.end(), hyp.begin() + start,
                       hyp.begin() + start + len);
          moved.insert(moved.end(), rest.begin() + pos, rest.end());
          const std::size_t d = edit_distance(moved, ref);
          if (d < best) {
            best = d;
            best_hyp = std::move(moved);
          }
        }
      }
    }
    if (best >= dist) break;  // only strictly improving shifts
    hyp = std::move(best_hyp);
    dist = best;
    ++shift_edits;
  }
  if (breakdown) {
    const EditBreakdown b = edit_breakdown(hyp, ref);
    breakdown->insertions += b.insertions;
    breakdown->deletions += b.deletions;
    breakdown->substitutions += b.substitutions;
  }
  if (shifts) *shifts += shift_edits;
  return dist + shift_edits;
}

}  // namespace

MetricReport bleu(const std::vector<Sentence> &hypotheses,
                  const std::vector<Sentence> &references, BleuMode mode) {
  check_inputs(hypotheses, references);
  return bleu_tokens(word_tokens(hypotheses), word_tokens(references), mode,
                     "BLEU");
}

MetricReport char_bleu(const std::vector<Sentence> &hypotheses,
                       const std::vector<Sentence> &references) {
  check_inputs(hypotheses, references);
  return bleu_tokens(all_char_tokens(hypotheses),
                     all_char_tokens(references), BleuMode::kStandard,
                     "char-BLEU");
}

MetricReport chrf(const std::vector<Sentence> &hypotheses,
                  const std::vector<Sentence> &references, double beta,
                  int max_n) {
  check_inputs(hypotheses, references);
  const auto hyp = all_char_tokens(hypotheses);
  const auto ref = all_char_tokens(references);
  MetricReport report;
  report.name = "chrF" + std::to_string(static_cast<int>(beta));
  const double beta2 = beta * beta;
  double f_sum = 0.0;
  int used_orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    const OrderStats stats = accumulate_order(hyp, ref, n);
    if (stats.hyp_total == 0 && stats.ref_total == 0) continue;
    const double p = stats.hyp_total
                         ? static_cast<double>(stats.matched) /
                               static_cast<double>(stats.hyp_total)
                         : 0.0;
    const double r = stats.ref_total
                         ? static_cast<double>(stats.matched) /
                               static_cast<double>(stats.ref_total)
                         : 0.0;
    const double den = beta2 * p + r;
    const double f = den > 0.0 ? (1.0 + beta2) * p * r / den : 0.0;
    report.aux["f_" + std::to_string(n)] = f;
    f_sum += f;
    ++used_orders;
  }
  report.value = used_orders ? f_sum / used_orders : 0.0;
  return report;
}

MetricReport ter(const std::vector<Sentence> &hypotheses,
                 const std::vector<Sentence> &references) {
  check_inputs(hypotheses, references);
  MetricReport report;
  report.name = "TER";
  std::size_t total_edits = 0, total_ref = 0, shifts = 0;
  EditBreakdown breakdown;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    total_edits += ter_sentence(hypotheses[i].tokens, references[i].tokens,
                                &breakdown, &shifts);
    total_ref += references[i].tokens.size();
  }
  if (total_ref == 0) throw Error("ter: references contain no tokens");
  report.value =
      static_cast<double>(total_edits) / static_cast<double>(total_ref);
  report.aux["insertions"] = static_cast<double>(breakdown.insertions);
  report.aux["deletions"] = static_cast<double>(breakdown.deletions);
  report.aux["substitutions"] = static_cast<double>(breakdown.substitutions);
  report.aux["shifts"] = static_cast<double>(shifts);
  report.aux["ref_tokens"] = static_cast<double>(total_ref);
  return report;
}

}  // namespace lingsel
