#pragma once

#include <map>
#include <string>
#include <vector>

#include "lingsel/corpus.hpp"

namespace lingsel {

struct MetricReport {
  std::string name;
  double value = 0.0;
  std::string note;                    // mode / scale annotation
  std::map<std::string, double> aux;   // per-order precisions, edit counts
};

enum class BleuMode { kStandard, kPaperLiteral };

// Corpus-level BLEU over 1..4-gram clipped precisions. Standard mode uses
// the geometric mean with an exponential brevity penalty; paper-literal
// mode uses min(1, c/r) times the plain product of precisions.
MetricReport bleu(const std::vector<Sentence> &hypotheses,
                  const std::vector<Sentence> &references,
                  BleuMode mode = BleuMode::kStandard);

// Standard BLEU over character tokens (whitespace removed).
MetricReport char_bleu(const std::vector<Sentence> &hypotheses,
                       const std::vector<Sentence> &references);

// Character n-gram F-score, corpus-aggregated per order then averaged.
MetricReport chrf(const std::vector<Sentence> &hypotheses,
                  const std::vector<Sentence> &references, double beta = 2.0,
                  int max_n = 6);

// Translation edit rate with greedy block shifts.
MetricReport ter(const std::vector<Sentence> &hypotheses,
                 const std::vector<Sentence> &references);

}  // namespace lingsel
