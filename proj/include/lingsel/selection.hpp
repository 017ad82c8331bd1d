#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lingsel/corpus.hpp"
#include "lingsel/ngram.hpp"

namespace lingsel {

struct ScoredSentence {
  std::size_t index = 0;
  double raw = 0.0;  // LM score L_i (per-token log10 by default)
  double sss = 0.0;  // scaled into [0,1]
};

struct ScoreRun {
  std::vector<ScoredSentence> scores;
  double min_raw = 0.0;
  double max_raw = 0.0;
  bool degenerate = false;  // all raw scores equal; every sss forced to 1
};

// Min-max scaling of raw scores into [0,1].
ScoreRun scale_scores(const std::vector<double> &raw);

struct ScoreOptions {
  bool transliterate = true;  // WX-encode candidates before scoring
  bool raw_total = false;     // use the raw total instead of per-token
  int threads = 1;
};

ScoreRun sss_scores(const NGramModel &model,
                    const MonolingualCorpus &candidates,
                    const ScoreOptions &options = {});

enum class Side { kSource, kTarget };

struct SelectionResult {
  std::vector<std::size_t> kept;  // strictly increasing
  double threshold = 0.0;
  Side side = Side::kSource;
  double min_raw = 0.0;
  double max_raw = 0.0;
};

// Keeps every index with sss >= threshold (inclusive).
SelectionResult filter_by_threshold(const ScoreRun &run, double threshold,
                                    Side side = Side::kSource);

struct DassaOptions {
  double threshold_source = 0.8;
  double threshold_target = 0.8;
  int order = 5;
  bool transliterate = true;
  bool raw_total = false;
  int threads = 1;
};

struct DassaResult {
  ParallelCorpus forward;   // in_domain + pairs kept on the source side
  ParallelCorpus backward;  // in_domain + pairs kept on the target side
  SelectionResult source_selection;
  SelectionResult target_selection;
  std::size_t kept_overlap = 0;  // indices kept on both sides
};

DassaResult select_dassa(const ParallelCorpus &in_domain,
                         const ParallelCorpus &pool,
                         const DassaOptions &options = {});

// Cross-entropy difference per token (in-domain minus pool); lower means
// more in-domain. Returned in candidate order.
std::vector<std::pair<std::size_t, double>> moore_lewis_scores(
    const NGramModel &in_model, const NGramModel &pool_model,
    const MonolingualCorpus &candidates, bool transliterate = false);

}  // namespace lingsel
