#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "lingsel/corpus.hpp"
#include "lingsel/ngram.hpp"

namespace lingsel {

// External translation process. The command reads UTF-8 sentences, one
// per line, on stdin and must write exactly one translation per input
// line, in order, then exit 0.
struct TranslatorHandle {
  std::string command;
  std::string direction;  // "s2t" or "t2s", informational
  double timeout_seconds = 300.0;
};

std::vector<std::string> translate(const TranslatorHandle &translator,
                                   const std::vector<std::string> &lines);

struct IbtState {
  int iteration = 0;
  std::vector<double> history;
  double best_score = -std::numeric_limits<double>::infinity();
  int stall = 0;  // consecutive iterations since best_score last improved
  ParallelCorpus augmented_forward;   // ID'_p  (in-domain + SN'_s)
  ParallelCorpus augmented_backward;  // ID''_p (in-domain + SN'_t)
};

struct IterationReport {
  std::size_t kept_src = 0;
  std::size_t kept_tgt = 0;
  std::size_t size_forward = 0;
  std::size_t size_backward = 0;
};

struct IbtIterationOptions {
  double threshold_source = 0.8;
  double threshold_target = 0.8;
  bool transliterate = true;
  bool raw_total = false;
  int threads = 1;
};

// One loop body: translate both monolingual sides, filter the translated
// sentences by SSS, pair survivors with their originals by index, and
// concatenate onto the original in-domain corpus.
IbtState ibt_iterate(IbtState state, const ParallelCorpus &in_domain,
                     const MonolingualCorpus &mono_src,
                     const MonolingualCorpus &mono_tgt,
                     const NGramModel &lm_src, const NGramModel &lm_tgt,
                     const TranslatorHandle &translator_s2t,
                     const TranslatorHandle &translator_t2s,
                     const IbtIterationOptions &options = {},
                     IterationReport *report = nullptr);

enum class Convergence { kContinue, kConverged };

// Appends the score; strict improvement resets the stall counter.
Convergence convergence_check(IbtState &state, double dev_score,
                              int patience = 10, double min_delta = 0.0);

struct IbtConfig {
  std::string in_src, in_tgt;
  std::string mono_src, mono_tgt;
  std::string dev_src, dev_tgt;
  std::string translator_s2t, translator_t2s;
  std::string retrain_command;  // optional; receives the 4 corpus paths
  std::string eval_command;     // optional; prints the dev score
  std::string work_dir = ".";
  double threshold_source = 0.8;
  double threshold_target = 0.8;
  int patience = 10;
  int max_iterations = 100;
  int order = 5;
  bool transliterate = true;
  double min_delta = 0.0;
  double timeout_seconds = 300.0;
  int threads = 1;
};

IbtConfig load_ibt_config(const std::string &path);

// Full Algorithm-4-style loop: iterate, persist corpora, run hooks,
// evaluate, check convergence. Logs one record per iteration.
IbtState ibt_run(const IbtConfig &config, std::ostream &log);

}  // namespace lingsel
