#include "lingsel/selection.hpp"

#include <algorithm>
#include <thread>

#include "lingsel/translit.hpp"

namespace lingsel {

ScoreRun scale_scores(const std::vector<double> &raw) {
  if (raw.empty()) throw Error("scale_scores: empty score vector");
  ScoreRun run;
  const auto [min_it, max_it] = std::minmax_element(raw.begin(), raw.end());
  run.min_raw = *min_it;
  run.max_raw = *max_it;
  run.degenerate = run.min_raw == run.max_raw;
  const double span = run.max_raw - run.min_raw;
  run.scores.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double sss =
        run.degenerate ? 1.0 : (raw[i] - run.min_raw) / span;
    run.scores.push_back({i, raw[i], sss});
  }
  return run;
}

ScoreRun sss_scores(const NGramModel &model,
                    const MonolingualCorpus &candidates,
                    const ScoreOptions &options) {
  if (candidates.empty()) throw Error("sss_scores: empty candidate corpus");
  std::vector<double> raw(candidates.size());
  const auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Sentence &s = candidates.sentences[i];
      const SentenceScore score =
          options.transliterate ? lm_score(model, Sentence(to_wx(s.text)))
                                : lm_score(model, s);
      raw[i] = options.raw_total
                   ? score.total_log10
                   : score.total_log10 /
                         static_cast<double>(score.tokens_scored);
    }
  };
  const std::size_t n_threads = std::max(1, options.threads);
  if (n_threads <= 1 || candidates.size() < 2 * n_threads) {
    score_range(0, candidates.size());
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk =
        (candidates.size() + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(begin + chunk, candidates.size());
      if (begin >= end) break;
      workers.emplace_back(score_range, begin, end);
    }
    for (auto &w : workers) w.join();
  }
  return scale_scores(raw);
}

SelectionResult filter_by_threshold(const ScoreRun &run, double threshold,
                                    Side side) {
  if (threshold < 0.0 || threshold > 1.0)
    throw Error("filter threshold must be in [0, 1]");
  SelectionResult result;
  result.threshold = threshold;
  result.side = side;
  result.min_raw = run.min_raw;
  result.max_raw = run.max_raw;
  for (const ScoredSentence &s : run.scores) {
    if (s.sss >= threshold) result.kept.push_back(s.index);
  }
  return result;
}

DassaResult select_dassa(const ParallelCorpus &in_domain,
                         const ParallelCorpus &pool,
                         const DassaOptions &options) {
  if (in_domain.size() == 0) throw Error("select_dassa: empty in-domain corpus");
  if (pool.size() == 0) throw Error("select_dassa: empty pool");
  if (options.threshold_source < 0.0 || options.threshold_source > 1.0 ||
      options.threshold_target < 0.0 || options.threshold_target > 1.0)
    throw Error("filter threshold must be in [0, 1]");

  const auto train_side = [&](const MonolingualCorpus &side) {
    if (!options.transliterate)
      return estimate_kn(count_ngrams(side, options.order));
    MonolingualCorpus wx;
    wx.language = side.language + "-wx";
    wx.sentences.reserve(side.size());
    for (const auto &s : side.sentences) wx.sentences.emplace_back(to_wx(s.text));
    return estimate_kn(count_ngrams(wx, options.order));
  };
  const NGramModel lm_src = train_side(in_domain.source_side());
  const NGramModel lm_tgt = train_side(in_domain.target_side());

  ScoreOptions score_opts;
  score_opts.transliterate = options.transliterate;
  score_opts.raw_total = options.raw_total;
  score_opts.threads = options.threads;
  const ScoreRun src_run = sss_scores(lm_src, pool.source_side(), score_opts);
  const ScoreRun tgt_run = sss_scores(lm_tgt, pool.target_side(), score_opts);

  DassaResult result;
  result.source_selection =
      filter_by_threshold(src_run, options.threshold_source, Side::kSource);
  result.target_selection =
      filter_by_threshold(tgt_run, options.threshold_target, Side::kTarget);

  const auto augment = [&](const std::vector<std::size_t> &kept,
                           const std::string &name) {
    ParallelCorpus out;
    out.name = name;
    out.source = in_domain.source;
    out.target = in_domain.target;
    for (std::size_t idx : kept) {
      out.source.push_back(pool.source[idx]);
      out.target.push_back(pool.target[idx]);
    }
    return out;
  };
  result.forward = augment(result.source_selection.kept,
                           in_domain.name + "+sss-src(" + pool.name + ")");
  result.backward = augment(result.target_selection.kept,
                            in_domain.name + "+sss-tgt(" + pool.name + ")");

  // Both kept lists are strictly increasing.
  std::vector<std::size_t> both;
  std::set_intersection(result.source_selection.kept.begin(),
                        result.source_selection.kept.end(),
                        result.target_selection.kept.begin(),
                        result.target_selection.kept.end(),
                        std::back_inserter(both));
  result.kept_overlap = both.size();
  return result;
}

std::vector<std::pair<std::size_t, double>> moore_lewis_scores(
    const NGramModel &in_model, const NGramModel &pool_model,
    const MonolingualCorpus &candidates, bool transliterate) {
  if (candidates.empty())
    throw Error("moore_lewis_scores: empty candidate corpus");
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Sentence &orig = candidates.sentences[i];
    const Sentence scored =
        transliterate ? Sentence(to_wx(orig.text)) : orig;
    const SentenceScore a = lm_score(in_model, scored);
    const SentenceScore b = lm_score(pool_model, scored);
    const double h_in =
        -a.total_log10 / static_cast<double>(a.tokens_scored);
    const double h_pool =
        -b.total_log10 / static_cast<double>(b.tokens_scored);
    out.emplace_back(i, h_in - h_pool);
  }
  return out;
}

}  // namespace lingsel
