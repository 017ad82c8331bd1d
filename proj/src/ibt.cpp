#include "lingsel/ibt.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "lingsel/metrics.hpp"
#include "lingsel/selection.hpp"
#include "lingsel/subprocess.hpp"
#include "lingsel/translit.hpp"

namespace lingsel {

std::vector<std::string> translate(const TranslatorHandle &translator,
                                   const std::vector<std::string> &lines) {
  auto output =
      run_line_filter(translator.command, lines, translator.timeout_seconds);
  if (output.size() != lines.size())
    throw Error("translator emitted " + std::to_string(output.size()) +
                " lines for " + std::to_string(lines.size()) +
                " inputs: " + translator.command);
  return output;
}

namespace {

std::vector<std::string> texts(const MonolingualCorpus &corpus) {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (const auto &s : corpus.sentences) out.push_back(s.text);
  return out;
}

MonolingualCorpus corpus_of(const std::vector<std::string> &lines,
                            const std::string &language) {
  MonolingualCorpus out;
  out.language = language;
  out.sentences.reserve(lines.size());
  for (const auto &line : lines) out.sentences.emplace_back(line);
  return out;
}

}  // namespace

IbtState ibt_iterate(IbtState state, const ParallelCorpus &in_domain,
                     const MonolingualCorpus &mono_src,
                     const MonolingualCorpus &mono_tgt,
                     const NGramModel &lm_src, const NGramModel &lm_tgt,
                     const TranslatorHandle &translator_s2t,
                     const TranslatorHandle &translator_t2s,
                     const IbtIterationOptions &options,
                     IterationReport *report) {
  if (mono_src.empty() || mono_tgt.empty())
    throw Error("ibt_iterate: empty monolingual corpus");
  if (in_domain.size() == 0) throw Error("ibt_iterate: empty in-domain corpus");

  // Translated-side corpora: M'_s from target monolingual, M'_t from
  // source monolingual.
  const MonolingualCorpus translated_src =
      corpus_of(translate(translator_t2s, texts(mono_tgt)), "src");
  const MonolingualCorpus translated_tgt =
      corpus_of(translate(translator_s2t, texts(mono_src)), "tgt");

  ScoreOptions score_opts;
  score_opts.transliterate = options.transliterate;
  score_opts.raw_total = options.raw_total;
  score_opts.threads = options.threads;

  const SelectionResult keep_src = filter_by_threshold(
      sss_scores(lm_src, translated_src, score_opts),
      options.threshold_source, Side::kSource);
  const SelectionResult keep_tgt = filter_by_threshold(
      sss_scores(lm_tgt, translated_tgt, score_opts),
      options.threshold_target, Side::kTarget);

  // Pairing is by monolingual index: dropping a translation drops the pair.
  ParallelCorpus forward;
  forward.name = in_domain.name + "+synthetic-s2t";
  forward.source = in_domain.source;
  forward.target = in_domain.target;
  for (std::size_t idx : keep_src.kept) {
    forward.source.push_back(translated_src.sentences[idx]);
    forward.target.push_back(mono_tgt.sentences[idx]);
  }
  ParallelCorpus backward;
  backward.name = in_domain.name + "+synthetic-t2s";
  backward.source = in_domain.source;
  backward.target = in_domain.target;
  for (std::size_t idx : keep_tgt.kept) {
    backward.source.push_back(mono_src.sentences[idx]);
    backward.target.push_back(translated_tgt.sentences[idx]);
  }

  state.augmented_forward = std::move(forward);
  state.augmented_backward = std::move(backward);
  ++state.iteration;
  if (report) {
    report->kept_src = keep_src.kept.size();
    report->kept_tgt = keep_tgt.kept.size();
    report->size_forward = state.augmented_forward.size();
    report->size_backward = state.augmented_backward.size();
  }
  return state;
}

Convergence convergence_check(IbtState &state, double dev_score, int patience,
                              double min_delta) {
  if (patience < 1) throw Error("convergence patience must be >= 1");
  state.history.push_back(dev_score);
  if (dev_score > state.best_score + min_delta) {
    state.best_score = dev_score;
    state.stall = 0;
  } else {
    ++state.stall;
  }
  return state.stall >= patience ? Convergence::kConverged
                                 : Convergence::kContinue;
}

IbtConfig load_ibt_config(const std::string &path) {
  IbtConfig config;
  std::size_t line_no = 0;
  for (const auto &line : read_lines(path)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(path + " line " + std::to_string(line_no) +
                  ": expected 'key = value'");
    const auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "in_src") config.in_src = value;
    else if (key == "in_tgt") config.in_tgt = value;
    else if (key == "mono_src") config.mono_src = value;
    else if (key == "mono_tgt") config.mono_tgt = value;
    else if (key == "dev_src") config.dev_src = value;
    else if (key == "dev_tgt") config.dev_tgt = value;
    else if (key == "translator_s2t") config.translator_s2t = value;
    else if (key == "translator_t2s") config.translator_t2s = value;
    else if (key == "retrain") config.retrain_command = value;
    else if (key == "eval") config.eval_command = value;
    else if (key == "work_dir") config.work_dir = value;
    else if (key == "threshold1") config.threshold_source = std::stod(value);
    else if (key == "threshold2") config.threshold_target = std::stod(value);
    else if (key == "patience") config.patience = std::stoi(value);
    else if (key == "max_iterations") config.max_iterations = std::stoi(value);
    else if (key == "order") config.order = std::stoi(value);
    else if (key == "wx") config.transliterate = value == "true" || value == "1";
    else if (key == "min_delta") config.min_delta = std::stod(value);
    else if (key == "timeout") config.timeout_seconds = std::stod(value);
    else if (key == "threads") config.threads = std::stoi(value);
    else
      throw Error(path + " line " + std::to_string(line_no) +
                  ": unknown key '" + key + "'");
  }
  return config;
}

namespace {

void write_side(const std::string &path, const std::vector<Sentence> &side) {
  std::vector<std::string> lines;
  lines.reserve(side.size());
  for (const auto &s : side) lines.push_back(s.text);
  write_lines(path, lines);
}

std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

IbtState ibt_run(const IbtConfig &config, std::ostream &log) {
  if (config.in_src.empty() || config.in_tgt.empty() ||
      config.mono_src.empty() || config.mono_tgt.empty() ||
      config.translator_s2t.empty() || config.translator_t2s.empty())
    throw Error("ibt config: corpus paths and translator commands are required");
  if (config.eval_command.empty() &&
      (config.dev_src.empty() || config.dev_tgt.empty()))
    throw Error("ibt config: need dev_src/dev_tgt or an eval command");
  if (config.max_iterations < 1)
    throw Error("ibt config: max_iterations must be >= 1");

  const ParallelCorpus in_domain =
      read_parallel(config.in_src, config.in_tgt, "in-domain");
  const MonolingualCorpus mono_src = read_corpus(config.mono_src, "src");
  const MonolingualCorpus mono_tgt = read_corpus(config.mono_tgt, "tgt");
  ParallelCorpus dev;
  if (config.eval_command.empty())
    dev = read_parallel(config.dev_src, config.dev_tgt, "dev");

  const auto train_side = [&](const MonolingualCorpus &side) {
    if (!config.transliterate)
      return estimate_kn(count_ngrams(side, config.order));
    MonolingualCorpus wx;
    wx.language = side.language + "-wx";
    for (const auto &s : side.sentences)
      wx.sentences.emplace_back(to_wx(s.text));
    return estimate_kn(count_ngrams(wx, config.order));
  };
  const NGramModel lm_src = train_side(in_domain.source_side());
  const NGramModel lm_tgt = train_side(in_domain.target_side());

  const TranslatorHandle s2t{config.translator_s2t, "s2t",
                             config.timeout_seconds};
  const TranslatorHandle t2s{config.translator_t2s, "t2s",
                             config.timeout_seconds};
  IbtIterationOptions iter_opts;
  iter_opts.threshold_source = config.threshold_source;
  iter_opts.threshold_target = config.threshold_target;
  iter_opts.transliterate = config.transliterate;
  iter_opts.threads = config.threads;

  IbtState state;
  while (state.iteration < config.max_iterations) {
    IterationReport report;
    try {
      state = ibt_iterate(state, in_domain, mono_src, mono_tgt, lm_src,
                          lm_tgt, s2t, t2s, iter_opts, &report);
    } catch (const Error &e) {
      throw Error("iteration " + std::to_string(state.iteration + 1) + ": " +
                  e.what());
    }

    const std::filesystem::path iter_dir =
        std::filesystem::path(config.work_dir) /
        ("iter_" + std::to_string(state.iteration));
    std::filesystem::create_directories(iter_dir);
    const std::string fwd_src = (iter_dir / "forward.src").string();
    const std::string fwd_tgt = (iter_dir / "forward.tgt").string();
    const std::string bwd_src = (iter_dir / "backward.src").string();
    const std::string bwd_tgt = (iter_dir / "backward.tgt").string();
    write_side(fwd_src, state.augmented_forward.source);
    write_side(fwd_tgt, state.augmented_forward.target);
    write_side(bwd_src, state.augmented_backward.source);
    write_side(bwd_tgt, state.augmented_backward.target);

    double dev_score = 0.0;
    try {
      if (!config.retrain_command.empty()) {
        run_command(config.retrain_command + " " + fwd_src + " " + fwd_tgt +
                        " " + bwd_src + " " + bwd_tgt,
                    config.timeout_seconds);
      }
      if (!config.eval_command.empty()) {
        const auto out =
            run_command(config.eval_command, config.timeout_seconds);
        if (out.empty()) throw Error("eval command produced no output");
        dev_score = std::stod(out.front());
      } else {
        std::vector<std::string> dev_lines;
        for (const auto &s : dev.source) dev_lines.push_back(s.text);
        const auto hyp_lines = translate(s2t, dev_lines);
        std::vector<Sentence> hyp;
        hyp.reserve(hyp_lines.size());
        for (const auto &line : hyp_lines) hyp.emplace_back(line);
        dev_score = bleu(hyp, dev.target).value;
      }
    } catch (const Error &e) {
      throw Error("iteration " + std::to_string(state.iteration) +
                  ": hook failed: " + e.what());
    }

    const Convergence verdict =
        convergence_check(state, dev_score, config.patience,
                          config.min_delta);
    log << "iteration=" << state.iteration << " kept_src=" << report.kept_src
        << " kept_tgt=" << report.kept_tgt
        << " size_idp1=" << report.size_forward
        << " size_idp2=" << report.size_backward
        << " dev_score=" << format_score(dev_score)
        << " stall=" << state.stall << '\n';
    log.flush();
    if (verdict == Convergence::kConverged) break;
  }
  return state;
}

}  // namespace lingsel
