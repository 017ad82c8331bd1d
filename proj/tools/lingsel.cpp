#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "lingsel/corpus.hpp"
#include "lingsel/ibt.hpp"
#include "lingsel/metrics.hpp"
#include "lingsel/ngram.hpp"
#include "lingsel/selection.hpp"
#include "lingsel/translit.hpp"

namespace {

using namespace lingsel;

std::string fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

int default_threads() {
  if (const char *env = std::getenv("LINGSEL_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

MonolingualCorpus maybe_wx(const MonolingualCorpus &corpus, bool wx) {
  if (!wx) return corpus;
  MonolingualCorpus out;
  out.language = corpus.language + "-wx";
  out.sentences.reserve(corpus.size());
  for (const auto &s : corpus.sentences) out.sentences.emplace_back(to_wx(s.text));
  return out;
}

NGramModel train_model(const std::string &path, int order, bool wx) {
  ReadReport report;
  const MonolingualCorpus corpus = read_corpus(path, "train", &report);
  if (report.blanks_skipped)
    std::cerr << "skipped " << report.blanks_skipped << " blank lines in "
              << path << "\n";
  return estimate_kn(count_ngrams(maybe_wx(corpus, wx), order));
}

struct TranslitArgs {
  bool to_wx_mode = false;
  bool from_wx_mode = false;
  bool report = false;
  std::string table_path;
};

int run_translit(const TranslitArgs &args) {
  const TransliterationTable table =
      args.table_path.empty() ? TransliterationTable::builtin()
                              : TransliterationTable::load(args.table_path);
  TranslitReport report;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::cout << (args.to_wx_mode ? table.to_wx(line, &report)
                                  : table.from_wx(line, &report))
              << '\n';
  }
  if (args.report)
    std::cerr << "passthrough_codepoints=" << report.passthrough << "\n";
  return 0;
}

void print_metric(const MetricReport &report) {
  std::cout << report.name << '\t' << fixed(report.value, 4);
  if (!report.note.empty()) std::cout << "\tmode=" << report.note;
  for (const auto &[key, value] : report.aux)
    std::cout << '\t' << key << '=' << fixed(value, 4);
  std::cout << '\n';
}

struct ScoredRow {
  std::size_t index;
  double raw;
  double sss;
};

std::vector<ScoredRow> read_scored_tsv(const std::string &path) {
  std::vector<ScoredRow> rows;
  std::size_t line_no = 0;
  for (const auto &line : read_lines(path)) {
    ++line_no;
    if (line.empty()) continue;
    ScoredRow row;
    std::istringstream in(line);
    if (!(in >> row.index >> row.raw >> row.sss))
      throw Error(path + " line " + std::to_string(line_no) +
                  ": expected 'index<TAB>raw<TAB>sss<TAB>sentence'");
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"corpus selection toolkit for related-language MT"};
  app.require_subcommand(1);
  int threads = default_threads();

  // translit
  TranslitArgs translit_args;
  auto *translit_cmd =
      app.add_subcommand("translit", "transliterate Devanagari <-> WX");
  auto *to_flag = translit_cmd->add_flag("--to-wx", translit_args.to_wx_mode,
                                         "Devanagari to WX");
  auto *from_flag = translit_cmd->add_flag(
      "--from-wx", translit_args.from_wx_mode, "WX to Devanagari");
  to_flag->excludes(from_flag);
  translit_cmd->add_flag("--report", translit_args.report,
                         "print a pass-through report on stderr");
  translit_cmd->add_option("--table", translit_args.table_path,
                           "mapping data file (CODEPOINT<TAB>WX)");

  // train-lm
  std::string train_corpus, train_arpa;
  int train_order = 5;
  bool train_wx = false;
  auto *train_cmd = app.add_subcommand("train-lm", "train a Kneser-Ney LM");
  train_cmd->add_option("--order", train_order, "n-gram order")
      ->check(CLI::Range(1, 9));
  train_cmd->add_flag("--wx", train_wx, "WX-transliterate before training");
  train_cmd->add_option("corpus", train_corpus, "training text")->required();
  train_cmd->add_option("--arpa", train_arpa, "output ARPA path")->required();

  // perplexity
  std::string ppl_arpa, ppl_corpus;
  bool ppl_wx = false;
  auto *ppl_cmd = app.add_subcommand("perplexity", "corpus perplexity");
  ppl_cmd->add_option("--arpa", ppl_arpa, "ARPA model")->required();
  ppl_cmd->add_flag("--wx", ppl_wx, "WX-transliterate before scoring");
  ppl_cmd->add_option("corpus", ppl_corpus, "evaluation text")->required();

  // score
  std::string score_arpa, score_pool;
  bool score_wx = false, score_raw_total = false;
  auto *score_cmd =
      app.add_subcommand("score", "scaled similarity scores as TSV");
  score_cmd->add_option("--arpa", score_arpa, "ARPA model")->required();
  score_cmd->add_flag("--wx", score_wx, "WX-transliterate before scoring");
  score_cmd->add_flag("--raw-total", score_raw_total,
                      "use total log score instead of per-token");
  score_cmd->add_option("--threads", threads, "worker threads");
  score_cmd->add_option("pool", score_pool, "candidate text")->required();

  // filter
  double filter_threshold = 0.8;
  std::string filter_tsv, filter_pool_src, filter_pool_tgt, filter_out;
  auto *filter_cmd =
      app.add_subcommand("filter", "keep scored pairs above a threshold");
  filter_cmd->add_option("--threshold", filter_threshold, "SSS threshold")
      ->check(CLI::Range(0.0, 1.0));
  filter_cmd->add_option("scored", filter_tsv, "scored TSV")->required();
  filter_cmd->add_option("--pool-src", filter_pool_src, "pool source side")
      ->required();
  filter_cmd->add_option("--pool-tgt", filter_pool_tgt, "pool target side")
      ->required();
  filter_cmd->add_option("--out", filter_out, "output prefix")->required();

  // dassa
  std::string dassa_in_src, dassa_in_tgt, dassa_pool_src, dassa_pool_tgt;
  std::string dassa_out = "dassa";
  DassaOptions dassa_opts;
  double dassa_threshold2 = -1.0;
  bool dassa_no_wx = false;
  auto *dassa_cmd = app.add_subcommand(
      "dassa", "filter a pool by SSS and concatenate onto in-domain data");
  dassa_cmd->add_option("--in-src", dassa_in_src)->required();
  dassa_cmd->add_option("--in-tgt", dassa_in_tgt)->required();
  dassa_cmd->add_option("--pool-src", dassa_pool_src)->required();
  dassa_cmd->add_option("--pool-tgt", dassa_pool_tgt)->required();
  dassa_cmd
      ->add_option("--threshold", dassa_opts.threshold_source,
                   "source-side SSS threshold")
      ->check(CLI::Range(0.0, 1.0));
  dassa_cmd
      ->add_option("--threshold2", dassa_threshold2,
                   "target-side SSS threshold (defaults to --threshold)")
      ->check(CLI::Range(0.0, 1.0));
  dassa_cmd->add_option("--order", dassa_opts.order)->check(CLI::Range(1, 9));
  dassa_cmd->add_flag("--no-wx", dassa_no_wx, "score raw script");
  dassa_cmd->add_flag("--raw-total", dassa_opts.raw_total);
  dassa_cmd->add_option("--threads", threads, "worker threads");
  dassa_cmd->add_option("--out", dassa_out, "output prefix");

  // moore-lewis
  std::string ml_in_arpa, ml_pool_arpa, ml_candidates;
  bool ml_wx = false;
  auto *ml_cmd = app.add_subcommand(
      "moore-lewis", "cross-entropy difference baseline scores");
  ml_cmd->add_option("--in-arpa", ml_in_arpa, "in-domain ARPA")->required();
  ml_cmd->add_option("--pool-arpa", ml_pool_arpa, "pool ARPA")->required();
  ml_cmd->add_flag("--wx", ml_wx, "WX-transliterate before scoring");
  ml_cmd->add_option("candidates", ml_candidates)->required();

  // metrics
  bool m_bleu = false, m_chrf = false, m_ter = false, m_char_bleu = false;
  bool m_paper_literal = false, m_wx = false;
  std::string m_hyp, m_ref;
  auto *metrics_cmd = app.add_subcommand("metrics", "MT evaluation metrics");
  metrics_cmd->add_flag("--bleu", m_bleu);
  metrics_cmd->add_flag("--chrf", m_chrf);
  metrics_cmd->add_flag("--ter", m_ter);
  metrics_cmd->add_flag("--char-bleu", m_char_bleu);
  metrics_cmd->add_flag("--paper-literal-bleu", m_paper_literal,
                        "min(1, c/r) times the plain precision product");
  metrics_cmd->add_flag("--wx", m_wx, "WX-transliterate both sides first");
  metrics_cmd->add_option("hypotheses", m_hyp)->required();
  metrics_cmd->add_option("references", m_ref)->required();

  // overlap
  bool ov_wx = true, ov_raw = false, ov_words = false;
  std::string ov_a, ov_b;
  auto *overlap_cmd =
      app.add_subcommand("overlap", "overlapping word types of two corpora");
  overlap_cmd->add_flag("--wx", ov_wx, "compare WX-encoded tokens (default)");
  overlap_cmd->add_flag("--raw", ov_raw, "compare raw-script tokens");
  overlap_cmd->add_flag("--words", ov_words, "also print the shared words");
  overlap_cmd->add_option("a", ov_a)->required();
  overlap_cmd->add_option("b", ov_b)->required();

  // combine
  std::string combine_out;
  std::vector<std::string> combine_parts;
  auto *combine_cmd =
      app.add_subcommand("combine", "concatenate parallel corpora");
  combine_cmd->add_option("--out", combine_out, "output prefix")->required();
  combine_cmd
      ->add_option("parts", combine_parts,
                   "alternating source/target file pairs")
      ->required();

  // ibt
  std::string ibt_config_path;
  auto *ibt_cmd = app.add_subcommand(
      "ibt", "filtered iterative back-translation around a translator");
  ibt_cmd->add_option("--config", ibt_config_path, "key = value config file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n";
    std::cerr << (app.get_subcommands().empty()
                      ? app.help()
                      : app.get_subcommands().front()->help())
              << std::flush;
    return 1;
  }

  try {
    if (translit_cmd->parsed()) {
      if (!translit_args.to_wx_mode && !translit_args.from_wx_mode) {
        std::cerr << "translit: one of --to-wx or --from-wx is required\n";
        return 1;
      }
      return run_translit(translit_args);
    }

    if (train_cmd->parsed()) {
      const NGramModel model = train_model(train_corpus, train_order, train_wx);
      if (model.degenerate_discounts)
        std::cerr << "warning: degenerate counts-of-counts, "
                     "fallback discount 0.5 used\n";
      export_arpa(model, train_arpa);
      return 0;
    }

    if (ppl_cmd->parsed()) {
      const NGramModel model = import_arpa(ppl_arpa);
      const MonolingualCorpus corpus =
          maybe_wx(read_corpus(ppl_corpus, "eval"), ppl_wx);
      std::cout << fixed(perplexity(model, corpus), 6) << '\n';
      return 0;
    }

    if (score_cmd->parsed()) {
      const NGramModel model = import_arpa(score_arpa);
      const MonolingualCorpus pool = read_corpus(score_pool, "pool");
      ScoreOptions opts;
      opts.transliterate = score_wx;
      opts.raw_total = score_raw_total;
      opts.threads = threads;
      const ScoreRun run = sss_scores(model, pool, opts);
      if (run.degenerate)
        std::cerr << "warning: all raw scores equal; every sss set to 1.0\n";
      for (const auto &s : run.scores) {
        std::cout << s.index << '\t' << fixed(s.raw, 6) << '\t'
                  << fixed(s.sss, 6) << '\t'
                  << pool.sentences[s.index].text << '\n';
      }
      return 0;
    }

    if (filter_cmd->parsed()) {
      const auto rows = read_scored_tsv(filter_tsv);
      if (rows.empty()) throw Error(filter_tsv + ": no scored rows");
      const ParallelCorpus pool =
          read_parallel(filter_pool_src, filter_pool_tgt, "pool");
      std::vector<std::string> kept_src, kept_tgt;
      std::size_t kept = 0;
      for (const auto &row : rows) {
        if (row.sss < filter_threshold) continue;
        if (row.index >= pool.size())
          throw Error("scored index " + std::to_string(row.index) +
                      " out of range for pool of " +
                      std::to_string(pool.size()));
        kept_src.push_back(pool.source[row.index].text);
        kept_tgt.push_back(pool.target[row.index].text);
        ++kept;
      }
      write_lines(filter_out + ".src", kept_src);
      write_lines(filter_out + ".tgt", kept_tgt);
      std::cerr << "kept " << kept << " of " << rows.size() << " pairs\n";
      return 0;
    }

    if (dassa_cmd->parsed()) {
      dassa_opts.transliterate = !dassa_no_wx;
      dassa_opts.threshold_target = dassa_threshold2 >= 0.0
                                        ? dassa_threshold2
                                        : dassa_opts.threshold_source;
      dassa_opts.threads = threads;
      const ParallelCorpus in_domain =
          read_parallel(dassa_in_src, dassa_in_tgt, "in-domain");
      const ParallelCorpus pool =
          read_parallel(dassa_pool_src, dassa_pool_tgt, "pool");
      const DassaResult result = select_dassa(in_domain, pool, dassa_opts);
      const auto dump = [](const std::string &prefix,
                           const ParallelCorpus &corpus) {
        std::vector<std::string> src, tgt;
        for (const auto &s : corpus.source) src.push_back(s.text);
        for (const auto &s : corpus.target) tgt.push_back(s.text);
        write_lines(prefix + ".src", src);
        write_lines(prefix + ".tgt", tgt);
      };
      dump(dassa_out + ".fwd", result.forward);
      dump(dassa_out + ".bwd", result.backward);
      std::cerr << "kept_src=" << result.source_selection.kept.size()
                << " kept_tgt=" << result.target_selection.kept.size()
                << " overlap=" << result.kept_overlap
                << " src_extrema=[" << fixed(result.source_selection.min_raw, 6)
                << "," << fixed(result.source_selection.max_raw, 6) << "]"
                << " tgt_extrema=[" << fixed(result.target_selection.min_raw, 6)
                << "," << fixed(result.target_selection.max_raw, 6) << "]\n";
      return 0;
    }

    if (ml_cmd->parsed()) {
      const NGramModel in_model = import_arpa(ml_in_arpa);
      const NGramModel pool_model = import_arpa(ml_pool_arpa);
      const MonolingualCorpus candidates =
          read_corpus(ml_candidates, "candidates");
      const auto scores =
          moore_lewis_scores(in_model, pool_model, candidates, ml_wx);
      // Companion ranking: position of each candidate when sorted
      // ascending (lower = more in-domain).
      std::vector<std::size_t> order(scores.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return scores[a].second < scores[b].second;
                       });
      std::vector<std::size_t> rank(scores.size());
      for (std::size_t pos = 0; pos < order.size(); ++pos)
        rank[order[pos]] = pos;
      for (const auto &[index, score] : scores)
        std::cout << index << '\t' << fixed(score, 6) << '\t' << rank[index]
                  << '\n';
      return 0;
    }

    if (metrics_cmd->parsed()) {
      if (!m_bleu && !m_chrf && !m_ter && !m_char_bleu) {
        std::cerr << "metrics: select at least one of --bleu --chrf --ter "
                     "--char-bleu\n";
        return 1;
      }
      auto load = [&](const std::string &path) {
        MonolingualCorpus c = read_corpus(path, "metrics");
        return maybe_wx(c, m_wx).sentences;
      };
      const auto hyp = load(m_hyp);
      const auto ref = load(m_ref);
      if (m_bleu)
        print_metric(bleu(hyp, ref,
                          m_paper_literal ? BleuMode::kPaperLiteral
                                          : BleuMode::kStandard));
      if (m_char_bleu) print_metric(char_bleu(hyp, ref));
      if (m_chrf) print_metric(chrf(hyp, ref));
      if (m_ter) print_metric(ter(hyp, ref));
      return 0;
    }

    if (overlap_cmd->parsed()) {
      const MonolingualCorpus a = read_corpus(ov_a, "a");
      const MonolingualCorpus b = read_corpus(ov_b, "b");
      const OverlapResult result = overlap_vocab(a, b, ov_wx && !ov_raw);
      std::cout << result.count << '\n';
      if (ov_words)
        for (const auto &w : result.words) std::cout << w << '\n';
      return 0;
    }

    if (combine_cmd->parsed()) {
      if (combine_parts.size() < 2 || combine_parts.size() % 2 != 0)
        throw Error("combine: expected an even number of corpus files "
                    "(src tgt pairs)");
      std::vector<ParallelCorpus> parts;
      for (std::size_t i = 0; i < combine_parts.size(); i += 2)
        parts.push_back(read_parallel(combine_parts[i], combine_parts[i + 1],
                                      "part" + std::to_string(i / 2)));
      const ParallelCorpus combined = combine_domains(parts, combine_out);
      std::vector<std::string> src, tgt;
      for (const auto &s : combined.source) src.push_back(s.text);
      for (const auto &s : combined.target) tgt.push_back(s.text);
      write_lines(combine_out + ".src", src);
      write_lines(combine_out + ".tgt", tgt);
      std::cerr << combined.name << ": " << combined.size() << " pairs\n";
      return 0;
    }

    if (ibt_cmd->parsed()) {
      const IbtConfig config = load_ibt_config(ibt_config_path);
      const IbtState state = ibt_run(config, std::cout);
      std::cerr << "finished after " << state.iteration
                << " iterations, best dev score "
                << fixed(state.best_score, 6) << "\n";
      return 0;
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
