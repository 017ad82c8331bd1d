#include "lingsel/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace lingsel {
namespace {

constexpr double kLogZero = -99.0;  // ARPA stand-in for "never predicted"

int compare_keys(std::span<const std::uint32_t> a,
                 std::span<const std::uint32_t> b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

}  // namespace

std::array<std::uint64_t, 5> NGramCounts::counts_of_counts(int n) const {
  std::array<std::uint64_t, 5> coc{};
  for (const auto &[key, count] : adjusted.at(n - 1)) {
    if (n == 1 && key[0] == Vocabulary::kBos) continue;
    if (count >= 1 && count <= 4) ++coc[count];
  }
  return coc;
}

NGramCounts count_ngrams(const MonolingualCorpus &corpus, int order) {
  if (order < 1) throw Error("n-gram order must be >= 1");
  if (corpus.empty()) throw Error("cannot count n-grams of an empty corpus");

  NGramCounts counts;
  counts.order = order;
  counts.raw.resize(order);
  counts.adjusted.resize(order);
  counts.sentences = corpus.size();

  for (const auto &sentence : corpus.sentences) {
    NGramKey padded;
    padded.reserve(sentence.tokens.size() + 2);
    padded.push_back(Vocabulary::kBos);
    for (const auto &token : sentence.tokens)
      padded.push_back(counts.vocab.add(token));
    padded.push_back(Vocabulary::kEos);

    for (int n = 1; n <= order; ++n) {
      if (padded.size() < static_cast<std::size_t>(n)) break;
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        ++counts.raw[n - 1][NGramKey(padded.begin() + i,
                                     padded.begin() + i + n)];
      }
    }
  }

  counts.adjusted[order - 1] = counts.raw[order - 1];
  for (int n = order - 1; n >= 1; --n) {
    auto &adj = counts.adjusted[n - 1];
    // Continuation counts: distinct left extensions at order n+1.
    for (const auto &[key, count] : counts.raw[n]) {
      (void)count;
      NGramKey suffix(key.begin() + 1, key.end());
      if (suffix[0] != Vocabulary::kBos) ++adj[suffix];
    }
    // <s>-initial n-grams cannot be extended left; keep raw counts.
    for (const auto &[key, count] : counts.raw[n - 1]) {
      if (key[0] == Vocabulary::kBos) adj[key] = count;
    }
  }
  return counts;
}

Discounts compute_discounts(const std::array<std::uint64_t, 5> &coc) {
  const double n1 = static_cast<double>(coc[1]);
  const double n2 = static_cast<double>(coc[2]);
  const double n3 = static_cast<double>(coc[3]);
  const double n4 = static_cast<double>(coc[4]);
  Discounts d;
  if (coc[1] == 0 || coc[2] == 0) {
    d.fallback = true;
    return d;  // flat 0.5 everywhere
  }
  const double y = n1 / (n1 + 2.0 * n2);
  d.d1 = 1.0 - 2.0 * y * n2 / n1;
  if (coc[3] > 0) {
    d.d2 = 2.0 - 3.0 * y * n3 / n2;
  } else {
    d.fallback = true;
  }
  if (coc[3] > 0 && coc[4] > 0) {
    d.d3 = 3.0 - 4.0 * y * n4 / n3;
  } else {
    d.fallback = true;
  }
  d.d1 = std::clamp(d.d1, 0.0, 1.0);
  d.d2 = std::clamp(d.d2, 0.0, 2.0);
  d.d3 = std::clamp(d.d3, 0.0, 3.0);
  return d;
}

std::size_t NGramModel::find(int n, std::span<const std::uint32_t> key) const {
  if (n < 1 || n > order) return npos;
  const OrderTable &table = tables[n - 1];
  std::size_t lo = 0, hi = table.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (compare_keys(table.key(mid), key) < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < table.size() && compare_keys(table.key(lo), key) == 0) return lo;
  return npos;
}

double NGramModel::log_prob(std::span<const std::uint32_t> context,
                            std::uint32_t word) const {
  std::size_t clen =
      std::min(context.size(), static_cast<std::size_t>(order - 1));
  context = context.subspan(context.size() - clen);
  double backed_off = 0.0;
  NGramKey key;
  for (;;) {
    key.assign(context.begin(), context.end());
    key.push_back(word);
    const std::size_t idx = find(static_cast<int>(clen) + 1, key);
    if (idx != npos)
      return backed_off + tables[clen].logprob[idx];
    if (clen == 0) return backed_off + kLogZero;  // word has no unigram
    const std::size_t cidx = find(static_cast<int>(clen), context);
    if (cidx != npos) backed_off += tables[clen - 1].logbo[cidx];
    context = context.subspan(1);
    --clen;
  }
}

NGramModel estimate_kn(const NGramCounts &counts) {
  if (counts.order < 1 || counts.adjusted.empty())
    throw Error("estimate_kn: invalid counts");
  NGramModel model;
  model.order = counts.order;
  model.vocab = counts.vocab;
  model.tables.resize(counts.order);
  for (int n = 1; n <= counts.order; ++n) {
    model.discounts.push_back(compute_discounts(counts.counts_of_counts(n)));
    if (model.discounts.back().fallback) model.degenerate_discounts = true;
  }

  // Unigrams: every vocabulary id gets an entry; <s> is pinned near zero
  // and <unk> absorbs the discount residual.
  {
    const Discounts &d = model.discounts[0];
    double total = 0.0;
    std::vector<std::uint64_t> adj(model.vocab.size(), 0);
    for (const auto &[key, count] : counts.adjusted[0]) {
      adj[key[0]] = count;
      if (key[0] != Vocabulary::kBos) total += static_cast<double>(count);
    }
    if (total <= 0.0) throw Error("estimate_kn: no scoreable events");
    double residual = 0.0;
    for (std::size_t id = 0; id < adj.size(); ++id) {
      if (id == Vocabulary::kBos) continue;
      residual += d.for_count(adj[id]);
    }
    residual /= total;

    NGramModel::OrderTable &t = model.tables[0];
    t.n = 1;
    for (std::uint32_t id = 0; id < model.vocab.size(); ++id) {
      t.keys.push_back(id);
      double p;
      if (id == Vocabulary::kBos) {
        p = 1e-99;
      } else if (adj[id] == 0) {
        p = residual;  // only <unk> has no observations
      } else {
        p = std::max(static_cast<double>(adj[id]) - d.for_count(adj[id]),
                     0.0) /
            total;
      }
      t.logprob.push_back(std::log10(std::max(p, 1e-99)));
      t.logbo.push_back(0.0);
    }
    if (counts.order == 1) t.logbo.clear();
  }

  for (int n = 2; n <= counts.order; ++n) {
    const Discounts &d = model.discounts[n - 1];
    std::vector<std::pair<NGramKey, std::uint64_t>> entries(
        counts.adjusted[n - 1].begin(), counts.adjusted[n - 1].end());
    std::sort(entries.begin(), entries.end(),
              [](const auto &a, const auto &b) {
                return compare_keys(a.first, b.first) < 0;
              });

    NGramModel::OrderTable &t = model.tables[n - 1];
    t.n = n;
    t.keys.reserve(entries.size() * n);
    t.logprob.reserve(entries.size());
    if (n < counts.order) t.logbo.assign(entries.size(), 0.0);

    std::size_t i = 0;
    while (i < entries.size()) {
      // One context group: entries sharing the first n-1 ids.
      std::size_t j = i;
      const NGramKey &first = entries[i].first;
      while (j < entries.size() &&
             std::equal(first.begin(), first.end() - 1,
                        entries[j].first.begin())) {
        ++j;
      }
      double total = 0.0, discount_mass = 0.0;
      for (std::size_t k = i; k < j; ++k) {
        total += static_cast<double>(entries[k].second);
        discount_mass += d.for_count(entries[k].second);
      }
      const double gamma = discount_mass / total;

      const std::span<const std::uint32_t> context(first.data(),
                                                   first.size() - 1);
      const std::span<const std::uint32_t> lower_context =
          context.subspan(1);
      for (std::size_t k = i; k < j; ++k) {
        const NGramKey &key = entries[k].first;
        const double a = static_cast<double>(entries[k].second);
        const double lower =
            std::pow(10.0, model.log_prob(lower_context, key.back()));
        const double p =
            std::max(a - d.for_count(entries[k].second), 0.0) / total +
            gamma * lower;
        t.keys.insert(t.keys.end(), key.begin(), key.end());
        t.logprob.push_back(std::log10(std::max(p, 1e-99)));
      }
      const std::size_t cidx = model.find(n - 1, context);
      if (cidx == NGramModel::npos)
        throw Error("estimate_kn: context missing at lower order");
      model.tables[n - 2].logbo[cidx] =
          std::log10(std::max(gamma, 1e-99));
      i = j;
    }
  }
  return model;
}

SentenceScore lm_score(const NGramModel &model, const Sentence &sentence) {
  SentenceScore score;
  NGramKey context{Vocabulary::kBos};
  const auto shift_in = [&](std::uint32_t id) {
    context.push_back(id);
    if (context.size() > static_cast<std::size_t>(model.order - 1) &&
        !context.empty()) {
      context.erase(context.begin());
    }
  };
  if (model.order == 1) context.clear();
  for (const auto &token : sentence.tokens) {
    const std::uint32_t id = model.vocab.lookup(token);
    if (id == Vocabulary::kUnk && token != Vocabulary::kUnkWord) ++score.oov;
    score.total_log10 += model.log_prob(context, id);
    ++score.tokens_scored;
    shift_in(id);
  }
  score.total_log10 += model.log_prob(context, Vocabulary::kEos);
  ++score.tokens_scored;
  return score;
}

double perplexity(const NGramModel &model, const MonolingualCorpus &corpus) {
  if (corpus.empty()) throw Error("perplexity: empty corpus");
  double total = 0.0;
  std::uint64_t tokens = 0;
  for (const auto &sentence : corpus.sentences) {
    const SentenceScore s = lm_score(model, sentence);
    total += s.total_log10;
    tokens += s.tokens_scored;
  }
  return std::pow(10.0, -total / static_cast<double>(tokens));
}

namespace {

std::string format_log(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void export_arpa(const NGramModel &model, std::ostream &out) {
  out << "\\data\\\n";
  for (int n = 1; n <= model.order; ++n)
    out << "ngram " << n << '=' << model.tables[n - 1].size() << '\n';
  out << '\n';
  for (int n = 1; n <= model.order; ++n) {
    const auto &t = model.tables[n - 1];
    out << '\\' << n << "-grams:\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
      out << format_log(t.logprob[i]) << '\t';
      const auto key = t.key(i);
      for (int k = 0; k < n; ++k) {
        if (k) out << ' ';
        out << model.vocab.word(key[k]);
      }
      if (n < model.order) out << '\t' << format_log(t.logbo[i]);
      out << '\n';
    }
    out << '\n';
  }
  out << "\\end\\\n";
}

void export_arpa(const NGramModel &model, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open ARPA output: " + path);
  export_arpa(model, out);
  if (!out) throw Error("write failure on ARPA output: " + path);
}

namespace {

struct ArpaReader {
  std::istream &in;
  std::size_t line_no = 0;
  std::string line;
  bool eof = false;

  bool next() {
    if (!std::getline(in, line)) {
      eof = true;
      return false;
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  bool next_nonblank() {
    while (next()) {
      if (!line.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string &what) const {
    throw Error("ARPA line " + std::to_string(line_no) + ": " + what);
  }
};

double parse_number(const std::string &field, ArpaReader &r) {
  char *end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || field.empty())
    r.fail("non-numeric field '" + field + "'");
  return v;
}

std::vector<std::string> split_tabs(const std::string &s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = s.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

NGramModel import_arpa(std::istream &in) {
  ArpaReader r{in};
  if (!r.next_nonblank() || r.line != "\\data\\")
    throw Error("ARPA line " + std::to_string(r.line_no) +
                ": missing \\data\\ header");

  std::vector<std::size_t> declared;
  while (r.next()) {
    if (r.line.empty()) break;
    if (r.line.rfind("ngram ", 0) != 0) r.fail("expected 'ngram N=count'");
    const std::size_t eq = r.line.find('=');
    if (eq == std::string::npos) r.fail("expected 'ngram N=count'");
    const int n = static_cast<int>(
        parse_number(r.line.substr(6, eq - 6), r));
    const double c = parse_number(r.line.substr(eq + 1), r);
    if (n != static_cast<int>(declared.size()) + 1)
      r.fail("non-consecutive n-gram orders in header");
    if (c < 0) r.fail("negative n-gram count");
    declared.push_back(static_cast<std::size_t>(c));
  }
  if (declared.empty()) throw Error("ARPA header declares no orders");

  NGramModel model;
  model.order = static_cast<int>(declared.size());
  model.tables.resize(model.order);

  bool have_line = r.next_nonblank();
  for (int n = 1; n <= model.order; ++n) {
    const std::string header = "\\" + std::to_string(n) + "-grams:";
    if (!have_line)
      throw Error("ARPA: unexpected end of file, expected " + header);
    if (r.line != header) r.fail("expected section header " + header);
    struct Row {
      NGramKey key;
      double prob;
      double bo;
    };
    std::vector<Row> rows;
    rows.reserve(declared[n - 1]);
    have_line = false;
    while (r.next()) {
      if (r.line.empty()) continue;
      if (r.line[0] == '\\') {  // next section or \end\ marker
        have_line = true;
        break;
      }
      const auto fields = split_tabs(r.line);
      if (fields.size() < 2 || fields.size() > 3)
        r.fail("expected 'prob<TAB>ngram[<TAB>backoff]'");
      if (fields.size() == 3 && n == model.order)
        r.fail("backoff weight on highest-order n-gram");
      Row row;
      row.prob = parse_number(fields[0], r);
      row.bo = fields.size() == 3 ? parse_number(fields[2], r) : 0.0;
      const auto words = tokenize(fields[1]);
      if (words.size() != static_cast<std::size_t>(n))
        r.fail("expected a " + std::to_string(n) + "-gram");
      for (const auto &w : words) {
        if (n == 1) {
          row.key.push_back(model.vocab.add(w));
        } else {
          const std::uint32_t id = model.vocab.lookup(w);
          if (id == Vocabulary::kUnk && w != Vocabulary::kUnkWord)
            r.fail("word '" + w + "' has no unigram entry");
          row.key.push_back(id);
        }
      }
      rows.push_back(std::move(row));
      if (rows.size() > declared[n - 1])
        r.fail("count mismatch: header declares " +
               std::to_string(declared[n - 1]) + " " + std::to_string(n) +
               "-grams");
    }
    if (rows.size() != declared[n - 1])
      throw Error("ARPA line " + std::to_string(r.line_no) +
                  ": count mismatch: header declares " +
                  std::to_string(declared[n - 1]) + " " + std::to_string(n) +
                  "-grams but section has " + std::to_string(rows.size()));

    std::sort(rows.begin(), rows.end(), [](const Row &a, const Row &b) {
      return compare_keys(a.key, b.key) < 0;
    });
    NGramModel::OrderTable &t = model.tables[n - 1];
    t.n = n;
    for (const Row &row : rows) {
      t.keys.insert(t.keys.end(), row.key.begin(), row.key.end());
      t.logprob.push_back(row.prob);
      if (n < model.order) t.logbo.push_back(row.bo);
    }
  }

  if (!have_line || r.line != "\\end\\")
    throw Error("ARPA: missing \\end\\ marker");
  return model;
}

NGramModel import_arpa(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open ARPA file: " + path);
  return import_arpa(in);
}

}  // namespace lingsel
