#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lingsel/corpus.hpp"

namespace lingsel {

using NGramKey = std::vector<std::uint32_t>;

struct NGramKeyHash {
  std::size_t operator()(const NGramKey &key) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (std::uint32_t id : key) {
      h ^= id;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

using NGramTable = std::unordered_map<NGramKey, std::uint64_t, NGramKeyHash>;

// Raw window counts plus Kneser-Ney adjusted counts per order.
// Adjusted counts at the highest order are the raw counts; below it they
// are continuation counts, except n-grams starting with <s>, which keep
// their raw counts (nothing can precede <s>).
struct NGramCounts {
  int order = 0;
  Vocabulary vocab;
  std::vector<NGramTable> raw;       // index n-1
  std::vector<NGramTable> adjusted;  // index n-1
  std::uint64_t sentences = 0;

  // n_1..n_4 of adjusted counts at the given order, at indices 1..4.
  // The <s> unigram is excluded (it is never a predicted event).
  std::array<std::uint64_t, 5> counts_of_counts(int n) const;
};

NGramCounts count_ngrams(const MonolingualCorpus &corpus, int order);

// Modified Kneser-Ney discounts for one order. Degenerate
// counts-of-counts fall back to a flat 0.5 discount.
struct Discounts {
  double d1 = 0.5;
  double d2 = 0.5;
  double d3 = 0.5;
  bool fallback = false;

  double for_count(std::uint64_t c) const {
    if (c == 0) return 0.0;
    if (c == 1) return d1;
    if (c == 2) return d2;
    return d3;
  }
};

Discounts compute_discounts(const std::array<std::uint64_t, 5> &coc);

class NGramModel {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Sorted fixed-width id tuples per order, binary searched.
  struct OrderTable {
    int n = 0;
    std::vector<std::uint32_t> keys;  // n * size(), lexicographic
    std::vector<double> logprob;      // log10
    std::vector<double> logbo;        // log10; empty at the highest order

    std::size_t size() const { return logprob.size(); }
    std::span<const std::uint32_t> key(std::size_t i) const {
      return {keys.data() + i * static_cast<std::size_t>(n),
              static_cast<std::size_t>(n)};
    }
  };

  int order = 0;
  Vocabulary vocab;
  std::vector<OrderTable> tables;     // index n-1
  std::vector<Discounts> discounts;   // empty for imported models
  bool degenerate_discounts = false;  // any order used the fallback

  std::size_t find(int n, std::span<const std::uint32_t> key) const;

  // log10 p(word | context) with standard backoff resolution. The
  // context is at most order-1 ids, most recent last.
  double log_prob(std::span<const std::uint32_t> context,
                  std::uint32_t word) const;
};

NGramModel estimate_kn(const NGramCounts &counts);

struct SentenceScore {
  double total_log10 = 0.0;
  std::size_t tokens_scored = 0;  // includes </s>, excludes <s>
  std::size_t oov = 0;
};

SentenceScore lm_score(const NGramModel &model, const Sentence &sentence);

// 10^(-(sum of totals) / (sum of scored tokens)).
double perplexity(const NGramModel &model, const MonolingualCorpus &corpus);

void export_arpa(const NGramModel &model, std::ostream &out);
void export_arpa(const NGramModel &model, const std::string &path);
NGramModel import_arpa(std::istream &in);
NGramModel import_arpa(const std::string &path);

}  // namespace lingsel
