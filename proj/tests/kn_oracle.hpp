#pragma once

// Brute-force reference implementation of the interpolated modified
// Kneser-Ney estimator used to validate the production model. It works
// directly on string n-grams with dense ordered maps and evaluates the
// recursive probability definition on demand, so it shares no code or
// data structures with the library implementation.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace kn_oracle {

using Gram = std::vector<std::string>;
using Table = std::map<Gram, unsigned long long>;

struct Discounts {
  double d1 = 0.5, d2 = 0.5, d3 = 0.5;
  bool fallback = false;

  double of(unsigned long long c) const {
    if (c == 0) return 0.0;
    if (c == 1) return d1;
    if (c == 2) return d2;
    return d3;
  }
};

class Model {
 public:
  Model(const std::vector<std::vector<std::string>> &sentences, int order)
      : order_(order), raw_(order), adj_(order) {
    for (const auto &tokens : sentences) {
      Gram padded;
      padded.push_back("<s>");
      for (const auto &t : tokens) {
        padded.push_back(t);
        vocab_.insert(t);
      }
      padded.push_back("</s>");
      for (int n = 1; n <= order; ++n)
        for (std::size_t i = 0; i + n <= padded.size(); ++i)
          ++raw_[n - 1][Gram(padded.begin() + i, padded.begin() + i + n)];
    }
    vocab_.insert("</s>");
    vocab_.insert("<unk>");

    adj_[order - 1] = raw_[order - 1];
    for (int n = order - 1; n >= 1; --n) {
      for (const auto &[gram, count] : raw_[n]) {
        (void)count;
        Gram suffix(gram.begin() + 1, gram.end());
        if (suffix.front() != "<s>") ++adj_[n - 1][suffix];
      }
      for (const auto &[gram, count] : raw_[n - 1])
        if (gram.front() == "<s>") adj_[n - 1][gram] = count;
    }

    for (int n = 1; n <= order; ++n) {
      std::array<unsigned long long, 5> coc{};
      for (const auto &[gram, count] : adj_[n - 1]) {
        if (n == 1 && gram.front() == "<s>") continue;
        if (count >= 1 && count <= 4) ++coc[count];
      }
      disc_.push_back(discounts_from(coc));
    }
  }

  // p(word | context), with unknown words folded into <unk> and <s>
  // pinned at the never-predicted floor.
  double prob(Gram context, std::string word) const {
    if (word != "<s>" && !vocab_.count(word)) word = "<unk>";
    if (context.size() > static_cast<std::size_t>(order_ - 1))
      context.erase(context.begin(),
                    context.end() - (order_ - 1));
    while (!context.empty()) {
      const int n = static_cast<int>(context.size()) + 1;
      double total = 0.0, mass = 0.0;
      unsigned long long a = 0;
      bool seen_context = false;
      for (const auto &[gram, count] : adj_[n - 1]) {
        if (!std::equal(context.begin(), context.end(), gram.begin()) ||
            gram.size() != context.size() + 1)
          continue;
        seen_context = true;
        total += static_cast<double>(count);
        mass += disc_[n - 1].of(count);
        if (gram.back() == word) a = count;
      }
      if (seen_context) {
        Gram tail(context.begin() + 1, context.end());
        const double gamma = mass / total;
        return std::max(static_cast<double>(a) - disc_[n - 1].of(a), 0.0) /
                   total +
               gamma * prob(tail, word);
      }
      context.erase(context.begin());
    }
    return unigram(word);
  }

  // Backoff mass left for the unseen continuations of a context; 1 when
  // the context was never extended.
  double gamma(const Gram &context) const {
    const int n = static_cast<int>(context.size()) + 1;
    if (n > order_) return 1.0;
    double total = 0.0, mass = 0.0;
    for (const auto &[gram, count] : adj_[n - 1]) {
      if (gram.size() != context.size() + 1) continue;
      if (!std::equal(context.begin(), context.end(), gram.begin())) continue;
      total += static_cast<double>(count);
      mass += disc_[n - 1].of(count);
    }
    return total > 0.0 ? mass / total : 1.0;
  }

  const std::set<std::string> &vocab() const { return vocab_; }
  const Table &adjusted(int n) const { return adj_[n - 1]; }
  bool fallback_used() const {
    for (const auto &d : disc_)
      if (d.fallback) return true;
    return false;
  }

 private:
  static Discounts discounts_from(const std::array<unsigned long long, 5> &c) {
    Discounts d;
    const double n1 = static_cast<double>(c[1]);
    const double n2 = static_cast<double>(c[2]);
    const double n3 = static_cast<double>(c[3]);
    const double n4 = static_cast<double>(c[4]);
    if (c[1] == 0 || c[2] == 0) {
      d.fallback = true;
      return d;
    }
    const double y = n1 / (n1 + 2.0 * n2);
    d.d1 = 1.0 - 2.0 * y * n2 / n1;
    if (c[3] > 0)
      d.d2 = 2.0 - 3.0 * y * n3 / n2;
    else
      d.fallback = true;
    if (c[3] > 0 && c[4] > 0)
      d.d3 = 3.0 - 4.0 * y * n4 / n3;
    else
      d.fallback = true;
    d.d1 = std::clamp(d.d1, 0.0, 1.0);
    d.d2 = std::clamp(d.d2, 0.0, 2.0);
    d.d3 = std::clamp(d.d3, 0.0, 3.0);
    return d;
  }

  double unigram(const std::string &word) const {
    if (word == "<s>") return 1e-99;
    double total = 0.0, mass = 0.0;
    unsigned long long a = 0;
    for (const auto &[gram, count] : adj_[0]) {
      if (gram.front() == "<s>") continue;
      total += static_cast<double>(count);
      mass += disc_[0].of(count);
      if (gram.front() == word) a = count;
    }
    if (a == 0) return mass / total;  // discount residual: <unk>
    return std::max(static_cast<double>(a) - disc_[0].of(a), 0.0) / total;
  }

  int order_;
  std::vector<Table> raw_, adj_;
  std::set<std::string> vocab_;
  std::vector<Discounts> disc_;
};

}  // namespace kn_oracle
