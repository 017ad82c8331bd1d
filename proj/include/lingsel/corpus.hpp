#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lingsel {

// Data or validation failure; the CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical normalization. The precomposed Devanagari nukta consonants
// (U+0929, U+0931, U+0934, U+0958..U+095F) are composition exclusions,
// so their canonical form is base consonant + nukta; everything else is
// already in canonical form for the scripts this toolkit handles.
std::string normalize_text(std::string_view text);

std::vector<std::string> tokenize(std::string_view text);

struct Sentence {
  std::string text;                 // normalized, no line terminator
  std::vector<std::string> tokens;  // whitespace split of text

  Sentence() = default;
  explicit Sentence(std::string_view raw);
};

struct MonolingualCorpus {
  std::vector<Sentence> sentences;
  std::string language;

  std::size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }
};

struct ParallelCorpus {
  std::vector<Sentence> source;
  std::vector<Sentence> target;
  std::string name;

  std::size_t size() const { return source.size(); }

  MonolingualCorpus source_side(const std::string &language = "src") const;
  MonolingualCorpus target_side(const std::string &language = "tgt") const;
};

struct ReadReport {
  std::size_t blanks_skipped = 0;  // read_corpus
  std::size_t pairs_dropped = 0;   // read_parallel
};

MonolingualCorpus read_corpus(const std::string &path,
                              const std::string &language,
                              ReadReport *report = nullptr);

// A blank line on either side drops the whole pair; a line-count mismatch
// between the files is a hard error naming both counts.
ParallelCorpus read_parallel(const std::string &source_path,
                             const std::string &target_path,
                             const std::string &name,
                             ReadReport *report = nullptr);

ParallelCorpus combine_domains(const std::vector<ParallelCorpus> &parts,
                               const std::string &name);

struct OverlapResult {
  std::size_t count = 0;
  std::vector<std::string> words;  // sorted intersection of word types
};

// Word-type intersection of the two corpora, by default on WX-encoded text.
OverlapResult overlap_vocab(const MonolingualCorpus &a,
                            const MonolingualCorpus &b, bool wx_encode = true);

class Vocabulary {
 public:
  static constexpr std::uint32_t kUnk = 0;
  static constexpr std::uint32_t kBos = 1;
  static constexpr std::uint32_t kEos = 2;

  static constexpr const char *kUnkWord = "<unk>";
  static constexpr const char *kBosWord = "<s>";
  static constexpr const char *kEosWord = "</s>";

  Vocabulary();

  std::uint32_t add(const std::string &word);
  // kUnk for unseen words.
  std::uint32_t lookup(const std::string &word) const;
  const std::string &word(std::uint32_t id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> words_;
};

std::vector<std::string> read_lines(const std::string &path);
void write_lines(const std::string &path,
                 const std::vector<std::string> &lines);

}  // namespace lingsel
