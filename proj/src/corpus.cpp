#include "lingsel/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "lingsel/translit.hpp"
#include "lingsel/utf8.hpp"

namespace lingsel {
namespace {

// Devanagari composition exclusions: precomposed -> base + nukta (U+093C).
constexpr std::pair<char32_t, char32_t> kNuktaDecomp[] = {
    {0x0929, 0x0928}, {0x0931, 0x0930}, {0x0934, 0x0933},
    {0x0958, 0x0915}, {0x0959, 0x0916}, {0x095A, 0x0917},
    {0x095B, 0x091C}, {0x095C, 0x0921}, {0x095D, 0x0922},
    {0x095E, 0x092B}, {0x095F, 0x092F},
};

bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == 0x00A0;
}

}  // namespace

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  char32_t cp;
  while (i < text.size()) {
    if (!utf8::decode(text, i, cp)) {
      ++i;
      utf8::append(out, 0xFFFD);
      continue;
    }
    bool decomposed = false;
    for (const auto &[pre, base] : kNuktaDecomp) {
      if (cp == pre) {
        utf8::append(out, base);
        utf8::append(out, 0x093C);
        decomposed = true;
        break;
      }
    }
    if (!decomposed) utf8::append(out, cp);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  char32_t cp;
  while (i < text.size()) {
    std::size_t start = i;
    if (!utf8::decode(text, i, cp)) {
      ++i;
      continue;
    }
    if (is_space(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.append(text.substr(start, i - start));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Sentence::Sentence(std::string_view raw) : text(normalize_text(raw)) {
  if (text.find('\n') != std::string::npos)
    throw Error("sentence text contains a newline");
  tokens = tokenize(text);
}

MonolingualCorpus ParallelCorpus::source_side(
    const std::string &language) const {
  return MonolingualCorpus{source, language};
}

MonolingualCorpus ParallelCorpus::target_side(
    const std::string &language) const {
  return MonolingualCorpus{target, language};
}

namespace {

std::string read_file_checked(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("read failure on file: " + path);
  std::string data = buf.str();
  if (auto bad = utf8::find_invalid(data))
    throw Error("invalid UTF-8 in " + path + " at byte offset " +
                std::to_string(*bad));
  return data;
}

std::vector<std::string> split_file_lines(const std::string &data) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t nl = data.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(data.substr(start));
      break;
    }
    lines.push_back(data.substr(start, nl - start));
    start = nl + 1;
  }
  for (auto &line : lines)
    if (!line.empty() && line.back() == '\r') line.pop_back();
  return lines;
}

bool is_blank(const std::string &line) {
  return tokenize(line).empty();
}

}  // namespace

std::vector<std::string> read_lines(const std::string &path) {
  return split_file_lines(read_file_checked(path));
}

void write_lines(const std::string &path,
                 const std::vector<std::string> &lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  for (const auto &line : lines) out << line << '\n';
  if (!out) throw Error("write failure on file: " + path);
}

MonolingualCorpus read_corpus(const std::string &path,
                              const std::string &language,
                              ReadReport *report) {
  MonolingualCorpus corpus;
  corpus.language = language;
  for (const auto &line : read_lines(path)) {
    if (is_blank(line)) {
      if (report) ++report->blanks_skipped;
      continue;
    }
    corpus.sentences.emplace_back(line);
  }
  return corpus;
}

ParallelCorpus read_parallel(const std::string &source_path,
                             const std::string &target_path,
                             const std::string &name, ReadReport *report) {
  const auto src_lines = read_lines(source_path);
  const auto tgt_lines = read_lines(target_path);
  if (src_lines.size() != tgt_lines.size())
    throw Error("alignment mismatch: " + source_path + " has " +
                std::to_string(src_lines.size()) + " lines but " +
                target_path + " has " + std::to_string(tgt_lines.size()));
  ParallelCorpus corpus;
  corpus.name = name;
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    if (is_blank(src_lines[i]) || is_blank(tgt_lines[i])) {
      if (report) ++report->pairs_dropped;
      continue;
    }
    corpus.source.emplace_back(src_lines[i]);
    corpus.target.emplace_back(tgt_lines[i]);
  }
  return corpus;
}

ParallelCorpus combine_domains(const std::vector<ParallelCorpus> &parts,
                               const std::string &name) {
  if (parts.empty()) throw Error("combine_domains: no parts given");
  ParallelCorpus out;
  out.name = name;
  for (const auto &part : parts) {
    out.source.insert(out.source.end(), part.source.begin(),
                      part.source.end());
    out.target.insert(out.target.end(), part.target.begin(),
                      part.target.end());
  }
  return out;
}

OverlapResult overlap_vocab(const MonolingualCorpus &a,
                            const MonolingualCorpus &b, bool wx_encode) {
  if (a.empty() || b.empty())
    throw Error("overlap_vocab: empty corpus");
  auto types = [wx_encode](const MonolingualCorpus &c) {
    std::set<std::string> out;
    for (const auto &sentence : c.sentences)
      for (const auto &token : sentence.tokens)
        out.insert(wx_encode ? to_wx(token) : token);
    return out;
  };
  const auto ta = types(a);
  const auto tb = types(b);
  OverlapResult result;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(),
                        std::back_inserter(result.words));
  result.count = result.words.size();
  return result;
}

Vocabulary::Vocabulary() {
  add(kUnkWord);
  add(kBosWord);
  add(kEosWord);
}

std::uint32_t Vocabulary::add(const std::string &word) {
  auto [it, inserted] =
      ids_.emplace(word, static_cast<std::uint32_t>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

std::uint32_t Vocabulary::lookup(const std::string &word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? kUnk : it->second;
}

}  // namespace lingsel
