#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cdwsd/errors.hpp"
#include "cdwsd/taxonomy.hpp"

namespace cdwsd {

struct GoldToken {
  std::string lemma;  // multiword lemmas joined with underscores
  std::string pos_tag;
  std::optional<std::string> gold_key;           // e.g. "noun.group.0"
  std::optional<std::string> multiword_surface;  // original surface for <mwd> tokens
  std::uint32_t sentence_index = 0;

  friend bool operator==(const GoldToken&, const GoldToken&) = default;
};

struct Document {
  std::vector<GoldToken> tokens;
  std::string source_id;

  friend bool operator==(const Document&, const Document&) = default;
};

struct SemcorParseOptions {
  /// Strict mode rejects tags outside the known inventory; permissive mode
  /// skips unknown elements together with their content.
  bool strict = true;
};

namespace detail {

class SemcorScanner {
 public:
  explicit SemcorScanner(std::string text) : text_(std::move(text)) {}

  struct Tag {
    std::string name;
    bool closing = false;
    std::size_t line = 0;
    std::size_t column = 0;
  };

  bool at_end() {
    skip_whitespace();
    return pos_ >= text_.size();
  }

  /// Next tag; non-whitespace text before it is an error (text is only
  /// legal as element content, which read_text() consumes).
  Tag next_tag() {
    skip_whitespace();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    if (text_[pos_] != '<')
      throw ParseError("stray text outside tags", line_, col_);
    Tag tag;
    tag.line = line_;
    tag.column = col_;
    advance();  // '<'
    if (pos_ < text_.size() && text_[pos_] == '/') {
      tag.closing = true;
      advance();
    }
    while (pos_ < text_.size() && text_[pos_] != '>') {
      tag.name += text_[pos_];
      advance();
    }
    if (pos_ >= text_.size()) throw ParseError("unterminated tag", tag.line, tag.column);
    advance();  // '>'
    if (tag.name.empty()) throw ParseError("empty tag name", tag.line, tag.column);
    return tag;
  }

  /// Raw text up to the next '<' (element content, may be empty).
  std::string read_text() {
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '<') {
      out += text_[pos_];
      advance();
    }
    return out;
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_whitespace() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      advance();
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline bool valid_gold_key(std::string_view key) {
  const std::size_t dot = key.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 >= key.size()) return false;
  for (std::size_t i = dot + 1; i < key.size(); ++i)
    if (key[i] < '0' || key[i] > '9') return false;
  return true;
}

}  // namespace detail

/// Parses the gold corpus grammar:
///   <s> ( <wd>surface</wd> [<sn>[key]</sn>] [<mwd>lemma</mwd>] [<msn>[key]</msn>]
///         <tag>POS</tag> )* </s> ...
/// A token group runs from <wd> to </tag>. <mwd>/<msn> override the lemma and
/// gold key (multiword canonicalization); <sn>/<msn> payloads must be
/// bracketed and are stored with the brackets stripped.
inline Document parse_semcor(std::istream& in, const SemcorParseOptions& options = {}) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  detail::SemcorScanner scan(buffer.str());

  Document doc;
  std::uint32_t sentence = 0;
  bool in_sentence = false;

  auto read_element_text = [&](const detail::SemcorScanner::Tag& open) {
    std::string content = scan.read_text();
    const auto close = scan.next_tag();
    if (!close.closing || close.name != open.name)
      throw ParseError("expected </" + open.name + ">", close.line, close.column);
    return content;
  };

  auto read_bracketed_key = [&](const detail::SemcorScanner::Tag& open) {
    const std::string content = read_element_text(open);
    if (content.size() < 2 || content.front() != '[' || content.back() != ']')
      throw ParseError("sense key '" + content + "' is not bracketed", open.line, open.column);
    std::string key = content.substr(1, content.size() - 2);
    if (!detail::valid_gold_key(key))
      throw ParseError("sense key '" + key + "' does not match <lexfile>.<number>", open.line,
                       open.column);
    return key;
  };

  auto skip_unknown = [&](const detail::SemcorScanner::Tag& open) {
    // Permissive mode: drop the element with its content, nesting included.
    std::vector<std::string> open_names{open.name};
    while (!open_names.empty()) {
      scan.read_text();
      const auto next = scan.next_tag();
      if (next.closing) {
        if (next.name != open_names.back())
          throw ParseError("mismatched closing tag </" + next.name + ">", next.line,
                           next.column);
        open_names.pop_back();
      } else {
        open_names.push_back(next.name);
      }
    }
  };

  while (!scan.at_end()) {
    auto tag = scan.next_tag();
    if (!in_sentence) {
      if (tag.closing || tag.name != "s") {
        if (!options.strict && !tag.closing) {
          skip_unknown(tag);
          continue;
        }
        throw ParseError("expected <s>", tag.line, tag.column);
      }
      in_sentence = true;
      continue;
    }

    if (tag.closing && tag.name == "s") {
      in_sentence = false;
      ++sentence;
      continue;
    }

    if (tag.closing)
      throw ParseError("unexpected closing tag </" + tag.name + ">", tag.line, tag.column);

    if (tag.name != "wd") {
      if (!options.strict) {
        skip_unknown(tag);
        continue;
      }
      throw ParseError("expected <wd>, got <" + tag.name + ">", tag.line, tag.column);
    }

    GoldToken token;
    token.sentence_index = sentence;
    token.lemma = read_element_text(tag);

    bool have_sn = false, have_mwd = false, have_msn = false, have_pos = false;
    while (!have_pos) {
      auto part = scan.next_tag();
      if (part.closing)
        throw ParseError("unexpected closing tag </" + part.name + "> inside token group",
                         part.line, part.column);
      if (part.name == "sn") {
        if (have_sn) throw ParseError("duplicate <sn> in token group", part.line, part.column);
        have_sn = true;
        if (!have_msn) token.gold_key = read_bracketed_key(part);
        else read_bracketed_key(part);
      } else if (part.name == "mwd") {
        if (have_mwd) throw ParseError("duplicate <mwd> in token group", part.line, part.column);
        have_mwd = true;
        token.multiword_surface = token.lemma;
        token.lemma = read_element_text(part);
      } else if (part.name == "msn") {
        if (have_msn) throw ParseError("duplicate <msn> in token group", part.line, part.column);
        have_msn = true;
        token.gold_key = read_bracketed_key(part);
      } else if (part.name == "tag") {
        token.pos_tag = read_element_text(part);
        have_pos = true;
      } else if (!options.strict) {
        skip_unknown(part);
      } else {
        throw ParseError("unknown tag <" + part.name + "> in token group", part.line,
                         part.column);
      }
    }
    doc.tokens.push_back(std::move(token));
  }
  if (in_sentence) throw ParseError("unterminated <s>", scan.line(), scan.column());
  return doc;
}

inline Document parse_semcor(const std::string& text, const SemcorParseOptions& options = {}) {
  std::istringstream in(text);
  return parse_semcor(in, options);
}

/// Canonical serialization back into the same grammar; parsing the output
/// reproduces the Document exactly (one line per sentence).
inline void serialize_semcor(const Document& doc, std::ostream& out) {
  std::size_t i = 0;
  std::uint32_t sentence = 0;
  while (i < doc.tokens.size()) {
    out << "<s>";
    for (; i < doc.tokens.size() && doc.tokens[i].sentence_index == sentence; ++i) {
      const GoldToken& t = doc.tokens[i];
      if (t.multiword_surface) {
        out << "<wd>" << *t.multiword_surface << "</wd>";
        out << "<mwd>" << t.lemma << "</mwd>";
        if (t.gold_key) out << "<msn>[" << *t.gold_key << "]</msn>";
      } else {
        out << "<wd>" << t.lemma << "</wd>";
        if (t.gold_key) out << "<sn>[" << *t.gold_key << "]</sn>";
      }
      out << "<tag>" << t.pos_tag << "</tag>";
    }
    out << "</s>\n";
    ++sentence;
  }
}

/// Whitespace-separated lemma stream (the plain input format).
inline std::vector<std::string> parse_plain(std::istream& in) {
  std::vector<std::string> out;
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

inline std::vector<std::string> parse_plain(const std::string& text) {
  std::istringstream in(text);
  return parse_plain(in);
}

struct ExtractedNoun {
  std::size_t position = 0;  // token index in the source document
  std::string lemma;

  friend bool operator==(const ExtractedNoun&, const ExtractedNoun&) = default;
};

struct NounFilterReport {
  std::size_t total_tokens = 0;
  std::size_t noun_tokens = 0;    // pos tag starts with "NN"
  std::size_t unknown_nouns = 0;  // nouns whose lemma is not in the taxonomy
  std::size_t kept = 0;
  std::size_t monosemous = 0;  // kept nouns with exactly one sense
};

/// Keeps tokens tagged NN* whose lemma the taxonomy knows, mirroring the
/// input-side filtering of the evaluation (all other words are thrown away).
inline std::vector<ExtractedNoun> extract_nouns(const Document& doc, const Taxonomy& t,
                                                NounFilterReport* report = nullptr) {
  std::vector<ExtractedNoun> out;
  NounFilterReport r;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const GoldToken& token = doc.tokens[i];
    ++r.total_tokens;
    if (token.pos_tag.rfind("NN", 0) != 0) continue;
    ++r.noun_tokens;
    const auto senses = t.senses(token.lemma);
    if (senses.empty()) {
      ++r.unknown_nouns;
      continue;
    }
    ++r.kept;
    if (senses.size() == 1) ++r.monosemous;
    out.push_back(ExtractedNoun{i, token.lemma});
  }
  if (report) *report = r;
  return out;
}

}  // namespace cdwsd
