#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cdwsd/errors.hpp"

namespace cdwsd {

/// Dense in-memory handle for a synset, assigned in file order at load time.
/// The string id from the interchange format stays available via Synset::id.
using SynsetIndex = std::uint32_t;

inline constexpr SynsetIndex kNoSynset = std::numeric_limits<SynsetIndex>::max();

struct Synset {
  std::string id;
  std::vector<SynsetIndex> hypernyms;
  std::vector<SynsetIndex> hyponyms;
  std::vector<std::string> words;
  std::string gloss;
  /// (lemma, sense key) pairs contributed by SENSE records, e.g. ("jury", "noun.group.0").
  std::vector<std::pair<std::string, std::string>> sense_keys;
};

/// Precomputed subhierarchy statistics for one concept.
///  - descendants: unique synsets reachable via hyponym edges, the concept included
///  - height: longest hyponym chain, the concept counting as level 1
///  - nhyp: branching factor of the regular tree with the same height and size
struct ConceptStats {
  std::uint32_t descendants = 1;
  std::uint32_t height = 1;
  double nhyp = 0.0;
};

/// One SENSE record: sense `number` (1-based) of some lemma is `synset`,
/// tagged with the inventory key `key`.
struct SenseEntry {
  std::uint32_t number = 0;
  SynsetIndex synset = kNoSynset;
  std::string key;
};

/// Solves sum_{i=0}^{height-1} x^i = descendants for the unique non-negative x.
/// The left side is strictly increasing in x, so plain bisection on
/// [0, descendants] converges; iteration stops at absolute residual 1e-9.
/// Leaves (height 1) return 0 by convention.
inline double solve_nhyp(std::uint32_t descendants, std::uint32_t height) {
  if (descendants < 1 || height < 1)
    throw std::invalid_argument("solve_nhyp: descendants and height must be at least 1");
  if (descendants < height)
    throw std::invalid_argument("solve_nhyp: descendants < height signals corrupt stats");
  if (height == 1) return 0.0;
  if (height == 2) return static_cast<double>(descendants) - 1.0;

  const double target = static_cast<double>(descendants);
  auto residual = [&](double x) {
    double sum = 0.0, term = 1.0;
    for (std::uint32_t i = 0; i < height; ++i) {
      sum += term;
      if (sum > 1e300) return std::numeric_limits<double>::infinity();
      term *= x;
    }
    return sum - target;
  };

  double lo = 0.0, hi = target;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double f = residual(mid);
    if (std::abs(f) <= 1e-9) break;
    (f < 0.0 ? lo : hi) = mid;
  }
  // Regular hierarchies have integer roots that evaluate exactly in doubles
  // (7 = 1+2+4); prefer the exact root over the bisection approximation.
  const double snapped = std::nearbyint(mid);
  if (snapped >= 0.0 && residual(snapped) == 0.0) return snapped;
  return mid;
}

/// Immutable noun taxonomy: synsets with hypernym/hyponym links, the
/// lemma -> senses index, and per-concept subhierarchy stats. Built by
/// load_taxonomy(); safe to share across threads afterwards.
class Taxonomy {
 public:
  std::size_t size() const { return synsets_.size(); }
  bool empty() const { return synsets_.empty(); }

  const Synset& synset(SynsetIndex i) const { return synsets_.at(i); }
  const std::string& id(SynsetIndex i) const { return synsets_.at(i).id; }

  std::optional<SynsetIndex> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  SynsetIndex index_of(std::string_view id) const {
    auto found = find(id);
    if (!found) throw std::out_of_range("unknown synset id '" + std::string(id) + "'");
    return *found;
  }

  const ConceptStats& stats(SynsetIndex i) const { return stats_.at(i); }
  std::uint32_t descendants(SynsetIndex i) const { return stats_.at(i).descendants; }
  std::uint32_t height(SynsetIndex i) const { return stats_.at(i).height; }
  double nhyp(SynsetIndex i) const { return stats_.at(i).nhyp; }

  /// All synsets reachable via zero or more hypernym edges, the start
  /// included. Returned sorted ascending (set semantics).
  std::vector<SynsetIndex> ancestors(SynsetIndex start) const {
    if (start >= synsets_.size())
      throw std::out_of_range("unknown synset index " + std::to_string(start));
    std::vector<SynsetIndex> out;
    std::vector<SynsetIndex> stack{start};
    std::vector<bool> seen(synsets_.size(), false);
    seen[start] = true;
    while (!stack.empty()) {
      const SynsetIndex n = stack.back();
      stack.pop_back();
      out.push_back(n);
      for (SynsetIndex p : synsets_[n].hypernyms) {
        if (!seen[p]) {
          seen[p] = true;
          stack.push_back(p);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Senses of a lemma in sense-number order; empty span for unknown lemmas.
  std::span<const SenseEntry> senses(std::string_view lemma) const {
    auto it = sense_index_.find(std::string(lemma));
    if (it == sense_index_.end()) return {};
    return it->second;
  }

  bool known_lemma(std::string_view lemma) const { return !senses(lemma).empty(); }

  std::optional<SynsetIndex> resolve_sense_key(std::string_view lemma, std::string_view key) const {
    for (const SenseEntry& e : senses(lemma))
      if (e.key == key) return e.synset;
    return std::nullopt;
  }

  std::optional<std::string> sense_key(std::string_view lemma, SynsetIndex synset) const {
    for (const SenseEntry& e : senses(lemma))
      if (e.synset == synset) return e.key;
    return std::nullopt;
  }

  std::vector<SynsetIndex> roots() const {
    std::vector<SynsetIndex> out;
    for (SynsetIndex i = 0; i < synsets_.size(); ++i)
      if (synsets_[i].hypernyms.empty()) out.push_back(i);
    return out;
  }

  /// Distinct lemmas appearing in synset word lists.
  std::size_t word_count() const { return word_count_; }
  std::size_t sense_count() const { return sense_count_; }

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend Taxonomy load_taxonomy(std::istream&);

  std::vector<Synset> synsets_;
  std::vector<ConceptStats> stats_;
  std::unordered_map<std::string, SynsetIndex> index_;
  std::unordered_map<std::string, std::vector<SenseEntry>> sense_index_;
  std::size_t word_count_ = 0;
  std::size_t sense_count_ = 0;
  std::vector<std::string> warnings_;
};

namespace detail {

struct RawField {
  std::string text;
  std::size_t column;  // 1-based start of the field in its line
};

inline std::vector<RawField> split_tab_fields(const std::string& line) {
  std::vector<RawField> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back({line.substr(start, tab == std::string::npos ? tab : tab - start), start + 1});
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

inline std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      break;
    }
    if (comma > start) out.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

// Reconstructs one hypernym cycle for the error message. Called only when a
// cycle is known to exist.
inline std::string describe_cycle(const std::vector<Synset>& synsets) {
  const std::size_t n = synsets.size();
  std::vector<int> color(n, 0);  // 0 white, 1 gray, 2 black
  std::vector<SynsetIndex> path;

  // Iterative DFS over hypernym edges keeping the gray path explicit.
  struct Frame {
    SynsetIndex node;
    std::size_t next_edge;
  };
  for (SynsetIndex s = 0; s < n; ++s) {
    if (color[s] != 0) continue;
    std::vector<Frame> stack{{s, 0}};
    color[s] = 1;
    path.assign(1, s);
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& edges = synsets[f.node].hypernyms;
      if (f.next_edge < edges.size()) {
        const SynsetIndex to = edges[f.next_edge++];
        if (color[to] == 1) {
          std::string msg = "hypernym cycle detected: ";
          auto it = std::find(path.begin(), path.end(), to);
          for (; it != path.end(); ++it) msg += synsets[*it].id + " -> ";
          msg += synsets[to].id;
          return msg;
        }
        if (color[to] == 0) {
          color[to] = 1;
          path.push_back(to);
          stack.push_back({to, 0});
        }
      } else {
        color[f.node] = 2;
        path.pop_back();
        stack.pop_back();
      }
    }
  }
  return "hypernym cycle detected";
}

}  // namespace detail

/// Parses the taxonomy interchange format and returns a fully indexed
/// Taxonomy with all per-concept stats precomputed.
///
/// Format (UTF-8, tab-separated, '#' comment lines):
///   SYNSET <id> <hypernym-ids csv, empty for roots> <lemma csv> [gloss]
///   SENSE  <lemma> <sense-number 1-based> <id> <sense-key>
inline Taxonomy load_taxonomy(std::istream& in) {
  struct RawSynset {
    std::string id;
    std::vector<std::string> hypernyms;
    std::vector<std::string> words;
    std::string gloss;
    std::size_t line;
  };
  struct RawSense {
    std::string lemma;
    std::uint32_t number;
    std::string synset_id;
    std::string key;
    std::size_t line;
  };

  std::vector<RawSynset> raw_synsets;
  std::vector<RawSense> raw_senses;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    const auto fields = detail::split_tab_fields(line);
    const std::string& kind = fields[0].text;
    if (kind == "SYNSET") {
      if (fields.size() < 4 || fields.size() > 5)
        throw ParseError("SYNSET record needs 4 or 5 tab-separated fields, got " +
                             std::to_string(fields.size()),
                         line_no, 1);
      RawSynset s;
      s.id = fields[1].text;
      if (s.id.empty()) throw ParseError("empty synset id", line_no, fields[1].column);
      s.hypernyms = detail::split_csv(fields[2].text);
      s.words = detail::split_csv(fields[3].text);
      if (s.words.empty())
        throw ParseError("synset '" + s.id + "' has an empty word list", line_no,
                         fields[3].column);
      if (fields.size() == 5) s.gloss = fields[4].text;
      s.line = line_no;
      raw_synsets.push_back(std::move(s));
    } else if (kind == "SENSE") {
      if (fields.size() != 5)
        throw ParseError("SENSE record needs 5 tab-separated fields, got " +
                             std::to_string(fields.size()),
                         line_no, 1);
      RawSense s;
      s.lemma = fields[1].text;
      if (s.lemma.empty()) throw ParseError("empty lemma", line_no, fields[1].column);
      const std::string& num = fields[2].text;
      if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("sense number '" + num + "' is not a non-negative integer", line_no,
                         fields[2].column);
      s.number = static_cast<std::uint32_t>(std::stoul(num));
      if (s.number == 0)
        throw ParseError("sense numbers are 1-based", line_no, fields[2].column);
      s.synset_id = fields[3].text;
      s.key = fields[4].text;
      if (s.key.empty()) throw ParseError("empty sense key", line_no, fields[4].column);
      s.line = line_no;
      raw_senses.push_back(std::move(s));
    } else {
      throw ParseError("unknown record type '" + kind + "'", line_no, 1);
    }
  }

  Taxonomy t;
  t.synsets_.reserve(raw_synsets.size());
  for (const RawSynset& raw : raw_synsets) {
    if (t.index_.count(raw.id))
      throw ParseError("duplicate synset id '" + raw.id + "'", raw.line);
    const SynsetIndex idx = static_cast<SynsetIndex>(t.synsets_.size());
    t.index_.emplace(raw.id, idx);
    Synset s;
    s.id = raw.id;
    s.words = raw.words;
    s.gloss = raw.gloss;
    t.synsets_.push_back(std::move(s));
  }

  for (std::size_t i = 0; i < raw_synsets.size(); ++i) {
    const RawSynset& raw = raw_synsets[i];
    for (const std::string& hid : raw.hypernyms) {
      auto it = t.index_.find(hid);
      if (it == t.index_.end())
        throw ParseError("dangling hypernym reference '" + hid + "' in synset '" + raw.id + "'",
                         raw.line);
      t.synsets_[i].hypernyms.push_back(it->second);
      t.synsets_[it->second].hyponyms.push_back(static_cast<SynsetIndex>(i));
    }
  }

  // Acyclicity via Kahn's algorithm: peel leaves of the hyponym relation,
  // computing heights on the way (children always finish before parents).
  const std::size_t n = t.synsets_.size();
  t.stats_.assign(n, ConceptStats{});
  {
    std::vector<std::uint32_t> pending(n, 0);
    std::vector<SynsetIndex> queue;
    for (SynsetIndex i = 0; i < n; ++i) {
      pending[i] = static_cast<std::uint32_t>(t.synsets_[i].hyponyms.size());
      if (pending[i] == 0) queue.push_back(i);
    }
    std::size_t processed = 0;
    while (!queue.empty()) {
      const SynsetIndex c = queue.back();
      queue.pop_back();
      ++processed;
      std::uint32_t h = 1;
      for (SynsetIndex child : t.synsets_[c].hyponyms)
        h = std::max(h, t.stats_[child].height + 1);
      t.stats_[c].height = h;
      for (SynsetIndex parent : t.synsets_[c].hypernyms)
        if (--pending[parent] == 0) queue.push_back(parent);
    }
    if (processed != n) throw ParseError(detail::describe_cycle(t.synsets_));
  }

  // Unique-descendant counts: one stamped DFS per concept. Total cost is the
  // sum of subhierarchy sizes, which stays small for WordNet-shaped data.
  {
    std::vector<std::uint32_t> stamp(n, 0);
    std::vector<SynsetIndex> stack;
    for (SynsetIndex c = 0; c < n; ++c) {
      const std::uint32_t epoch = c + 1;
      std::uint32_t count = 0;
      stack.assign(1, c);
      stamp[c] = epoch;
      while (!stack.empty()) {
        const SynsetIndex v = stack.back();
        stack.pop_back();
        ++count;
        for (SynsetIndex child : t.synsets_[v].hyponyms) {
          if (stamp[child] != epoch) {
            stamp[child] = epoch;
            stack.push_back(child);
          }
        }
      }
      t.stats_[c].descendants = count;
      t.stats_[c].nhyp = solve_nhyp(count, t.stats_[c].height);
    }
  }

  for (const RawSense& raw : raw_senses) {
    auto it = t.index_.find(raw.synset_id);
    if (it == t.index_.end())
      throw ParseError("SENSE record references unknown synset '" + raw.synset_id + "'",
                       raw.line);
    auto& list = t.sense_index_[raw.lemma];
    for (const SenseEntry& e : list) {
      if (e.number == raw.number)
        throw ParseError("duplicate sense number " + std::to_string(raw.number) +
                             " for lemma '" + raw.lemma + "'",
                         raw.line);
      if (e.synset == it->second)
        throw ParseError("lemma '" + raw.lemma + "' lists synset '" + raw.synset_id +
                             "' twice",
                         raw.line);
    }
    list.push_back(SenseEntry{raw.number, it->second, raw.key});
    t.synsets_[it->second].sense_keys.emplace_back(raw.lemma, raw.key);
  }
  for (auto& [lemma, list] : t.sense_index_) {
    std::sort(list.begin(), list.end(),
              [](const SenseEntry& a, const SenseEntry& b) { return a.number < b.number; });
    t.sense_count_ += list.size();
  }

  {
    std::unordered_map<std::string, bool> seen_words;
    for (const Synset& s : t.synsets_)
      for (const std::string& w : s.words) seen_words.emplace(w, true);
    t.word_count_ = seen_words.size();
  }

  std::uint32_t max_height = 0;
  for (const ConceptStats& s : t.stats_) max_height = std::max(max_height, s.height);
  if (max_height > 16)
    t.warnings_.push_back("max height " + std::to_string(max_height) +
                          " exceeds 16, the WordNet noun hierarchy bound");
  if (t.synsets_.empty()) t.warnings_.push_back("taxonomy is empty");

  return t;
}

}  // namespace cdwsd
