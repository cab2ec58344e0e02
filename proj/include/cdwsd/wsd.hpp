#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cdwsd/density.hpp"
#include "cdwsd/taxonomy.hpp"

namespace cdwsd {

/// window_size counts nouns including the target; the target sits at window
/// index (window_size - 1) / 2, with windows clipped at document edges.
struct WindowConfig {
  std::uint32_t window_size = 15;
  DensityParams params;
};

/// One live (word occurrence, sense) pair inside a candidate's subhierarchy.
struct SenseRef {
  std::uint32_t occurrence = 0;
  SynsetIndex synset = kNoSynset;

  friend bool operator==(const SenseRef&, const SenseRef&) = default;
};

struct Occurrence {
  std::size_t position = 0;
  std::string lemma;
  std::vector<SynsetIndex> senses;  // live candidate set, shrinks during the loop
  std::uint32_t original_sense_count = 0;
};

enum class Resolution { Resolved, Reduced, Unresolved };

inline const char* to_string(Resolution r) {
  switch (r) {
    case Resolution::Resolved: return "RESOLVED";
    case Resolution::Reduced: return "REDUCED";
    case Resolution::Unresolved: return "UNRESOLVED";
  }
  return "UNRESOLVED";
}

struct DisambiguationOutcome {
  std::size_t position = 0;
  std::string lemma;
  Resolution status = Resolution::Unresolved;
  std::optional<SynsetIndex> chosen;
  std::vector<SynsetIndex> remaining;  // in sense-number order

  friend bool operator==(const DisambiguationOutcome&, const DisambiguationOutcome&) = default;
};

/// Per-window working structure: the window's occurrences with their live
/// senses, every ancestor-inclusive concept as a candidate with its mark
/// list, and the set of concepts already spent by a selection. `cones`
/// caches each sense synset's inclusive ancestor set (sorted).
struct Lattice {
  std::vector<Occurrence> occurrences;
  std::map<SynsetIndex, std::vector<SenseRef>> candidates;
  std::unordered_set<SynsetIndex> blocked;
  std::unordered_map<SynsetIndex, std::vector<SynsetIndex>> cones;
};

namespace detail {

inline bool cone_contains(const std::vector<SynsetIndex>& cone, SynsetIndex c) {
  return std::binary_search(cone.begin(), cone.end(), c);
}

/// Rebuilds candidate mark lists from the surviving senses. Candidates whose
/// subhierarchy no longer holds any live sense drop out.
inline void rebuild_candidates(Lattice& l) {
  l.candidates.clear();
  for (std::uint32_t oi = 0; oi < l.occurrences.size(); ++oi) {
    for (SynsetIndex s : l.occurrences[oi].senses) {
      for (SynsetIndex a : l.cones.at(s)) l.candidates[a].push_back(SenseRef{oi, s});
    }
  }
}

}  // namespace detail

/// Step 1: lay out the window's nouns, their senses and all hypernyms.
/// Every lemma must have at least one sense in the taxonomy; callers filter
/// unknown words beforehand.
inline Lattice build_lattice(const Taxonomy& t, std::span<const std::string> window) {
  Lattice l;
  l.occurrences.reserve(window.size());
  for (std::size_t pos = 0; pos < window.size(); ++pos) {
    const auto senses = t.senses(window[pos]);
    if (senses.empty())
      throw std::invalid_argument("lemma '" + window[pos] + "' has no senses in the taxonomy");
    Occurrence occ;
    occ.position = pos;
    occ.lemma = window[pos];
    occ.original_sense_count = static_cast<std::uint32_t>(senses.size());
    for (const SenseEntry& e : senses) {
      occ.senses.push_back(e.synset);
      if (!l.cones.count(e.synset)) l.cones.emplace(e.synset, t.ancestors(e.synset));
    }
    l.occurrences.push_back(std::move(occ));
  }
  detail::rebuild_candidates(l);
  return l;
}

/// Step 3: among non-blocked candidates holding at least two marks, pick the
/// one with highest conceptual density. Ties fall to the larger mark count,
/// then the more specific concept (fewer descendants), then the
/// lexicographically smaller synset id. Empty result means the loop is done.
inline std::optional<std::pair<SynsetIndex, double>> select_densest(const Lattice& l,
                                                                    const Taxonomy& t,
                                                                    const DensityParams& params) {
  bool have = false;
  SynsetIndex best = kNoSynset;
  double best_density = 0.0;
  std::size_t best_marks = 0;
  std::uint32_t best_desc = 0;

  for (const auto& [c, marks] : l.candidates) {
    if (marks.size() < 2 || l.blocked.count(c)) continue;
    const ConceptStats& st = t.stats(c);
    const double d = conceptual_density(st, static_cast<std::uint32_t>(marks.size()), params);
    bool better = false;
    if (!have) {
      better = true;
    } else if (d != best_density) {
      better = d > best_density;
    } else if (marks.size() != best_marks) {
      better = marks.size() > best_marks;
    } else if (st.descendants != best_desc) {
      better = st.descendants < best_desc;
    } else {
      better = t.id(c) < t.id(best);
    }
    if (better) {
      have = true;
      best = c;
      best_density = d;
      best_marks = marks.size();
      best_desc = st.descendants;
    }
  }
  if (!have) return std::nullopt;
  return std::make_pair(best, best_density);
}

/// Step 4: commit a selected concept. Occurrences with at least one sense in
/// its subhierarchy keep exactly those senses; their other senses are
/// deleted. The whole subhierarchy (the concept included) becomes blocked,
/// and mark lists are recomputed from the surviving senses.
inline void apply_selection(Lattice& l, const Taxonomy& t, SynsetIndex chosen) {
  auto cand = l.candidates.find(chosen);
  if (cand == l.candidates.end())
    throw std::invalid_argument("apply_selection: '" + t.id(chosen) + "' is not a live candidate");

  // Block first: every lattice concept below the chosen one is reachable
  // from it through candidate nodes only (any hypernym path from a marked
  // node up to the chosen concept consists of ancestors of that node's live
  // senses, which are all candidates themselves).
  {
    std::vector<SynsetIndex> stack{chosen};
    l.blocked.insert(chosen);
    while (!stack.empty()) {
      const SynsetIndex v = stack.back();
      stack.pop_back();
      for (SynsetIndex child : t.synset(v).hyponyms) {
        if (l.candidates.count(child) && l.blocked.insert(child).second) stack.push_back(child);
      }
    }
  }

  for (Occurrence& occ : l.occurrences) {
    std::vector<SynsetIndex> under;
    for (SynsetIndex s : occ.senses)
      if (detail::cone_contains(l.cones.at(s), chosen)) under.push_back(s);
    if (!under.empty() && under.size() != occ.senses.size()) occ.senses = std::move(under);
  }

  detail::rebuild_candidates(l);
}

namespace detail {

inline DisambiguationOutcome make_outcome(const Occurrence& occ) {
  DisambiguationOutcome out;
  out.position = occ.position;
  out.lemma = occ.lemma;
  out.remaining = occ.senses;
  if (occ.senses.size() == 1) {
    out.status = Resolution::Resolved;
    out.chosen = occ.senses.front();
  } else if (occ.senses.size() < occ.original_sense_count) {
    out.status = Resolution::Reduced;
  } else {
    out.status = Resolution::Unresolved;
  }
  return out;
}

}  // namespace detail

/// Runs the select/apply loop over one window until no candidate holds two
/// marks, then reports the target occurrence's outcome.
inline DisambiguationOutcome disambiguate_window(const Taxonomy& t,
                                                 std::span<const std::string> window,
                                                 std::size_t target_index,
                                                 const WindowConfig& cfg = {}) {
  if (target_index >= window.size())
    throw std::invalid_argument("target index out of range");
  Lattice l = build_lattice(t, window);
  while (auto selected = select_densest(l, t, cfg.params))
    apply_selection(l, t, selected->first);
  return detail::make_outcome(l.occurrences[target_index]);
}

/// Slides the window one noun at a time over the document, emitting one
/// outcome per noun. Windows shrink at the document edges; each noun is
/// disambiguated independently with a fresh window centered on it.
inline std::vector<DisambiguationOutcome> disambiguate_document(const Taxonomy& t,
                                                                std::span<const std::string> nouns,
                                                                const WindowConfig& cfg = {}) {
  if (cfg.window_size < 1) throw std::invalid_argument("window size must be at least 1");
  const std::size_t before = (cfg.window_size - 1) / 2;
  const std::size_t after = cfg.window_size - 1 - before;

  std::vector<DisambiguationOutcome> out;
  out.reserve(nouns.size());
  for (std::size_t i = 0; i < nouns.size(); ++i) {
    const std::size_t lo = i > before ? i - before : 0;
    const std::size_t hi = std::min(nouns.size() - 1, i + after);
    DisambiguationOutcome o =
        disambiguate_window(t, nouns.subspan(lo, hi - lo + 1), i - lo, cfg);
    o.position = i;
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace cdwsd
