#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdwsd/corpus.hpp"
#include "cdwsd/taxonomy.hpp"
#include "cdwsd/wsd.hpp"

namespace cdwsd {

enum class Population { PolysemousOnly, Overall };

inline const char* to_string(Population p) {
  return p == Population::PolysemousOnly ? "polysemous" : "overall";
}

/// coverage = answered/total, precision = correct/answered, recall =
/// correct/total; the zero-denominator cases are defined as 0, keeping
/// recall = precision * coverage an identity.
struct ScoreReport {
  Population population = Population::Overall;
  std::size_t total = 0;
  std::size_t answered = 0;
  std::size_t correct = 0;
  double coverage = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

inline ScoreReport make_score_report(Population population, std::size_t total,
                                     std::size_t answered, std::size_t correct) {
  ScoreReport r;
  r.population = population;
  r.total = total;
  r.answered = answered;
  r.correct = correct;
  r.coverage = total == 0 ? 0.0 : static_cast<double>(answered) / static_cast<double>(total);
  r.precision =
      answered == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(answered);
  r.recall = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  return r;
}

struct ScoreOptions {
  /// Gold tags whose key resolves to no taxonomy sense are normally dropped
  /// from the totals (and counted in the diagnostics); setting this keeps
  /// them in `total` as permanently unanswerable items.
  bool include_unmatched_gold = false;
};

struct ScoreDiagnostics {
  std::size_t unmatched_gold = 0;  // kept nouns without a resolvable gold key
};

namespace detail {

struct GoldAlignment {
  std::string lemma;
  std::size_t sense_count = 0;
  std::optional<SynsetIndex> gold;  // resolved gold synset, if any
};

/// Resolves gold keys for the extracted nouns of `gold`. The outcome list
/// produced by the engine must align with this extraction one to one.
inline std::vector<GoldAlignment> align_gold(const Document& gold, const Taxonomy& t) {
  std::vector<GoldAlignment> out;
  for (const ExtractedNoun& noun : extract_nouns(gold, t)) {
    GoldAlignment a;
    a.lemma = noun.lemma;
    a.sense_count = t.senses(noun.lemma).size();
    const GoldToken& token = gold.tokens[noun.position];
    if (token.gold_key) a.gold = t.resolve_sense_key(noun.lemma, *token.gold_key);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace detail

/// Scores engine outcomes against the gold document. Only RESOLVED outcomes
/// count as answered; REDUCED is treated as failure to answer. The
/// polysemous population restricts to lemmas with two or more senses.
inline ScoreReport score(std::span<const DisambiguationOutcome> outcomes, const Document& gold,
                         const Taxonomy& t, Population population,
                         const ScoreOptions& options = {},
                         ScoreDiagnostics* diagnostics = nullptr) {
  const auto aligned = detail::align_gold(gold, t);
  if (aligned.size() != outcomes.size())
    throw std::invalid_argument("outcome list does not align with the gold document: " +
                                std::to_string(outcomes.size()) + " outcomes vs " +
                                std::to_string(aligned.size()) + " gold nouns");

  std::size_t total = 0, answered = 0, correct = 0, unmatched = 0;
  for (std::size_t i = 0; i < aligned.size(); ++i) {
    const detail::GoldAlignment& a = aligned[i];
    if (!a.gold) {
      ++unmatched;
      if (!options.include_unmatched_gold) continue;
    }
    if (population == Population::PolysemousOnly && a.sense_count < 2) continue;
    ++total;
    if (outcomes[i].status != Resolution::Resolved) continue;
    ++answered;
    if (a.gold && outcomes[i].chosen == *a.gold) ++correct;
  }
  if (diagnostics) diagnostics->unmatched_gold = unmatched;
  return make_score_report(population, total, answered, correct);
}

/// Expected precision of choosing senses uniformly at random, over the
/// polysemous occurrences only: mean of 1/sense_count.
inline double random_baseline_analytic(std::span<const std::string> lemmas, const Taxonomy& t) {
  double sum = 0.0;
  std::size_t polysemous = 0;
  for (const std::string& lemma : lemmas) {
    const std::size_t n = t.senses(lemma).size();
    if (n == 0) throw std::invalid_argument("lemma '" + lemma + "' is not in the taxonomy");
    if (n < 2) continue;
    ++polysemous;
    sum += 1.0 / static_cast<double>(n);
  }
  return polysemous == 0 ? 0.0 : sum / static_cast<double>(polysemous);
}

struct MonteCarloResult {
  double mean_precision = 0.0;
  double stddev = 0.0;
  std::uint32_t runs = 0;
};

namespace detail {

/// Unbiased bounded sampling (Lemire). Kept explicit so seeded runs are
/// reproducible across standard libraries, unlike uniform_int_distribution.
inline std::uint32_t bounded_uniform(std::mt19937_64& gen, std::uint32_t n) {
  const std::uint32_t x = static_cast<std::uint32_t>(gen());
  std::uint64_t m = static_cast<std::uint64_t>(x) * n;
  std::uint32_t low = static_cast<std::uint32_t>(m);
  if (low < n) {
    const std::uint32_t threshold = (0u - n) % n;
    while (low < threshold) {
      m = static_cast<std::uint64_t>(static_cast<std::uint32_t>(gen())) * n;
      low = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

}  // namespace detail

/// Guessing baseline: per run, every occurrence gets a uniformly random
/// sense, scored at full coverage. Monosemous nouns are trivially correct
/// in the overall population and excluded from the polysemous one.
inline MonteCarloResult random_baseline_monte_carlo(const Document& gold, const Taxonomy& t,
                                                    std::uint32_t runs, std::uint64_t seed,
                                                    Population population) {
  if (runs < 1) throw std::invalid_argument("monte carlo needs at least one run");
  const auto aligned = detail::align_gold(gold, t);

  struct Item {
    std::uint32_t sense_count;
    std::uint32_t gold_pos;  // position of the gold synset in the sense list
  };
  std::vector<Item> items;
  for (const detail::GoldAlignment& a : aligned) {
    if (!a.gold) continue;
    if (population == Population::PolysemousOnly && a.sense_count < 2) continue;
    const auto senses = t.senses(a.lemma);
    std::uint32_t pos = 0;
    for (std::uint32_t j = 0; j < senses.size(); ++j)
      if (senses[j].synset == *a.gold) pos = j;
    items.push_back(Item{static_cast<std::uint32_t>(senses.size()), pos});
  }

  std::mt19937_64 gen(seed);
  std::vector<double> precisions(runs, 0.0);
  for (std::uint32_t run = 0; run < runs; ++run) {
    std::size_t correct = 0;
    for (const Item& item : items)
      if (detail::bounded_uniform(gen, item.sense_count) == item.gold_pos) ++correct;
    precisions[run] =
        items.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(items.size());
  }

  MonteCarloResult result;
  result.runs = runs;
  double sum = 0.0;
  for (double p : precisions) sum += p;
  result.mean_precision = sum / runs;
  if (runs > 1) {
    double ss = 0.0;
    for (double p : precisions) ss += (p - result.mean_precision) * (p - result.mean_precision);
    result.stddev = std::sqrt(ss / (runs - 1));
  }
  return result;
}

/// Per-(lemma, sense) occurrence counts from a training corpus.
struct SenseFrequencyTable {
  std::map<std::pair<std::string, SynsetIndex>, std::uint64_t> counts;

  void add(const std::string& lemma, SynsetIndex synset, std::uint64_t n = 1) {
    counts[{lemma, synset}] += n;
  }
  std::uint64_t count(const std::string& lemma, SynsetIndex synset) const {
    auto it = counts.find({lemma, synset});
    return it == counts.end() ? 0 : it->second;
  }
};

/// Counts resolvable gold tags of a training document.
inline SenseFrequencyTable build_frequency_table(const Document& train, const Taxonomy& t) {
  SenseFrequencyTable table;
  for (const detail::GoldAlignment& a : detail::align_gold(train, t))
    if (a.gold) table.add(a.lemma, *a.gold);
  return table;
}

/// Most-frequent-sense heuristic: every extracted noun gets its highest-count
/// training sense; nouns with no counted sense stay unanswered, which is
/// where this baseline loses coverage. Ties fall to the lowest sense number.
inline std::vector<DisambiguationOutcome> most_frequent_baseline(
    const Document& gold, const Taxonomy& t, const SenseFrequencyTable& freqs) {
  std::vector<DisambiguationOutcome> out;
  for (const ExtractedNoun& noun : extract_nouns(gold, t)) {
    const auto senses = t.senses(noun.lemma);
    DisambiguationOutcome o;
    o.position = noun.position;
    o.lemma = noun.lemma;
    std::uint64_t best_count = 0;
    SynsetIndex best = kNoSynset;
    for (const SenseEntry& e : senses) {  // sense-number order, first win = lowest number
      const std::uint64_t c = freqs.count(noun.lemma, e.synset);
      if (c > best_count) {
        best_count = c;
        best = e.synset;
      }
    }
    if (best_count == 0) {
      o.status = Resolution::Unresolved;
      for (const SenseEntry& e : senses) o.remaining.push_back(e.synset);
    } else {
      o.status = Resolution::Resolved;
      o.chosen = best;
      o.remaining = {best};
    }
    out.push_back(std::move(o));
  }
  return out;
}

struct SweepRow {
  Population population = Population::Overall;
  std::uint32_t window_size = 0;
  ScoreReport report;
};

/// Runs the full engine once per window size (sorted, deduplicated) and
/// scores both populations.
inline std::vector<SweepRow> window_sweep(const Document& gold, const Taxonomy& t,
                                          std::vector<std::uint32_t> sizes,
                                          const DensityParams& params = {},
                                          const ScoreOptions& options = {}) {
  if (sizes.empty()) throw std::invalid_argument("window sweep needs at least one size");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  const auto nouns = extract_nouns(gold, t);
  std::vector<std::string> lemmas;
  lemmas.reserve(nouns.size());
  for (const ExtractedNoun& n : nouns) lemmas.push_back(n.lemma);

  std::vector<std::vector<DisambiguationOutcome>> outcomes_by_size;
  for (std::uint32_t size : sizes) {
    WindowConfig cfg;
    cfg.window_size = size;
    cfg.params = params;
    outcomes_by_size.push_back(disambiguate_document(t, lemmas, cfg));
  }

  std::vector<SweepRow> rows;
  for (Population population : {Population::PolysemousOnly, Population::Overall}) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      SweepRow row;
      row.population = population;
      row.window_size = sizes[i];
      row.report = score(outcomes_by_size[i], gold, t, population, options);
      rows.push_back(row);
    }
  }
  return rows;
}

inline void write_csv_header(std::ostream& out) {
  out << "population,window_size,total,answered,correct,coverage,precision,recall\n";
}

namespace detail {

inline std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace detail

/// One CSV row; `correct` may be fractional for the analytic baseline and is
/// then printed with the same 4-decimal fixed format as the ratios.
inline void write_csv_row(std::ostream& out, std::string_view label, std::uint32_t window_size,
                          std::size_t total, std::size_t answered, double correct,
                          double coverage, double precision, double recall) {
  out << label << ',' << window_size << ',' << total << ',' << answered << ',';
  if (correct == std::floor(correct))
    out << static_cast<std::uint64_t>(correct);
  else
    out << detail::fixed4(correct);
  out << ',' << detail::fixed4(coverage) << ',' << detail::fixed4(precision) << ','
      << detail::fixed4(recall) << '\n';
}

inline void write_csv_row(std::ostream& out, std::string_view label, std::uint32_t window_size,
                          const ScoreReport& r) {
  write_csv_row(out, label, window_size, r.total, r.answered, static_cast<double>(r.correct),
                r.coverage, r.precision, r.recall);
}

}  // namespace cdwsd
