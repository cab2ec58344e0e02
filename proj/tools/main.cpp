// cdwsd: batch front end for the conceptual-density disambiguation engine.
//
// Subcommands: check, disambiguate, evaluate, sweep. Data goes to stdout (or
// --output); diagnostics go to stderr. Exit codes: 0 success, 1 usage,
// 2 input/parse error, 3 internal invariant violation.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdwsd/corpus.hpp"
#include "cdwsd/density.hpp"
#include "cdwsd/eval.hpp"
#include "cdwsd/taxonomy.hpp"
#include "cdwsd/wsd.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct CommonOptions {
  std::string taxonomy_path;
  std::string input_path;
  std::string output_path;  // empty = stdout
  std::uint32_t window_size = 15;
  double alpha = 0.20;
  double beta = 0.0;
};

cdwsd::Taxonomy load_taxonomy_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cdwsd::ParseError("cannot open taxonomy file '" + path + "'");
  return cdwsd::load_taxonomy(in);
}

cdwsd::Document load_gold_file(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cdwsd::ParseError("cannot open gold file '" + path + "'");
  cdwsd::SemcorParseOptions options;
  options.strict = strict;
  cdwsd::Document doc = cdwsd::parse_semcor(in, options);
  doc.source_id = path;
  return doc;
}

class OutputStream {
 public:
  explicit OutputStream(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw cdwsd::ParseError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string outcome_keys(const cdwsd::DisambiguationOutcome& o, const cdwsd::Taxonomy& t) {
  std::string out;
  for (std::size_t i = 0; i < o.remaining.size(); ++i) {
    if (i) out += ',';
    const auto key = t.sense_key(o.lemma, o.remaining[i]);
    out += key ? *key : t.id(o.remaining[i]);
  }
  return out;
}

int cmd_check(const std::string& path) {
  const cdwsd::Taxonomy t = load_taxonomy_file(path);
  std::uint32_t max_height = 0;
  std::map<std::uint32_t, std::size_t> histogram;
  for (cdwsd::SynsetIndex i = 0; i < t.size(); ++i) {
    const std::uint32_t h = t.height(i);
    max_height = std::max(max_height, h);
    ++histogram[h];
  }
  std::cout << t.size() << " synsets, " << t.word_count() << " words, " << t.sense_count()
            << " senses, " << t.roots().size() << " roots, max height " << max_height << "\n";
  std::cout << "height histogram:\n";
  for (const auto& [h, count] : histogram) std::cout << "  " << h << ": " << count << "\n";
  for (const std::string& w : t.warnings()) std::cout << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_disambiguate(const CommonOptions& opt, const std::string& format, bool strict_gold) {
  const cdwsd::Taxonomy t = load_taxonomy_file(opt.taxonomy_path);

  // Token positions refer to the original input sequence; filtered tokens
  // are reported on stderr, not in the data stream.
  std::vector<std::size_t> positions;
  std::vector<std::string> lemmas;
  if (format == "plain") {
    std::ifstream in(opt.input_path, std::ios::binary);
    if (!in) throw cdwsd::ParseError("cannot open input file '" + opt.input_path + "'");
    const auto words = cdwsd::parse_plain(in);
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (t.known_lemma(words[i])) {
        positions.push_back(i);
        lemmas.push_back(words[i]);
      } else {
        ++skipped;
      }
    }
    std::cerr << words.size() << " tokens, " << lemmas.size() << " in taxonomy, " << skipped
              << " skipped\n";
  } else {
    const cdwsd::Document doc = load_gold_file(opt.input_path, strict_gold);
    cdwsd::NounFilterReport report;
    for (const cdwsd::ExtractedNoun& n : cdwsd::extract_nouns(doc, t, &report)) {
      positions.push_back(n.position);
      lemmas.push_back(n.lemma);
    }
    std::cerr << report.total_tokens << " tokens, " << report.noun_tokens << " nouns, "
              << report.unknown_nouns << " not in taxonomy, " << report.kept << " kept ("
              << report.monosemous << " monosemous)\n";
  }

  cdwsd::WindowConfig cfg;
  cfg.window_size = opt.window_size;
  cfg.params = {opt.alpha, opt.beta};
  const auto outcomes = cdwsd::disambiguate_document(t, lemmas, cfg);

  OutputStream out(opt.output_path);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    out.get() << positions[i] << '\t' << outcomes[i].lemma << '\t'
              << cdwsd::to_string(outcomes[i].status) << '\t' << outcome_keys(outcomes[i], t)
              << '\n';
  }
  return kExitOk;
}

bool population_enabled(const std::string& selector, cdwsd::Population p) {
  if (selector == "both") return true;
  if (selector == "polysemous") return p == cdwsd::Population::PolysemousOnly;
  return p == cdwsd::Population::Overall;
}

int cmd_evaluate(const CommonOptions& opt, const std::vector<std::string>& baselines,
                 std::uint32_t runs, std::uint64_t seed, const std::string& train_path,
                 const std::string& population, bool strict_gold) {
  const cdwsd::Taxonomy t = load_taxonomy_file(opt.taxonomy_path);
  const cdwsd::Document gold = load_gold_file(opt.input_path, strict_gold);

  bool want_analytic = false, want_mc = false, want_mfs = false;
  for (const std::string& b : baselines) {
    if (b == "all") want_analytic = want_mc = want_mfs = true;
    else if (b == "random-analytic") want_analytic = true;
    else if (b == "random-mc") want_mc = true;
    else if (b == "mfs") want_mfs = true;
  }
  if (want_mfs && train_path.empty()) {
    std::cerr << "the mfs baseline needs --train\n";
    return kExitUsage;
  }

  const auto nouns = cdwsd::extract_nouns(gold, t);
  std::vector<std::string> lemmas;
  for (const auto& n : nouns) lemmas.push_back(n.lemma);

  cdwsd::WindowConfig cfg;
  cfg.window_size = opt.window_size;
  cfg.params = {opt.alpha, opt.beta};
  const auto outcomes = cdwsd::disambiguate_document(t, lemmas, cfg);

  OutputStream out(opt.output_path);
  cdwsd::write_csv_header(out.get());

  const cdwsd::Population populations[] = {cdwsd::Population::PolysemousOnly,
                                           cdwsd::Population::Overall};
  cdwsd::ScoreDiagnostics diag;
  for (cdwsd::Population p : populations) {
    if (!population_enabled(population, p)) continue;
    const auto report = cdwsd::score(outcomes, gold, t, p, {}, &diag);
    cdwsd::write_csv_row(out.get(), cdwsd::to_string(p), opt.window_size, report);
  }
  if (diag.unmatched_gold > 0)
    std::cerr << diag.unmatched_gold << " gold tags had no matching taxonomy sense key\n";

  // Baseline rows reuse the schema; the population column carries
  // "<population>:<baseline>" so rows stay self-describing.
  if (want_analytic || want_mc) {
    // Restrict to gold-resolvable nouns so the baselines score the same
    // items as the engine totals.
    std::vector<std::string> scorable;
    std::size_t mono = 0;
    for (const auto& a : cdwsd::detail::align_gold(gold, t)) {
      if (!a.gold) continue;
      scorable.push_back(a.lemma);
      if (a.sense_count < 2) ++mono;
    }
    const std::size_t poly = scorable.size() - mono;
    if (want_analytic) {
      const double p_poly = cdwsd::random_baseline_analytic(scorable, t);
      if (population_enabled(population, cdwsd::Population::PolysemousOnly))
        cdwsd::write_csv_row(out.get(), "polysemous:random-analytic", opt.window_size, poly,
                             poly, p_poly * static_cast<double>(poly), poly ? 1.0 : 0.0, p_poly,
                             p_poly);
      if (population_enabled(population, cdwsd::Population::Overall)) {
        const double expected = p_poly * static_cast<double>(poly) + static_cast<double>(mono);
        const std::size_t total = scorable.size();
        const double p_all = total ? expected / static_cast<double>(total) : 0.0;
        cdwsd::write_csv_row(out.get(), "overall:random-analytic", opt.window_size, total, total,
                             expected, total ? 1.0 : 0.0, p_all, p_all);
      }
    }
    if (want_mc) {
      for (cdwsd::Population p : populations) {
        if (!population_enabled(population, p)) continue;
        const auto mc = cdwsd::random_baseline_monte_carlo(gold, t, runs, seed, p);
        const std::size_t total = p == cdwsd::Population::PolysemousOnly ? poly : scorable.size();
        cdwsd::write_csv_row(out.get(),
                             std::string(cdwsd::to_string(p)) + ":random-mc", opt.window_size,
                             total, total, mc.mean_precision * static_cast<double>(total),
                             total ? 1.0 : 0.0, mc.mean_precision, mc.mean_precision);
        std::cerr << "random-mc " << cdwsd::to_string(p) << ": mean " << mc.mean_precision
                  << " stddev " << mc.stddev << " over " << mc.runs << " runs\n";
      }
    }
  }
  if (want_mfs) {
    const cdwsd::Document train = load_gold_file(train_path, strict_gold);
    const auto table = cdwsd::build_frequency_table(train, t);
    const auto mfs_outcomes = cdwsd::most_frequent_baseline(gold, t, table);
    for (cdwsd::Population p : populations) {
      if (!population_enabled(population, p)) continue;
      const auto report = cdwsd::score(mfs_outcomes, gold, t, p);
      cdwsd::write_csv_row(out.get(), std::string(cdwsd::to_string(p)) + ":mfs",
                           opt.window_size, report);
    }
  }
  return kExitOk;
}

int cmd_sweep(const CommonOptions& opt, std::vector<std::uint32_t> sizes,
              const std::string& population, bool strict_gold) {
  const cdwsd::Taxonomy t = load_taxonomy_file(opt.taxonomy_path);
  const cdwsd::Document gold = load_gold_file(opt.input_path, strict_gold);

  const auto rows = cdwsd::window_sweep(gold, t, std::move(sizes), {opt.alpha, opt.beta});
  OutputStream out(opt.output_path);
  cdwsd::write_csv_header(out.get());
  for (const cdwsd::SweepRow& row : rows) {
    if (!population_enabled(population, row.population)) continue;
    cdwsd::write_csv_row(out.get(), cdwsd::to_string(row.population), row.window_size,
                         row.report);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word sense disambiguation by conceptual density over a noun taxonomy"};
  app.require_subcommand(1);

  std::string check_path;
  CLI::App* check = app.add_subcommand("check", "Validate a taxonomy file and print stats");
  check->add_option("taxonomy", check_path, "taxonomy file")->required();

  CommonOptions dis;
  std::string dis_format = "plain";
  bool dis_strict_gold = true;
  CLI::App* disambiguate =
      app.add_subcommand("disambiguate", "Tag a document's nouns with senses");
  disambiguate->add_option("--taxonomy,-t", dis.taxonomy_path, "taxonomy file")->required();
  disambiguate->add_option("--input,-i", dis.input_path, "input document")->required();
  disambiguate->add_option("--format", dis_format, "input format")
      ->check(CLI::IsMember({"plain", "semcor"}))
      ->capture_default_str();
  disambiguate->add_option("--window", dis.window_size, "window size in nouns")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  disambiguate->add_option("--alpha", dis.alpha, "density exponent parameter")
      ->capture_default_str();
  disambiguate->add_option("--beta", dis.beta, "density nhyp offset")->capture_default_str();
  disambiguate->add_flag("--strict-gold,!--no-strict-gold", dis_strict_gold,
                         "reject unknown tags in semcor inputs (default on)");
  disambiguate->add_option("--output,-o", dis.output_path, "output file (default stdout)");

  CommonOptions eval;
  std::vector<std::string> baselines;
  std::uint32_t runs = 10;
  std::uint64_t seed = 1;
  std::string train_path;
  std::string eval_population = "both";
  bool eval_strict_gold = true;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score engine output against gold senses");
  evaluate->add_option("--taxonomy,-t", eval.taxonomy_path, "taxonomy file")->required();
  evaluate->add_option("--input,-i", eval.input_path, "gold document (semcor format)")
      ->required();
  evaluate->add_option("--window", eval.window_size, "window size in nouns")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  evaluate->add_option("--alpha", eval.alpha, "density exponent parameter")
      ->capture_default_str();
  evaluate->add_option("--beta", eval.beta, "density nhyp offset")->capture_default_str();
  evaluate->add_option("--baselines", baselines, "baselines to add")
      ->delimiter(',')
      ->check(CLI::IsMember({"random-analytic", "random-mc", "mfs", "all"}));
  evaluate->add_option("--runs", runs, "monte carlo runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  evaluate->add_option("--seed", seed, "monte carlo seed")->capture_default_str();
  evaluate->add_option("--train", train_path, "training corpus for the mfs baseline");
  evaluate->add_option("--population", eval_population, "populations to report")
      ->check(CLI::IsMember({"both", "polysemous", "overall"}))
      ->capture_default_str();
  evaluate->add_flag("--strict-gold,!--no-strict-gold", eval_strict_gold,
                     "reject unknown tags in gold files (default on)");
  evaluate->add_option("--output,-o", eval.output_path, "output file (default stdout)");

  CommonOptions sweep;
  std::vector<std::uint32_t> sizes = {5, 10, 15, 20, 25, 30};
  std::string sweep_population = "both";
  bool sweep_strict_gold = true;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Window-size sweep, CSV per population");
  sweep_cmd->add_option("--taxonomy,-t", sweep.taxonomy_path, "taxonomy file")->required();
  sweep_cmd->add_option("--input,-i", sweep.input_path, "gold document (semcor format)")
      ->required();
  sweep_cmd->add_option("--sizes", sizes, "window sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--alpha", sweep.alpha, "density exponent parameter")
      ->capture_default_str();
  sweep_cmd->add_option("--beta", sweep.beta, "density nhyp offset")->capture_default_str();
  sweep_cmd->add_option("--population", sweep_population, "populations to report")
      ->check(CLI::IsMember({"both", "polysemous", "overall"}))
      ->capture_default_str();
  sweep_cmd->add_flag("--strict-gold,!--no-strict-gold", sweep_strict_gold,
                      "reject unknown tags in gold files (default on)");
  sweep_cmd->add_option("--output,-o", sweep.output_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_path);
    if (disambiguate->parsed()) return cmd_disambiguate(dis, dis_format, dis_strict_gold);
    if (evaluate->parsed())
      return cmd_evaluate(eval, baselines, runs, seed, train_path, eval_population,
                          eval_strict_gold);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, sizes, sweep_population, sweep_strict_gold);
  } catch (const cdwsd::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
