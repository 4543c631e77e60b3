#include "budding_cli/commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "budding/aggregate.hpp"
#include "budding/corpus.hpp"
#include "budding/diagnostics.hpp"
#include "budding/error.hpp"
#include "budding/normalize.hpp"
#include "budding/report.hpp"
#include "budding/score.hpp"
#include "budding/spinoff.hpp"
#include "budding/synth.hpp"

namespace budding::cli {
namespace {

namespace fs = std::filesystem;

struct InputOptions {
  std::string corpus_dir;
  std::string taxonomy;
  std::string researchers;
  std::string publications;
  std::string reference_dir;
  std::string window;
  std::string salaries;
  std::string out_dir;
  std::vector<std::string> formats{"csv", "markdown"};
};

struct SpinoffOptions {
  std::string template_university;
  std::vector<std::string> parents;
  std::string name = "Spin-off";
  std::vector<std::string> udas;
  std::vector<std::string> rescales;
  std::string basis = "headcount";
  std::string parents_mode = "rescored";
  std::string plan_path;
  std::string scores_path;
  std::vector<std::string> compare;
  std::string mean_mode = "unweighted";
};

struct SynthOptions {
  std::string config_path;
  std::string scenario = "default";
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "csv";
};

struct ReportOptions {
  std::string scores_path;
  double top_fraction = 0.23;
  std::string university;
  std::vector<double> thresholds{80.0, 90.0};
};

void add_input_options(CLI::App& cmd, InputOptions& o) {
  cmd.add_option("--corpus", o.corpus_dir,
                 "Directory holding taxonomy, researchers and publications files");
  cmd.add_option("--taxonomy", o.taxonomy, "Taxonomy file (overrides --corpus)");
  cmd.add_option("--researchers", o.researchers, "Researchers file (overrides --corpus)");
  cmd.add_option("--publications", o.publications, "Publications file (overrides --corpus)");
  cmd.add_option("--reference", o.reference_dir,
                 "Corpus directory used for the citation medians (default: the input corpus)");
  cmd.add_option("--window", o.window, "Observation window FIRST:LAST (default: publication years)");
}

void add_output_options(CLI::App& cmd, InputOptions& o) {
  cmd.add_option("--salaries", o.salaries,
                 "Yearly cost table: rank_level,confirmed,yearly_cost_keur");
  cmd.add_option("--out", o.out_dir, "Output directory")->required();
  cmd.add_option("--format", o.formats, "Report formats: csv, markdown, json")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "markdown", "json"}));
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(fmt::format("invalid {} '{}'", what, text));
  }
  return value;
}

std::optional<YearWindow> parse_window(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto sep = text.find(':');
  if (sep == std::string::npos) throw ValidationError(fmt::format("window '{}' is not FIRST:LAST", text));
  YearWindow w{parse_int(std::string_view(text).substr(0, sep), "window year"),
               parse_int(std::string_view(text).substr(sep + 1), "window year")};
  if (w.first_year > w.last_year) throw ValidationError(fmt::format("empty window '{}'", text));
  return w;
}

CorpusPaths corpus_paths(const InputOptions& o) {
  CorpusPaths paths;
  if (!o.corpus_dir.empty()) paths = CorpusPaths::in_directory(o.corpus_dir);
  if (!o.taxonomy.empty()) paths.taxonomy = o.taxonomy;
  if (!o.researchers.empty()) paths.researchers = o.researchers;
  if (!o.publications.empty()) paths.publications = o.publications;
  std::vector<std::string> missing;
  if (paths.taxonomy.empty()) missing.emplace_back("taxonomy");
  if (paths.researchers.empty()) missing.emplace_back("researchers");
  if (paths.publications.empty()) missing.emplace_back("publications");
  if (!missing.empty()) {
    std::vector<std::string> issues;
    for (const auto& m : missing) {
      issues.push_back(fmt::format("no {} file given; use --corpus or --{}", m, m));
    }
    throw ValidationError(std::move(issues));
  }
  return paths;
}

struct Loaded {
  Corpus corpus;
  MedianTable medians;
};

Loaded load_inputs(const InputOptions& o, std::ostream& err) {
  const auto window = parse_window(o.window);
  Corpus corpus = load_corpus(corpus_paths(o), window);
  if (corpus.dropped_outside_window() > 0) {
    err << fmt::format("note: {} publications outside {}:{} ignored\n",
                       corpus.dropped_outside_window(), corpus.window().first_year,
                       corpus.window().last_year);
  }
  MedianTable medians;
  if (o.reference_dir.empty()) {
    medians = build_median_table(corpus);
  } else {
    medians = build_median_table(load_corpus(CorpusPaths::in_directory(o.reference_dir),
                                             corpus.window()));
  }
  return {std::move(corpus), std::move(medians)};
}

CostTable load_costs(const InputOptions& o) {
  if (o.salaries.empty()) return CostTable{};
  return cost_equivalents(read_salaries_csv(o.salaries));
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir, ec.message()));
  return dir;
}

template <typename F>
void write_file(const fs::path& path, F&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  body(out);
  out.flush();
  if (!out) throw IoError(fmt::format("error writing '{}'", path.string()));
}

bool wants(const InputOptions& o, std::string_view format) {
  return std::find(o.formats.begin(), o.formats.end(), format) != o.formats.end();
}

void write_tables(const InputOptions& o, const fs::path& dir, std::string_view stem,
                  std::span<const Table> tables) {
  if (wants(o, "csv")) {
    const fs::path sub = prepare_dir((dir / "tables").string());
    for (const auto& t : tables) {
      write_file(sub / (t.name + ".csv"), [&](std::ostream& out) { write_csv(t, out); });
    }
  }
  if (wants(o, "markdown")) {
    write_file(dir / (std::string(stem) + ".md"), [&](std::ostream& out) {
      for (const auto& t : tables) write_markdown(t, out);
    });
  }
  if (wants(o, "json")) {
    write_file(dir / (std::string(stem) + ".json"),
               [&](std::ostream& out) { out << tables_to_json(tables); });
  }
}

void write_rankings(const fs::path& dir, const NationalRankings& rankings) {
  write_file(dir / "sds_ranking.csv", [&](std::ostream& out) { write_sds_ranking_csv(rankings, out); });
  write_file(dir / "uda_ranking.csv", [&](std::ostream& out) { write_uda_ranking_csv(rankings, out); });
  write_file(dir / "university_ranking.csv",
             [&](std::ostream& out) { write_university_ranking_csv(rankings, out); });
}

MeanMode parse_mean_mode(const std::string& text) {
  return text == "cost-weighted" ? MeanMode::CostWeighted : MeanMode::Unweighted;
}

RescaleRule parse_rescale(const std::string& text, RatioBasis basis) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto sep = text.find(':', start);
    parts.push_back(text.substr(start, sep - start));
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  if (parts.size() < 2 || parts.size() > 3 || parts[0].empty() || parts[1].empty()) {
    throw ValidationError(fmt::format("rescale rule '{}' is not UDA:SOURCE[:RATIO]", text));
  }
  RescaleRule rule{parts[0], parts[1], std::nullopt, basis};
  if (parts.size() == 3) {
    double ratio = 0.0;
    const std::string& r = parts[2];
    auto [ptr, ec] = std::from_chars(r.data(), r.data() + r.size(), ratio);
    if (ec != std::errc{} || ptr != r.data() + r.size() || !(ratio > 0.0)) {
      throw ValidationError(fmt::format("rescale rule '{}': invalid ratio '{}'", text, r));
    }
    rule.ratio = ratio;
  }
  return rule;
}

void require_universities(const Corpus& corpus, std::span<const std::string> names,
                          std::string_view role) {
  const auto known = corpus.universities();
  std::vector<std::string> issues;
  for (const auto& n : names) {
    if (!std::binary_search(known.begin(), known.end(), n)) {
      issues.push_back(fmt::format("{} university '{}' not found in corpus", role, n));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

// ---- commands --------------------------------------------------------------

int cmd_score(const InputOptions& o, std::ostream& out, std::ostream& err) {
  auto [corpus, medians] = load_inputs(o, err);
  const CostTable costs = load_costs(o);
  const ScoreTable scores = score_corpus(corpus, medians);
  const NationalRankings rankings = compute_rankings(scores, corpus.taxonomy(), costs);
  for (const auto& d : rankings.diagnostics) err << "note: " << d << '\n';

  const fs::path dir = prepare_dir(o.out_dir);
  write_file(dir / "medians.csv", [&](std::ostream& s) { write_medians_csv(medians, s); });
  write_file(dir / "scores.csv", [&](std::ostream& s) { write_scores_csv(scores, s); });
  write_rankings(dir, rankings);
  out << fmt::format("scored {} researchers, {} publications, {} universities\n", scores.size(),
                     corpus.publications().size(), rankings.overall.size());
  return kExitOk;
}

int cmd_spinoff(const InputOptions& o, const SpinoffOptions& s, std::ostream& out,
                std::ostream& err) {
  auto [corpus, medians] = load_inputs(o, err);
  const CostTable costs = load_costs(o);
  require_universities(corpus, s.parents, "parent");
  require_universities(corpus, s.compare, "comparison");
  const auto known = corpus.universities();
  if (std::binary_search(known.begin(), known.end(), s.name)) {
    throw ValidationError(fmt::format("spin-off name '{}' is already a university", s.name));
  }

  const ScoreTable scores =
      s.scores_path.empty() ? score_corpus(corpus, medians) : read_scores_csv(s.scores_path, &corpus);

  SizingPlan plan;
  if (!s.plan_path.empty()) {
    plan = read_plan_csv(s.plan_path, corpus.taxonomy());
  } else {
    if (s.template_university.empty()) {
      throw ValidationError("either --template or --plan is required");
    }
    const RatioBasis basis =
        s.basis == "cost" ? RatioBasis::CostEquivalent : RatioBasis::Headcount;
    PlanOptions options;
    options.udas = s.udas;
    for (const auto& r : s.rescales) options.rescales.push_back(parse_rescale(r, basis));
    plan = build_sizing_plan(corpus, s.template_university, options, costs);
  }
  if (plan.total() == 0) throw ValidationError("the sizing plan is empty");

  const SelectionResult selection = select_spinoff_faculty(plan, s.parents, scores, s.name);
  for (const auto& cell : selection.by_sds) {
    if (cell.shortfall() > 0) {
      err << fmt::format("note: {} short by {} (target {}, {} candidates)\n", cell.sds,
                         cell.shortfall(), cell.target, cell.candidates);
    }
  }

  const ScoreTable after = with_spinoff(scores, selection);
  const MeanMode mode = parse_mean_mode(s.mean_mode);
  std::vector<SdsProductivity> prods = all_sds_productivities(after, costs);
  if (s.parents_mode == "frozen") {
    prods = freeze_universities(prods, all_sds_productivities(scores, costs), s.parents);
  }
  const NationalRankings rankings = compute_rankings(std::move(prods), corpus.taxonomy(), mode);
  for (const auto& d : rankings.diagnostics) err << "note: " << d << '\n';

  std::set<std::string> plan_udas;
  for (const auto& [sds, n] : plan.targets) plan_udas.insert(corpus.taxonomy().uda_of(sds));
  const std::vector<std::string> udas(plan_udas.begin(), plan_udas.end());

  const RankMixReport mix = rank_mix_report(selection, corpus, national_rank_counts(corpus, udas));
  const ContributionReport contrib = contribution_report(selection, corpus, s.parents);
  const PerformanceReport perf = performance_report(selection, corpus, scores, s.parents, s.compare);

  const fs::path dir = prepare_dir(o.out_dir);
  write_file(dir / "plan.csv", [&](std::ostream& f) { write_plan_csv(plan, f); });
  write_file(dir / "selection.csv", [&](std::ostream& f) { write_selection_csv(selection, f); });
  write_file(dir / "distribution.csv",
             [&](std::ostream& f) { write_csv(distribution_table(rankings, s.name), f); });
  write_rankings(dir, rankings);

  const std::vector<Table> tables = {
      plan_table(plan, corpus.taxonomy()),
      rank_mix_table(mix, corpus.taxonomy()),
      parent_count_table(contrib, corpus.taxonomy(), s.name),
      contribution_table(contrib, corpus.taxonomy()),
      performance_table(perf),
      percentile_class_table(perf),
      cost_table(costs),
      sds_ranking_table(rankings, corpus.taxonomy(), s.name),
      uda_ranking_table(rankings, corpus.taxonomy(), s.name),
  };
  write_tables(o, dir, "report", tables);

  const auto it = std::find_if(rankings.overall.begin(), rankings.overall.end(),
                               [&](const RankingRow& r) { return r.university == s.name; });
  out << fmt::format("{}: {} of {} positions filled", s.name, selection.total_selected(),
                     selection.total_target());
  if (it != rankings.overall.end()) {
    out << fmt::format(", overall rank {}", rank_display(it->rank, it->n_active));
  }
  out << '\n';
  return kExitOk;
}

int cmd_synth(const SynthOptions& s, std::ostream& out) {
  SynthConfig config = s.config_path.empty() ? SynthConfig{} : load_synth_config(s.config_path);
  if (s.seed) config.seed = *s.seed;
  validate(config);
  const Corpus corpus =
      s.scenario == "uniform" ? uniform_dispersion_scenario(config) : generate(config);
  const fs::path dir = prepare_dir(s.out_dir);
  write_corpus(corpus, dir, s.format == "jsonl" ? FileFormat::JsonLines : FileFormat::Csv);
  write_file(dir / "synth_config.json", [&](std::ostream& f) { f << synth_config_to_json(config); });
  out << fmt::format("wrote {} researchers, {} publications, {} universities to {}\n",
                     corpus.researchers().size(), corpus.publications().size(),
                     corpus.universities().size(), dir.string());
  return kExitOk;
}

int cmd_report(const InputOptions& o, const ReportOptions& r, std::ostream& out,
               std::ostream& err) {
  auto [corpus, medians] = load_inputs(o, err);
  const ScoreTable scores =
      r.scores_path.empty() ? score_corpus(corpus, medians) : read_scores_csv(r.scores_path, &corpus);
  const std::optional<std::string> filter =
      r.university.empty() ? std::nullopt : std::optional<std::string>(r.university);
  if (filter) require_universities(corpus, std::span(&r.university, 1), "selected");

  const UnproductiveShare idle = unproductive_share(corpus, filter);
  std::vector<std::string> scope;
  if (filter) scope.push_back(*filter);
  const ThresholdShares shares = threshold_shares(scores, scope, r.thresholds);

  Table summary{"summary", "Research output concentration", {"Measure", "Value"}, {}};
  summary.rows.push_back({"Researchers", std::to_string(idle.population)});
  summary.rows.push_back({"No publications", percent1(idle.no_publication)});
  summary.rows.push_back({"Zero impact", percent1(idle.zero_impact)});
  if (!filter) {
    summary.rows.push_back({fmt::format("Output share of top {}", percent1(r.top_fraction)),
                            percent1(top_share_output(scores, r.top_fraction))});
  }
  summary.rows.push_back({"Percentile = 100", percent1(shares.top_class)});
  for (std::size_t i = 0; i < r.thresholds.size(); ++i) {
    summary.rows.push_back(
        {fmt::format("Percentile >= {}", r.thresholds[i]), percent1(shares.at_least[i])});
  }

  const fs::path dir = prepare_dir(o.out_dir);
  write_tables(o, dir, "summary", std::span(&summary, 1));
  for (const auto& row : summary.rows) out << row[0] << ": " << row[1] << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Research productivity scoring and spin-off university simulation", "budding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "budding 0.3.0");

  InputOptions score_in;
  auto* score = app.add_subcommand("score", "Score researchers and rank universities");
  add_input_options(*score, score_in);
  add_output_options(*score, score_in);

  InputOptions spin_in;
  SpinoffOptions spin;
  auto* spinoff = app.add_subcommand("spinoff", "Assemble a spin-off faculty and report on it");
  add_input_options(*spinoff, spin_in);
  add_output_options(*spinoff, spin_in);
  spinoff->add_option("--template", spin.template_university,
                      "University whose SDS headcounts size the spin-off");
  spinoff->add_option("--parents", spin.parents, "Universities that release faculty")
      ->delimiter(',')
      ->required();
  spinoff->add_option("--name", spin.name, "Name of the spin-off university");
  spinoff->add_option("--udas", spin.udas, "UDAs covered by the spin-off")->delimiter(',');
  spinoff->add_option("--rescale", spin.rescales,
                      "Replace a UDA's sizing with another university's, UDA:SOURCE[:RATIO]");
  spinoff->add_option("--basis", spin.basis, "Size basis of the default rescale ratio")
      ->check(CLI::IsMember({"headcount", "cost"}));
  spinoff->add_option("--parents-mode", spin.parents_mode,
                      "Rank parents after the departures, or at their original values")
      ->check(CLI::IsMember({"rescored", "frozen"}));
  spinoff->add_option("--plan", spin.plan_path, "Use this plan.csv instead of a template");
  spinoff->add_option("--scores", spin.scores_path, "Use a scores.csv written by `score`");
  spinoff->add_option("--compare", spin.compare, "Extra universities for the performance tables")
      ->delimiter(',');
  spinoff->add_option("--mean-mode", spin.mean_mode, "National SDS mean")
      ->check(CLI::IsMember({"unweighted", "cost-weighted"}));

  SynthOptions syn;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic national corpus");
  synth->add_option("--config", syn.config_path, "JSON synth configuration");
  synth->add_option("--scenario", syn.scenario, "default or uniform (no university effect)")
      ->check(CLI::IsMember({"default", "uniform"}));
  synth->add_option("--seed", syn.seed, "Override the configured seed");
  synth->add_option("--out", syn.out_dir, "Output directory")->required();
  synth->add_option("--format", syn.format, "Corpus file format")
      ->check(CLI::IsMember({"csv", "jsonl"}));

  InputOptions rep_in;
  ReportOptions rep;
  auto* report = app.add_subcommand("report", "Summarize how research output is concentrated");
  add_input_options(*report, rep_in);
  add_output_options(*report, rep_in);
  report->add_option("--scores", rep.scores_path, "Use a scores.csv written by `score`");
  report->add_option("--top-fraction", rep.top_fraction, "Top share of researchers to measure")
      ->check(CLI::Range(0.0, 1.0));
  report->add_option("--university", rep.university, "Restrict shares to one university");
  report->add_option("--thresholds", rep.thresholds, "Percentile cutoffs")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "budding 0.3.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (score->parsed()) return cmd_score(score_in, out, err);
    if (spinoff->parsed()) return cmd_spinoff(spin_in, spin, out, err);
    if (synth->parsed()) return cmd_synth(syn, out);
    if (report->parsed()) return cmd_report(rep_in, rep, out, err);
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) err << "error: " << issue << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace budding::cli
