#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sgs/cohort.hpp"
#include "sgs/design_math.hpp"
#include "sgs/error.hpp"
#include "sgs/harness.hpp"
#include "sgs/metrics.hpp"
#include "sgs/random.hpp"
#include "sgs/sampler.hpp"
#include "sgs/synthetic_reports.hpp"
#include "sgs/textfeat.hpp"

namespace sgs::cli {
namespace {

using nlohmann::json;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SGS_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw InvalidArgument(fmt::format("SGS_SEED='{}' is not an integer", env));
    return v;
  }
  return 1;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(fmt::format("cannot open '{}'", path));
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path));
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(fmt::format("{}: {}", path, e.what()));
  }
}

// Flat JSON object as a two-line CSV (header + values).
void write_flat_csv(std::ostream& out, const json& j) {
  std::string header;
  std::string values;
  for (const auto& [key, value] : j.items()) {
    if (value.is_structured()) continue;
    header += (header.empty() ? "" : ",") + key;
    values += (values.empty() ? "" : ",") + (value.is_string() ? value.get<std::string>() : value.dump());
  }
  out << header << '\n' << values << '\n';
}

void emit(std::ostream& out, const json& j, bool csv) {
  if (csv) {
    write_flat_csv(out, j);
  } else {
    out << j.dump(2) << '\n';
  }
}

struct Range {
  double from;
  double to;
  double step;
};

Range parse_range(const std::string& text) {
  Range r{};
  char c1 = 0;
  char c2 = 0;
  std::istringstream ss(text);
  if (!(ss >> r.from >> c1 >> r.to >> c2 >> r.step) || c1 != ':' || c2 != ':' || !ss.eof()) {
    throw InvalidArgument(fmt::format("bad range '{}', expected START:STOP:STEP", text));
  }
  return r;
}

// --- oratio -------------------------------------------------------------

struct OratioArgs {
  double sens = 0.0;
  double spec = 0.0;
  double prev = 0.1;
  double ratio = 0.5;
  bool approx = false;
  std::string surface;
};

void run_oratio(const OratioArgs& a, bool csv, std::ostream& out) {
  const design::SurrogateSpec z{a.sens, a.spec};
  design::validate(z);
  design::require_usable_specificity(z);
  if (!a.surface.empty()) {
    const auto comma = a.surface.find(',');
    if (comma == std::string::npos) {
      throw InvalidArgument("--surface expects SENS_START:STOP:STEP,SPEC_START:STOP:STEP");
    }
    const Range s = parse_range(a.surface.substr(0, comma));
    const Range p = parse_range(a.surface.substr(comma + 1));
    const auto grid = design::surrogate_grid(s.from, s.to, s.step, p.from, p.to, p.step);
    const auto cells = design::o_ratio_surface(grid, a.ratio, {a.prev, 1});
    design::write_surface_csv(out, cells);
    return;
  }
  const design::PopulationSpec pop{a.prev, 1};
  const design::LikelihoodRatios lr = design::likelihood_ratios(z);
  json j;
  j["o_ratio"] = a.approx ? design::o_ratio_rare_approx(z, a.ratio)
                          : design::o_ratio_exact(pop, z, a.ratio);
  j["approximation"] = a.approx;
  j["lr_plus"] = lr.perfect_specificity ? json("inf") : json(lr.positive);
  j["lr_minus"] = lr.negative;
  j["p_z"] = design::p_z(pop, z);
  const design::StratumCaseRates rates = design::stratum_case_rates(pop, z);
  j["case_rate_z1"] = rates.surrogate_positive;
  j["case_rate_z0"] = rates.surrogate_negative;
  j["sensitivity"] = a.sens;
  j["specificity"] = a.spec;
  j["prevalence"] = a.prev;
  j["ratio"] = a.ratio;
  emit(out, j, csv);
}

// --- plan ---------------------------------------------------------------

struct PlanArgs {
  std::int64_t budget = 0;
  double ratio = 0.5;
  double sens = 0.0;
  double spec = 0.0;
  double prev = 0.1;
  std::int64_t cohort_size = 0;
  std::string design = "sgs";
};

void run_plan(const PlanArgs& a, bool csv, std::ostream& out) {
  const design::SurrogateSpec z{a.sens, a.spec};
  design::validate(z);
  design::require_usable_specificity(z);
  const design::PopulationSpec pop{a.prev, a.cohort_size};
  design::validate(pop);
  const design::DesignSpec d{design::parse_design_kind(a.design), a.ratio, a.budget};
  design::validate(d);
  if (a.budget > a.cohort_size) {
    throw InfeasibleDesign(fmt::format("budget {} exceeds cohort size {}", a.budget, a.cohort_size));
  }
  const double pz = design::p_z(pop, z);
  json j;
  j["design"] = design::to_string(d.kind);
  j["budget"] = a.budget;
  j["cohort_size"] = a.cohort_size;
  j["p_z"] = pz;
  const double cases = design::expected_cases(d, pop, z);
  j["expected_cases"] = cases;
  j["expected_cases_srs"] = static_cast<double>(a.budget) * a.prev;
  j["srs_equivalent_budget"] = design::srs_equivalent_budget(cases, a.prev);
  if (d.kind == design::DesignKind::SGS || d.kind == design::DesignKind::InverseSGS) {
    const design::SamplingProbabilities pi = design::sampling_probabilities(d, pz, a.cohort_size);
    j["pi_z1"] = pi.surrogate_positive;
    j["pi_z0"] = pi.surrogate_negative;
    const double share = d.kind == design::DesignKind::SGS ? a.ratio : 1.0 - a.ratio;
    const auto n1 = std::llround(static_cast<double>(a.budget) * share);
    j["n_z1"] = n1;
    j["n_z0"] = a.budget - n1;
  } else {
    const double pi = static_cast<double>(a.budget) / static_cast<double>(a.cohort_size);
    j["pi_z1"] = pi;
    j["pi_z0"] = pi;
  }
  emit(out, j, csv);
}

// --- simulate -----------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::int64_t size = 100000;
  int features = 250;
  double prevalence = 0.05;
  std::string mode = "conditional_z_given_y";
  std::string out_path;
  std::string meta_path;
  std::optional<std::uint64_t> seed;
};

void run_simulate(const SimulateArgs& a, bool csv, std::ostream& out) {
  cohort::CohortConfig c;
  if (!a.config.empty()) {
    c = cohort::cohort_config_from_json(read_json_file(a.config));
  } else {
    c.cohort_size = a.size;
    c.features = a.features;
    c.prevalence = a.prevalence;
    c.mode = cohort::parse_surrogate_mode(a.mode);
  }
  if (a.seed || a.config.empty()) c.seed = resolve_seed(a.seed);
  const cohort::GeneratedCohort g = cohort::generate_cohort(c);
  const json meta = cohort::metadata_json(g);
  if (!a.out_path.empty()) {
    std::ofstream f = open_out(a.out_path);
    cohort::write_cohort_csv(f, g.cohort);
  }
  if (!a.meta_path.empty()) {
    std::ofstream f = open_out(a.meta_path);
    f << meta.dump(2) << '\n';
  }
  if (csv) {
    if (a.out_path.empty()) {
      cohort::write_cohort_csv(out, g.cohort);
    } else {
      json flat = {{"cohort_size", c.cohort_size},
                   {"features", c.features},
                   {"realized_prevalence", g.realized_prevalence},
                   {"intercept", g.intercept}};
      write_flat_csv(out, flat);
    }
  } else {
    out << meta.dump(2) << '\n';
  }
}

// --- sample -------------------------------------------------------------

struct SampleArgs {
  std::string cohort_path;
  std::string design = "srs";
  std::int64_t n = 0;
  double ratio = 0.5;
  std::string surrogate = "z1";
  std::string out_path;
  std::optional<std::uint64_t> seed;
};

void run_sample(const SampleArgs& a, bool csv, std::ostream& out) {
  std::ifstream in = open_in(a.cohort_path);
  const cohort::Cohort c = cohort::read_cohort_csv(in);
  const std::uint64_t seed = resolve_seed(a.seed);
  const design::DesignKind kind = design::parse_design_kind(a.design);
  sampling::Sample s;
  switch (kind) {
    case design::DesignKind::SRS:
      s = sampling::draw_srs(c, a.n, seed);
      break;
    case design::DesignKind::SGS:
      s = sampling::draw_sgs(c, a.surrogate, a.n, a.ratio, seed);
      break;
    case design::DesignKind::ROS:
      s = sampling::random_oversample(sampling::draw_srs(c, a.n, seed), c.outcomes,
                                      derive_seed(seed, 1));
      break;
    case design::DesignKind::InverseSGS:
      throw InvalidArgument("inverse_sgs resamples an SGS frame; use --design sgs first");
  }
  if (!a.out_path.empty()) {
    std::ofstream f = open_out(a.out_path);
    sampling::write_sample_csv(f, s, c, a.surrogate);
  }
  if (csv) {
    sampling::write_sample_csv(out, s, c, a.surrogate);
    return;
  }
  std::size_t cases = 0;
  std::size_t positives = 0;
  double weight_sum = 0.0;
  const auto z = c.surrogate(a.surrogate);
  for (std::size_t i = 0; i < s.units.size(); ++i) {
    cases += c.outcomes[s.units[i]];
    positives += z[s.units[i]];
    weight_sum += s.weights[i];
  }
  json j = {{"design", design::to_string(s.design.kind)},
            {"size", s.size()},
            {"distinct_units", s.distinct_units()},
            {"cases", cases},
            {"surrogate_positive", positives},
            {"weight_sum", weight_sum},
            {"seed", seed}};
  out << j.dump(2) << '\n';
}

// --- featurize ----------------------------------------------------------

struct FeaturizeArgs {
  std::string corpus_path;
  std::int64_t synthetic = 0;
  std::string codes_path;
  std::int64_t threshold = 1;
  double min_frac = 0.05;
  double max_frac = 0.90;
  std::string matrix_path;
  std::string vocab_path;
  std::string corpus_out;
  std::optional<std::uint64_t> seed;
};

void write_matrix_csv(std::ostream& out, const text::Corpus& corpus, const text::DesignMatrix& d) {
  out << "id,label";
  for (const std::string& name : d.names) out << ',' << name;
  out << '\n';
  for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
    const text::Document& doc = corpus[static_cast<std::size_t>(i)];
    out << doc.id << ',' << (doc.label ? std::to_string(*doc.label) : "");
    for (Eigen::Index j = 0; j < d.x.cols(); ++j) out << fmt::format(",{}", d.x(i, j));
    out << '\n';
  }
}

void run_featurize(const FeaturizeArgs& a, bool csv, std::ostream& out) {
  text::Corpus corpus;
  if (a.synthetic > 0) {
    text::SyntheticCorpusConfig sc;
    sc.documents = a.synthetic;
    sc.seed = resolve_seed(a.seed);
    corpus = text::synthetic_radiology_corpus(sc);
  } else if (!a.corpus_path.empty()) {
    std::ifstream in = open_in(a.corpus_path);
    corpus = text::read_jsonl(in);
  } else {
    throw InvalidArgument("featurize needs --corpus or --synthetic");
  }
  if (!a.corpus_out.empty()) {
    std::ofstream f = open_out(a.corpus_out);
    text::write_jsonl(f, corpus);
  }
  std::vector<std::string> codes = text::lumbar_fracture_codes();
  if (!a.codes_path.empty()) {
    std::ifstream in = open_in(a.codes_path);
    codes = text::read_code_set(in);
  }
  text::FilterConfig filter;
  filter.min_fraction = a.min_frac;
  filter.max_fraction = a.max_frac;
  const text::Vocabulary vocab = text::build_vocabulary(corpus, filter);
  const text::SparseMatrix x = text::tfidf_matrix(corpus, vocab);
  const auto z = text::build_icd_surrogate(corpus, codes, a.threshold);
  const text::DesignMatrix d = text::assemble_design_matrix(x, vocab, z);
  if (!a.vocab_path.empty()) {
    std::ofstream f = open_out(a.vocab_path);
    f << text::to_json(vocab).dump(2) << '\n';
  }
  if (!a.matrix_path.empty()) {
    std::ofstream f = open_out(a.matrix_path);
    write_matrix_csv(f, corpus, d);
  }
  if (csv) {
    write_matrix_csv(out, corpus, d);
    return;
  }
  const auto positives = std::count(z.begin(), z.end(), std::uint8_t{1});
  json j = {{"documents", corpus.size()},
            {"terms", vocab.size()},
            {"features", d.names.size()},
            {"surrogate_column", d.names.back()},
            {"surrogate_positive_rate",
             static_cast<double>(positives) / static_cast<double>(corpus.size())},
            {"nonzeros", x.nonZeros()}};
  out << j.dump(2) << '\n';
}

// --- curve --------------------------------------------------------------

struct CurveArgs {
  std::string config;
  std::string out_dir = ".";
  int jobs = 0;
  int replicates = 0;
  std::optional<std::uint64_t> seed;
};

void run_curve(const CurveArgs& a, bool csv, std::ostream& out) {
  json raw = read_json_file(a.config);
  if (a.seed) {
    raw["master_seed"] = *a.seed;
  } else if (!raw.contains("master_seed") && std::getenv("SGS_SEED")) {
    raw["master_seed"] = resolve_seed(std::nullopt);
  }
  if (a.replicates > 0) raw["replicates"] = a.replicates;
  harness::ExperimentConfig config = harness::experiment_config_from_json(raw);
  if (a.jobs > 0) config.jobs = a.jobs;
  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  json manifest = harness::manifest_json(config);
  std::ostringstream table;
  std::string file;
  json summary;
  switch (config.kind) {
    case harness::ExperimentKind::LearningCurve: {
      const harness::CurveTable t = harness::run_learning_curve(config);
      harness::write_curves_csv(table, t);
      file = "curves.csv";
      json dropped = json::array();
      for (const auto& p : t.points) {
        if (p.dropped) dropped.push_back({{"design", p.design}, {"n", p.n}, {"failures", p.failures}});
      }
      manifest["dropped_points"] = dropped;
      manifest["failure_examples"] = t.failure_messages;
      break;
    }
    case harness::ExperimentKind::DesignComparison: {
      const harness::ComparisonTable t = harness::run_design_comparison(config);
      harness::write_comparison_csv(table, t);
      file = "comparison.csv";
      manifest["marts"] = harness::to_json(t.summary);
      break;
    }
    case harness::ExperimentKind::TheoryDiagnostics: {
      const auto t = harness::run_theory_diagnostics(config);
      harness::write_diagnostics_csv(table, t);
      file = "diagnostics.csv";
      break;
    }
  }
  {
    std::ofstream f = open_out((dir / file).string());
    f << table.str();
  }
  {
    std::ofstream f = open_out((dir / "manifest.json").string());
    f << manifest.dump(2) << '\n';
  }
  if (csv) {
    out << table.str();
  } else {
    json j = {{"table", (dir / file).string()},
              {"manifest", (dir / "manifest.json").string()},
              {"config_hash", manifest["config_hash"]}};
    if (manifest.contains("marts")) j["marts"] = manifest["marts"];
    // Rows as objects for convenience.
    std::istringstream rows(table.str());
    std::string line;
    std::getline(rows, line);
    std::vector<std::string> header;
    for (std::istringstream hs(line); std::getline(hs, file, ',');) header.push_back(file);
    json arr = json::array();
    while (std::getline(rows, line)) {
      json row;
      std::istringstream rs(line);
      std::string cell;
      for (std::size_t k = 0; std::getline(rs, cell, ',') && k < header.size(); ++k) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        row[header[k]] = (!cell.empty() && *end == '\0') ? json(v) : json(cell);
      }
      arr.push_back(row);
    }
    j["rows"] = arr;
    out << j.dump(2) << '\n';
  }
}

// --- evaluate -----------------------------------------------------------

struct EvaluateArgs {
  std::string scores;
  double threshold = 0.5;
  int bootstrap = 0;
  double level = 0.95;
  bool strict = false;
  std::optional<std::uint64_t> seed;
};

std::vector<metrics::EvalRecord> read_scores(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument(fmt::format("{} is empty", path));
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      header.push_back(cell);
    }
  }
  auto column = [&](std::initializer_list<const char*> names) -> int {
    for (std::size_t k = 0; k < header.size(); ++k) {
      for (const char* n : names) {
        if (header[k] == n) return static_cast<int>(k);
      }
    }
    return -1;
  };
  const int truth_col = column({"truth", "y", "label"});
  const int score_col = column({"score", "prediction", "p"});
  const int weight_col = column({"weight", "w"});
  if (truth_col < 0 || score_col < 0) {
    throw InvalidArgument("scores file needs 'truth' (or y/label) and 'score' columns");
  }
  std::vector<metrics::EvalRecord> records;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells;
    std::istringstream rs(line);
    std::string cell;
    while (std::getline(rs, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      cells.push_back(cell);
    }
    auto number = [&](int col) {
      if (col >= static_cast<int>(cells.size())) {
        throw InvalidArgument(fmt::format("{} row {}: missing column", path, row));
      }
      char* end = nullptr;
      const std::string& s = cells[static_cast<std::size_t>(col)];
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || *end != '\0') {
        throw InvalidArgument(fmt::format("{} row {}: '{}' is not a number", path, row, s));
      }
      return v;
    };
    const double t = number(truth_col);
    if (t != 0.0 && t != 1.0) throw InvalidArgument(fmt::format("{} row {}: truth must be 0/1", path, row));
    records.push_back({static_cast<std::uint8_t>(t), number(score_col),
                       weight_col >= 0 ? number(weight_col) : 1.0});
  }
  return records;
}

void run_evaluate(const EvaluateArgs& a, bool csv, std::ostream& out) {
  const auto records = read_scores(a.scores);
  const std::uint64_t seed = resolve_seed(a.seed);
  const metrics::EvaluationReport rep = metrics::evaluate(
      records, a.threshold, a.bootstrap, a.level, seed,
      a.strict ? metrics::TieMode::Strict : metrics::TieMode::Midrank);
  json j = metrics::to_json(rep);
  if (csv && rep.resamples > 0) {
    j["auc_ci_lower"] = rep.auc_ci.lower;
    j["auc_ci_upper"] = rep.auc_ci.upper;
    j["auc_ipw_ci_lower"] = rep.auc_ipw_ci.lower;
    j["auc_ipw_ci_upper"] = rep.auc_ipw_ci.upper;
  }
  emit(out, j, csv);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Surrogate-guided sampling: design calculators, samplers and experiments", "sgs"};
  app.require_subcommand(1);
  bool csv = false;
  app.add_flag("--csv", csv, "Write CSV instead of JSON to stdout");

  OratioArgs oa;
  auto* oratio = app.add_subcommand("oratio", "Case/control odds ratio of SGS relative to SRS");
  oratio->add_option("--sens", oa.sens, "Surrogate sensitivity")->required();
  oratio->add_option("--spec", oa.spec, "Surrogate specificity")->required();
  oratio->add_option("--prev", oa.prev, "Outcome prevalence")->capture_default_str();
  oratio->add_option("--ratio", oa.ratio, "Surrogate-positive share R of the sample")->capture_default_str();
  oratio->add_flag("--approx", oa.approx, "Rare-outcome approximation R*LR+ + (1-R)*LR-");
  oratio->add_option("--surface", oa.surface,
                     "CSV surface over SENS_START:STOP:STEP,SPEC_START:STOP:STEP");
  oratio->add_flag("--csv", csv, "Write CSV instead of JSON");

  PlanArgs pa;
  auto* plan = app.add_subcommand("plan", "Expected cases and inclusion probabilities of a design");
  plan->add_option("--budget", pa.budget, "Abstraction budget n")->required();
  plan->add_option("--ratio", pa.ratio, "Surrogate-positive share R")->capture_default_str();
  plan->add_option("--sens", pa.sens, "Surrogate sensitivity")->required();
  plan->add_option("--spec", pa.spec, "Surrogate specificity")->required();
  plan->add_option("--prev", pa.prev, "Outcome prevalence")->capture_default_str();
  plan->add_option("--cohort-size", pa.cohort_size, "Cohort size N")->required();
  plan->add_option("--design", pa.design, "srs, sgs or inverse_sgs")->capture_default_str();
  plan->add_flag("--csv", csv, "Write CSV instead of JSON");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic cohort");
  simulate->add_option("--config", sa.config, "Cohort config JSON (overrides the sizing flags)");
  simulate->add_option("--size", sa.size, "Cohort size")->capture_default_str();
  simulate->add_option("--features", sa.features, "Number of binary features")->capture_default_str();
  simulate->add_option("--prevalence", sa.prevalence, "Target prevalence")->capture_default_str();
  simulate->add_option("--mode", sa.mode, "conditional_z_given_y or paper_y_given_z")->capture_default_str();
  simulate->add_option("--out", sa.out_path, "Cohort CSV output path");
  simulate->add_option("--meta", sa.meta_path, "Metadata JSON output path");
  simulate->add_option("--seed", sa.seed, "Seed (default: $SGS_SEED, else 1)");
  simulate->add_flag("--csv", csv, "Write CSV instead of JSON");

  SampleArgs sm;
  auto* sample = app.add_subcommand("sample", "Draw an abstraction sample from a cohort CSV");
  sample->add_option("--cohort", sm.cohort_path, "Cohort CSV")->required();
  sample->add_option("--design", sm.design, "srs, sgs or ros")->capture_default_str();
  sample->add_option("--n", sm.n, "Sample size")->required();
  sample->add_option("--ratio", sm.ratio, "Surrogate-positive share R (sgs)")->capture_default_str();
  sample->add_option("--surrogate", sm.surrogate, "Surrogate column")->capture_default_str();
  sample->add_option("--out", sm.out_path, "Sample CSV output path");
  sample->add_option("--seed", sm.seed, "Seed (default: $SGS_SEED, else 1)");
  sample->add_flag("--csv", csv, "Write the sample CSV to stdout");

  FeaturizeArgs fa;
  auto* featurize = app.add_subcommand("featurize", "TF-IDF features and ICD surrogate of a corpus");
  featurize->add_option("--corpus", fa.corpus_path, "JSONL corpus");
  featurize->add_option("--synthetic", fa.synthetic, "Use a synthetic corpus of this many documents");
  featurize->add_option("--codes", fa.codes_path, "ICD code-set file (default: built-in list)");
  featurize->add_option("--threshold", fa.threshold, "Surrogate is 1 when the code count exceeds this")
      ->capture_default_str();
  featurize->add_option("--min-frac", fa.min_frac, "Minimum document fraction")->capture_default_str();
  featurize->add_option("--max-frac", fa.max_frac, "Maximum document fraction")->capture_default_str();
  featurize->add_option("--out-matrix", fa.matrix_path, "Design matrix CSV output path");
  featurize->add_option("--out-vocab", fa.vocab_path, "Vocabulary JSON output path");
  featurize->add_option("--out-corpus", fa.corpus_out, "Write the (e.g. synthetic) corpus as JSONL");
  featurize->add_option("--seed", fa.seed, "Seed for --synthetic (default: $SGS_SEED, else 1)");
  featurize->add_flag("--csv", csv, "Write the design matrix CSV to stdout");

  CurveArgs ca;
  auto* curve = app.add_subcommand("curve", "Run an experiment config (learning curve, design "
                                            "comparison or theory diagnostics)");
  curve->add_option("--config", ca.config, "Experiment config JSON")->required();
  curve->add_option("--out-dir", ca.out_dir, "Directory for the table and manifest")->capture_default_str();
  curve->add_option("--jobs", ca.jobs, "Worker threads (default: config value)");
  curve->add_option("--replicates", ca.replicates, "Override the replicate count");
  curve->add_option("--seed", ca.seed, "Master seed (default: config, else $SGS_SEED)");
  curve->add_flag("--csv", csv, "Write the result table CSV to stdout");

  EvaluateArgs ea;
  auto* evaluate = app.add_subcommand("evaluate", "AUC, IPW AUC and IPW rates of a scored CSV");
  evaluate->add_option("--scores", ea.scores, "CSV with truth,score[,weight]")->required();
  evaluate->add_option("--threshold", ea.threshold, "Classification threshold")->capture_default_str();
  evaluate->add_option("--bootstrap", ea.bootstrap, "Bootstrap resamples (0 = none)")->capture_default_str();
  evaluate->add_option("--level", ea.level, "Interval level")->capture_default_str();
  evaluate->add_flag("--strict-ties", ea.strict, "Count tied pairs as discordant");
  evaluate->add_option("--seed", ea.seed, "Seed (default: $SGS_SEED, else 1)");
  evaluate->add_flag("--csv", csv, "Write CSV instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.back()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << "run '" << (subs.empty() ? std::string("sgs") : "sgs " + subs.back()->get_name())
        << " --help' for usage\n";
    return kUsage;
  }

  try {
    if (oratio->parsed()) run_oratio(oa, csv, out);
    if (plan->parsed()) run_plan(pa, csv, out);
    if (simulate->parsed()) run_simulate(sa, csv, out);
    if (sample->parsed()) run_sample(sm, csv, out);
    if (featurize->parsed()) run_featurize(fa, csv, out);
    if (curve->parsed()) run_curve(ca, csv, out);
    if (evaluate->parsed()) run_evaluate(ea, csv, out);
  } catch (const DesignError& e) {
    err << "design error: " << e.what() << '\n';
    return kDesign;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

}  // namespace sgs::cli
