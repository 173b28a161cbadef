#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rgglab/walks.hpp"

namespace rgglab {

enum class Experiment { lsd, moments, second_eig_sweep, subgraph_prob, cap_mixing, decomp, oracle, sample };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

enum class Generator { geometric, erdos_renyi };

/// One experiment. Fields not used by an experiment are ignored by it.
/// JSON keys match the field names; `p` may be replaced by `alpha` (p = alpha / n).
struct ExperimentConfig {
  Experiment experiment = Experiment::lsd;
  Generator generator = Generator::geometric;
  std::size_t n = 0;
  int d = 0;
  std::optional<double> p;
  std::optional<double> alpha;
  std::size_t trials = 1;
  unsigned k_max = 6;
  std::uint64_t seed = 1;
  std::string output_dir = "rgglab-out";
  unsigned threads = 0;

  std::size_t bins = 61;
  double range_lo = -3.0;
  double range_hi = 3.0;

  std::vector<std::size_t> sweep_n;
  std::vector<int> sweep_d;
  std::vector<double> sweep_p;
  double d_per_np = 2.0;             ///< second-eig sweep: d = round(d_per_np * n p) when sweep_d is empty

  // Acceptance thresholds used by the comparison flags.
  double ks_threshold = 0.05;
  double moment_rel_tol = 0.10;
  double se_multiplier = 3.0;
  double ratio_lo = 1.5;
  double ratio_hi = 4.0;
  double slope_lo = 0.4;
  double slope_hi = 0.6;

  unsigned cycle_length = 3;          ///< subgraph_prob: l in {3, 4, 5}
  std::size_t mixing_bins = 50;       ///< cap_mixing: equal-mass bins of the stationary marginal
  std::size_t noise_replicates = 20;  ///< cap_mixing: stationary samples used for the noise floor

  std::string graph_file;             ///< decomp: edge list to load instead of generating
  std::vector<ClosedWalk> walks;      ///< decomp: walks whose statistics are reported
  double bound_constant = 1.0;        ///< decomp: C in the contribution bound
  std::optional<double> tau;          ///< decomp: explicit tau for the contribution bound

  unsigned k = 4;                     ///< oracle: walk length
  Regime regime = Regime::dense;      ///< resolved: sparse when alpha is given

  /// p after resolving alpha; throws InvalidParameter when neither is set.
  double resolved_p() const;
};

/// Parses and validates. Unknown keys are rejected so typos do not silently fall back to defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

/// Throws InvalidParameter when a field is out of range for the chosen experiment.
void validate(const ExperimentConfig& c);

/// 16 hex digits of FNV-1a over the canonical config JSON, excluding output_dir and threads.
std::string run_id(const ExperimentConfig& c);

struct Aggregate {
  double value = 0.0;
  double se = 0.0;
  std::size_t count = 0;
  bool exact = false;  ///< computed without sampling error; se is then 0 by construction
};

struct Comparison {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double se = 0.0;
  double tolerance = 0.0;
  std::string rule;
  bool passed = false;
};

struct CsvTable {
  std::string file_name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string format_double(double x);

struct RunReport {
  Experiment experiment = Experiment::lsd;
  std::string run_id;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> trial_seeds;
  nlohmann::json per_trial = nlohmann::json::array();
  std::map<std::string, Aggregate> aggregates;
  std::vector<Comparison> comparisons;
  std::vector<std::string> warnings;
  nlohmann::json details = nlohmann::json::object();
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, std::string>> text_files;  ///< extra artifacts (name, content)
  double wall_seconds = 0.0;

  bool passed() const;
};

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const RunReport& r);

/// Writes output_dir/{run_id}/report.json and every table and text artifact.
/// Returns the run directory.
std::filesystem::path write_report(const RunReport& r, const std::filesystem::path& output_dir);

RunReport run_lsd(const ExperimentConfig& c);
RunReport run_moments(const ExperimentConfig& c);
RunReport run_second_eig_sweep(const ExperimentConfig& c);
RunReport run_subgraph_prob(const ExperimentConfig& c);
RunReport run_cap_mixing(const ExperimentConfig& c);
RunReport run_decomp(const ExperimentConfig& c);
RunReport run_oracle(const ExperimentConfig& c);
RunReport run_sample(const ExperimentConfig& c);

/// Dispatch on c.experiment after validate().
RunReport run_experiment(const ExperimentConfig& c);

/// Triangle/cycle probability on fresh vector tuples: P(all l cycle edges present).
struct CycleEstimate {
  int d = 0;
  double p = 0.0;
  double tau = 0.0;
  unsigned length = 3;
  std::size_t trials = 0;
  double estimate = 0.0;
  double se = 0.0;
  double reference = 0.0;  ///< p^l
};

CycleEstimate estimate_cycle_probability(int d, double p, unsigned length, std::size_t trials, std::uint64_t seed,
                                         unsigned threads = 1);

/// Path of `length` edges between two pinned endpoints with inner product `endpoint_inner`;
/// the intermediate vectors are fresh.
CycleEstimate estimate_path_probability(int d, double p, unsigned length, double endpoint_inner,
                                        std::size_t trials, std::uint64_t seed, unsigned threads = 1);

}  // namespace rgglab
