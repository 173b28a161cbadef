#include <cmath>
#include <cstdio>
#include <set>

#include "rgglab/errors.hpp"
#include "rgglab/lab.hpp"

namespace rgglab {
namespace {

using nlohmann::json;

const std::map<std::string, Experiment>& experiment_names() {
  static const std::map<std::string, Experiment> names{
      {"lsd", Experiment::lsd},
      {"moments", Experiment::moments},
      {"second_eig_sweep", Experiment::second_eig_sweep},
      {"subgraph_prob", Experiment::subgraph_prob},
      {"cap_mixing", Experiment::cap_mixing},
      {"decomp", Experiment::decomp},
      {"oracle", Experiment::oracle},
      {"sample", Experiment::sample},
  };
  return names;
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("config field '") + key + "': " + e.what());
  }
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T value{};
  read(j, key, value);
  out = value;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidParameter("config: " + message);
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [name, value] : experiment_names()) {
    if (value == e) return name;
  }
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  std::string key = name;
  for (char& ch : key) {
    if (ch == '-') ch = '_';
  }
  if (key == "second_eig") key = "second_eig_sweep";
  const auto it = experiment_names().find(key);
  if (it == experiment_names().end()) throw InvalidParameter("unknown experiment '" + name + "'");
  return it->second;
}

double ExperimentConfig::resolved_p() const {
  if (alpha) {
    if (n == 0) throw InvalidParameter("config: alpha needs n > 0");
    return *alpha / static_cast<double>(n);
  }
  if (p) return *p;
  throw InvalidParameter("config: one of p or alpha is required");
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidParameter("config: expected a JSON object");
  static const std::set<std::string> known{
      "experiment", "generator", "n", "d", "p", "alpha", "trials", "k_max", "seed", "output_dir", "threads",
      "bins", "range", "sweep_n", "sweep_d", "sweep_p", "d_per_np", "ks_threshold", "moment_rel_tol",
      "se_multiplier", "ratio_range", "slope_range", "cycle_length", "mixing_bins", "noise_replicates",
      "graph_file", "walks", "bound_constant", "tau", "k", "regime"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw InvalidParameter("config: unknown field '" + key + "'");
  }
  ExperimentConfig c;
  if (j.contains("experiment")) c.experiment = experiment_from_string(j.at("experiment").get<std::string>());
  if (j.contains("generator")) {
    const auto g = j.at("generator").get<std::string>();
    if (g == "geometric") {
      c.generator = Generator::geometric;
    } else if (g == "erdos_renyi" || g == "er") {
      c.generator = Generator::erdos_renyi;
    } else {
      throw InvalidParameter("config: unknown generator '" + g + "'");
    }
  }
  read(j, "n", c.n);
  read(j, "d", c.d);
  read_optional(j, "p", c.p);
  read_optional(j, "alpha", c.alpha);
  read(j, "trials", c.trials);
  read(j, "k_max", c.k_max);
  read(j, "seed", c.seed);
  read(j, "output_dir", c.output_dir);
  read(j, "threads", c.threads);
  read(j, "bins", c.bins);
  if (j.contains("range")) {
    std::vector<double> range;
    read(j, "range", range);
    require(range.size() == 2, "range must be [lo, hi]");
    c.range_lo = range[0];
    c.range_hi = range[1];
  }
  read(j, "sweep_n", c.sweep_n);
  read(j, "sweep_d", c.sweep_d);
  read(j, "sweep_p", c.sweep_p);
  read(j, "d_per_np", c.d_per_np);
  read(j, "ks_threshold", c.ks_threshold);
  read(j, "moment_rel_tol", c.moment_rel_tol);
  read(j, "se_multiplier", c.se_multiplier);
  if (j.contains("ratio_range")) {
    std::vector<double> r;
    read(j, "ratio_range", r);
    require(r.size() == 2, "ratio_range must be [lo, hi]");
    c.ratio_lo = r[0];
    c.ratio_hi = r[1];
  }
  if (j.contains("slope_range")) {
    std::vector<double> r;
    read(j, "slope_range", r);
    require(r.size() == 2, "slope_range must be [lo, hi]");
    c.slope_lo = r[0];
    c.slope_hi = r[1];
  }
  read(j, "cycle_length", c.cycle_length);
  read(j, "mixing_bins", c.mixing_bins);
  read(j, "noise_replicates", c.noise_replicates);
  read(j, "graph_file", c.graph_file);
  read(j, "walks", c.walks);
  read(j, "bound_constant", c.bound_constant);
  read_optional(j, "tau", c.tau);
  read(j, "k", c.k);
  c.regime = c.alpha ? Regime::sparse : Regime::dense;
  if (j.contains("regime")) {
    const auto r = j.at("regime").get<std::string>();
    require(r == "dense" || r == "sparse", "regime must be 'dense' or 'sparse'");
    c.regime = r == "dense" ? Regime::dense : Regime::sparse;
  }
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["generator"] = c.generator == Generator::geometric ? "geometric" : "erdos_renyi";
  j["n"] = c.n;
  j["d"] = c.d;
  j["p"] = c.p ? json(*c.p) : json(nullptr);
  j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
  j["trials"] = c.trials;
  j["k_max"] = c.k_max;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  j["bins"] = c.bins;
  j["range"] = {c.range_lo, c.range_hi};
  j["sweep_n"] = c.sweep_n;
  j["sweep_d"] = c.sweep_d;
  j["sweep_p"] = c.sweep_p;
  j["d_per_np"] = c.d_per_np;
  j["ks_threshold"] = c.ks_threshold;
  j["moment_rel_tol"] = c.moment_rel_tol;
  j["se_multiplier"] = c.se_multiplier;
  j["ratio_range"] = {c.ratio_lo, c.ratio_hi};
  j["slope_range"] = {c.slope_lo, c.slope_hi};
  j["cycle_length"] = c.cycle_length;
  j["mixing_bins"] = c.mixing_bins;
  j["noise_replicates"] = c.noise_replicates;
  j["graph_file"] = c.graph_file;
  j["walks"] = c.walks;
  j["bound_constant"] = c.bound_constant;
  j["tau"] = c.tau ? json(*c.tau) : json(nullptr);
  j["k"] = c.k;
  j["regime"] = std::string(to_string(c.regime));
  return j;
}

void validate(const ExperimentConfig& c) {
  require(c.trials >= 1, "trials must be >= 1");
  const auto check_p = [&] {
    const double p = c.resolved_p();
    require(p > 0.0 && p < 1.0, "p must lie in (0, 1) after resolution (got " + format_double(p) + ")");
  };
  const auto check_graph = [&] {
    require(c.n >= 2, "n must be >= 2");
    require(c.n <= 6000, "n must be <= 6000 for dense eigensolves");
    if (c.generator == Generator::geometric) require(c.d >= 2, "d must be >= 2");
    check_p();
  };
  switch (c.experiment) {
    case Experiment::lsd:
    case Experiment::moments:
      check_graph();
      require(c.k_max >= 1 && c.k_max <= 12, "k_max must lie in [1, 12]");
      require(c.bins >= 1 && c.range_lo < c.range_hi, "histogram needs bins >= 1 and lo < hi");
      break;
    case Experiment::second_eig_sweep:
      require(!c.sweep_n.empty(), "sweep_n must not be empty");
      require(c.p.has_value(), "second_eig_sweep needs a fixed p");
      require(*c.p > 0.0 && *c.p < 1.0, "p must lie in (0, 1)");
      require(c.sweep_d.empty() || c.sweep_d.size() == c.sweep_n.size(), "sweep_d must match sweep_n in length");
      for (auto n : c.sweep_n) require(n >= 2 && n <= 6000, "sweep_n entries must lie in [2, 6000]");
      break;
    case Experiment::subgraph_prob:
      require(c.cycle_length >= 3 && c.cycle_length <= 5, "cycle_length must be 3, 4 or 5");
      require(c.d >= 2 || !c.sweep_d.empty(), "d or sweep_d is required");
      require(c.p.has_value() || !c.sweep_p.empty(), "p or sweep_p is required");
      for (double p : c.sweep_p) require(p > 0.0 && p < 1.0, "sweep_p entries must lie in (0, 1)");
      for (int d : c.sweep_d) require(d >= 2, "sweep_d entries must be >= 2");
      if (c.p) require(*c.p > 0.0 && *c.p < 1.0, "p must lie in (0, 1)");
      break;
    case Experiment::cap_mixing:
      require(c.d >= 2, "d must be >= 2");
      check_p();
      require(c.k_max >= 1 && c.k_max <= 6, "walk length k_max must lie in [1, 6]");
      require(c.mixing_bins >= 2, "mixing_bins must be >= 2");
      require(c.noise_replicates >= 2, "noise_replicates must be >= 2");
      break;
    case Experiment::decomp:
      if (c.graph_file.empty()) {
        require(c.n >= 1, "n must be >= 1 when no graph_file is given");
        if (c.generator == Generator::geometric) require(c.d >= 2, "d must be >= 2");
        check_p();
      }
      require(c.bound_constant > 0.0, "bound_constant must be positive");
      break;
    case Experiment::oracle:
      require(c.n >= 2 && c.n <= 8, "oracle needs 2 <= n <= 8");
      require(c.k >= 1 && c.k <= 8, "oracle needs 1 <= k <= 8");
      require(c.d >= 2, "d must be >= 2");
      check_p();
      break;
    case Experiment::sample:
      require(c.n >= 1, "n must be >= 1");
      if (c.generator == Generator::geometric) require(c.d >= 2, "d must be >= 2");
      check_p();
      break;
  }
}

std::string run_id(const ExperimentConfig& c) {
  json j = to_json(c);
  j.erase("output_dir");
  j.erase("threads");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rgglab
