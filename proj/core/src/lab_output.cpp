#include <cmath>
#include <cstdio>
#include <fstream>

#include "rgglab/errors.hpp"
#include "rgglab/lab.hpp"
#include "rgglab/random.hpp"

namespace rgglab {
namespace {

using nlohmann::json;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("write to " + path.string() + " failed");
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool RunReport::passed() const {
  for (const auto& c : comparisons) {
    if (!c.passed) return false;
  }
  return true;
}

json to_json(const RunReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = to_string(r.experiment);
  j["run_id"] = r.run_id;
  j["config"] = r.config;
  j["prng"] = {{"algorithm", std::string(kEngineName)},
               {"seed_derivation", "splitmix64(seed ^ splitmix64(index + 1))"},
               {"seed", r.seed},
               {"trial_seeds", r.trial_seeds}};
  j["per_trial"] = r.per_trial;
  json aggregates = json::object();
  for (const auto& [name, a] : r.aggregates) {
    aggregates[name] = {{"value", number_or_null(a.value)}, {"se", number_or_null(a.se)}, {"count", a.count},
                        {"exact", a.exact}};
  }
  j["aggregates"] = aggregates;
  json comparisons = json::array();
  for (const auto& c : r.comparisons) {
    comparisons.push_back({{"name", c.name},
                           {"value", number_or_null(c.value)},
                           {"reference", number_or_null(c.reference)},
                           {"se", number_or_null(c.se)},
                           {"tolerance", number_or_null(c.tolerance)},
                           {"rule", c.rule},
                           {"passed", c.passed}});
  }
  j["comparisons"] = comparisons;
  j["passed"] = r.passed();
  j["warnings"] = r.warnings;
  j["details"] = r.details;
  json artifacts = json::array();
  for (const auto& t : r.tables) artifacts.push_back(t.file_name);
  for (const auto& f : r.text_files) artifacts.push_back(f.first);
  j["artifacts"] = artifacts;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

std::filesystem::path write_report(const RunReport& r, const std::filesystem::path& output_dir) {
  const std::filesystem::path dir = output_dir / r.run_id;
  std::filesystem::create_directories(dir);
  for (const auto& t : r.tables) {
    std::string csv;
    for (std::size_t i = 0; i < t.header.size(); ++i) csv += (i ? "," : "") + t.header[i];
    csv += '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) csv += (i ? "," : "") + row[i];
      csv += '\n';
    }
    write_text(dir / t.file_name, csv);
  }
  for (const auto& [name, content] : r.text_files) write_text(dir / name, content);
  write_text(dir / "report.json", to_json(r).dump(2) + "\n");
  return dir;
}

}  // namespace rgglab
