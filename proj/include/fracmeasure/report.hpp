#ifndef FRACMEASURE_REPORT_HPP
#define FRACMEASURE_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace fracmeasure {

struct LevelResult {
  long atoms = 0;          // measure size backing this level (0 if not measure-bound)
  double sup_ratio = 0.0;  // supremum of the check's normalized ratio at this level
  nlohmann::json witness;  // where the supremum was attained
};

// Uniform result record for every check. `pass` is a pure function of the
// recorded samples and the tolerance spec; given the same inputs and seed the
// whole report serializes byte-identically.
struct CheckReport {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<LevelResult> levels;
  std::vector<double> trend;  // levels[i+1].sup_ratio / levels[i].sup_ratio
  bool pass = false;
  nlohmann::json tolerance = nlohmann::json::object();
  std::vector<std::string> notes;

  double final_sup() const { return levels.empty() ? 0.0 : levels.back().sup_ratio; }

  nlohmann::json to_json() const;
  static CheckReport from_json(const nlohmann::json& j);

  // trend[i] = sup[i+1]/sup[i]; 0/0 counts as flat.
  void compute_trend();
};

// schema fracmeasure/report/v1
std::string report_to_string(const CheckReport& report);
CheckReport load_report(const std::string& path);

// Writes to a temp file in the target directory, then renames into place.
void save_report(const CheckReport& report, const std::string& path);

// One row per level: `level,atoms,sup_ratio,pass`, numbers with 17 significant
// digits, RFC-4180 quoting.
std::string export_csv(const CheckReport& report);

}  // namespace fracmeasure

#endif
