#include "fracmeasure/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace fracmeasure {

void CheckReport::compute_trend() {
  trend.clear();
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    double a = levels[i].sup_ratio;
    double b = levels[i + 1].sup_ratio;
    if (a == 0.0 && b == 0.0) {
      trend.push_back(1.0);
    } else if (a == 0.0) {
      trend.push_back(std::numeric_limits<double>::infinity());
    } else {
      trend.push_back(b / a);
    }
  }
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["schema"] = "fracmeasure/report/v1";
  j["check"] = check;
  j["params"] = params;
  j["seed"] = seed;
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& l : levels) {
    lv.push_back({{"atoms", l.atoms}, {"sup_ratio", l.sup_ratio}, {"witness", l.witness}});
  }
  j["levels"] = lv;
  j["trend"] = trend;
  j["pass"] = pass;
  j["tolerance"] = tolerance;
  j["notes"] = notes;
  return j;
}

CheckReport CheckReport::from_json(const nlohmann::json& j) {
  CheckReport r;
  r.check = j.at("check").get<std::string>();
  r.params = j.value("params", nlohmann::json::object());
  r.seed = j.value("seed", std::uint64_t{0});
  for (const auto& l : j.at("levels")) {
    LevelResult lr;
    lr.atoms = l.value("atoms", 0L);
    lr.sup_ratio = l.value("sup_ratio", 0.0);
    lr.witness = l.value("witness", nlohmann::json::object());
    r.levels.push_back(std::move(lr));
  }
  if (j.contains("trend")) r.trend = j.at("trend").get<std::vector<double>>();
  r.pass = j.value("pass", false);
  r.tolerance = j.value("tolerance", nlohmann::json::object());
  if (j.contains("notes")) r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

std::string report_to_string(const CheckReport& report) {
  return report.to_json().dump(2) + "\n";
}

CheckReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report file: " + path);
  nlohmann::json j;
  in >> j;
  return CheckReport::from_json(j);
}

void save_report(const CheckReport& report, const std::string& path) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write report file: " + tmp.string());
    out << report_to_string(report);
  }
  fs::rename(tmp, target);
}

namespace {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string export_csv(const CheckReport& report) {
  std::string out = "level,atoms,sup_ratio,pass\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    out += csv_quote(std::to_string(i));
    out += ',';
    out += csv_quote(std::to_string(report.levels[i].atoms));
    out += ',';
    out += csv_quote(format_g17(report.levels[i].sup_ratio));
    out += ',';
    out += report.pass ? "true" : "false";
    out += '\n';
  }
  return out;
}

}  // namespace fracmeasure
