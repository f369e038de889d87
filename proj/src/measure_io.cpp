#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fracmeasure/measure.hpp"

namespace fracmeasure {

namespace {

// The schema requires >= 17 significant decimal digits, enough to reproduce
// every double bit-exactly on reload, so numbers are formatted by hand.
void append_number(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_vector(std::string& out, const std::vector<double>& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    append_number(out, v[i]);
  }
  out += ']';
}

}  // namespace

void save_measure(const AtomicMeasure& measure, const std::string& path) {
  std::string out;
  out.reserve(measure.size() * 32 + 256);
  out += "{\n  \"schema\": \"fracmeasure/measure/v1\",\n  \"metric\": ";
  bool euclid = measure.space().kind() == MetricSpace::Kind::euclidean;
  out += euclid ? "\"euclidean\"" : "\"explicit\"";
  out += ",\n  \"ambient_dim\": " + std::to_string(measure.space().ambient_dim());
  out += ",\n  \"n\": ";
  append_number(out, measure.n());
  out += ",\n  \"h\": ";
  append_number(out, measure.h());
  out += ",\n  \"points\": [";
  for (std::size_t i = 0; i < measure.size(); ++i) {
    if (i) out += ',';
    out += "\n    ";
    auto p = measure.point(i);
    append_vector(out, std::vector<double>(p.begin(), p.end()));
  }
  out += "\n  ],\n  \"weights\": [";
  for (std::size_t i = 0; i < measure.size(); ++i) {
    if (i) out += ',';
    out += "\n    ";
    append_number(out, measure.weight(i));
  }
  out += "\n  ]";
  if (!euclid) {
    out += ",\n  \"distance_table\": [";
    for (std::size_t i = 0; i < measure.size(); ++i) {
      if (i) out += ',';
      out += "\n    ";
      std::vector<double> row(measure.size());
      for (std::size_t j = 0; j < measure.size(); ++j)
        row[j] = measure.space().distance(measure.point(i), measure.point(j));
      append_vector(out, row);
    }
    out += "\n  ]";
  }
  out += ",\n  \"metadata\": {";
  if (measure.growth_constant_hint()) {
    out += "\"growth_constant_hint\": ";
    append_number(out, *measure.growth_constant_hint());
  }
  out += "}\n}\n";

  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write measure file: " + tmp.string());
    f << out;
  }
  fs::rename(tmp, target);
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw std::runtime_error("measure file '" + path + "': " + what);
}

}  // namespace

AtomicMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open measure file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    schema_error(path, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_error(path, "top level must be an object");
  if (j.value("schema", "") != "fracmeasure/measure/v1")
    schema_error(path, "unknown schema '" + j.value("schema", "") + "'");
  std::string metric = j.value("metric", "");
  if (metric != "euclidean" && metric != "explicit")
    schema_error(path, "metric must be 'euclidean' or 'explicit'");
  if (!j.contains("ambient_dim") || !j["ambient_dim"].is_number_integer())
    schema_error(path, "ambient_dim must be an integer");
  int ambient_dim = j["ambient_dim"].get<int>();
  if (ambient_dim < 1) schema_error(path, "ambient_dim must be >= 1");
  if (!j.contains("n") || !j["n"].is_number()) schema_error(path, "n must be a number");
  if (!j.contains("h") || !j["h"].is_number()) schema_error(path, "h must be a number");
  double n = j["n"].get<double>(), h = j["h"].get<double>();
  if (!(n > 0.0) || !std::isfinite(n)) schema_error(path, "n must be positive and finite");
  if (!(h > 0.0) || !std::isfinite(h)) schema_error(path, "h must be positive and finite");
  if (!j.contains("points") || !j["points"].is_array()) schema_error(path, "points must be an array");
  if (!j.contains("weights") || !j["weights"].is_array())
    schema_error(path, "weights must be an array");

  std::vector<Point> points;
  points.reserve(j["points"].size());
  for (std::size_t i = 0; i < j["points"].size(); ++i) {
    const auto& jp = j["points"][i];
    if (!jp.is_array()) schema_error(path, "point " + std::to_string(i) + ": must be an array");
    if (jp.size() != static_cast<std::size_t>(ambient_dim))
      schema_error(path, "point " + std::to_string(i) + ": expected " +
                             std::to_string(ambient_dim) + " coordinates, got " +
                             std::to_string(jp.size()));
    Point p;
    for (const auto& c : jp) {
      if (!c.is_number()) schema_error(path, "point " + std::to_string(i) + ": non-numeric coordinate");
      p.push_back(c.get<double>());
    }
    points.push_back(std::move(p));
  }
  if (j["weights"].size() != points.size())
    schema_error(path, "weights length " + std::to_string(j["weights"].size()) +
                           " does not match point count " + std::to_string(points.size()));
  std::vector<double> weights;
  weights.reserve(points.size());
  for (std::size_t i = 0; i < j["weights"].size(); ++i) {
    const auto& wv = j["weights"][i];
    if (!wv.is_number()) schema_error(path, "weight " + std::to_string(i) + ": must be a number");
    double w = wv.get<double>();
    if (!(w > 0.0) || !std::isfinite(w))
      schema_error(path, "weight " + std::to_string(i) + ": must be positive and finite");
    weights.push_back(w);
  }

  std::optional<double> hint;
  if (j.contains("metadata") && j["metadata"].is_object() &&
      j["metadata"].contains("growth_constant_hint"))
    hint = j["metadata"]["growth_constant_hint"].get<double>();

  try {
    if (metric == "explicit") {
      if (!j.contains("distance_table") || !j["distance_table"].is_array())
        schema_error(path, "explicit metric requires a distance_table");
      std::vector<std::vector<double>> table;
      for (const auto& row : j["distance_table"])
        table.push_back(row.get<std::vector<double>>());
      if (table.size() != points.size())
        schema_error(path, "distance_table size does not match point count");
      // points index into the table
      for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i].size() != 1 || points[i][0] != static_cast<double>(i))
          schema_error(path, "point " + std::to_string(i) +
                                 ": explicit metric points must be [index] in order");
      return AtomicMeasure(MetricSpace::explicit_table(std::move(table)), std::move(points),
                           std::move(weights), n, h, hint);
    }
    return AtomicMeasure(MetricSpace::euclidean(ambient_dim), std::move(points),
                         std::move(weights), n, h, hint);
  } catch (const std::invalid_argument& e) {
    schema_error(path, e.what());
  }
}

}  // namespace fracmeasure
