#include "fracmeasure/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "fracmeasure/parallel.hpp"
#include "fracmeasure/rng.hpp"

namespace fracmeasure {

// ---- MetricSpace -----------------------------------------------------------

MetricSpace MetricSpace::euclidean(int ambient_dim) {
  if (ambient_dim < 1) throw std::invalid_argument("ambient_dim must be >= 1");
  MetricSpace s;
  s.kind_ = Kind::euclidean;
  s.ambient_dim_ = ambient_dim;
  return s;
}

MetricSpace MetricSpace::explicit_table(std::vector<std::vector<double>> table) {
  MetricSpace s;
  s.kind_ = Kind::explicit_table;
  s.ambient_dim_ = 1;
  s.table_size_ = table.size();
  s.table_.reserve(s.table_size_ * s.table_size_);
  for (const auto& row : table) {
    if (row.size() != s.table_size_) throw std::invalid_argument("distance table must be square");
    s.table_.insert(s.table_.end(), row.begin(), row.end());
  }
  s.validate_table();
  return s;
}

double MetricSpace::distance(std::span<const double> a, std::span<const double> b) const {
  if (kind_ == Kind::euclidean) {
    if (a.size() == 1) return std::abs(a[0] - b[0]);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  auto i = static_cast<std::size_t>(a[0]);
  auto j = static_cast<std::size_t>(b[0]);
  if (i >= table_size_ || j >= table_size_)
    throw std::out_of_range("point index outside distance table");
  return table_[i * table_size_ + j];
}

void MetricSpace::validate_table() const {
  const std::size_t m = table_size_;
  for (std::size_t i = 0; i < m; ++i) {
    if (table_[i * m + i] != 0.0)
      throw std::invalid_argument("distance table diagonal must be zero at index " +
                                  std::to_string(i));
    for (std::size_t j = 0; j < m; ++j) {
      double d = table_[i * m + j];
      if (!(d >= 0.0) || !std::isfinite(d))
        throw std::invalid_argument("distance table entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") must be finite and nonnegative");
      if (d != table_[j * m + i])
        throw std::invalid_argument("distance table must be symmetric; mismatch at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      if (i != j && d == 0.0)
        throw std::invalid_argument("distinct points at zero distance: (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
    }
  }
}

// ---- AtomicMeasure ---------------------------------------------------------

AtomicMeasure::AtomicMeasure(MetricSpace space, std::vector<Point> points,
                             std::vector<double> weights, double n, double h,
                             std::optional<double> growth_constant_hint)
    : space_(std::move(space)), n_(n), h_(h), hint_(growth_constant_hint) {
  if (points.size() != weights.size())
    throw std::invalid_argument("points and weights must have equal length");
  if (points.empty()) throw std::invalid_argument("measure must have at least one atom");
  if (!(n > 0.0)) throw std::invalid_argument("dimension parameter n must be positive");
  if (!(h > 0.0)) throw std::invalid_argument("resolution h must be positive");

  dim_ = space_.ambient_dim();
  coords_.reserve(points.size() * static_cast<std::size_t>(dim_));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != static_cast<std::size_t>(dim_))
      throw std::invalid_argument("point " + std::to_string(i) + ": expected " +
                                  std::to_string(dim_) + " coordinates, got " +
                                  std::to_string(points[i].size()));
    for (double c : points[i]) {
      if (!std::isfinite(c))
        throw std::invalid_argument("point " + std::to_string(i) + ": non-finite coordinate");
      coords_.push_back(c);
    }
  }
  weights_ = std::move(weights);
  total_mass_ = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw std::invalid_argument("weight " + std::to_string(i) + ": must be positive and finite");
    total_mass_ += weights_[i];
  }
  if (space_.kind() == MetricSpace::Kind::explicit_table) {
    if (space_.table_size() != weights_.size())
      throw std::invalid_argument("distance table size does not match atom count");
    diameter_ = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        diameter_ = std::max(diameter_, space_.distance(point(i), point(j)));
  } else {
    std::vector<double> lo(static_cast<std::size_t>(dim_)), hi(static_cast<std::size_t>(dim_));
    for (int d = 0; d < dim_; ++d) lo[static_cast<std::size_t>(d)] = hi[static_cast<std::size_t>(d)] = coords_[static_cast<std::size_t>(d)];
    for (std::size_t i = 1; i < size(); ++i) {
      auto p = point(i);
      for (int d = 0; d < dim_; ++d) {
        lo[static_cast<std::size_t>(d)] = std::min(lo[static_cast<std::size_t>(d)], p[static_cast<std::size_t>(d)]);
        hi[static_cast<std::size_t>(d)] = std::max(hi[static_cast<std::size_t>(d)], p[static_cast<std::size_t>(d)]);
      }
    }
    double s = 0.0;
    for (int d = 0; d < dim_; ++d) {
      double e = hi[static_cast<std::size_t>(d)] - lo[static_cast<std::size_t>(d)];
      s += e * e;
    }
    diameter_ = std::sqrt(s);
  }
  if (diameter_ <= 0.0) diameter_ = h_;  // single atom
}

Point AtomicMeasure::point_copy(std::size_t i) const {
  auto p = point(i);
  return Point(p.begin(), p.end());
}

std::size_t AtomicMeasure::nearest_atom(std::span<const double> p) const {
  std::size_t best = 0;
  double best_d = distance_to_atom(p, 0);
  for (std::size_t i = 1; i < size(); ++i) {
    double d = distance_to_atom(p, i);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

bool AtomicMeasure::is_atom(std::span<const double> p) const {
  for (std::size_t i = 0; i < size(); ++i) {
    auto q = point(i);
    bool same = true;
    for (std::size_t d = 0; d < q.size(); ++d)
      if (p[d] != q[d]) {
        same = false;
        break;
      }
    if (same) return true;
  }
  return false;
}

double ball_mass(const AtomicMeasure& measure, const Ball& ball) {
  if (!(ball.radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  double mass = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i)
    if (measure.distance_to_atom(ball.center, i) < ball.radius) mass += measure.weight(i);
  return mass;
}

std::vector<std::size_t> ball_atoms(const AtomicMeasure& measure, const Ball& ball) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < measure.size(); ++i)
    if (measure.distance_to_atom(ball.center, i) < ball.radius) idx.push_back(i);
  return idx;
}

// ---- generators ------------------------------------------------------------

AtomicMeasure generate_uniform_cube(int m, int N) {
  if (m < 1 || m > 4) throw std::invalid_argument("uniform_cube: m must be in [1,4]");
  if (N < 2) throw std::invalid_argument("uniform_cube: N must be >= 2");
  double count = std::pow(static_cast<double>(N), m);
  if (count > 2e7) throw std::invalid_argument("uniform_cube: too many atoms");
  auto total = static_cast<std::size_t>(count + 0.5);
  std::vector<Point> pts;
  pts.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Point p(static_cast<std::size_t>(m));
    for (int d = 0; d < m; ++d) p[static_cast<std::size_t>(d)] = (idx[static_cast<std::size_t>(d)] + 0.5) / N;
    pts.push_back(std::move(p));
    for (int d = m - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < N) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  std::vector<double> w(total, 1.0 / static_cast<double>(total));
  return AtomicMeasure(MetricSpace::euclidean(m), std::move(pts), std::move(w),
                       static_cast<double>(m), 1.0 / N);
}

AtomicMeasure generate_cantor(int depth) {
  if (depth < 1 || depth > 24) throw std::invalid_argument("cantor: depth must be in [1,24]");
  std::vector<double> lefts{0.0};
  for (int g = 0; g < depth; ++g) {
    std::vector<double> next;
    next.reserve(lefts.size() * 2);
    for (double l : lefts) next.push_back(l / 3.0);
    for (double l : lefts) next.push_back(2.0 / 3.0 + l / 3.0);
    lefts = std::move(next);
  }
  std::sort(lefts.begin(), lefts.end());
  const double len = std::pow(3.0, -depth);
  std::vector<Point> pts;
  pts.reserve(lefts.size());
  for (double l : lefts) pts.push_back({l + 0.5 * len});
  std::vector<double> w(lefts.size(), std::pow(2.0, -depth));
  const double n = std::log(2.0) / std::log(3.0);
  return AtomicMeasure(MetricSpace::euclidean(1), std::move(pts), std::move(w), n, len);
}

namespace {

struct ParamCurve {
  // position at parameter t in [0,1]
  virtual std::array<double, 2> at(double t) const = 0;
  virtual ~ParamCurve() = default;
};

struct SegmentCurve : ParamCurve {
  std::array<double, 2> at(double t) const override { return {t, 0.0}; }
};
struct CircleCurve : ParamCurve {
  std::array<double, 2> at(double t) const override {
    double a = 2.0 * std::numbers::pi * t;
    return {std::cos(a), std::sin(a)};
  }
};
struct SpiralCurve : ParamCurve {
  std::array<double, 2> at(double t) const override {
    double a = 2.0 * std::numbers::pi * t;
    double r = 0.25 + 0.75 * t;
    return {r * std::cos(a), r * std::sin(a)};
  }
};

}  // namespace

AtomicMeasure generate_curve(CurveKind kind, int N) {
  if (N < 2) throw std::invalid_argument("curve: N must be >= 2");
  std::unique_ptr<ParamCurve> curve;
  switch (kind) {
    case CurveKind::segment: curve = std::make_unique<SegmentCurve>(); break;
    case CurveKind::circle: curve = std::make_unique<CircleCurve>(); break;
    case CurveKind::spiral: curve = std::make_unique<SpiralCurve>(); break;
  }
  // cumulative chord length on a fine parameter grid, then equal-arclength midpoints
  const int fine = std::max(16 * N, 4096);
  std::vector<double> cum(static_cast<std::size_t>(fine) + 1, 0.0);
  auto prev = curve->at(0.0);
  for (int i = 1; i <= fine; ++i) {
    auto cur = curve->at(static_cast<double>(i) / fine);
    double dx = cur[0] - prev[0], dy = cur[1] - prev[1];
    cum[static_cast<std::size_t>(i)] = cum[static_cast<std::size_t>(i) - 1] + std::sqrt(dx * dx + dy * dy);
    prev = cur;
  }
  const double length = cum.back();
  auto param_at_arc = [&](double s) {
    auto it = std::lower_bound(cum.begin(), cum.end(), s);
    std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - cum.begin()));
    if (j > static_cast<std::size_t>(fine)) j = static_cast<std::size_t>(fine);
    double s0 = cum[j - 1], s1 = cum[j];
    double f = s1 > s0 ? (s - s0) / (s1 - s0) : 0.0;
    return (static_cast<double>(j) - 1.0 + f) / fine;
  };
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    double s = length * (i + 0.5) / N;
    auto xy = curve->at(param_at_arc(s));
    pts.push_back({xy[0], xy[1]});
  }
  std::vector<double> w(static_cast<std::size_t>(N), length / N);
  return AtomicMeasure(MetricSpace::euclidean(2), std::move(pts), std::move(w), 1.0, length / N);
}

AtomicMeasure generate_power_density(double s, int N) {
  if (!(s > 0.0)) throw std::invalid_argument("power_density: s must be positive");
  if (N < 2) throw std::invalid_argument("power_density: N must be >= 2");
  std::vector<Point> pts;
  std::vector<double> w;
  pts.reserve(static_cast<std::size_t>(N));
  w.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    pts.push_back({(i + 0.5) / N});
    double a = static_cast<double>(i) / N, b = (i + 1.0) / N;
    w.push_back((std::pow(b, s) - std::pow(a, s)) / s);  // exact cell integral of t^(s-1)
  }
  return AtomicMeasure(MetricSpace::euclidean(1), std::move(pts), std::move(w), 1.0, 1.0 / N);
}

// ---- generator specs -------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (...) {
    throw std::invalid_argument(std::string("invalid integer for ") + what + ": '" + s + "'");
  }
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (...) {
    throw std::invalid_argument(std::string("invalid number for ") + what + ": '" + s + "'");
  }
}

}  // namespace

GeneratorSpec parse_generator_spec(const std::string& text) {
  auto parts = split(text, ':');
  const std::string& kind = parts[0];
  auto expect = [&](std::size_t n) {
    if (parts.size() != n)
      throw std::invalid_argument("generator spec '" + text + "': expected " + std::to_string(n - 1) +
                                  " parameter(s)");
  };
  if (kind == "uniform") {
    expect(3);
    parse_int(parts[1], "m");
    parse_int(parts[2], "N");
  } else if (kind == "cantor") {
    expect(2);
    parse_int(parts[1], "depth");
  } else if (kind == "power") {
    expect(3);
    parse_double(parts[1], "s");
    parse_int(parts[2], "N");
  } else if (kind == "curve") {
    expect(3);
    if (parts[1] != "segment" && parts[1] != "circle" && parts[1] != "spiral")
      throw std::invalid_argument("generator spec '" + text + "': unknown curve kind");
    parse_int(parts[2], "N");
  } else {
    throw std::invalid_argument("unknown generator kind '" + kind + "'");
  }
  return GeneratorSpec{text};
}

GeneratorSpec GeneratorSpec::refined() const {
  auto parts = split(text, ':');
  const std::string& kind = parts[0];
  if (kind == "uniform") {
    int m = parse_int(parts[1], "m");
    int N = parse_int(parts[2], "N");
    int next = m == 1 ? N * 4 : N * 2;  // 4x atoms either way
    return GeneratorSpec{"uniform:" + parts[1] + ":" + std::to_string(next)};
  }
  if (kind == "cantor") {
    int depth = parse_int(parts[1], "depth");
    return GeneratorSpec{"cantor:" + std::to_string(depth + 2)};
  }
  if (kind == "power") {
    int N = parse_int(parts[2], "N");
    return GeneratorSpec{"power:" + parts[1] + ":" + std::to_string(N * 4)};
  }
  int N = parse_int(parts[2], "N");
  return GeneratorSpec{"curve:" + parts[1] + ":" + std::to_string(N * 4)};
}

AtomicMeasure generate(const GeneratorSpec& spec) {
  auto parts = split(spec.text, ':');
  const std::string& kind = parts[0];
  if (kind == "uniform")
    return generate_uniform_cube(parse_int(parts[1], "m"), parse_int(parts[2], "N"));
  if (kind == "cantor") return generate_cantor(parse_int(parts[1], "depth"));
  if (kind == "power")
    return generate_power_density(parse_double(parts[1], "s"), parse_int(parts[2], "N"));
  CurveKind ck = parts[1] == "segment" ? CurveKind::segment
               : parts[1] == "circle"  ? CurveKind::circle
                                       : CurveKind::spiral;
  return generate_curve(ck, parse_int(parts[2], "N"));
}

std::vector<AtomicMeasure> generate_levels(const GeneratorSpec& spec, int levels) {
  if (levels < 1) throw std::invalid_argument("levels must be >= 1");
  std::vector<AtomicMeasure> out;
  GeneratorSpec cur = parse_generator_spec(spec.text);
  for (int i = 0; i < levels; ++i) {
    out.push_back(generate(cur));
    if (i + 1 < levels) cur = cur.refined();
  }
  return out;
}

// ---- growth condition ------------------------------------------------------

namespace {

// Deterministic distinct index subsample; all indices when n <= cap.
std::vector<std::size_t> sample_centers(std::size_t n, int cap, std::uint64_t seed) {
  std::vector<std::size_t> idx;
  if (n <= static_cast<std::size_t>(cap)) {
    idx.resize(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
  }
  // Floyd's sampling, then sort for a stable scan order.
  Rng rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(static_cast<std::size_t>(cap));
  for (std::size_t j = n - static_cast<std::size_t>(cap); j < n; ++j) {
    std::size_t t = rng.uniform_index(j + 1);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
      chosen.push_back(t);
    else
      chosen.push_back(j);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Radii diam * 2^-k, descending from the diameter down to r_min (>= h).
std::vector<double> radius_grid(double diameter, double r_min) {
  std::vector<double> radii;
  for (double r = diameter; r >= r_min; r *= 0.5) radii.push_back(r);
  if (radii.empty()) radii.push_back(diameter);
  return radii;
}

}  // namespace

CheckReport growth_constant(const AtomicMeasure& measure, double n, const GrowthSampler& sampler) {
  if (!(n > 0.0)) throw std::invalid_argument("growth_constant: n must be positive");
  CheckReport report;
  report.check = "growth";
  report.seed = sampler.seed;
  report.params = {{"n", n},
                   {"levels", sampler.levels},
                   {"max_centers", sampler.max_centers},
                   {"h", measure.h()},
                   {"diameter", measure.diameter()}};
  const double slack = 0.25;
  report.tolerance = {{"refinement_slack", slack}};

  auto centers = sample_centers(measure.size(), sampler.max_centers, sampler.seed);
  double base_min = sampler.min_radius > 0.0 ? sampler.min_radius : measure.diameter() / 8.0;

  for (int level = 0; level < sampler.levels; ++level) {
    double r_min = std::max(measure.h(), base_min * std::pow(0.5, level));
    auto radii = radius_grid(measure.diameter(), r_min);
    std::vector<double> sup_per_center(centers.size(), 0.0);
    std::vector<double> arg_radius(centers.size(), 0.0);
    parallel_for(centers.size(), [&](std::size_t ci) {
      auto center = measure.point(centers[ci]);
      double best = 0.0, best_r = 0.0;
      for (double r : radii) {
        double mass = 0.0;
        for (std::size_t j = 0; j < measure.size(); ++j)
          if (measure.distance_to_atom(center, j) < r) mass += measure.weight(j);
        double ratio = mass / std::pow(r, n);
        if (ratio > best) {
          best = ratio;
          best_r = r;
        }
      }
      sup_per_center[ci] = best;
      arg_radius[ci] = best_r;
    });
    double sup = 0.0;
    std::size_t arg = 0;
    for (std::size_t ci = 0; ci < centers.size(); ++ci)
      if (sup_per_center[ci] > sup) {
        sup = sup_per_center[ci];
        arg = ci;
      }
    LevelResult lr;
    lr.atoms = static_cast<long>(measure.size());
    lr.sup_ratio = sup;
    lr.witness = {{"center_atom", centers[arg]},
                  {"radius", arg_radius[arg]},
                  {"min_radius", r_min}};
    report.levels.push_back(std::move(lr));
  }
  report.compute_trend();
  bool stable = true;
  for (double t : report.trend)
    if (!(t <= 1.0 + slack)) stable = false;
  bool finite = true;
  for (const auto& l : report.levels)
    if (!std::isfinite(l.sup_ratio)) finite = false;
  report.pass = stable && finite;
  return report;
}

double estimate_growth_constant(const AtomicMeasure& measure) {
  GrowthSampler s;
  s.levels = 1;
  s.min_radius = measure.h();
  auto rep = growth_constant(measure, measure.n(), s);
  return rep.final_sup();
}

}  // namespace fracmeasure
