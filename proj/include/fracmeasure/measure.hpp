#ifndef FRACMEASURE_MEASURE_HPP
#define FRACMEASURE_MEASURE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracmeasure/report.hpp"

namespace fracmeasure {

// A point is a coordinate tuple in a euclidean space, or a single-entry
// {index} into the distance table of an explicit space.
using Point = std::vector<double>;

class MetricSpace {
 public:
  enum class Kind { euclidean, explicit_table };

  static MetricSpace euclidean(int ambient_dim);
  static MetricSpace explicit_table(std::vector<std::vector<double>> table);

  Kind kind() const { return kind_; }
  int ambient_dim() const { return ambient_dim_; }
  std::size_t table_size() const { return table_size_; }

  double distance(std::span<const double> a, std::span<const double> b) const;

  // Symmetry, zero diagonal, nonnegativity of an explicit table.
  void validate_table() const;

 private:
  MetricSpace() = default;
  Kind kind_ = Kind::euclidean;
  int ambient_dim_ = 1;
  std::vector<double> table_;  // row-major, table_size_ x table_size_
  std::size_t table_size_ = 0;
};

struct Ball {
  Point center;
  double radius = 0.0;

  // kB: same center, radius scaled by k.
  Ball scaled(double k) const { return Ball{center, radius * k}; }
};

// Real values aligned one-to-one with the atoms of a measure.
struct SampledFunction {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

// Finite weighted point set approximating an n-dimensional measure. Immutable
// after construction; safe to share across parallel workers.
class AtomicMeasure {
 public:
  AtomicMeasure(MetricSpace space, std::vector<Point> points, std::vector<double> weights,
                double n, double h,
                std::optional<double> growth_constant_hint = std::nullopt);

  std::size_t size() const { return weights_.size(); }
  const MetricSpace& space() const { return space_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  Point point_copy(std::size_t i) const;
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double n() const { return n_; }
  double h() const { return h_; }
  std::optional<double> growth_constant_hint() const { return hint_; }

  double total_mass() const { return total_mass_; }
  // Upper bound for radius grids: bounding-box diagonal (euclidean) or the
  // largest table entry (explicit).
  double diameter() const { return diameter_; }

  double distance(std::span<const double> a, std::span<const double> b) const {
    return space_.distance(a, b);
  }
  double distance_to_atom(std::span<const double> a, std::size_t i) const {
    return space_.distance(a, point(i));
  }

  // Index of the atom nearest to p (first one on ties).
  std::size_t nearest_atom(std::span<const double> p) const;

  // True if some atom has exactly these coordinates.
  bool is_atom(std::span<const double> p) const;

 private:
  MetricSpace space_;
  int dim_ = 1;
  std::vector<double> coords_;  // flat, size() * dim_
  std::vector<double> weights_;
  double n_ = 1.0;
  double h_ = 0.0;
  std::optional<double> hint_;
  double total_mass_ = 0.0;
  double diameter_ = 0.0;
};

// Sum of weights of atoms with d(center, atom) < radius (strict).
double ball_mass(const AtomicMeasure& measure, const Ball& ball);

// Atom indices inside the ball (strict membership), ascending.
std::vector<std::size_t> ball_atoms(const AtomicMeasure& measure, const Ball& ball);

// ---- generators -----------------------------------------------------------

// N^m midpoint-grid atoms on [0,1]^m, equal weights, n = m, h = 1/N.
AtomicMeasure generate_uniform_cube(int m, int N);

// 2^depth atoms at midpoints of the generation-`depth` intervals of the
// middle-thirds Cantor set, weights 2^-depth, n = ln2/ln3, h = 3^-depth.
AtomicMeasure generate_cantor(int depth);

enum class CurveKind { segment, circle, spiral };

// Arc-length quadrature of a plane curve: N atoms at equal arc-length
// midpoints, weights = arclength/N, n = 1, ambient dimension 2.
AtomicMeasure generate_curve(CurveKind kind, int N);

// Atoms at cell midpoints on [0,1] with exact cellwise weights of the density
// t^(s-1); s < 1 concentrates mass at the origin and breaks the n = 1 growth
// condition there.
AtomicMeasure generate_power_density(double s, int N);

// Generator spec strings: "uniform:m:N", "cantor:depth", "power:s:N",
// "curve:segment|circle|spiral:N".
struct GeneratorSpec {
  std::string text;
  // Next refinement level: N scaled by 4 (grid generators use 4x atoms in 1-D,
  // 4x per side would explode in m-D, so N means per-side and scales 2x for
  // m >= 2), depth + 2 for cantor.
  GeneratorSpec refined() const;
};

GeneratorSpec parse_generator_spec(const std::string& text);
AtomicMeasure generate(const GeneratorSpec& spec);

// Measure sequence for refinement studies: `levels` entries, each a refinement
// of the previous.
std::vector<AtomicMeasure> generate_levels(const GeneratorSpec& spec, int levels);

// ---- growth condition -----------------------------------------------------

struct GrowthSampler {
  int levels = 3;              // each level halves the minimum sampled radius
  double min_radius = 0.0;     // level-0 floor; 0 = diameter/8
  int max_centers = 256;       // atom-centered; subsampled deterministically
  std::uint64_t seed = 1;
};

// Estimates the growth constant sup mass(B)/r^n over atom-centered balls with
// radii on geometric grids in [h, diameter]. Pass iff the estimate is finite
// and stable across radius-refinement levels.
CheckReport growth_constant(const AtomicMeasure& measure, double n, const GrowthSampler& sampler);

// Convenience: the estimated constant itself (finest level sup).
double estimate_growth_constant(const AtomicMeasure& measure);

// ---- file I/O (schema fracmeasure/measure/v1) ------------------------------

void save_measure(const AtomicMeasure& measure, const std::string& path);
AtomicMeasure load_measure(const std::string& path);

}  // namespace fracmeasure

#endif
