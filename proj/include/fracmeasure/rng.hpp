#ifndef FRACMEASURE_RNG_HPP
#define FRACMEASURE_RNG_HPP

#include <cstdint>
#include <cstddef>

namespace fracmeasure {

// Deterministic, platform-independent generator (splitmix64). Reports must be
// byte-identical across reruns, so we avoid std:: distributions whose output
// is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform integer in [0, n), n > 0
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
  }

  bool coin() { return (next_u64() & 1u) != 0; }

 private:
  std::uint64_t state_;
};

// Stable per-item seed derivation: mixes a master seed with an index so that
// trials stay reproducible regardless of execution order or worker count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  Rng r(master ^ (0x9e3779b97f4a7c15ULL + index * 0xd1342543de82ef95ULL));
  return r.next_u64();
}

}  // namespace fracmeasure

#endif
