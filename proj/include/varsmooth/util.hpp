#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace vs {

constexpr int kMaxDim = 3;
constexpr double kInf = std::numeric_limits<double>::infinity();

using IVec = std::array<int, kMaxDim>;
using RVec = std::array<double, kMaxDim>;

inline IVec ivec(int a, int b = 0, int c = 0) { return IVec{a, b, c}; }
inline RVec rvec(double a, double b = 0, double c = 0) { return RVec{a, b, c}; }

// Scalar field on R^n, evaluated at a point (only the first n entries are used).
using Field = std::function<double(const RVec&)>;

inline bool is_inf(double x) { return std::isinf(x); }

// l_p combination of a vector of nonnegative terms; p = inf gives the max.
inline double lp_aggregate(const std::vector<double>& terms, double p) {
  if (is_inf(p)) {
    double m = 0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  double s = 0;
  for (double t : terms) s += std::pow(t, p);
  return std::pow(s, 1.0 / p);
}

inline double ipow2(int e) { return std::ldexp(1.0, e); }  // 2^e

inline int checked_shift(int n, int k) {
  if (k < 0 || k > 30) throw std::invalid_argument("level out of range");
  return n << k;
}

// Deterministic splitmix-style generator; used where test families need
// reproducible draws independent of the platform's distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}
  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0,1)
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }
  double normal() {
    double u1 = std::max(uniform(), 1e-300), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  uint64_t state_;
};

int worker_count();

// Deterministic parallel map over [0, count): results are produced per index,
// so the outcome is independent of the thread schedule.
void parallel_for(int count, const std::function<void(int)>& fn);

std::string format_g17(double x);

}  // namespace vs
