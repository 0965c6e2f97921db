#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lowfit {

inline constexpr const char* kVersion = "0.1.0";

enum class Err {
  AsymmetricInput,
  NegativeEntry,
  NonzeroDiagonal,
  NonFinite,
  DimensionMismatch,
  OddP,
  BadEpsilon,
  BadRange,
  NumericalFailure,
  DegreeExceeded,
  DegreeTooLow,
  FixingNotOnGrid,
  MissingTable,
  ZeroProbabilityEvent,
  DegreeExhausted,
  SizeTooLarge,
  CutLimitReached,
  AllAnchorsInfeasible,
  NotRegular,
  TooLarge,
  Infeasible,
  BadInput,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

// Deterministic RNG. The mt19937_64 engine is fully specified by the standard;
// all floating-point draws go through our own mappings so that every platform
// produces the same stream for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return eng_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  // Independent stream derived from the seed, not the current state.
  Rng derive(std::uint64_t salt) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double sq_norm(const Vec& a) { return dot(a, a); }

inline double sq_dist(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double dist(const Vec& a, const Vec& b) { return std::sqrt(sq_dist(a, b)); }

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(now - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Runs fn(i) for i in [0, count). Results must be written into per-index slots
// by the caller so the outcome does not depend on scheduling.
void parallel_for(int count, int parallelism, const std::function<void(int)>& fn);

}  // namespace lowfit
