#pragma once

#include <cstdint>
#include <span>

#include "ensemble_lens/ensemble.hpp"

namespace ensemble_lens {

// SplitMix64 stream. The exact bit recipe is part of the output contract:
// generated ensembles are reproducible across implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // u in [0, 1) from the top 53 bits.
  double unit() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) noexcept { return a + unit() * (b - a); }

 private:
  std::uint64_t state_;
};

enum class GeneratorKind { OscillatingTangents, Campbell1d };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::OscillatingTangents;
  std::size_t n = 400;
  std::uint64_t seed = 0;
  std::size_t t_samples = 100;  // oscillating tangents only
};

inline constexpr std::size_t kMinTimeSamples = 8;

namespace oscillating {
inline constexpr double kLow = -7.0;
inline constexpr double kHigh = 7.0;
}  // namespace oscillating

namespace campbell {
inline constexpr double kLow = -1.0;
inline constexpr double kHigh = 5.0;
inline constexpr double kK1 = 60.0;
inline constexpr double kK2 = 0.002;
inline constexpr double kDenominatorFloor = 1e-12;
inline constexpr int kTauMin = -90;
inline constexpr int kTauMax = 90;

// 10 + X1 exp(-(tau - 10 X2)^2 / (k1 X1^2 + X3^2)) + X2 X4 exp(k2 X1 tau).
// The peak term is dropped when its denominator is below kDenominatorFloor.
double evaluate(std::span<const double, 4> x, double tau) noexcept;
}  // namespace campbell

// y(t) = atan(X1) cos t + atan(X2) sin t on t_k = 2 pi k / t_samples,
// X1, X2 ~ U[-7, 7]. Parameter columns "X1", "X2".
AugmentedEnsemble gen_oscillating_tangents(std::size_t n, std::uint64_t seed,
                                           std::size_t t_samples = 100);

// Campbell 1D curves on tau = -90..90 (T = 181), X1..X4 ~ U[-1, 5].
AugmentedEnsemble gen_campbell1d(std::size_t n, std::uint64_t seed);

// Dispatches on spec.kind. Throws InvalidArgument on n < 3 or t_samples < 8.
AugmentedEnsemble generate(const GeneratorSpec& spec);

}  // namespace ensemble_lens
