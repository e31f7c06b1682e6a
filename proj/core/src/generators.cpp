#include "ensemble_lens/generators.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ensemble_lens {

namespace {

void check_count(std::size_t n) {
  if (n < kMinMembers) {
    throw Error(ErrorCode::InvalidArgument,
                "member count must be >= 3, got " + std::to_string(n));
  }
}

}  // namespace

double campbell::evaluate(std::span<const double, 4> x, double tau) noexcept {
  const double denom = kK1 * x[0] * x[0] + x[2] * x[2];
  double peak = 0.0;
  if (denom >= kDenominatorFloor) {
    const double d = tau - 10.0 * x[1];
    peak = x[0] * std::exp(-(d * d) / denom);
  }
  return 10.0 + peak + x[1] * x[3] * std::exp(kK2 * x[0] * tau);
}

AugmentedEnsemble gen_oscillating_tangents(std::size_t n, std::uint64_t seed,
                                           std::size_t t_samples) {
  check_count(n);
  if (t_samples < kMinTimeSamples) {
    throw Error(ErrorCode::InvalidArgument,
                "t_samples must be >= 8, got " + std::to_string(t_samples));
  }
  AugmentedEnsemble e;
  e.name = "oscillating-tangents";
  e.time.values.resize(t_samples);
  for (std::size_t k = 0; k < t_samples; ++k) {
    e.time.values[k] = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(t_samples);
  }

  SplitMix64 rng(seed);
  std::vector<double> params(n * 2);
  CurveMatrix curves(n, t_samples);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = rng.uniform(oscillating::kLow, oscillating::kHigh);
    const double x2 = rng.uniform(oscillating::kLow, oscillating::kHigh);
    params[2 * i] = x1;
    params[2 * i + 1] = x2;
    const double a1 = std::atan(x1);
    const double a2 = std::atan(x2);
    for (std::size_t k = 0; k < t_samples; ++k) {
      const double t = e.time.values[k];
      curves(i, k) = a1 * std::cos(t) + a2 * std::sin(t);
    }
  }
  e.curves = std::move(curves);
  e.params = ParameterTable({"X1", "X2"}, n, std::move(params));
  return e;
}

AugmentedEnsemble gen_campbell1d(std::size_t n, std::uint64_t seed) {
  check_count(n);
  AugmentedEnsemble e;
  e.name = "campbell1d";
  for (int tau = campbell::kTauMin; tau <= campbell::kTauMax; ++tau) {
    e.time.values.push_back(static_cast<double>(tau));
  }
  const std::size_t t_count = e.time.values.size();

  SplitMix64 rng(seed);
  std::vector<double> params(n * 4);
  CurveMatrix curves(n, t_count);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double, 4> x(params.data() + 4 * i, 4);
    for (auto& xj : x) xj = rng.uniform(campbell::kLow, campbell::kHigh);
    for (std::size_t k = 0; k < t_count; ++k) {
      curves(i, k) = campbell::evaluate(x, e.time.values[k]);
    }
  }
  e.curves = std::move(curves);
  e.params = ParameterTable({"X1", "X2", "X3", "X4"}, n, std::move(params));
  return e;
}

AugmentedEnsemble generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::OscillatingTangents:
      return gen_oscillating_tangents(spec.n, spec.seed, spec.t_samples);
    case GeneratorKind::Campbell1d:
      return gen_campbell1d(spec.n, spec.seed);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown generator kind");
}

}  // namespace ensemble_lens
