#pragma once

#include <array>
#include <span>
#include <vector>

#include "ensemble_lens/ensemble.hpp"

namespace ensemble_lens {

struct PlanePoint {
  double z1 = 0.0;
  double z2 = 0.0;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

// Two-component principal basis of a curve ensemble.
//
// variance_spectrum holds the min(M-1, T) eigenvalues of the sample
// covariance (1/(M-1) normalization), descending. Each basis vector is
// sign-normalized so that its largest-magnitude component is positive; if
// several components tie in magnitude with mixed signs, the first nonzero
// component is made positive instead.
struct PcaPlane {
  std::vector<double> mean_curve;
  std::array<std::vector<double>, 2> basis;
  std::vector<double> variance_spectrum;
  double explained_variance = 0.0;

  std::size_t sample_count() const noexcept { return mean_curve.size(); }
};

struct Projection {
  PlanePoint point;
  double residual_norm = 0.0;
};

struct ProjectionSet {
  std::vector<PlanePoint> points;
  std::vector<double> residual_norms;
};

inline constexpr double kDegeneracyTolerance = 1e-14;

// Throws TooFewMembers (M < 3) and DegenerateEnsemble (total variance below
// 1e-14 * max|entry|^2).
PcaPlane fit_pca(const CurveMatrix& curves);

// Throws LengthMismatch.
Projection project(const PcaPlane& plane, std::span<const double> curve);
ProjectionSet project_all(const PcaPlane& plane, const CurveMatrix& curves);

std::vector<double> reconstruct(const PcaPlane& plane, PlanePoint point);

// (s1 + s2) / sum(s). Throws DegenerateEnsemble when the sum is not positive.
double explained_variance(std::span<const double> spectrum);
double explained_variance(const PcaPlane& plane);

// Flips v in place per the PcaPlane sign convention.
void normalize_sign(std::span<double> v);

}  // namespace ensemble_lens
