#include "ensemble_lens/density.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace ensemble_lens {

namespace {

void check_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::InvalidBandwidth, "bandwidth must be positive and finite");
  }
}

double kernel_norm(double h) { return 1.0 / (2.0 * std::numbers::pi * h * h); }

}  // namespace

void check_grid(const GridSpec& grid) {
  if (grid.nx < kMinGridVertices || grid.ny < kMinGridVertices) {
    throw Error(ErrorCode::InvalidGrid, "grid needs at least 8x8 vertices");
  }
  const auto& b = grid.bounds;
  if (!(b.z1_max > b.z1_min) || !(b.z2_max > b.z2_min) || !std::isfinite(b.z1_min) ||
      !std::isfinite(b.z1_max) || !std::isfinite(b.z2_min) || !std::isfinite(b.z2_max)) {
    throw Error(ErrorCode::InvalidGrid, "grid bounds are degenerate");
  }
}

GridBounds padded_bounds(std::span<const PlanePoint> points, double h, double margin) {
  check_bandwidth(h);
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "no points");
  GridBounds b{points[0].z1, points[0].z1, points[0].z2, points[0].z2};
  for (const auto& p : points) {
    b.z1_min = std::min(b.z1_min, p.z1);
    b.z1_max = std::max(b.z1_max, p.z1);
    b.z2_min = std::min(b.z2_min, p.z2);
    b.z2_max = std::max(b.z2_max, p.z2);
  }
  const double pad = margin * h;
  b.z1_min -= pad;
  b.z1_max += pad;
  b.z2_min -= pad;
  b.z2_max += pad;
  return b;
}

double DensityField::mass() const noexcept {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * cell_area();
}

double silverman_bandwidth(std::span<const PlanePoint> points) {
  const std::size_t m = points.size();
  if (m < kMinMembers) throw Error(ErrorCode::TooFewMembers, "need at least 3 points");
  double mean1 = 0.0, mean2 = 0.0;
  for (const auto& p : points) {
    mean1 += p.z1;
    mean2 += p.z2;
  }
  mean1 /= static_cast<double>(m);
  mean2 /= static_cast<double>(m);
  double ss1 = 0.0, ss2 = 0.0;
  for (const auto& p : points) {
    ss1 += (p.z1 - mean1) * (p.z1 - mean1);
    ss2 += (p.z2 - mean2) * (p.z2 - mean2);
  }
  const double var1 = ss1 / static_cast<double>(m - 1);
  const double var2 = ss2 / static_cast<double>(m - 1);
  if (!(var1 + var2 > 0.0)) {
    throw Error(ErrorCode::DegeneratePoints, "all points coincide");
  }
  // For d = 2 the prefactor (4 / (d + 2))^(1 / (d + 4)) is exactly 1.
  return std::pow(static_cast<double>(m), -1.0 / 6.0) * std::sqrt((var1 + var2) / 2.0);
}

DensityField kde_grid(std::span<const PlanePoint> points, const GridSpec& grid, double h) {
  check_bandwidth(h);
  check_grid(grid);
  const auto m = static_cast<Eigen::Index>(points.size());
  const auto nx = static_cast<Eigen::Index>(grid.nx);
  const auto ny = static_cast<Eigen::Index>(grid.ny);

  // The isotropic kernel factorizes per axis, so the grid is the product
  // EY (ny x M) * EX^T (M x nx).
  const double inv2h2 = 1.0 / (2.0 * h * h);
  Eigen::MatrixXd ex(nx, m);
  Eigen::MatrixXd ey(ny, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    for (Eigen::Index ix = 0; ix < nx; ++ix) {
      const double d = grid.x(static_cast<std::size_t>(ix)) - p.z1;
      ex(ix, i) = std::exp(-d * d * inv2h2);
    }
    for (Eigen::Index iy = 0; iy < ny; ++iy) {
      const double d = grid.y(static_cast<std::size_t>(iy)) - p.z2;
      ey(iy, i) = std::exp(-d * d * inv2h2);
    }
  }
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor prod = ey * ex.transpose();

  DensityField field;
  field.grid = grid;
  field.bandwidth = h;
  field.values.assign(prod.data(), prod.data() + prod.size());
  const double scale = m > 0 ? kernel_norm(h) / static_cast<double>(m) : 0.0;
  for (double& v : field.values) v *= scale;
  return field;
}

double density_at(std::span<const PlanePoint> points, double h, PlanePoint at) {
  check_bandwidth(h);
  const double inv2h2 = 1.0 / (2.0 * h * h);
  double sum = 0.0;
  for (const auto& p : points) {
    const double d1 = at.z1 - p.z1;
    const double d2 = at.z2 - p.z2;
    sum += std::exp(-(d1 * d1 + d2 * d2) * inv2h2);
  }
  return points.empty() ? 0.0 : sum * kernel_norm(h) / static_cast<double>(points.size());
}

std::vector<double> sample_densities(std::span<const PlanePoint> points, double h) {
  check_bandwidth(h);
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = density_at(points, h, points[i]);
  return out;
}

double hdr_threshold(std::span<const double> densities, double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw Error(ErrorCode::InvalidCoverage, "coverage must lie in (0, 1)");
  }
  if (densities.empty()) throw Error(ErrorCode::TooFewMembers, "no densities");
  std::vector<double> sorted(densities.begin(), densities.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  // Guard against (1 - p) * M landing just below an integer.
  auto k = static_cast<std::size_t>(std::floor((1.0 - coverage) * m + 1e-9));
  k = std::min(k, sorted.size() - 1);
  return sorted[k];
}

}  // namespace ensemble_lens
