#pragma once

#include <span>
#include <vector>

#include "ensemble_lens/pca.hpp"

namespace ensemble_lens {

struct GridBounds {
  double z1_min = 0.0;
  double z1_max = 1.0;
  double z2_min = 0.0;
  double z2_max = 1.0;

  friend bool operator==(const GridBounds&, const GridBounds&) = default;
};

// nx * ny vertices spanning bounds inclusively. Vertex (ix, iy) has row-major
// index iy * nx + ix.
struct GridSpec {
  std::size_t nx = 100;
  std::size_t ny = 100;
  GridBounds bounds;

  double dx() const noexcept { return (bounds.z1_max - bounds.z1_min) / static_cast<double>(nx - 1); }
  double dy() const noexcept { return (bounds.z2_max - bounds.z2_min) / static_cast<double>(ny - 1); }
  double x(std::size_t ix) const noexcept { return bounds.z1_min + static_cast<double>(ix) * dx(); }
  double y(std::size_t iy) const noexcept { return bounds.z2_min + static_cast<double>(iy) * dy(); }
  PlanePoint vertex(std::size_t ix, std::size_t iy) const noexcept { return {x(ix), y(iy)}; }
  std::size_t index(std::size_t ix, std::size_t iy) const noexcept { return iy * nx + ix; }
  std::size_t size() const noexcept { return nx * ny; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline constexpr std::size_t kMinGridVertices = 8;
inline constexpr double kBoundsMarginBandwidths = 3.0;

// Throws InvalidGrid when nx or ny < 8 or the bounds are degenerate.
void check_grid(const GridSpec& grid);

// Data bounding box expanded by margin * h on every side.
GridBounds padded_bounds(std::span<const PlanePoint> points, double h,
                         double margin = kBoundsMarginBandwidths);

struct DensityField {
  GridSpec grid;
  std::vector<double> values;  // row-major, grid.size() entries
  double bandwidth = 0.0;

  double cell_area() const noexcept { return grid.dx() * grid.dy(); }
  double at(std::size_t ix, std::size_t iy) const noexcept { return values[grid.index(ix, iy)]; }
  // Riemann sum of values * cell_area over all vertices.
  double mass() const noexcept;
};

// Isotropic Silverman bandwidth for 2-D data:
// h = M^(-1/6) * sqrt((s1^2 + s2^2) / 2), s_k the sample standard deviations.
// Throws DegeneratePoints when both deviations are zero, TooFewMembers when M < 3.
double silverman_bandwidth(std::span<const PlanePoint> points);

// Gaussian KDE with H = h^2 I evaluated at every grid vertex.
// Throws InvalidBandwidth (h <= 0) and InvalidGrid.
DensityField kde_grid(std::span<const PlanePoint> points, const GridSpec& grid, double h);

// KDE evaluated at the observations themselves (self-term included).
std::vector<double> sample_densities(std::span<const PlanePoint> points, double h);

// KDE at an arbitrary location.
double density_at(std::span<const PlanePoint> points, double h, PlanePoint at);

// Empirical-quantile HDR threshold: the k-th smallest density with
// k = floor((1 - p) M) + 1, so at least p*M samples satisfy d >= f_p.
// Throws InvalidCoverage unless 0 < p < 1.
double hdr_threshold(std::span<const double> densities, double coverage);

}  // namespace ensemble_lens
