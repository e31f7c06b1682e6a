#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ensemble_lens/contour.hpp"
#include "ensemble_lens/density.hpp"

namespace ensemble_lens {

inline constexpr double kInnerCoverage = 0.5;
inline constexpr double kDefaultOuterCoverage = 0.95;

// Highest density region {z : f(z) >= threshold} at one coverage level.
struct HdrLevelSet {
  double coverage = 0.0;
  double threshold = 0.0;
  GridSpec grid;
  std::vector<Polyline> contours;
  std::vector<int> region_labels;  // per grid vertex, -1 outside
  int region_count = 0;
  std::vector<bool> inside_members;  // sample density >= threshold

  bool empty() const noexcept { return contours.empty(); }
  std::size_t inside_count() const noexcept;
};

struct MedianPoint {
  PlanePoint point;
  std::size_t ix = 0;
  std::size_t iy = 0;
};

using OutlierSet = std::vector<std::size_t>;
using ClusterAssignment = std::vector<std::optional<int>>;

HdrLevelSet extract_level_set(const DensityField& field, double threshold,
                              std::span<const double> sample_densities,
                              double coverage);

// Members with density strictly below the threshold, ascending.
OutlierSet classify_outliers(std::span<const double> sample_densities,
                             double outer_threshold);

// Grid argmax; ties go to the smallest row-major index.
MedianPoint median_point(const DensityField& field);

// Region label of each inside member, taken at its nearest grid vertex. If
// that vertex is below the threshold, the nearest labelled vertex is used.
// Members outside the level set get nullopt.
ClusterAssignment cluster_assignments(const HdrLevelSet& level_set,
                                      std::span<const PlanePoint> points);

}  // namespace ensemble_lens
