#include "ensemble_lens/hdr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ensemble_lens {

std::size_t HdrLevelSet::inside_count() const noexcept {
  return static_cast<std::size_t>(std::count(inside_members.begin(), inside_members.end(), true));
}

HdrLevelSet extract_level_set(const DensityField& field, double threshold,
                              std::span<const double> sample_densities, double coverage) {
  if (!(threshold >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must be non-negative");
  }
  HdrLevelSet set;
  set.coverage = coverage;
  set.threshold = threshold;
  set.grid = field.grid;
  set.contours = marching_squares(field, threshold);
  auto components = label_components(field, threshold);
  set.region_labels = std::move(components.labels);
  set.region_count = components.count;
  set.inside_members.resize(sample_densities.size());
  for (std::size_t i = 0; i < sample_densities.size(); ++i) {
    set.inside_members[i] = sample_densities[i] >= threshold;
  }
  return set;
}

OutlierSet classify_outliers(std::span<const double> sample_densities, double outer_threshold) {
  OutlierSet out;
  for (std::size_t i = 0; i < sample_densities.size(); ++i) {
    if (sample_densities[i] < outer_threshold) out.push_back(i);
  }
  return out;
}

MedianPoint median_point(const DensityField& field) {
  if (field.values.empty()) throw Error(ErrorCode::InvalidGrid, "empty density field");
  // max_element returns the first maximum, i.e. the smallest row-major index.
  const auto it = std::max_element(field.values.begin(), field.values.end());
  const auto idx = static_cast<std::size_t>(it - field.values.begin());
  MedianPoint mp;
  mp.ix = idx % field.grid.nx;
  mp.iy = idx / field.grid.nx;
  mp.point = field.grid.vertex(mp.ix, mp.iy);
  return mp;
}

ClusterAssignment cluster_assignments(const HdrLevelSet& level_set,
                                      std::span<const PlanePoint> points) {
  const GridSpec& grid = level_set.grid;
  ClusterAssignment out(points.size());
  auto nearest_index = [&](double v, double lo, double step, std::size_t n) {
    const double r = std::round((v - lo) / step);
    return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(n - 1)));
  };

  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i >= level_set.inside_members.size() || !level_set.inside_members[i]) continue;
    const auto& p = points[i];
    const std::size_t ix = nearest_index(p.z1, grid.bounds.z1_min, grid.dx(), grid.nx);
    const std::size_t iy = nearest_index(p.z2, grid.bounds.z2_min, grid.dy(), grid.ny);
    const int label = level_set.region_labels[grid.index(ix, iy)];
    if (label >= 0) {
      out[i] = label;
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    int best_label = -1;
    for (std::size_t v = 0; v < level_set.region_labels.size(); ++v) {
      if (level_set.region_labels[v] < 0) continue;
      const auto q = grid.vertex(v % grid.nx, v / grid.nx);
      const double d = (q.z1 - p.z1) * (q.z1 - p.z1) + (q.z2 - p.z2) * (q.z2 - p.z2);
      if (d < best) {
        best = d;
        best_label = level_set.region_labels[v];
      }
    }
    if (best_label >= 0) out[i] = best_label;
  }
  return out;
}

}  // namespace ensemble_lens
