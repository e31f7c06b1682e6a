#include "ensemble_lens/functional.hpp"

#include <algorithm>
#include <limits>

namespace ensemble_lens {

FunctionalBand envelope(const PcaPlane& plane, std::span<const PlanePoint> vertices,
                        double coverage) {
  if (vertices.empty()) throw Error(ErrorCode::EmptyLevelSet, "no contour vertices");
  const std::size_t t = plane.sample_count();
  FunctionalBand band;
  band.coverage = coverage;
  band.lower.assign(t, std::numeric_limits<double>::infinity());
  band.upper.assign(t, -std::numeric_limits<double>::infinity());
  for (const auto& z : vertices) {
    for (std::size_t k = 0; k < t; ++k) {
      const double c = plane.mean_curve[k] + z.z1 * plane.basis[0][k] + z.z2 * plane.basis[1][k];
      band.lower[k] = std::min(band.lower[k], c);
      band.upper[k] = std::max(band.upper[k], c);
    }
  }
  return band;
}

FunctionalBand band_from_levelset(const PcaPlane& plane, const HdrLevelSet& level_set) {
  std::vector<PlanePoint> pooled;
  for (const auto& contour : level_set.contours) {
    pooled.insert(pooled.end(), contour.begin(), contour.end());
  }
  if (pooled.empty()) {
    throw Error(ErrorCode::EmptyLevelSet,
                "level set at coverage " + std::to_string(level_set.coverage) + " has no contour");
  }
  return envelope(plane, pooled, level_set.coverage);
}

std::map<int, FunctionalBand> region_bands(const PcaPlane& plane, const HdrLevelSet& level_set) {
  const GridSpec& grid = level_set.grid;
  std::map<int, std::vector<PlanePoint>> by_region;
  for (const auto& contour : level_set.contours) {
    const PlanePoint& p = contour.front();
    double best = std::numeric_limits<double>::infinity();
    int label = -1;
    for (std::size_t v = 0; v < level_set.region_labels.size(); ++v) {
      if (level_set.region_labels[v] < 0) continue;
      const auto q = grid.vertex(v % grid.nx, v / grid.nx);
      const double d = (q.z1 - p.z1) * (q.z1 - p.z1) + (q.z2 - p.z2) * (q.z2 - p.z2);
      if (d < best) {
        best = d;
        label = level_set.region_labels[v];
      }
    }
    if (label < 0) continue;
    auto& pts = by_region[label];
    pts.insert(pts.end(), contour.begin(), contour.end());
  }
  std::map<int, FunctionalBand> out;
  for (const auto& [label, pts] : by_region) {
    out.emplace(label, envelope(plane, pts, level_set.coverage));
  }
  return out;
}

std::vector<double> median_curve(const PcaPlane& plane, const MedianPoint& median) {
  return reconstruct(plane, median.point);
}

FunctionalBoxplot assemble_boxplot(const PcaPlane& plane, const MedianPoint& median,
                                   const HdrLevelSet& inner, const HdrLevelSet& outer,
                                   OutlierSet outliers, ClusterAssignment clusters) {
  if (!(outer.coverage > inner.coverage)) {
    throw Error(ErrorCode::InvalidCoverage, "outer coverage must exceed the inner coverage");
  }
  FunctionalBoxplot box;
  box.median_curve = median_curve(plane, median);
  box.inner_band = band_from_levelset(plane, inner);
  box.outer_band = band_from_levelset(plane, outer);
  box.outliers = std::move(outliers);
  box.clusters = std::move(clusters);
  box.explained_variance = plane.explained_variance;

  const auto& in = box.inner_band;
  const auto& out = box.outer_band;
  for (std::size_t k = 0; k < plane.sample_count(); ++k) {
    const double m = box.median_curve[k];
    if (m < in.lower[k] - kContainmentSlack || m > in.upper[k] + kContainmentSlack) {
      throw Error(ErrorCode::ContainmentViolation,
                  "median leaves the inner band at sample " + std::to_string(k));
    }
    if (in.lower[k] < out.lower[k] - kContainmentSlack ||
        in.upper[k] > out.upper[k] + kContainmentSlack) {
      throw Error(ErrorCode::ContainmentViolation,
                  "inner band leaves the outer band at sample " + std::to_string(k));
    }
  }
  return box;
}

}  // namespace ensemble_lens
