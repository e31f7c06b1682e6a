#pragma once

#include <map>
#include <vector>

#include "ensemble_lens/hdr.hpp"
#include "ensemble_lens/pca.hpp"

namespace ensemble_lens {

struct FunctionalBand {
  double coverage = 0.0;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct FunctionalBoxplot {
  std::vector<double> median_curve;
  FunctionalBand inner_band;
  FunctionalBand outer_band;
  OutlierSet outliers;
  ClusterAssignment clusters;
  double explained_variance = 0.0;
};

inline constexpr double kContainmentSlack = 1e-9;

// Pointwise min/max over the reconstructions of the given plane vertices.
// Throws EmptyLevelSet when no vertex is given.
FunctionalBand envelope(const PcaPlane& plane, std::span<const PlanePoint> vertices,
                        double coverage);

// Envelope pooled over every contour vertex of the level set.
FunctionalBand band_from_levelset(const PcaPlane& plane, const HdrLevelSet& level_set);

// One envelope per region label, built from the contours whose vertices fall
// in that region's neighbourhood (nearest labelled grid vertex).
std::map<int, FunctionalBand> region_bands(const PcaPlane& plane, const HdrLevelSet& level_set);

std::vector<double> median_curve(const PcaPlane& plane, const MedianPoint& median);

// Throws ContainmentViolation if the median leaves the inner band or the inner
// band leaves the outer band (beyond kContainmentSlack), and InvalidCoverage if
// the outer coverage does not exceed the inner one.
FunctionalBoxplot assemble_boxplot(const PcaPlane& plane, const MedianPoint& median,
                                   const HdrLevelSet& inner, const HdrLevelSet& outer,
                                   OutlierSet outliers, ClusterAssignment clusters);

}  // namespace ensemble_lens
