#pragma once

#include <vector>

#include "ensemble_lens/density.hpp"

namespace ensemble_lens {

// Closed polyline: front() == back(), at least 3 distinct vertices.
using Polyline = std::vector<PlanePoint>;

// Iso-contours of a gridded field at `level` by marching squares with linear
// interpolation along cell edges. Vertices with value >= level are "inside".
// The grid is conceptually surrounded by a ring of outside vertices placed on
// the boundary, so every contour closes (along the grid edge if needed).
// Saddle cells are resolved by the cell-center average: an average >= level
// joins the two inside corners.
std::vector<Polyline> marching_squares(const DensityField& field, double level);

struct ComponentLabels {
  std::vector<int> labels;  // per vertex, -1 when below level
  int count = 0;
};

// 8-connected components of vertices with value >= level, labelled 0..R-1 in
// order of their smallest row-major vertex index.
ComponentLabels label_components(const DensityField& field, double level);

}  // namespace ensemble_lens
