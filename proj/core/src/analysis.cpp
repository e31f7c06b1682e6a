#include "ensemble_lens/analysis.hpp"

#include <cmath>

#include "ensemble_lens/density.hpp"
#include "ensemble_lens/io.hpp"

namespace ensemble_lens {

void AnalysisConfig::validate() const {
  if (!(outer_coverage > kInnerCoverage && outer_coverage < 1.0)) {
    throw Error(ErrorCode::InvalidCoverage, "outer coverage must lie in (0.5, 1)");
  }
  if (nx < kMinGridVertices || ny < kMinGridVertices) {
    throw Error(ErrorCode::InvalidGrid, "grid needs at least 8x8 vertices");
  }
  if (bandwidth && !(*bandwidth > 0.0 && std::isfinite(*bandwidth))) {
    throw Error(ErrorCode::InvalidBandwidth, "bandwidth override must be positive");
  }
}

Analysis analyze(const AugmentedEnsemble& ensemble, const AnalysisConfig& config,
                 std::optional<std::string> ensemble_hash) {
  config.validate();
  require_valid(ensemble);

  Analysis a;
  a.config = config;
  a.ensemble_hash = ensemble_hash ? *std::move(ensemble_hash) : content_hash(ensemble);
  a.plane = fit_pca(ensemble.curves);
  a.projection = project_all(a.plane, ensemble.curves);
  const auto& points = a.projection.points;

  a.bandwidth = config.bandwidth ? *config.bandwidth : silverman_bandwidth(points);
  a.sample_densities = sample_densities(points, a.bandwidth);

  GridSpec grid;
  grid.nx = config.nx;
  grid.ny = config.ny;
  grid.bounds = padded_bounds(points, a.bandwidth);
  a.field = kde_grid(points, grid, a.bandwidth);

  const double inner_threshold = hdr_threshold(a.sample_densities, kInnerCoverage);
  const double outer_threshold = hdr_threshold(a.sample_densities, config.outer_coverage);
  a.inner = extract_level_set(a.field, inner_threshold, a.sample_densities, kInnerCoverage);
  a.outer = extract_level_set(a.field, outer_threshold, a.sample_densities,
                              config.outer_coverage);
  a.median = median_point(a.field);

  a.boxplot = assemble_boxplot(a.plane, a.median, a.inner, a.outer,
                               classify_outliers(a.sample_densities, outer_threshold),
                               cluster_assignments(a.inner, points));
  return a;
}

HdrLevelSet level_set_at(const Analysis& a, double coverage) {
  if (coverage == a.inner.coverage) return a.inner;
  if (coverage == a.outer.coverage) return a.outer;
  const double threshold = hdr_threshold(a.sample_densities, coverage);
  return extract_level_set(a.field, threshold, a.sample_densities, coverage);
}

FunctionalBand band_at(const Analysis& a, double coverage) {
  if (coverage == a.boxplot.inner_band.coverage) return a.boxplot.inner_band;
  if (coverage == a.boxplot.outer_band.coverage) return a.boxplot.outer_band;
  return band_from_levelset(a.plane, level_set_at(a, coverage));
}

}  // namespace ensemble_lens
