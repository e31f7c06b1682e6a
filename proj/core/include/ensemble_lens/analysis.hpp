#pragma once

#include <optional>
#include <string>

#include "ensemble_lens/ensemble.hpp"
#include "ensemble_lens/functional.hpp"
#include "ensemble_lens/hdr.hpp"
#include "ensemble_lens/pca.hpp"

namespace ensemble_lens {

struct AnalysisConfig {
  std::size_t nx = 100;
  std::size_t ny = 100;
  double outer_coverage = kDefaultOuterCoverage;
  std::optional<double> bandwidth;  // Silverman when unset

  // Throws InvalidCoverage (outer not in (0.5, 1)), InvalidGrid, InvalidBandwidth.
  void validate() const;

  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

// Everything the PCA / density / HDR pipeline derives from one ensemble:
// fit plane -> project -> KDE on padded grid -> inner and outer HDR ->
// median, outliers, clusters -> functional boxplot.
struct Analysis {
  AnalysisConfig config;
  std::string ensemble_hash;
  PcaPlane plane;
  ProjectionSet projection;
  double bandwidth = 0.0;
  std::vector<double> sample_densities;
  DensityField field;
  HdrLevelSet inner;
  HdrLevelSet outer;
  MedianPoint median;
  FunctionalBoxplot boxplot;
};

// ensemble_hash defaults to content_hash(ensemble).
Analysis analyze(const AugmentedEnsemble& ensemble, const AnalysisConfig& config = {},
                 std::optional<std::string> ensemble_hash = std::nullopt);

// Level set / band at an arbitrary coverage over the same density field.
// The inner and outer levels are returned as computed by analyze().
HdrLevelSet level_set_at(const Analysis& analysis, double coverage);
FunctionalBand band_at(const Analysis& analysis, double coverage);

}  // namespace ensemble_lens
