#pragma once

#include <string>

#include "ensemble_lens/analysis.hpp"

namespace ensemble_lens {

// Static vector rendering of the functional boxplot: outer band (dark red),
// inner band (light red), outlier curves (dashed), median (black).
std::string boxplot_svg(const AugmentedEnsemble& ensemble, const Analysis& analysis,
                        int width = 900, int height = 500);

}  // namespace ensemble_lens
