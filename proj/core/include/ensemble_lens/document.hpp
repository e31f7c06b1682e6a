#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ensemble_lens/analysis.hpp"
#include "ensemble_lens/selection.hpp"

namespace ensemble_lens {

using Json = nlohmann::ordered_json;

// Compact serialization with every double written as its shortest
// round-trip decimal form, so equal documents are equal byte strings.
std::string dump_json(const Json& value);

// {name, M, N, T, param_names, time, hash}
Json ensemble_summary(const AugmentedEnsemble& ensemble, const std::string& hash);

// The full analysis payload consumed by the explorer UI and written by
// `analyze`. Includes the member arrays so clients can brush locally.
Json analysis_document(const AugmentedEnsemble& ensemble, const Analysis& analysis);

// Config echo and ensemble hash recorded in an analysis document.
struct AnalysisDocumentHeader {
  AnalysisConfig config;
  std::string ensemble_hash;
};
// Throws ParseError on malformed documents.
AnalysisDocumentHeader parse_analysis_header(std::string_view document);

// Predicates use a "type" discriminator:
//   {"type":"pca_rect","z1_lo":..,"z1_hi":..,"z2_lo":..,"z2_hi":..}
//   {"type":"pca_lasso","polygon":[[z1,z2],...]}
//   {"type":"time_box","t_lo":..,"t_hi":..,"v_lo":..,"v_hi":..}
//   {"type":"param_range","param":"X1","lo":..,"hi":..}
//   {"type":"band_tail","side":"upper"|"lower","coverage":0.95,"at":k}  (at may be -1 = last sample)
//   {"type":"outlier"}
//   {"type":"cluster","id":k}
// Throws InvalidPredicate on anything else.
Predicate parse_predicate(const Json& j, std::size_t sample_count);
Json predicate_json(const Predicate& pred);

// selection.json / POST /api/selection body:
//   {"predicates":[{"predicate":{...},"mode":"intersect"|"union"|"subtract"|"replace"}, ...]}
// "mode" defaults to "intersect".
std::vector<SelectionStep> parse_selection(const Json& j, std::size_t sample_count);
Json selection_json(const Selection& sel);

Json sensitivity_json(const SensitivityReport& report);
Json brackets_json(const ParameterTable& params, const std::vector<BracketOverlay>& brackets);

}  // namespace ensemble_lens
