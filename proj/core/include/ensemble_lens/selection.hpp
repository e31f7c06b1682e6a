#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ensemble_lens/analysis.hpp"
#include "ensemble_lens/ensemble.hpp"

namespace ensemble_lens {

// Member selections shared by every linked view. All ranges are inclusive.

struct PcaRect {
  double z1_lo, z1_hi, z2_lo, z2_hi;
};
struct PcaLasso {
  std::vector<PlanePoint> polygon;  // closing vertex optional
};
// Hit when any sample k has t_k in [t_lo, t_hi] and curve[k] in [v_lo, v_hi].
struct TimeBox {
  double t_lo, t_hi, v_lo, v_hi;
};
struct ParamRange {
  std::string param;
  double lo, hi;
};
enum class TailSide { Upper, Lower };
// Curves strictly beyond the band envelope of the given coverage at sample `at`.
struct BandTail {
  TailSide side = TailSide::Upper;
  double coverage = kDefaultOuterCoverage;
  std::size_t at = 0;
};
struct OutlierFlag {};
struct ClusterId {
  int id = 0;
};

using Predicate =
    std::variant<PcaRect, PcaLasso, TimeBox, ParamRange, BandTail, OutlierFlag, ClusterId>;

// Replace discards the running set (the UI's "new selection" gesture).
enum class CombineMode { Replace, Intersect, Union, Subtract };

struct SelectionStep {
  Predicate predicate;
  CombineMode mode = CombineMode::Intersect;
};

struct Selection {
  std::vector<std::size_t> indices;  // sorted, unique
  std::vector<SelectionStep> provenance;

  std::size_t size() const noexcept { return indices.size(); }
};

struct SelectionContext {
  const AugmentedEnsemble& ensemble;
  const Analysis& analysis;
};

// Throws InvalidPredicate (lo > hi, short polygon, bad coverage),
// UnknownParam, TimeOutOfRange, InvalidCluster.
std::vector<std::size_t> evaluate_predicate(const SelectionContext& ctx, const Predicate& pred);

Selection select_all(std::size_t member_count);

Selection refine(const SelectionContext& ctx, const Selection& sel, const Predicate& pred,
                 CombineMode mode);

// Replays steps starting from the full member set.
Selection evaluate_provenance(const SelectionContext& ctx,
                              const std::vector<SelectionStep>& steps);

// Boundary-inclusive point-in-polygon test.
bool point_in_polygon(PlanePoint p, std::span<const PlanePoint> polygon);

// Linear interpolation between order statistics at zero-based rank (n-1) q.
double quantile_linear(std::vector<double> values, double q);
double interquartile_range(std::vector<double> values);

struct ParameterScore {
  std::string name;
  std::optional<double> score;  // 1 - IQR(selected) / IQR(all); undefined if IQR(all) = 0
};

struct SensitivityReport {
  std::vector<ParameterScore> scores;  // column order
  std::vector<std::size_t> ranking;    // defined columns, descending score, ties by column
};

// Throws SelectionTooSmall when fewer than 3 members are selected.
SensitivityReport concentration_scores(const ParameterTable& params,
                                       std::span<const std::size_t> selection);

struct BracketOverlay {
  double min = 0.0;
  double max = 0.0;
};

// Per-parameter extent of the selection. Throws SelectionTooSmall when empty.
std::vector<BracketOverlay> selection_bracket_overlays(const ParameterTable& params,
                                                       std::span<const std::size_t> selection);

}  // namespace ensemble_lens
