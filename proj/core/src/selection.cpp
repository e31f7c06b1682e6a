#include "ensemble_lens/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ensemble_lens {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_range(double lo, double hi, const char* what) {
  if (!(lo <= hi)) {
    throw Error(ErrorCode::InvalidPredicate, std::string(what) + ": lo must not exceed hi");
  }
}

std::vector<PlanePoint> open_polygon(const std::vector<PlanePoint>& poly) {
  std::vector<PlanePoint> open(poly);
  if (open.size() > 1 && open.front() == open.back()) open.pop_back();
  if (open.size() < 3) {
    throw Error(ErrorCode::InvalidPredicate, "lasso polygon needs at least 3 vertices");
  }
  return open;
}

bool on_segment(PlanePoint p, PlanePoint a, PlanePoint b) {
  const double cross = (b.z1 - a.z1) * (p.z2 - a.z2) - (b.z2 - a.z2) * (p.z1 - a.z1);
  const double scale = std::max({std::abs(b.z1 - a.z1), std::abs(b.z2 - a.z2), 1.0});
  if (std::abs(cross) > 1e-12 * scale * scale) return false;
  return p.z1 >= std::min(a.z1, b.z1) && p.z1 <= std::max(a.z1, b.z1) &&
         p.z2 >= std::min(a.z2, b.z2) && p.z2 <= std::max(a.z2, b.z2);
}

std::vector<std::size_t> combine(const std::vector<std::size_t>& current,
                                 const std::vector<std::size_t>& hit, CombineMode mode) {
  std::vector<std::size_t> out;
  switch (mode) {
    case CombineMode::Replace:
      return hit;
    case CombineMode::Intersect:
      std::set_intersection(current.begin(), current.end(), hit.begin(), hit.end(),
                            std::back_inserter(out));
      break;
    case CombineMode::Union:
      std::set_union(current.begin(), current.end(), hit.begin(), hit.end(),
                     std::back_inserter(out));
      break;
    case CombineMode::Subtract:
      std::set_difference(current.begin(), current.end(), hit.begin(), hit.end(),
                          std::back_inserter(out));
      break;
  }
  return out;
}

}  // namespace

bool point_in_polygon(PlanePoint p, std::span<const PlanePoint> poly) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if (on_segment(p, a, b)) return true;
    if ((a.z2 > p.z2) != (b.z2 > p.z2)) {
      const double x = a.z1 + (p.z2 - a.z2) * (b.z1 - a.z1) / (b.z2 - a.z2);
      if (p.z1 < x) inside = !inside;
    }
  }
  return inside;
}

std::vector<std::size_t> evaluate_predicate(const SelectionContext& ctx, const Predicate& pred) {
  const auto& e = ctx.ensemble;
  const auto& points = ctx.analysis.projection.points;
  const std::size_t m = e.member_count();
  std::vector<std::size_t> hit;

  std::visit(
      overloaded{
          [&](const PcaRect& r) {
            require_range(r.z1_lo, r.z1_hi, "pca_rect z1");
            require_range(r.z2_lo, r.z2_hi, "pca_rect z2");
            for (std::size_t i = 0; i < m; ++i) {
              const auto& p = points[i];
              if (p.z1 >= r.z1_lo && p.z1 <= r.z1_hi && p.z2 >= r.z2_lo && p.z2 <= r.z2_hi) {
                hit.push_back(i);
              }
            }
          },
          [&](const PcaLasso& l) {
            const auto poly = open_polygon(l.polygon);
            for (std::size_t i = 0; i < m; ++i) {
              if (point_in_polygon(points[i], poly)) hit.push_back(i);
            }
          },
          [&](const TimeBox& b) {
            require_range(b.t_lo, b.t_hi, "time_box t");
            require_range(b.v_lo, b.v_hi, "time_box v");
            const auto& t = e.time.values;
            for (std::size_t i = 0; i < m; ++i) {
              const auto curve = e.curves.row(i);
              for (std::size_t k = 0; k < t.size(); ++k) {
                if (t[k] >= b.t_lo && t[k] <= b.t_hi && curve[k] >= b.v_lo && curve[k] <= b.v_hi) {
                  hit.push_back(i);
                  break;
                }
              }
            }
          },
          [&](const ParamRange& r) {
            const auto col = e.params.find(r.param);
            if (!col) throw Error(ErrorCode::UnknownParam, "unknown parameter '" + r.param + "'");
            require_range(r.lo, r.hi, "param_range");
            for (std::size_t i = 0; i < m; ++i) {
              const double v = e.params(i, *col);
              if (v >= r.lo && v <= r.hi) hit.push_back(i);
            }
          },
          [&](const BandTail& b) {
            if (b.at >= e.sample_count()) {
              throw Error(ErrorCode::TimeOutOfRange,
                          "sample index " + std::to_string(b.at) + " outside the time axis");
            }
            if (!(b.coverage > 0.0 && b.coverage < 1.0)) {
              throw Error(ErrorCode::InvalidPredicate, "band coverage must lie in (0, 1)");
            }
            const auto band = band_at(ctx.analysis, b.coverage);
            for (std::size_t i = 0; i < m; ++i) {
              const double v = e.curves(i, b.at);
              const bool beyond =
                  b.side == TailSide::Upper ? v > band.upper[b.at] : v < band.lower[b.at];
              if (beyond) hit.push_back(i);
            }
          },
          [&](const OutlierFlag&) { hit = ctx.analysis.boxplot.outliers; },
          [&](const ClusterId& c) {
            if (c.id < 0 || c.id >= ctx.analysis.inner.region_count) {
              throw Error(ErrorCode::InvalidCluster, "no cluster " + std::to_string(c.id));
            }
            const auto& clusters = ctx.analysis.boxplot.clusters;
            for (std::size_t i = 0; i < clusters.size(); ++i) {
              if (clusters[i] && *clusters[i] == c.id) hit.push_back(i);
            }
          },
      },
      pred);
  return hit;
}

Selection select_all(std::size_t member_count) {
  Selection sel;
  sel.indices.resize(member_count);
  std::iota(sel.indices.begin(), sel.indices.end(), std::size_t{0});
  return sel;
}

Selection refine(const SelectionContext& ctx, const Selection& sel, const Predicate& pred,
                 CombineMode mode) {
  Selection out;
  out.indices = combine(sel.indices, evaluate_predicate(ctx, pred), mode);
  out.provenance = sel.provenance;
  out.provenance.push_back({pred, mode});
  return out;
}

Selection evaluate_provenance(const SelectionContext& ctx,
                              const std::vector<SelectionStep>& steps) {
  Selection sel = select_all(ctx.ensemble.member_count());
  for (const auto& step : steps) sel = refine(ctx, sel, step.predicate, step.mode);
  return sel;
}

double quantile_linear(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of empty set");
  std::sort(values.begin(), values.end());
  const double rank = static_cast<double>(values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double interquartile_range(std::vector<double> values) {
  return quantile_linear(values, 0.75) - quantile_linear(values, 0.25);
}

SensitivityReport concentration_scores(const ParameterTable& params,
                                       std::span<const std::size_t> selection) {
  if (selection.size() < 3) {
    throw Error(ErrorCode::SelectionTooSmall,
                "sensitivity needs at least 3 selected members, got " +
                    std::to_string(selection.size()));
  }
  SensitivityReport report;
  for (std::size_t j = 0; j < params.cols(); ++j) {
    const auto all = params.column(j);
    std::vector<double> chosen;
    chosen.reserve(selection.size());
    for (auto i : selection) chosen.push_back(all.at(i));
    ParameterScore s{params.names()[j], std::nullopt};
    const double iqr_all = interquartile_range(all);
    if (iqr_all > 0.0) s.score = 1.0 - interquartile_range(std::move(chosen)) / iqr_all;
    report.scores.push_back(std::move(s));
    if (report.scores.back().score) report.ranking.push_back(j);
  }
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [&](std::size_t a, std::size_t b) {
                     return *report.scores[a].score > *report.scores[b].score;
                   });
  return report;
}

std::vector<BracketOverlay> selection_bracket_overlays(const ParameterTable& params,
                                                       std::span<const std::size_t> selection) {
  if (selection.empty()) throw Error(ErrorCode::SelectionTooSmall, "empty selection");
  std::vector<BracketOverlay> out(params.cols());
  for (std::size_t j = 0; j < params.cols(); ++j) {
    out[j] = {params(selection[0], j), params(selection[0], j)};
    for (auto i : selection) {
      out[j].min = std::min(out[j].min, params(i, j));
      out[j].max = std::max(out[j].max, params(i, j));
    }
  }
  return out;
}

}  // namespace ensemble_lens
