#include "ensemble_lens/document.hpp"

#include <cmath>

#include "ensemble_lens/format.hpp"

namespace ensemble_lens {

namespace {

inline constexpr const char* kDocumentFormat = "ensemble-lens/analysis";
inline constexpr int kDocumentVersion = 1;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void dump_into(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out.push_back('{');
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out.push_back(',');
        first = false;
        out += Json(key).dump();
        out.push_back(':');
        dump_into(value, out);
      }
      out.push_back('}');
      break;
    }
    case Json::value_t::array: {
      out.push_back('[');
      bool first = true;
      for (const auto& value : j) {
        if (!first) out.push_back(',');
        first = false;
        dump_into(value, out);
      }
      out.push_back(']');
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      break;
    }
    default:
      out += j.dump();
      break;
  }
}

Json point_json(PlanePoint p) { return Json::array({p.z1, p.z2}); }

Json curve_json(std::span<const double> values) {
  Json arr = Json::array();
  for (double v : values) arr.push_back(v);
  return arr;
}

Json level_set_json(const HdrLevelSet& set) {
  Json contours = Json::array();
  for (const auto& line : set.contours) {
    Json pts = Json::array();
    for (const auto& p : line) pts.push_back(point_json(p));
    contours.push_back(std::move(pts));
  }
  Json j;
  j["coverage"] = set.coverage;
  j["threshold"] = set.threshold;
  j["region_count"] = set.region_count;
  j["inside_count"] = set.inside_count();
  j["contours"] = std::move(contours);
  return j;
}

Json band_json(const FunctionalBand& band) {
  Json j;
  j["coverage"] = band.coverage;
  j["lower"] = curve_json(band.lower);
  j["upper"] = curve_json(band.upper);
  return j;
}

[[noreturn]] void bad_predicate(const std::string& msg) {
  throw Error(ErrorCode::InvalidPredicate, msg);
}

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    bad_predicate(std::string("missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

}  // namespace

std::string dump_json(const Json& value) {
  std::string out;
  dump_into(value, out);
  return out;
}

Json ensemble_summary(const AugmentedEnsemble& e, const std::string& hash) {
  Json j;
  j["name"] = e.name;
  j["M"] = e.member_count();
  j["N"] = e.parameter_count();
  j["T"] = e.sample_count();
  j["param_names"] = e.params.names();
  j["time"] = curve_json(e.time.values);
  j["hash"] = hash;
  return j;
}

Json analysis_document(const AugmentedEnsemble& e, const Analysis& a) {
  Json doc;
  doc["format"] = kDocumentFormat;
  doc["version"] = kDocumentVersion;
  doc["ensemble"] = ensemble_summary(e, a.ensemble_hash);

  Json config;
  config["grid"] = Json::array({a.config.nx, a.config.ny});
  config["inner_coverage"] = kInnerCoverage;
  config["outer_coverage"] = a.config.outer_coverage;
  config["bandwidth"] = a.config.bandwidth ? Json(*a.config.bandwidth) : Json(nullptr);
  doc["config"] = std::move(config);

  doc["explained_variance"] = a.plane.explained_variance;

  Json plane;
  plane["mean"] = curve_json(a.plane.mean_curve);
  plane["basis"] = Json::array({curve_json(a.plane.basis[0]), curve_json(a.plane.basis[1])});
  plane["spectrum"] = curve_json(a.plane.variance_spectrum);
  doc["plane"] = std::move(plane);

  Json points = Json::array();
  for (const auto& p : a.projection.points) points.push_back(point_json(p));
  Json projection;
  projection["points"] = std::move(points);
  projection["residual_norms"] = curve_json(a.projection.residual_norms);
  projection["sample_densities"] = curve_json(a.sample_densities);
  doc["projection"] = std::move(projection);

  Json params = Json::array();
  Json curves = Json::array();
  for (std::size_t i = 0; i < e.member_count(); ++i) {
    params.push_back(curve_json(e.params.row(i)));
    curves.push_back(curve_json(e.curves.row(i)));
  }
  Json members;
  members["params"] = std::move(params);
  members["curves"] = std::move(curves);
  doc["members"] = std::move(members);

  const auto& g = a.field.grid;
  Json density;
  density["nx"] = g.nx;
  density["ny"] = g.ny;
  density["bounds"] = Json::array({g.bounds.z1_min, g.bounds.z1_max, g.bounds.z2_min, g.bounds.z2_max});
  density["bandwidth"] = a.bandwidth;
  density["cell_area"] = a.field.cell_area();
  density["values"] = curve_json(a.field.values);
  doc["density"] = std::move(density);

  Json levels;
  levels["inner"] = level_set_json(a.inner);
  levels["outer"] = level_set_json(a.outer);
  doc["level_sets"] = std::move(levels);

  Json median;
  median["point"] = point_json(a.median.point);
  median["index"] = Json::array({a.median.ix, a.median.iy});
  median["curve"] = curve_json(a.boxplot.median_curve);
  doc["median"] = std::move(median);

  Json bands;
  bands["inner"] = band_json(a.boxplot.inner_band);
  bands["outer"] = band_json(a.boxplot.outer_band);
  doc["bands"] = std::move(bands);

  doc["outliers"] = a.boxplot.outliers;
  Json clusters = Json::array();
  for (const auto& c : a.boxplot.clusters) clusters.push_back(c ? Json(*c) : Json(nullptr));
  doc["clusters"] = std::move(clusters);
  return doc;
}

AnalysisDocumentHeader parse_analysis_header(std::string_view document) {
  try {
    const auto doc = Json::parse(document);
    if (doc.value("format", "") != kDocumentFormat) {
      throw Error(ErrorCode::ParseError, "not an analysis document");
    }
    AnalysisDocumentHeader h;
    const auto& c = doc.at("config");
    h.config.nx = c.at("grid").at(0).get<std::size_t>();
    h.config.ny = c.at("grid").at(1).get<std::size_t>();
    h.config.outer_coverage = c.at("outer_coverage").get<double>();
    if (!c.at("bandwidth").is_null()) h.config.bandwidth = c.at("bandwidth").get<double>();
    h.ensemble_hash = doc.at("ensemble").at("hash").get<std::string>();
    return h;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("analysis document: ") + e.what());
  }
}

Predicate parse_predicate(const Json& j, std::size_t sample_count) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    bad_predicate("predicate needs a string 'type'");
  }
  const auto type = j["type"].get<std::string>();
  if (type == "pca_rect") {
    return PcaRect{number(j, "z1_lo"), number(j, "z1_hi"), number(j, "z2_lo"), number(j, "z2_hi")};
  }
  if (type == "pca_lasso") {
    if (!j.contains("polygon") || !j["polygon"].is_array()) bad_predicate("pca_lasso needs 'polygon'");
    PcaLasso lasso;
    for (const auto& v : j["polygon"]) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        bad_predicate("polygon vertices must be [z1, z2]");
      }
      lasso.polygon.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return lasso;
  }
  if (type == "time_box") {
    return TimeBox{number(j, "t_lo"), number(j, "t_hi"), number(j, "v_lo"), number(j, "v_hi")};
  }
  if (type == "param_range") {
    if (!j.contains("param") || !j["param"].is_string()) bad_predicate("param_range needs 'param'");
    return ParamRange{j["param"].get<std::string>(), number(j, "lo"), number(j, "hi")};
  }
  if (type == "band_tail") {
    BandTail tail;
    const auto side = j.value("side", "upper");
    if (side == "upper") {
      tail.side = TailSide::Upper;
    } else if (side == "lower") {
      tail.side = TailSide::Lower;
    } else {
      bad_predicate("band_tail side must be 'upper' or 'lower'");
    }
    tail.coverage = j.contains("coverage") ? number(j, "coverage") : kDefaultOuterCoverage;
    if (!j.contains("at") || !j["at"].is_number_integer()) bad_predicate("band_tail needs integer 'at'");
    const auto at = j["at"].get<long long>();
    if (at < 0) {
      if (at != -1 || sample_count == 0) {
        throw Error(ErrorCode::TimeOutOfRange, "band_tail 'at' must be a sample index or -1");
      }
      tail.at = sample_count - 1;
    } else {
      tail.at = static_cast<std::size_t>(at);
    }
    return tail;
  }
  if (type == "outlier") return OutlierFlag{};
  if (type == "cluster") {
    if (!j.contains("id") || !j["id"].is_number_integer()) bad_predicate("cluster needs integer 'id'");
    return ClusterId{j["id"].get<int>()};
  }
  bad_predicate("unknown predicate type '" + type + "'");
}

Json predicate_json(const Predicate& pred) {
  return std::visit(
      overloaded{
          [](const PcaRect& r) {
            return Json{{"type", "pca_rect"}, {"z1_lo", r.z1_lo}, {"z1_hi", r.z1_hi},
                        {"z2_lo", r.z2_lo}, {"z2_hi", r.z2_hi}};
          },
          [](const PcaLasso& l) {
            Json poly = Json::array();
            for (const auto& p : l.polygon) poly.push_back(point_json(p));
            return Json{{"type", "pca_lasso"}, {"polygon", poly}};
          },
          [](const TimeBox& b) {
            return Json{{"type", "time_box"}, {"t_lo", b.t_lo}, {"t_hi", b.t_hi},
                        {"v_lo", b.v_lo}, {"v_hi", b.v_hi}};
          },
          [](const ParamRange& r) {
            return Json{{"type", "param_range"}, {"param", r.param}, {"lo", r.lo}, {"hi", r.hi}};
          },
          [](const BandTail& b) {
            return Json{{"type", "band_tail"},
                        {"side", b.side == TailSide::Upper ? "upper" : "lower"},
                        {"coverage", b.coverage},
                        {"at", b.at}};
          },
          [](const OutlierFlag&) { return Json{{"type", "outlier"}}; },
          [](const ClusterId& c) { return Json{{"type", "cluster"}, {"id", c.id}}; },
      },
      pred);
}

namespace {

CombineMode parse_mode(const std::string& s) {
  if (s == "intersect") return CombineMode::Intersect;
  if (s == "union") return CombineMode::Union;
  if (s == "subtract") return CombineMode::Subtract;
  if (s == "replace" || s == "new") return CombineMode::Replace;
  bad_predicate("unknown combine mode '" + s + "'");
}

const char* mode_name(CombineMode m) {
  switch (m) {
    case CombineMode::Intersect: return "intersect";
    case CombineMode::Union: return "union";
    case CombineMode::Subtract: return "subtract";
    case CombineMode::Replace: return "replace";
  }
  return "intersect";
}

}  // namespace

std::vector<SelectionStep> parse_selection(const Json& j, std::size_t sample_count) {
  if (!j.is_object()) bad_predicate("selection must be an object");
  std::vector<SelectionStep> steps;
  if (!j.contains("predicates")) return steps;
  if (!j["predicates"].is_array()) bad_predicate("'predicates' must be an array");
  for (const auto& item : j["predicates"]) {
    if (!item.is_object() || !item.contains("predicate")) {
      bad_predicate("each step needs a 'predicate'");
    }
    SelectionStep step{parse_predicate(item["predicate"], sample_count), CombineMode::Intersect};
    if (item.contains("mode")) {
      if (!item["mode"].is_string()) bad_predicate("'mode' must be a string");
      step.mode = parse_mode(item["mode"].get<std::string>());
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

Json selection_json(const Selection& sel) {
  Json steps = Json::array();
  for (const auto& s : sel.provenance) {
    steps.push_back(Json{{"predicate", predicate_json(s.predicate)}, {"mode", mode_name(s.mode)}});
  }
  return Json{{"indices", sel.indices}, {"predicates", steps}};
}

Json sensitivity_json(const SensitivityReport& report) {
  Json scores = Json::array();
  for (const auto& s : report.scores) {
    scores.push_back(Json{{"param", s.name}, {"score", s.score ? Json(*s.score) : Json(nullptr)}});
  }
  Json ranking = Json::array();
  for (auto j : report.ranking) ranking.push_back(report.scores[j].name);
  return Json{{"scores", scores}, {"ranking", ranking}};
}

Json brackets_json(const ParameterTable& params, const std::vector<BracketOverlay>& brackets) {
  Json out = Json::array();
  for (std::size_t j = 0; j < brackets.size(); ++j) {
    out.push_back(Json{{"param", params.names()[j]}, {"min", brackets[j].min}, {"max", brackets[j].max}});
  }
  return out;
}

}  // namespace ensemble_lens
