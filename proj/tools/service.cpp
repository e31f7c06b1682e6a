#include "service.hpp"

#include <charconv>
#include <cmath>

#include <httplib.h>

#include "ensemble_lens/document.hpp"
#include "ensemble_lens/format.hpp"
#include "ensemble_lens/selection.hpp"

namespace ensemble_lens::service {

namespace {

constexpr const char* kLandingPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>ensemble-lens</title></head>
<body>
<h1>ensemble-lens</h1>
<p>Analysis service is running. Endpoints:</p>
<ul>
<li><a href="/api/ensemble">GET /api/ensemble</a></li>
<li><a href="/api/analysis">GET /api/analysis?outer=0.95&amp;grid=100,100</a></li>
<li>POST /api/selection</li>
</ul>
</body></html>
)";

double parse_number(const std::string& text, const char* what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + ": '" + text + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& text, const char* what) {
  std::size_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + ": '" + text + "'");
  }
  return v;
}

Response error_response(const Error& e) {
  return {status_for(e.code()), dump_json(Json{{"error", std::string(to_string(e.code()))},
                                               {"message", e.what()}})};
}

std::string cache_key(const AnalysisConfig& c, const std::string& hash) {
  return format_double(c.outer_coverage) + "|" + std::to_string(c.nx) + "x" +
         std::to_string(c.ny) + "|" + (c.bandwidth ? format_double(*c.bandwidth) : "silverman") +
         "|" + hash;
}

AnalysisConfig config_from_json(const Json& j) {
  Query q;
  if (j.contains("outer")) q["outer"] = format_double(j["outer"].get<double>());
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    q["grid"] = std::to_string(g.at(0).get<std::size_t>()) + "," +
                std::to_string(g.at(1).get<std::size_t>());
  }
  if (j.contains("bandwidth") && !j["bandwidth"].is_null()) {
    q["bandwidth"] = format_double(j["bandwidth"].get<double>());
  }
  return AnalysisService::parse_query(q);
}

}  // namespace

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCoverage:
      return 422;
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidGrid:
    case ErrorCode::InvalidBandwidth:
    case ErrorCode::InvalidPredicate:
    case ErrorCode::UnknownParam:
    case ErrorCode::TimeOutOfRange:
    case ErrorCode::InvalidCluster:
    case ErrorCode::ParseError:
      return 400;
    default:
      return 500;
  }
}

AnalysisService::AnalysisService(EnsembleSource source) : source_(std::move(source)) {
  require_valid(source_.ensemble);
}

AnalysisConfig AnalysisService::parse_query(const Query& query) {
  AnalysisConfig config;
  if (auto it = query.find("outer"); it != query.end()) {
    config.outer_coverage = parse_number(it->second, "outer");
  }
  if (auto it = query.find("grid"); it != query.end()) {
    const auto& g = it->second;
    const auto comma = g.find(',');
    if (comma == std::string::npos) {
      config.nx = config.ny = parse_count(g, "grid");
    } else {
      config.nx = parse_count(g.substr(0, comma), "grid");
      config.ny = parse_count(g.substr(comma + 1), "grid");
    }
  }
  if (auto it = query.find("bandwidth"); it != query.end()) {
    config.bandwidth = parse_number(it->second, "bandwidth");
  }
  config.validate();
  return config;
}

std::size_t AnalysisService::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::shared_ptr<const AnalysisService::Entry> AnalysisService::entry_for(
    const AnalysisConfig& config) {
  const std::string key = cache_key(config, source_.content_hash);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto entry = std::make_shared<Entry>();
  entry->analysis = analyze(source_.ensemble, config, source_.content_hash);
  entry->body = dump_json(analysis_document(source_.ensemble, entry->analysis));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.try_emplace(key, std::move(entry));
  return it->second;
}

Response AnalysisService::get_ensemble() const {
  return {200, dump_json(ensemble_summary(source_.ensemble, source_.content_hash))};
}

Response AnalysisService::get_analysis(const Query& query) {
  try {
    return {200, entry_for(parse_query(query))->body};
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return {500, dump_json(Json{{"error", "Internal"}, {"message", e.what()}})};
  }
}

Response AnalysisService::post_selection(const std::string& body) {
  try {
    Json request;
    try {
      request = body.empty() ? Json::object() : Json::parse(body);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    if (!request.is_object()) throw Error(ErrorCode::ParseError, "body must be a JSON object");
    AnalysisConfig config;
    try {
      if (request.contains("analysis")) config = config_from_json(request["analysis"]);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::InvalidArgument, e.what());
    }
    const auto entry = entry_for(config);
    const auto& e = source_.ensemble;
    const auto steps = parse_selection(request, e.sample_count());
    const SelectionContext ctx{e, entry->analysis};
    const Selection sel = evaluate_provenance(ctx, steps);

    Json out = selection_json(sel);
    out["brackets"] = sel.indices.empty()
                          ? Json(nullptr)
                          : brackets_json(e.params, selection_bracket_overlays(e.params, sel.indices));
    try {
      out["sensitivity"] = sensitivity_json(concentration_scores(e.params, sel.indices));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::SelectionTooSmall) throw;
      out["sensitivity"] = nullptr;
      out["sensitivity_error"] = err.what();
    }
    return {200, dump_json(out)};
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return {500, dump_json(Json{{"error", "Internal"}, {"message", e.what()}})};
  }
}

void mount(httplib::Server& server, AnalysisService& service,
           const std::optional<std::filesystem::path>& ui_dir) {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  auto query_of = [](const httplib::Request& req) {
    Query q;
    for (const auto& [k, v] : req.params) q[k] = v;
    return q;
  };

  server.Get("/api/ensemble", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.get_ensemble());
  });
  server.Get("/api/analysis",
             [&service, reply, query_of](const httplib::Request& req, httplib::Response& res) {
               reply(res, service.get_analysis(query_of(req)));
             });
  server.Post("/api/selection", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.post_selection(req.body));
  });

  if (ui_dir && server.set_mount_point("/", ui_dir->string())) return;
  server.Get("/", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(kLandingPage, "text/html");
  });
}

}  // namespace ensemble_lens::service
