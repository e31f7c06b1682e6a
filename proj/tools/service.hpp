#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "ensemble_lens/analysis.hpp"
#include "ensemble_lens/io.hpp"

namespace httplib {
class Server;
}

namespace ensemble_lens::service {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

using Query = std::map<std::string, std::string>;

// Request handlers behind the HTTP API, usable without a socket.
//
//   GET  /api/ensemble                              ensemble summary
//   GET  /api/analysis?outer=P&grid=NX,NY&bandwidth=H
//   POST /api/selection  {"predicates":[...], "analysis":{"outer":..,"grid":[..],"bandwidth":..}}
//
// Analyses are cached per (outer, grid, bandwidth, ensemble hash); the cache
// only ever grows and entries are immutable, so a cached body is returned
// byte-identically. Computation runs outside the cache lock.
class AnalysisService {
 public:
  explicit AnalysisService(EnsembleSource source);

  const AugmentedEnsemble& ensemble() const noexcept { return source_.ensemble; }
  const std::string& ensemble_hash() const noexcept { return source_.content_hash; }

  Response get_ensemble() const;
  Response get_analysis(const Query& query);
  Response post_selection(const std::string& body);

  // Throws ensemble_lens::Error on invalid query values.
  static AnalysisConfig parse_query(const Query& query);

  std::size_t cache_size() const;

 private:
  struct Entry {
    Analysis analysis;
    std::string body;
  };
  std::shared_ptr<const Entry> entry_for(const AnalysisConfig& config);

  EnsembleSource source_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const Entry>> cache_;
};

// Maps an exception from a handler to an HTTP status: 422 for coverage
// errors, 400 for malformed input, 500 otherwise.
int status_for(ErrorCode code);

// Registers the API routes plus GET / (static files from ui_dir when given,
// otherwise a built-in landing page).
void mount(httplib::Server& server, AnalysisService& service,
           const std::optional<std::filesystem::path>& ui_dir = std::nullopt);

}  // namespace ensemble_lens::service
