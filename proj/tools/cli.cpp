#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "ensemble_lens/analysis.hpp"
#include "ensemble_lens/document.hpp"
#include "ensemble_lens/format.hpp"
#include "ensemble_lens/generators.hpp"
#include "ensemble_lens/io.hpp"
#include "ensemble_lens/selection.hpp"
#include "ensemble_lens/svg.hpp"
#include "service.hpp"

namespace ensemble_lens::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kDefaultPort = 8080;

struct Failure {
  int code;
};

int exit_for_load(const Error& e) {
  switch (e.code()) {
    case ErrorCode::MissingFile:
    case ErrorCode::IoError:
      return kIoFailure;
    default:
      return kValidationFailure;
  }
}

// Reads and validates the triplet, printing the full report on failure.
EnsembleSource load_or_fail(const fs::path& manifest, std::ostream& err) {
  EnsembleSource source;
  try {
    source = read_ensemble_source(manifest);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    throw Failure{exit_for_load(e)};
  }
  const auto report = validate(source.ensemble);
  if (!report.empty()) {
    err << "validation failed (" << report.size() << " violation(s)):\n";
    for (const auto& v : report) {
      err << "  " << to_string(v.kind) << ": " << v.message << "\n";
    }
    throw Failure{kValidationFailure};
  }
  return source;
}

AnalysisConfig make_config(double outer, const std::string& grid,
                           const std::optional<double>& bandwidth) {
  service::Query q;
  q["outer"] = format_double(outer);
  if (!grid.empty()) q["grid"] = grid;
  if (bandwidth) q["bandwidth"] = format_double(*bandwidth);
  return service::AnalysisService::parse_query(q);
}

void write_or_fail(const fs::path& path, std::string_view bytes, std::ostream& err) {
  try {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file(path, bytes);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    throw Failure{kIoFailure};
  }
}

int cmd_generate(const std::string& kind, std::size_t n, std::uint64_t seed,
                 std::size_t t_samples, const fs::path& out_dir, std::ostream& out,
                 std::ostream& err) {
  GeneratorSpec spec;
  if (kind == "oscillating-tangents" || kind == "oscillating_tangents") {
    spec.kind = GeneratorKind::OscillatingTangents;
  } else if (kind == "campbell1d") {
    spec.kind = GeneratorKind::Campbell1d;
  } else {
    err << "error: unknown generator '" << kind << "'\n";
    return kInvalidArgs;
  }
  spec.n = n;
  spec.seed = seed;
  spec.t_samples = t_samples;
  AugmentedEnsemble e;
  try {
    e = generate(spec);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kInvalidArgs;
  }
  try {
    export_ensemble(e, out_dir);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kIoFailure;
  }
  out << "wrote " << e.member_count() << " members x " << e.sample_count() << " samples to "
      << out_dir.string() << "\n";
  return kOk;
}

int cmd_analyze(const fs::path& manifest, double outer, const std::string& grid,
                const std::optional<double>& bandwidth, const fs::path& out_path,
                const std::optional<fs::path>& svg_path, std::ostream& out, std::ostream& err) {
  AnalysisConfig config;
  try {
    config = make_config(outer, grid, bandwidth);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidArgs;
  }
  const auto source = load_or_fail(manifest, err);
  Analysis a;
  try {
    a = analyze(source.ensemble, config, source.content_hash);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::DegenerateEnsemble || e.code() == ErrorCode::DegeneratePoints) {
      return kDegenerate;
    }
    return 1;
  }
  write_or_fail(out_path, dump_json(analysis_document(source.ensemble, a)), err);
  if (svg_path) write_or_fail(*svg_path, boxplot_svg(source.ensemble, a), err);

  out << std::setprecision(6) << "explained variance " << a.plane.explained_variance
      << ", bandwidth " << a.bandwidth << ", inner regions " << a.inner.region_count
      << ", outliers " << a.boxplot.outliers.size() << "\n";
  return kOk;
}

int cmd_sensitivity(const fs::path& manifest, const fs::path& analysis_path,
                    const fs::path& selection_path, const std::optional<fs::path>& report_path,
                    std::ostream& out, std::ostream& err) {
  const auto source = load_or_fail(manifest, err);
  const auto& e = source.ensemble;

  AnalysisDocumentHeader header;
  Json selection_doc;
  try {
    header = parse_analysis_header(read_file(analysis_path));
    selection_doc = Json::parse(read_file(selection_path));
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return ex.code() == ErrorCode::MissingFile || ex.code() == ErrorCode::IoError ? kIoFailure
                                                                                    : kInvalidArgs;
  } catch (const Json::exception& ex) {
    err << "error: selection: " << ex.what() << "\n";
    return kInvalidArgs;
  }
  if (header.ensemble_hash != source.content_hash) {
    err << "error: analysis was computed for a different ensemble (hash mismatch)\n";
    return kInvalidArgs;
  }

  try {
    const Analysis a = analyze(e, header.config, source.content_hash);
    const auto steps = parse_selection(selection_doc, e.sample_count());
    const Selection sel = evaluate_provenance({e, a}, steps);
    const SensitivityReport report = concentration_scores(e.params, sel.indices);

    out << std::left << std::setw(16) << "parameter" << std::right << std::setw(12) << "score"
        << std::setw(6) << "rank" << "\n";
    for (std::size_t j = 0; j < report.scores.size(); ++j) {
      const auto& s = report.scores[j];
      const auto pos = std::find(report.ranking.begin(), report.ranking.end(), j);
      out << std::left << std::setw(16) << s.name << std::right << std::setw(12);
      if (s.score) {
        out << std::fixed << std::setprecision(4) << *s.score << std::defaultfloat;
      } else {
        out << "undefined";
      }
      out << std::setw(6);
      if (pos != report.ranking.end()) {
        out << (pos - report.ranking.begin() + 1);
      } else {
        out << "-";
      }
      out << "\n";
    }
    out << "selected " << sel.size() << " of " << e.member_count() << " members\n";

    Json doc;
    doc["ensemble_hash"] = source.content_hash;
    doc["selection"] = selection_json(sel);
    doc["brackets"] = brackets_json(e.params, selection_bracket_overlays(e.params, sel.indices));
    doc["sensitivity"] = sensitivity_json(report);
    const fs::path dest = report_path ? *report_path
                                      : selection_path.parent_path() / "sensitivity_report.json";
    write_or_fail(dest, dump_json(doc) + "\n", err);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    switch (ex.code()) {
      case ErrorCode::SelectionTooSmall:
        return kSelectionTooSmall;
      case ErrorCode::DegenerateEnsemble:
      case ErrorCode::DegeneratePoints:
        return kDegenerate;
      case ErrorCode::InvalidCoverage:
      case ErrorCode::InvalidGrid:
      case ErrorCode::InvalidBandwidth:
      case ErrorCode::InvalidPredicate:
      case ErrorCode::UnknownParam:
      case ErrorCode::TimeOutOfRange:
      case ErrorCode::InvalidCluster:
        return kInvalidArgs;
      default:
        return 1;
    }
  }
  return kOk;
}

int cmd_serve(const fs::path& manifest, std::optional<int> port, const std::string& host,
              const std::optional<fs::path>& ui_dir, std::ostream& out, std::ostream& err) {
  if (!port) {
    if (const char* env = std::getenv("ENSEMBLE_LENS_PORT")) {
      try {
        port = std::stoi(env);
      } catch (const std::exception&) {
        err << "error: ENSEMBLE_LENS_PORT is not a port number\n";
        return kInvalidArgs;
      }
    } else {
      port = kDefaultPort;
    }
  }
  service::AnalysisService svc(load_or_fail(manifest, err));
  httplib::Server server;
  service::mount(server, svc, ui_dir);
  out << "serving " << svc.ensemble().name << " on http://" << host << ":" << *port << "\n"
      << std::flush;
  if (!server.listen(host, *port)) {
    err << "error: cannot bind " << host << ":" << *port << "\n";
    return kIoFailure;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Functional boxplots and visual sensitivity analysis for curve ensembles",
               "ensemble-lens"};
  app.require_subcommand(1);

  std::string kind;
  std::size_t n = 400;
  std::uint64_t seed = 0;
  std::size_t t_samples = 100;
  fs::path gen_out;
  auto* gen = app.add_subcommand("generate", "Write a synthetic ensemble file triplet");
  gen->add_option("kind", kind, "oscillating-tangents | campbell1d")->required();
  gen->add_option("--n", n, "Member count")->capture_default_str();
  gen->add_option("--seed", seed, "RNG seed")->capture_default_str();
  gen->add_option("--t-samples", t_samples, "Time samples (oscillating-tangents)")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->required();

  fs::path manifest;
  double outer = kDefaultOuterCoverage;
  std::string grid;
  std::optional<double> bandwidth;
  fs::path analysis_out;
  std::optional<fs::path> svg_out;
  auto* ana = app.add_subcommand("analyze", "Compute the functional boxplot analysis");
  ana->add_option("--manifest", manifest, "Ensemble manifest.json")->required();
  ana->add_option("--outer", outer, "Outer HDR coverage in (0.5, 1)")->capture_default_str();
  ana->add_option("--grid", grid, "Density grid NX,NY (or N)");
  ana->add_option("--bandwidth", bandwidth, "Kernel bandwidth (default: Silverman)");
  ana->add_option("--out", analysis_out, "analysis.json path")->required();
  ana->add_option("--svg", svg_out, "Also write the boxplot as SVG");

  fs::path analysis_in;
  fs::path selection_in;
  std::optional<fs::path> report_out;
  auto* sens = app.add_subcommand("sensitivity", "Score parameters against a selection");
  sens->add_option("--manifest", manifest, "Ensemble manifest.json")->required();
  sens->add_option("--analysis", analysis_in, "analysis.json from `analyze`")->required();
  sens->add_option("--selection", selection_in, "selection.json")->required();
  sens->add_option("--out", report_out, "Report path (default: next to the selection)");

  std::optional<int> port;
  std::string host = "127.0.0.1";
  std::optional<fs::path> ui_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP analysis service");
  serve->add_option("--manifest", manifest, "Ensemble manifest.json")->required();
  serve->add_option("--port", port, "Port (fallback: $ENSEMBLE_LENS_PORT, then 8080)");
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--ui-dir", ui_dir, "Directory of static UI assets served at /");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidArgs;
  }

  try {
    if (gen->parsed()) return cmd_generate(kind, n, seed, t_samples, gen_out, out, err);
    if (ana->parsed()) {
      return cmd_analyze(manifest, outer, grid, bandwidth, analysis_out, svg_out, out, err);
    }
    if (sens->parsed()) {
      return cmd_sensitivity(manifest, analysis_in, selection_in, report_out, out, err);
    }
    if (serve->parsed()) return cmd_serve(manifest, port, host, ui_dir, out, err);
  } catch (const Failure& f) {
    return f.code;
  }
  return kInvalidArgs;
}

}  // namespace ensemble_lens::cli
