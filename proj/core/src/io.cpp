#include "ensemble_lens/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "ensemble_lens/format.hpp"

namespace ensemble_lens {
namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  // Trailing blank lines (final LF, editor padding) are not rows.
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, const fs::path& file, std::size_t line,
                  std::size_t column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && cell.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::ParseError,
                file.filename().string() + " row " + std::to_string(line) +
                    ", column " + std::to_string(column) +
                    ": not a number: '" + std::string(cell) + "'");
  }
  return value;
}

struct Table {
  std::vector<std::string_view> header;
  std::size_t rows = 0;
  std::vector<double> values;
};

// Header row plus rectangular numeric body. Line/column numbers in messages
// are 1-based file coordinates.
Table parse_table(std::string_view text, const fs::path& file) {
  auto lines = split_lines(text);
  if (lines.empty()) {
    throw Error(ErrorCode::ParseError, file.filename().string() + ": empty file");
  }
  Table table;
  table.header = split_cells(lines.front());
  const std::size_t width = table.header.size();
  for (std::size_t l = 1; l < lines.size(); ++l) {
    auto cells = split_cells(lines[l]);
    if (cells.size() != width) {
      throw Error(ErrorCode::ShapeMismatch,
                  file.filename().string() + " row " + std::to_string(l + 1) +
                      " has " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      table.values.push_back(parse_cell(cells[c], file, l + 1, c + 1));
    }
    ++table.rows;
  }
  return table;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

std::string join_row(std::span<const double> row) {
  std::string line;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k) line.push_back(',');
    line += format_double(row[k]);
  }
  line.push_back('\n');
  return line;
}

}  // namespace

std::string read_file(const fs::path& path) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::MissingFile, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

EnsembleSource read_ensemble_source(const fs::path& manifest_path) {
  const std::string manifest_text = read_file(manifest_path);
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(manifest_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, manifest_path.string() + ": " + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("params") ||
      !manifest.contains("curves") || !manifest["params"].is_string() ||
      !manifest["curves"].is_string()) {
    throw Error(ErrorCode::ParseError,
                manifest_path.string() +
                    ": manifest needs string fields 'params' and 'curves'");
  }
  const fs::path base = manifest_path.parent_path();
  const fs::path params_path = base / manifest["params"].get<std::string>();
  const fs::path curves_path = base / manifest["curves"].get<std::string>();
  const std::string params_text = read_file(params_path);
  const std::string curves_text = read_file(curves_path);

  const Table params = parse_table(params_text, params_path);
  const Table curves = parse_table(curves_text, curves_path);

  std::vector<double> time;
  for (std::size_t k = 0; k < curves.header.size(); ++k) {
    time.push_back(parse_cell(curves.header[k], curves_path, 1, k + 1));
  }
  std::vector<std::string> names;
  for (auto cell : params.header) names.push_back(unquote(cell));

  EnsembleSource source;
  auto& e = source.ensemble;
  e.name = manifest.value("name", manifest_path.parent_path().filename().string());
  e.time.values = std::move(time);
  e.curves = CurveMatrix(curves.rows, curves.header.size(), curves.values);
  e.params = ParameterTable(std::move(names), params.rows, params.values);
  source.content_hash = content_hash(params_text, curves_text);
  return source;
}

AugmentedEnsemble load_ensemble(const fs::path& manifest) {
  auto source = read_ensemble_source(manifest);
  require_valid(source.ensemble);
  return std::move(source.ensemble);
}

std::string params_csv(const AugmentedEnsemble& e) {
  std::string out;
  const auto& names = e.params.names();
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j) out.push_back(',');
    out += names[j];
  }
  out.push_back('\n');
  for (std::size_t i = 0; i < e.params.rows(); ++i) out += join_row(e.params.row(i));
  return out;
}

std::string curves_csv(const AugmentedEnsemble& e) {
  std::string out = join_row(e.time.values);
  for (std::size_t i = 0; i < e.curves.rows(); ++i) out += join_row(e.curves.row(i));
  return out;
}

std::string content_hash(std::string_view params_bytes,
                         std::string_view curves_bytes) {
  std::string joined;
  joined.reserve(params_bytes.size() + curves_bytes.size() + 1);
  joined.append(params_bytes);
  joined.push_back('\0');
  joined.append(curves_bytes);
  return sha256_hex(joined);
}

std::string content_hash(const AugmentedEnsemble& e) {
  return content_hash(params_csv(e), curves_csv(e));
}

void export_ensemble(const AugmentedEnsemble& e, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string());
  nlohmann::ordered_json manifest;
  manifest["name"] = e.name;
  manifest["params"] = "params.csv";
  manifest["curves"] = "curves.csv";
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  write_file(dir / "params.csv", params_csv(e));
  write_file(dir / "curves.csv", curves_csv(e));
}

}  // namespace ensemble_lens
