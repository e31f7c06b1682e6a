#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ensemble_lens/ensemble.hpp"

namespace ensemble_lens {

// On-disk layout of an ensemble ("file triplet"):
//
//   manifest.json  {"name": str, "params": relative path, "curves": relative path}
//   params.csv     header of N parameter names, then M rows of N values
//   curves.csv     header of T time values, then M rows of T values
//
// Comma separated, '.' decimal point, UTF-8, LF line endings. Paths in the
// manifest are resolved against the manifest's directory.

struct EnsembleSource {
  AugmentedEnsemble ensemble;
  // SHA-256 over params bytes followed by curves bytes.
  std::string content_hash;
};

// Parses the triplet without checking ensemble invariants.
// Throws MissingFile, IoError, ParseError, ShapeMismatch (ragged rows).
EnsembleSource read_ensemble_source(const std::filesystem::path& manifest);

// read_ensemble_source followed by require_valid().
AugmentedEnsemble load_ensemble(const std::filesystem::path& manifest);

std::string params_csv(const AugmentedEnsemble& ensemble);
std::string curves_csv(const AugmentedEnsemble& ensemble);

// Hash of the canonical serialization; equals the content_hash of the files
// written by export_ensemble.
std::string content_hash(const AugmentedEnsemble& ensemble);
std::string content_hash(std::string_view params_bytes,
                         std::string_view curves_bytes);

// Writes manifest.json, params.csv and curves.csv into dir (created if
// needed). Throws IoError.
void export_ensemble(const AugmentedEnsemble& ensemble,
                     const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace ensemble_lens
