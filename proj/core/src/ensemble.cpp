#include "ensemble_lens/ensemble.hpp"

#include <cmath>
#include <set>

namespace ensemble_lens {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TimeAxisError: return "TimeAxisError";
    case ErrorCode::TooFewMembers: return "TooFewMembers";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::InvalidParameterNames: return "InvalidParameterNames";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateEnsemble: return "DegenerateEnsemble";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegeneratePoints: return "DegeneratePoints";
    case ErrorCode::InvalidBandwidth: return "InvalidBandwidth";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidCoverage: return "InvalidCoverage";
    case ErrorCode::EmptyLevelSet: return "EmptyLevelSet";
    case ErrorCode::ContainmentViolation: return "ContainmentViolation";
    case ErrorCode::UnknownParam: return "UnknownParam";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::InvalidCluster: return "InvalidCluster";
    case ErrorCode::InvalidPredicate: return "InvalidPredicate";
    case ErrorCode::SelectionTooSmall: return "SelectionTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

CurveMatrix::CurveMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::ShapeMismatch, "curve data size " +
                                              std::to_string(data_.size()) +
                                              " != rows * cols");
  }
}

ParameterTable::ParameterTable(std::vector<std::string> names,
                               std::size_t rows, std::vector<double> values)
    : names_(std::move(names)), rows_(rows), values_(std::move(values)) {
  if (values_.size() != rows_ * names_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "parameter data size " +
                                              std::to_string(values_.size()) +
                                              " != rows * names");
  }
}

std::vector<double> ParameterTable::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

std::optional<std::size_t> ParameterTable::find(const std::string& name) const {
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j] == name) return j;
  }
  return std::nullopt;
}

MemberView member(const AugmentedEnsemble& ensemble, std::size_t i) {
  if (i >= ensemble.member_count() || i >= ensemble.params.rows()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "member " + std::to_string(i) + " of " +
                    std::to_string(ensemble.member_count()));
  }
  return {ensemble.params.row(i), ensemble.curves.row(i)};
}

ValidationReport validate(const AugmentedEnsemble& e) {
  ValidationReport report;
  auto add = [&report](ErrorCode kind, std::string msg,
                       std::optional<std::size_t> row = std::nullopt,
                       std::optional<std::size_t> col = std::nullopt) {
    report.push_back({kind, std::move(msg), row, col});
  };

  const auto& t = e.time.values;
  if (t.size() < 2) {
    add(ErrorCode::TimeAxisError,
        "time axis needs at least 2 samples, got " + std::to_string(t.size()));
  }
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!std::isfinite(t[k])) {
      add(ErrorCode::NonFiniteValue, "non-finite time value", std::nullopt, k);
    }
  }
  // ordering is only meaningful between finite samples; NaN is reported above
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    if (std::isfinite(t[k]) && std::isfinite(t[k + 1]) && !(t[k] < t[k + 1])) {
      add(ErrorCode::TimeAxisError,
          "time axis not strictly increasing at sample " +
              std::to_string(k + 1),
          std::nullopt, k + 1);
    }
  }

  if (e.curves.cols() != t.size()) {
    add(ErrorCode::ShapeMismatch,
        "curves have " + std::to_string(e.curves.cols()) +
            " samples, time axis has " + std::to_string(t.size()));
  }
  for (std::size_t i = 0; i < e.curves.rows(); ++i) {
    for (std::size_t k = 0; k < e.curves.cols(); ++k) {
      if (!std::isfinite(e.curves(i, k))) {
        add(ErrorCode::NonFiniteValue,
            "non-finite curve value at member " + std::to_string(i) +
                ", sample " + std::to_string(k),
            i, k);
      }
    }
  }

  const auto& names = e.params.names();
  if (names.empty()) {
    add(ErrorCode::InvalidParameterNames, "at least one parameter required");
  }
  std::set<std::string> seen;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j].empty()) {
      add(ErrorCode::InvalidParameterNames,
          "empty parameter name at column " + std::to_string(j), std::nullopt,
          j);
    } else if (!seen.insert(names[j]).second) {
      add(ErrorCode::InvalidParameterNames,
          "duplicate parameter name '" + names[j] + "'", std::nullopt, j);
    }
  }
  for (std::size_t i = 0; i < e.params.rows(); ++i) {
    for (std::size_t j = 0; j < e.params.cols(); ++j) {
      if (!std::isfinite(e.params(i, j))) {
        add(ErrorCode::NonFiniteValue,
            "non-finite parameter value at member " + std::to_string(i) +
                ", column " + std::to_string(j),
            i, j);
      }
    }
  }

  if (e.params.rows() != e.curves.rows()) {
    add(ErrorCode::ShapeMismatch,
        "parameter rows " + std::to_string(e.params.rows()) +
            " != curve rows " + std::to_string(e.curves.rows()));
  }
  if (e.curves.rows() < kMinMembers) {
    add(ErrorCode::TooFewMembers,
        "need at least 3 members, got " + std::to_string(e.curves.rows()));
  }
  return report;
}

void require_valid(const AugmentedEnsemble& ensemble) {
  const auto report = validate(ensemble);
  if (!report.empty()) throw Error(report.front().kind, report.front().message);
}

}  // namespace ensemble_lens
