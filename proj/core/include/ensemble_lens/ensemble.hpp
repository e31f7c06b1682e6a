#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ensemble_lens/error.hpp"

namespace ensemble_lens {

// Shared sampling axis of every curve in an ensemble.
struct TimeAxis {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

// M curves sampled on a common axis, stored row-major (member-major).
class CurveMatrix {
 public:
  CurveMatrix() = default;
  CurveMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  CurveMatrix(std::size_t rows, std::size_t cols)
      : CurveMatrix(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t k) const noexcept {
    return data_[i * cols_ + k];
  }
  double& operator()(std::size_t i, std::size_t k) noexcept {
    return data_[i * cols_ + k];
  }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// M x N parameter values with one name per column.
class ParameterTable {
 public:
  ParameterTable() = default;
  ParameterTable(std::vector<std::string> names, std::size_t rows,
                 std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols(), cols()};
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * cols() + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return values_[i * cols() + j];
  }
  std::vector<double> column(std::size_t j) const;
  // Column index of a parameter name, or nullopt.
  std::optional<std::size_t> find(const std::string& name) const;

  const std::vector<double>& data() const noexcept { return values_; }

 private:
  std::vector<std::string> names_;
  std::size_t rows_ = 0;
  std::vector<double> values_;
};

struct MemberView {
  std::span<const double> params;
  std::span<const double> curve;
};

// Member couples (parameters, curve) sharing the index space 0..M-1.
// Treated as immutable once built; validate() reports invariant violations.
struct AugmentedEnsemble {
  std::string name;
  TimeAxis time;
  CurveMatrix curves;
  ParameterTable params;

  std::size_t member_count() const noexcept { return curves.rows(); }
  std::size_t sample_count() const noexcept { return time.size(); }
  std::size_t parameter_count() const noexcept { return params.cols(); }
};

inline constexpr std::size_t kMinMembers = 3;

// Throws IndexOutOfRange when i >= M.
MemberView member(const AugmentedEnsemble& ensemble, std::size_t i);

struct Violation {
  ErrorCode kind;
  std::string message;
  std::optional<std::size_t> row;     // member index
  std::optional<std::size_t> column;  // sample or parameter column

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

// Enumerates every invariant violation; empty when the ensemble is valid.
ValidationReport validate(const AugmentedEnsemble& ensemble);

// Throws the first violation of validate() as an Error.
void require_valid(const AugmentedEnsemble& ensemble);

}  // namespace ensemble_lens
