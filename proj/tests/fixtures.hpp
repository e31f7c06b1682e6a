#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ensemble_lens/ensemble.hpp"
#include "ensemble_lens/pca.hpp"

namespace fixtures {

using ensemble_lens::AugmentedEnsemble;
using ensemble_lens::CurveMatrix;
using ensemble_lens::ParameterTable;
using ensemble_lens::PlanePoint;

// Ensemble from explicit curve rows; one parameter column "p" = row index.
inline AugmentedEnsemble from_rows(const std::vector<std::vector<double>>& rows,
                                   std::vector<double> time = {}) {
  AugmentedEnsemble e;
  e.name = "fixture";
  const std::size_t m = rows.size(), t = rows.front().size();
  if (time.empty())
    for (std::size_t k = 0; k < t; ++k) time.push_back(static_cast<double>(k));
  e.time.values = std::move(time);
  std::vector<double> data, params;
  for (std::size_t i = 0; i < m; ++i) {
    data.insert(data.end(), rows[i].begin(), rows[i].end());
    params.push_back(static_cast<double>(i));
  }
  e.curves = CurveMatrix(m, t, std::move(data));
  e.params = ParameterTable({"p"}, m, std::move(params));
  return e;
}

// Standard-normal cloud.
inline std::vector<PlanePoint> normal_cloud(std::size_t m, std::uint64_t seed,
                                            double sx = 1.0, double sy = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<PlanePoint> pts(m);
  for (auto& p : pts) {
    p.z1 = sx * g(rng);
    p.z2 = sy * g(rng);
  }
  return pts;
}

// The 20 clouds used for coverage and normalization checks: Gaussian clouds
// with random anisotropy/correlation and 2-4 component mixtures, sizes cycling
// through 100, 500, 2000.
inline std::vector<std::vector<PlanePoint>> cloud_set() {
  std::vector<std::vector<PlanePoint>> out;
  const std::size_t sizes[] = {100, 500, 2000};
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int c = 0; c < 20; ++c) {
    const std::size_t m = sizes[c % 3];
    std::vector<PlanePoint> pts(m);
    if (c % 2 == 0) {
      const double sx = 0.5 + 2.0 * (u(rng) + 1.0), sy = 0.5 + (u(rng) + 1.0);
      const double rho = 0.8 * u(rng);
      for (auto& p : pts) {
        const double a = g(rng), b = g(rng);
        p.z1 = sx * a;
        p.z2 = sy * (rho * a + std::sqrt(1.0 - rho * rho) * b);
      }
    } else {
      const int k = 2 + c % 3;
      std::vector<PlanePoint> centers(k);
      for (auto& cc : centers) cc = {6.0 * u(rng), 6.0 * u(rng)};
      std::uniform_int_distribution<int> pick(0, k - 1);
      for (auto& p : pts) {
        const auto& cc = centers[static_cast<std::size_t>(pick(rng))];
        p = {cc.z1 + 0.7 * g(rng), cc.z2 + 0.7 * g(rng)};
      }
    }
    out.push_back(std::move(pts));
  }
  return out;
}

// mean + a_i u + b_i v with random orthonormal-ish u, v: exactly rank 2 after
// centering (up to rounding).
inline AugmentedEnsemble rank2_ensemble(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> msize(20, 200), tsize(3, 40);
  const auto m = static_cast<std::size_t>(msize(rng));
  const auto t = static_cast<std::size_t>(tsize(rng));
  std::vector<double> mean(t), u(t), v(t);
  for (auto& x : mean) x = 3.0 * g(rng);
  for (auto& x : u) x = g(rng);
  for (auto& x : v) x = g(rng);
  const bool bimodal = seed % 2 == 1;
  std::vector<std::vector<double>> rows(m, std::vector<double>(t));
  for (std::size_t i = 0; i < m; ++i) {
    double a = g(rng), b = 0.5 * g(rng);
    if (bimodal) a += (i % 2 == 0) ? 4.0 : -4.0;
    for (std::size_t k = 0; k < t; ++k) rows[i][k] = mean[k] + a * u[k] + b * v[k];
  }
  return from_rows(rows);
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ensemble-lens-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
