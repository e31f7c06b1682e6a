#include "ensemble_lens/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace ensemble_lens {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void check_length(const PcaPlane& plane, std::size_t n) {
  if (n != plane.sample_count()) {
    throw Error(ErrorCode::LengthMismatch,
                "curve has " + std::to_string(n) + " samples, plane expects " +
                    std::to_string(plane.sample_count()));
  }
}

}  // namespace

void normalize_sign(std::span<double> v) {
  double max_abs = 0.0;
  for (double x : v) max_abs = std::max(max_abs, std::abs(x));
  if (max_abs == 0.0) return;

  bool any_pos = false;
  bool any_neg = false;
  for (double x : v) {
    if (std::abs(x) >= max_abs * (1.0 - 1e-12)) (x > 0 ? any_pos : any_neg) = true;
  }
  bool flip = false;
  if (any_pos != any_neg) {
    flip = any_neg;
  } else {
    auto first = std::find_if(v.begin(), v.end(), [](double x) { return x != 0.0; });
    flip = *first < 0.0;
  }
  if (flip) {
    for (double& x : v) x = -x;
  }
}

double explained_variance(std::span<const double> spectrum) {
  const double total = std::accumulate(spectrum.begin(), spectrum.end(), 0.0);
  if (!(total > 0.0)) {
    throw Error(ErrorCode::DegenerateEnsemble, "variance spectrum sums to zero");
  }
  double top = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(2, spectrum.size()); ++i) {
    top += spectrum[i];
  }
  return std::clamp(top / total, 0.0, 1.0);
}

double explained_variance(const PcaPlane& plane) {
  return explained_variance(plane.variance_spectrum);
}

PcaPlane fit_pca(const CurveMatrix& curves) {
  const std::size_t m = curves.rows();
  const std::size_t t = curves.cols();
  if (m < kMinMembers) {
    throw Error(ErrorCode::TooFewMembers, "PCA needs at least 3 curves");
  }
  if (t < 2) throw Error(ErrorCode::LengthMismatch, "curves need at least 2 samples");

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> raw(curves.data().data(), static_cast<Eigen::Index>(m),
                                 static_cast<Eigen::Index>(t));
  const Eigen::RowVectorXd mean = raw.colwise().mean();
  Eigen::MatrixXd centered = raw.rowwise() - mean;

  const double max_entry = raw.cwiseAbs().maxCoeff();
  const double denom = static_cast<double>(m - 1);
  const double total_variance = centered.squaredNorm() / denom;
  if (!(total_variance > kDegeneracyTolerance * max_entry * max_entry)) {
    throw Error(ErrorCode::DegenerateEnsemble,
                "curves are identical up to tolerance (total variance " +
                    std::to_string(total_variance) + ")");
  }

  // Right singular vectors of the centered data are the covariance
  // eigenvectors; squared singular values / (M-1) are its eigenvalues.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::MatrixXd& v = svd.matrixV();

  PcaPlane plane;
  plane.mean_curve.assign(mean.data(), mean.data() + t);
  const std::size_t n_eigen = std::min(m - 1, t);
  plane.variance_spectrum.resize(n_eigen, 0.0);
  for (std::size_t i = 0; i < n_eigen && i < static_cast<std::size_t>(sv.size()); ++i) {
    plane.variance_spectrum[i] = std::max(0.0, sv[static_cast<Eigen::Index>(i)] *
                                                   sv[static_cast<Eigen::Index>(i)] / denom);
  }
  for (std::size_t b = 0; b < 2; ++b) {
    auto& vec = plane.basis[b];
    vec.resize(t);
    for (std::size_t k = 0; k < t; ++k) {
      vec[k] = v(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b));
    }
    const double norm = std::sqrt(dot(vec, vec));
    for (double& x : vec) x /= norm;
  }
  // Re-orthogonalize the second direction against the first before fixing
  // signs; with a rank-1 ensemble the SVD's second vector is arbitrary.
  {
    auto& b1 = plane.basis[0];
    auto& b2 = plane.basis[1];
    const double c = dot(b1, b2);
    for (std::size_t k = 0; k < t; ++k) b2[k] -= c * b1[k];
    const double norm = std::sqrt(dot(b2, b2));
    for (double& x : b2) x /= norm;
  }
  normalize_sign(plane.basis[0]);
  normalize_sign(plane.basis[1]);
  plane.explained_variance = explained_variance(plane.variance_spectrum);
  return plane;
}

Projection project(const PcaPlane& plane, std::span<const double> curve) {
  check_length(plane, curve.size());
  const std::size_t t = curve.size();
  std::vector<double> d(t);
  for (std::size_t k = 0; k < t; ++k) d[k] = curve[k] - plane.mean_curve[k];
  Projection out;
  out.point.z1 = dot(d, plane.basis[0]);
  out.point.z2 = dot(d, plane.basis[1]);
  double sq = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    const double r = d[k] - out.point.z1 * plane.basis[0][k] - out.point.z2 * plane.basis[1][k];
    sq += r * r;
  }
  out.residual_norm = std::sqrt(sq);
  return out;
}

ProjectionSet project_all(const PcaPlane& plane, const CurveMatrix& curves) {
  check_length(plane, curves.cols());
  ProjectionSet set;
  set.points.reserve(curves.rows());
  set.residual_norms.reserve(curves.rows());
  for (std::size_t i = 0; i < curves.rows(); ++i) {
    const auto p = project(plane, curves.row(i));
    set.points.push_back(p.point);
    set.residual_norms.push_back(p.residual_norm);
  }
  return set;
}

std::vector<double> reconstruct(const PcaPlane& plane, PlanePoint point) {
  std::vector<double> curve(plane.mean_curve);
  for (std::size_t k = 0; k < curve.size(); ++k) {
    curve[k] += point.z1 * plane.basis[0][k] + point.z2 * plane.basis[1][k];
  }
  return curve;
}

}  // namespace ensemble_lens
