#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ensemble_lens/analysis.hpp"
#include "ensemble_lens/functional.hpp"
#include "ensemble_lens/generators.hpp"
#include "ensemble_lens/selection.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ensemble_lens;

namespace {

PcaPlane cos_sin_plane(std::size_t t) {
  PcaPlane plane;
  plane.mean_curve.assign(t, 0.0);
  plane.basis[0].resize(t);
  plane.basis[1].resize(t);
  for (std::size_t k = 0; k < t; ++k) {
    const double tk = 2.0 * oracle::kPi * static_cast<double>(k) / static_cast<double>(t);
    plane.basis[0][k] = std::cos(tk);
    plane.basis[1][k] = std::sin(tk);
  }
  return plane;
}

HdrLevelSet with_contours(std::vector<Polyline> contours, double coverage) {
  HdrLevelSet ls;
  ls.coverage = coverage;
  ls.contours = std::move(contours);
  return ls;
}

void expect_within(const std::vector<double>& c, const FunctionalBand& b, double slack) {
  for (std::size_t k = 0; k < c.size(); ++k) {
    EXPECT_GE(c[k], b.lower[k] - slack) << "sample " << k;
    EXPECT_LE(c[k], b.upper[k] + slack) << "sample " << k;
  }
}

void expect_nested(const FunctionalBand& in, const FunctionalBand& out, double slack) {
  for (std::size_t k = 0; k < in.lower.size(); ++k) {
    EXPECT_GE(in.lower[k], out.lower[k] - slack);
    EXPECT_LE(in.upper[k], out.upper[k] + slack);
  }
}

}  // namespace

TEST(Band, SingleVertex) {
  const auto plane = cos_sin_plane(12);
  const std::vector<PlanePoint> v = {{0.3, -0.2}};
  const auto b = envelope(plane, v, 0.5);
  EXPECT_EQ(b.lower, b.upper);
  EXPECT_EQ(b.upper, reconstruct(plane, v[0]));
  EXPECT_THROW(envelope(plane, std::vector<PlanePoint>{}, 0.5), Error);
}

TEST(Band, SquareContourOnCosSin) {
  const std::size_t t = 8;  // t_2 = pi/4
  const auto plane = cos_sin_plane(t);
  const auto b = band_from_levelset(
      plane, with_contours({{{1, 1}, {1, -1}, {-1, -1}, {-1, 1}, {1, 1}}}, 0.5));
  for (std::size_t k = 0; k < t; ++k) {
    const double tk = 2.0 * oracle::kPi * static_cast<double>(k) / t;
    EXPECT_NEAR(b.upper[k], std::abs(std::cos(tk)) + std::abs(std::sin(tk)), 1e-15);
    EXPECT_NEAR(b.lower[k], -b.upper[k], 1e-15);
  }
  EXPECT_NEAR(b.upper[1], std::sqrt(2.0), 1e-15);
}

TEST(Band, PooledOverContoursAndOrderInvariant) {
  const auto plane = cos_sin_plane(20);
  const Polyline a = {{1, 0}, {2, 0}, {2, 1}, {1, 0}};
  const Polyline c = {{-3, -1}, {-2, -1}, {-2, 0}, {-3, -1}};
  const auto ab = band_from_levelset(plane, with_contours({a, c}, 0.5));
  const auto ba = band_from_levelset(plane, with_contours({c, a}, 0.5));
  Polyline ar(a.rbegin(), a.rend());
  const auto rev = band_from_levelset(plane, with_contours({ar, c}, 0.5));
  EXPECT_EQ(ab.upper, ba.upper);
  EXPECT_EQ(ab.lower, rev.lower);
  const auto only_a = band_from_levelset(plane, with_contours({a}, 0.5));
  const auto only_c = band_from_levelset(plane, with_contours({c}, 0.5));
  for (std::size_t k = 0; k < 20; ++k) {
    EXPECT_EQ(ab.upper[k], std::max(only_a.upper[k], only_c.upper[k]));
    EXPECT_EQ(ab.lower[k], std::min(only_a.lower[k], only_c.lower[k]));
  }
  EXPECT_THROW(band_from_levelset(plane, with_contours({}, 0.5)), Error);
}

TEST(Band, MedianCurveIsReconstruction) {
  const auto plane = cos_sin_plane(10);
  MedianPoint mp;
  EXPECT_EQ(median_curve(plane, mp), plane.mean_curve);
  mp.point = {0.5, 2.0};
  EXPECT_EQ(median_curve(plane, mp), reconstruct(plane, mp.point));
}

TEST(Band, MedianOfSymmetricCloud) {
  // point-symmetric Gaussian cloud of rank-2 curves around a mean curve: the
  // density peak is at the center, so the median curve is the mean curve up
  // to one grid cell's reconstruction delta
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  const std::size_t t = 9;
  std::vector<double> mean(t), u(t), v(t);
  for (std::size_t k = 0; k < t; ++k) {
    mean[k] = 2.0 + std::sin(static_cast<double>(k));
    u[k] = g(rng);
    v[k] = g(rng);
  }
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 1000; ++i) {
    const double a = g(rng), b = 0.6 * g(rng);
    for (double s : {1.0, -1.0}) {
      std::vector<double> r(t);
      for (std::size_t k = 0; k < t; ++k) r[k] = mean[k] + s * (a * u[k] + b * v[k]);
      rows.push_back(r);
    }
  }
  const auto an = analyze(fixtures::from_rows(rows));
  const double cell = std::hypot(an.field.grid.dx(), an.field.grid.dy());
  for (std::size_t k = 0; k < t; ++k) EXPECT_NEAR(an.boxplot.median_curve[k], mean[k], cell);
  EXPECT_EQ(an.boxplot.median_curve, reconstruct(an.plane, an.median.point));
}

TEST(Boxplot, ContainmentOnGeneratedEnsembles) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (const auto& e : {gen_oscillating_tangents(400, seed), gen_campbell1d(400, seed)}) {
      const auto a = analyze(e);
      expect_within(a.boxplot.median_curve, a.boxplot.inner_band, kContainmentSlack);
      expect_nested(a.boxplot.inner_band, a.boxplot.outer_band, kContainmentSlack);
      for (std::size_t k = 0; k < e.sample_count(); ++k)
        EXPECT_LE(a.boxplot.inner_band.lower[k], a.boxplot.inner_band.upper[k]);
      EXPECT_FALSE(a.outer.empty());
    }
  }
}

TEST(Boxplot, ContainmentOnRank2Ensembles) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto e = fixtures::rank2_ensemble(seed);
    const auto a = analyze(e);
    expect_within(a.boxplot.median_curve, a.boxplot.inner_band, kContainmentSlack);
    expect_nested(a.boxplot.inner_band, a.boxplot.outer_band, kContainmentSlack);

    // inside members whose point lies inside one of the contour polygons
    // are inside the pooled hull, so their curves are within the band
    double scale = 0.0;
    for (double v : e.curves.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < e.member_count(); ++i) {
      if (!a.inner.inside_members[i]) continue;
      const auto& p = a.projection.points[i];
      const bool in_hull = std::any_of(a.inner.contours.begin(), a.inner.contours.end(),
                                       [&](const Polyline& poly) { return point_in_polygon(p, poly); });
      if (!in_hull) continue;
      const auto row = e.curves.row(i);
      expect_within({row.begin(), row.end()}, a.boxplot.inner_band, 1e-9 * (1.0 + scale));
    }
  }
}

TEST(Boxplot, CampbellOuterUpperRisesAfterTheEvent) {
  const auto e = gen_campbell1d(400, 0);
  const auto a = analyze(e);
  const std::size_t k70 = 160, k90 = 180;
  ASSERT_EQ(e.time.values[k70], 70.0);
  const auto& in = a.boxplot.inner_band;
  const auto& out = a.boxplot.outer_band;
  EXPECT_GT(out.upper[k90] - out.upper[k70], in.upper[k90] - in.upper[k70]);
}

TEST(Boxplot, UnimodalCloudSingleClusterNestedBands) {
  const auto a = analyze(fixtures::rank2_ensemble(10));
  EXPECT_EQ(a.inner.region_count, 1);
  for (const auto& c : a.boxplot.clusters)
    if (c) EXPECT_EQ(*c, 0);
}

TEST(Boxplot, RejectsBadInputs) {
  const auto a = analyze(gen_campbell1d(100, 1));
  // swapped inner and outer: the "inner" band is wider
  try {
    assemble_boxplot(a.plane, a.median, a.outer, a.inner, {}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::InvalidCoverage || e.code() == ErrorCode::ContainmentViolation);
  }
  // median far outside the inner band
  MedianPoint far = a.median;
  far.point = {1e6, 1e6};
  try {
    assemble_boxplot(a.plane, far, a.inner, a.outer, {}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ContainmentViolation);
  }
}

TEST(Boxplot, RegionBandsCoverEachRegion) {
  const auto a = analyze(gen_oscillating_tangents(400, 0));
  const auto per = region_bands(a.plane, a.inner);
  EXPECT_EQ(static_cast<int>(per.size()), a.inner.region_count);
  for (const auto& [label, band] : per) expect_nested(band, a.boxplot.inner_band, 1e-12);
}
