#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ensemble_lens/analysis.hpp"
#include "ensemble_lens/generators.hpp"
#include "ensemble_lens/selection.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ensemble_lens;

namespace {

std::vector<std::size_t> all_indices(std::size_t m) {
  std::vector<std::size_t> v(m);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// Parameters on a uniform grid over [0,1]^2: 21 x 21 points.
ParameterTable grid_params() {
  std::vector<double> values;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      values.push_back(i / 20.0);
      values.push_back(j / 20.0);
    }
  return ParameterTable({"X1", "X2"}, 441, values);
}

struct Fixture {
  AugmentedEnsemble e = gen_campbell1d(200, 3);
  Analysis a = analyze(e);
  SelectionContext ctx{e, a};
};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Predicates, PcaRectCoveringEverything) {
  Fixture f;
  double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
  for (const auto& p : f.a.projection.points) {
    lo1 = std::min(lo1, p.z1);
    hi1 = std::max(hi1, p.z1);
    lo2 = std::min(lo2, p.z2);
    hi2 = std::max(hi2, p.z2);
  }
  EXPECT_EQ(evaluate_predicate(f.ctx, PcaRect{lo1, hi1, lo2, hi2}), all_indices(200));
  EXPECT_THROW(evaluate_predicate(f.ctx, PcaRect{1, 0, 0, 1}), Error);
}

TEST(Predicates, LassoMatchesRect) {
  Fixture f;
  const PcaRect r{-5, 3, -2, 4};
  const PcaLasso l{{{-5, -2}, {3, -2}, {3, 4}, {-5, 4}}};
  EXPECT_EQ(evaluate_predicate(f.ctx, r), evaluate_predicate(f.ctx, l));
  EXPECT_EQ(code_of([&] { evaluate_predicate(f.ctx, PcaLasso{{{0, 0}, {1, 1}}}); }),
            ErrorCode::InvalidPredicate);
}

TEST(Predicates, PointInPolygonBoundary) {
  const std::vector<PlanePoint> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_TRUE(point_in_polygon({0.5, 0.5}, sq));
  EXPECT_TRUE(point_in_polygon({0, 0.5}, sq));
  EXPECT_TRUE(point_in_polygon({1, 1}, sq));
  EXPECT_FALSE(point_in_polygon({1.01, 0.5}, sq));
  const std::vector<PlanePoint> tri = {{0, 0}, {2, 0}, {0, 2}, {0, 0}};
  EXPECT_TRUE(point_in_polygon({1, 1}, tri));
  EXPECT_FALSE(point_in_polygon({1.2, 1}, tri));
}

TEST(Predicates, TimeBoxSemantics) {
  Fixture f;
  double gmin = 1e300;
  for (double v : f.e.curves.data()) gmin = std::min(gmin, v);
  EXPECT_TRUE(evaluate_predicate(f.ctx, TimeBox{-90, 90, gmin - 10, gmin - 1}).empty());
  // sample-hit semantics, brute force
  const TimeBox box{75.5, 90, 20, 1e9};
  std::vector<std::size_t> expect;
  for (std::size_t i = 0; i < 200; ++i)
    for (std::size_t k = 0; k < 181; ++k)
      if (f.e.time.values[k] >= 75.5 && f.e.curves(i, k) >= 20) {
        expect.push_back(i);
        break;
      }
  EXPECT_EQ(evaluate_predicate(f.ctx, box), expect);
}

TEST(Predicates, ParamRangeTopValues) {
  Fixture f;
  const auto col = f.e.params.column(1);
  const double mx = *std::max_element(col.begin(), col.end());
  const auto top = evaluate_predicate(f.ctx, ParamRange{"X2", mx - 1e-12, mx});
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(col[top[0]], mx);
  EXPECT_EQ(code_of([&] { evaluate_predicate(f.ctx, ParamRange{"nope", 0, 1}); }),
            ErrorCode::UnknownParam);
}

TEST(Predicates, BandTailIsStrict) {
  Fixture f;
  const auto sel = evaluate_predicate(f.ctx, BandTail{TailSide::Upper, 0.95, 180});
  const auto& up = f.a.boxplot.outer_band.upper;
  for (std::size_t i = 0; i < 200; ++i) {
    const bool in = std::binary_search(sel.begin(), sel.end(), i);
    EXPECT_EQ(in, f.e.curves(i, 180) > up[180]);
  }
  const auto low = evaluate_predicate(f.ctx, BandTail{TailSide::Lower, 0.5, 0});
  for (auto i : low) EXPECT_LT(f.e.curves(i, 0), f.a.boxplot.inner_band.lower[0]);
  // other coverages are computed on the same density field
  const auto b80 = band_at(f.a, 0.8);
  const auto s80 = evaluate_predicate(f.ctx, BandTail{TailSide::Upper, 0.8, 100});
  for (auto i : s80) EXPECT_GT(f.e.curves(i, 100), b80.upper[100]);
  EXPECT_EQ(code_of([&] { evaluate_predicate(f.ctx, BandTail{TailSide::Upper, 0.95, 181}); }),
            ErrorCode::TimeOutOfRange);
}

TEST(Predicates, OutlierAndCluster) {
  Fixture f;
  EXPECT_EQ(evaluate_predicate(f.ctx, OutlierFlag{}), f.a.boxplot.outliers);
  std::vector<std::size_t> c0;
  for (std::size_t i = 0; i < 200; ++i)
    if (f.a.boxplot.clusters[i] == 0) c0.push_back(i);
  EXPECT_EQ(evaluate_predicate(f.ctx, ClusterId{0}), c0);
  EXPECT_EQ(code_of([&] { evaluate_predicate(f.ctx, ClusterId{f.a.inner.region_count}); }),
            ErrorCode::InvalidCluster);
  EXPECT_EQ(code_of([&] { evaluate_predicate(f.ctx, ClusterId{-1}); }), ErrorCode::InvalidCluster);
}

TEST(Refine, SetAlgebra) {
  Fixture f;
  const Predicate pa = ParamRange{"X1", 0, 3};
  const Predicate pb = ParamRange{"X2", 1, 5};
  const auto a = refine(f.ctx, select_all(200), pa, CombineMode::Intersect);
  EXPECT_EQ(a.indices, evaluate_predicate(f.ctx, pa));
  EXPECT_EQ(refine(f.ctx, a, pa, CombineMode::Intersect).indices, a.indices);
  const auto sub = refine(f.ctx, a, pb, CombineMode::Subtract);
  EXPECT_TRUE(std::includes(a.indices.begin(), a.indices.end(), sub.indices.begin(), sub.indices.end()));
  const auto uni = refine(f.ctx, a, pb, CombineMode::Union);
  const auto b = evaluate_predicate(f.ctx, pb);
  EXPECT_TRUE(std::includes(uni.indices.begin(), uni.indices.end(), b.begin(), b.end()));
  EXPECT_EQ(refine(f.ctx, a, pb, CombineMode::Replace).indices, b);
  EXPECT_EQ(uni.provenance.size(), 2u);

  // low X1 with high X3 vs low X1 with low X3: disjoint
  const auto hi = refine(f.ctx, a, ParamRange{"X3", 3, 5}, CombineMode::Intersect);
  const auto lo = refine(f.ctx, a, ParamRange{"X3", -1, 2}, CombineMode::Intersect);
  std::vector<std::size_t> both;
  std::set_intersection(hi.indices.begin(), hi.indices.end(), lo.indices.begin(), lo.indices.end(),
                        std::back_inserter(both));
  EXPECT_TRUE(both.empty());
}

// Random predicate chains: replaying the provenance reproduces the indices.
TEST(Refine, ProvenanceReplay) {
  Fixture f;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 5), z(-20, 20);
  std::uniform_int_distribution<int> kind(0, 4), mode(0, 3), nstep(1, 6);
  for (int trial = 0; trial < 50; ++trial) {
    Selection sel = select_all(200);
    const int n = nstep(rng);
    for (int s = 0; s < n; ++s) {
      Predicate p;
      switch (kind(rng)) {
        case 0: {
          double a = u(rng), b = u(rng);
          p = ParamRange{"X" + std::to_string(1 + trial % 4), std::min(a, b), std::max(a, b)};
          break;
        }
        case 1: {
          double a = z(rng), b = z(rng), c = z(rng), d = z(rng);
          p = PcaRect{std::min(a, b), std::max(a, b), std::min(c, d), std::max(c, d)};
          break;
        }
        case 2:
          p = TimeBox{0, 90, 12, 30};
          break;
        case 3:
          p = OutlierFlag{};
          break;
        default:
          p = BandTail{TailSide::Upper, 0.5, static_cast<std::size_t>(trial % 181)};
      }
      sel = refine(f.ctx, sel, p, static_cast<CombineMode>(mode(rng)));
    }
    EXPECT_EQ(evaluate_provenance(f.ctx, sel.provenance).indices, sel.indices);
    EXPECT_TRUE(std::is_sorted(sel.indices.begin(), sel.indices.end()));
    EXPECT_EQ(std::adjacent_find(sel.indices.begin(), sel.indices.end()), sel.indices.end());
  }
  EXPECT_EQ(evaluate_provenance(f.ctx, {}).indices, all_indices(200));
}

TEST(Quantiles, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(quantile_linear({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile_linear({4, 1, 3, 2}, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(interquartile_range({1, 2, 3, 4, 5}), 2.0);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int n : {3, 4, 17, 100}) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = g(rng);
    for (double q : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0})
      EXPECT_NEAR(quantile_linear(v, q), oracle::quantile(v, q), 1e-15);
  }
}

TEST(Sensitivity, AllMembersScoreZero) {
  const auto e = gen_campbell1d(100, 4);
  const auto r = concentration_scores(e.params, all_indices(100));
  for (const auto& s : r.scores) EXPECT_EQ(s.score, 0.0);
  EXPECT_EQ(r.ranking, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Sensitivity, ConstantWithinSelection) {
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) {
    v.push_back(i < 5 ? 2.0 : static_cast<double>(i));
    v.push_back(static_cast<double>(i % 3));
  }
  const ParameterTable p({"a", "b"}, 10, v);
  const auto r = concentration_scores(p, std::vector<std::size_t>{0, 1, 2, 3});
  EXPECT_EQ(r.scores[0].score, 1.0);
  EXPECT_EQ(r.ranking.front(), 0u);
}

TEST(Sensitivity, UndefinedWhenPopulationIqrIsZero) {
  std::vector<double> v;
  for (int i = 0; i < 8; ++i) {
    v.push_back(1.0);
    v.push_back(static_cast<double>(i));
  }
  const ParameterTable p({"flat", "x"}, 8, v);
  const auto r = concentration_scores(p, std::vector<std::size_t>{0, 1, 2});
  EXPECT_FALSE(r.scores[0].score.has_value());
  EXPECT_EQ(r.ranking, (std::vector<std::size_t>{1}));
}

TEST(Sensitivity, UniformGridHalfSelection) {
  const auto p = grid_params();
  std::vector<std::size_t> sel;
  for (std::size_t i = 0; i < 441; ++i)
    if (p(i, 0) <= 0.5) sel.push_back(i);
  const auto r = concentration_scores(p, sel);
  const double tol = 2.0 / std::sqrt(static_cast<double>(sel.size()));

  // brute-force quantiles on the constructed sample
  auto col = [&](std::size_t j, bool only_sel) {
    std::vector<double> out;
    for (std::size_t i = 0; i < 441; ++i)
      if (!only_sel || p(i, 0) <= 0.5) out.push_back(p(i, j));
    return out;
  };
  for (std::size_t j = 0; j < 2; ++j) {
    const auto all = col(j, false), s = col(j, true);
    const double ref = 1.0 - (oracle::quantile(s, 0.75) - oracle::quantile(s, 0.25)) /
                                 (oracle::quantile(all, 0.75) - oracle::quantile(all, 0.25));
    EXPECT_NEAR(*r.scores[j].score, ref, 1e-12);
  }
  EXPECT_NEAR(*r.scores[0].score, 0.5, tol);
  EXPECT_NEAR(*r.scores[1].score, 0.0, tol);
  EXPECT_EQ(r.ranking.front(), 0u);

  const auto br = selection_bracket_overlays(p, sel);
  EXPECT_GE(br[0].min, 0.0);
  EXPECT_LE(br[0].max, 0.5);
}

TEST(Sensitivity, ScaleAndPermutationInvariance) {
  const auto e = gen_campbell1d(150, 6);
  std::vector<std::size_t> sel;
  for (std::size_t i = 0; i < 150; ++i)
    if (e.params(i, 1) > 2.5) sel.push_back(i);
  const auto base = concentration_scores(e.params, sel);

  std::vector<double> scaled = e.params.data();
  for (std::size_t i = 0; i < 150; ++i) scaled[i * 4 + 2] = -3.7 * scaled[i * 4 + 2] + 11.0;
  const auto s2 = concentration_scores(ParameterTable(e.params.names(), 150, scaled), sel);
  EXPECT_NEAR(*s2.scores[2].score, *base.scores[2].score, 1e-12);

  std::vector<std::size_t> perm(150);
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(2));
  std::vector<double> pv(600);
  std::vector<std::size_t> psel;
  for (std::size_t i = 0; i < 150; ++i) {
    for (std::size_t j = 0; j < 4; ++j) pv[i * 4 + j] = e.params(perm[i], j);
    if (e.params(perm[i], 1) > 2.5) psel.push_back(i);
  }
  const auto s3 = concentration_scores(ParameterTable(e.params.names(), 150, pv), psel);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(*s3.scores[j].score, *base.scores[j].score, 1e-12);
  EXPECT_EQ(s3.ranking, base.ranking);
}

// A ParamRange on one uniform parameter concentrates it while the
// independently drawn parameters stay near zero.
TEST(Sensitivity, MonotoneSanity) {
  const auto e = gen_campbell1d(2000, 12);
  for (std::size_t j = 0; j < 4; ++j) {
    const std::string name = e.params.names()[j];
    std::vector<std::size_t> sel;
    for (std::size_t i = 0; i < 2000; ++i)
      if (e.params(i, j) >= 0.5 && e.params(i, j) <= 3.0) sel.push_back(i);
    const auto r = concentration_scores(e.params, sel);
    const double tol = 2.0 / std::sqrt(static_cast<double>(sel.size()));
    EXPECT_GT(*r.scores[j].score, 0.0);
    for (std::size_t k = 0; k < 4; ++k)
      if (k != j) EXPECT_NEAR(*r.scores[k].score, 0.0, tol) << name << " vs " << k;
  }
}

TEST(Sensitivity, TooSmall) {
  const auto e = gen_campbell1d(20, 1);
  EXPECT_EQ(code_of([&] { concentration_scores(e.params, std::vector<std::size_t>{1, 2}); }),
            ErrorCode::SelectionTooSmall);
}

TEST(Brackets, SingletonAndFull) {
  const auto e = gen_campbell1d(30, 2);
  const auto one = selection_bracket_overlays(e.params, std::vector<std::size_t>{7});
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(one[j].min, e.params(7, j));
    EXPECT_EQ(one[j].max, e.params(7, j));
  }
  const auto full = selection_bracket_overlays(e.params, all_indices(30));
  for (std::size_t j = 0; j < 4; ++j) {
    const auto c = e.params.column(j);
    EXPECT_EQ(full[j].min, *std::min_element(c.begin(), c.end()));
    EXPECT_EQ(full[j].max, *std::max_element(c.begin(), c.end()));
  }
}
