#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <random>

#include "json.hpp"

#include "tropskel/curve.hpp"
#include "tropskel/errors.hpp"
#include "tropskel/newton_puiseux.hpp"
#include "tropskel/tower.hpp"

#include "random_poly.hpp"

using namespace tropskel;

namespace {

Curve main_curve() {
  std::ifstream in(std::string(TROPSKEL_DATA_DIR) + "/main.json");
  auto j = nlohmann::json::parse(in);
  return Curve::parse(j["f"].get<std::string>());
}

SeriesPoly from_ints(const std::vector<std::vector<std::pair<long, long>>>& coeffs) {
  auto Q = Field::rationals();
  SeriesPoly f;
  for (const auto& c : coeffs) {
    LaurentSeries s(Q);
    for (auto [e, v] : c) s.add_term(Rational(e), Q->from_int(v));
    f.push_back(s);
  }
  return f;
}

struct ChartRun {
  ConstantField C;
  FieldPtr Fu;
  std::vector<RootApproximation> roots;
};

// Runs discrete_np in the chart x = u t^k, adjoining constants on demand.
ChartRun run_chart(const Curve& f, long k, const std::string& var, const Rational& h, Rational scale = 0) {
  ChartRun r;
  for (int restarts = 0; restarts < 8; ++restarts) {
    r.Fu = Field::function(r.C.field(), var);
    SeriesPoly g = f.chart(r.Fu, LaurentSeries(r.C.field()), Rational(k));
    if (scale != 0) g = scale_root(g, scale);
    try {
      r.roots = discrete_np(g, r.Fu, {h, FactorPolicy::Geometric, {"w", "z"}});
      return r;
    } catch (const NeedConstant& nc) {
      r.C.adjoin(nc.poly);
    }
  }
  throw BoundExceeded("too many constant extensions");
}

}  // namespace

TEST(NewtonPolygon, Examples) {
  auto np = newton_polygon(from_ints({{{1, -1}}, {}, {{0, 1}}}));  // y^2 - t
  ASSERT_EQ(np.segments.size(), 1u);
  EXPECT_EQ(np.segments[0].slope, Rational(1, 2));
  EXPECT_EQ(np.segments[0].length, 2);
  auto unit = newton_polygon(from_ints({{{0, 3}, {2, 1}}, {{1, 1}}, {{0, 1}}}));
  ASSERT_EQ(unit.segments.size(), 1u);
  EXPECT_EQ(unit.segments[0].slope, 0);
  auto z = newton_polygon(from_ints({{}, {}, {{0, 1}}, {{0, 1}}}));
  EXPECT_EQ(z.zero_roots, 2);
  EXPECT_EQ(z.segments.size(), 1u);
}

TEST(DiscreteNP, LinearExactRoot) {
  auto Q = Field::rationals();
  auto roots = discrete_np(from_ints({{{3, -1}}, {{0, 1}}}), Q, {Rational(10)});
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_TRUE(roots[0].exact);
  EXPECT_EQ(roots[0].series.str(), "t^3");
}

TEST(DiscreteNP, MainCase1) {
  ChartRun r = run_chart(main_curve(), 0, "x", Rational(2));
  ASSERT_EQ(r.C.describe(), std::vector<std::string>{"i: i^2 + 1"});
  ASSERT_EQ(r.roots.size(), 2u);
  std::vector<std::string> got{r.roots[0].series.str(), r.roots[1].series.str()};
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got[0], "w + (-1/2*i)*w*t + O(t^2)");
  EXPECT_EQ(got[1], "w + (1/2*i)*w*t + O(t^2)");
  for (const auto& a : r.roots) {
    EXPECT_EQ(a.tower->modulus().str(), "y^2 - x");
    EXPECT_EQ(a.degree, 2);
    EXPECT_TRUE(a.liftable);
  }
  EXPECT_EQ(dvr_orbits(r.roots, r.Fu).size(), 2u);
}

TEST(DiscreteNP, MainCase2) {
  ChartRun r = run_chart(main_curve(), 4, "x1", Rational(2), Rational(2));
  EXPECT_TRUE(r.C.describe().empty());
  ASSERT_EQ(r.roots.size(), 1u);
  const auto& a = r.roots[0];
  EXPECT_EQ(a.series.str(), "w + z*t + O(t^2)");
  EXPECT_EQ(a.lineage, (std::vector<std::string>{"y^2 - x1", "y^2 + 1/4*w + 1/4*x1"}));
  EXPECT_EQ(a.degree, 4);
  auto orbits = dvr_orbits(r.roots, r.Fu);
  ASSERT_EQ(orbits.size(), 1u);
  EXPECT_EQ(orbits[0].size, 4);
  EXPECT_EQ(tower_degree(a.tower, r.Fu), 4);
}

// Substitution oracle, orbit-size conservation and the slope multiset.
TEST(DiscreteNPProperty, RandomInstances) {
  testing_util::RandomPoly gen(2024);
  const Rational h(3);
  for (int trial = 0; trial < 1000; ++trial) {
    SeriesPoly f = gen.next();
    const int d = static_cast<int>(f.size()) - 1;
    auto Q = Field::rationals();
    auto roots = discrete_np(f, Q, {h, FactorPolicy::Plain});
    int total = 0;
    std::multiset<Rational> from_np, from_roots;
    for (const auto& seg : newton_polygon(f).segments)
      if (seg.slope < h)
        for (int k = 0; k < seg.length; ++k) from_np.insert(seg.slope);
    for (const auto& r : roots) {
      total += r.count * r.degree;
      LaurentSeries val = evaluate(embed(f, r.tower), r.series);
      if (r.exact) {
        EXPECT_TRUE(val.is_exact() && val.is_zero()) << trial;
      } else {
        EXPECT_GE(val.valuation_bound(), h) << "trial " << trial << ": " << r.series.str();
      }
      if (!r.series.is_zero() && *r.series.valuation() < h)
        for (int k = 0; k < r.count * r.degree; ++k) from_roots.insert(*r.series.valuation());
    }
    EXPECT_EQ(total, d) << trial;
    EXPECT_EQ(from_np, from_roots) << trial;
    Rational ho = h;
    for (int doublings = 0; doublings < 6; ++doublings, ho *= 2) {
      try {
        int orbit_total = 0;
        for (const auto& o : dvr_orbits(discrete_np(f, Q, {ho, FactorPolicy::Plain}), Q)) orbit_total += o.size;
        EXPECT_EQ(orbit_total, d) << trial;
        break;
      } catch (const BoundExceeded&) {
        EXPECT_LT(doublings, 5) << trial;
      }
    }
  }
}

// y (y + 7 t^4) at height 3: the exact root 0 and O(t^3) are not separated.
TEST(DiscreteNP, OrbitsNeedSeparation) {
  auto Q = Field::rationals();
  SeriesPoly f = from_ints({{}, {{4, 7}}, {{0, 1}}});
  EXPECT_THROW(dvr_orbits(discrete_np(f, Q, {Rational(3), FactorPolicy::Plain}), Q), BoundExceeded);
  EXPECT_EQ(dvr_orbits(discrete_np(f, Q, {Rational(6), FactorPolicy::Plain}), Q).size(), 2u);
}

// Product of all conjugates reconstructs f modulo the precision (split case).
TEST(DiscreteNPProperty, ProductReconstruction) {
  auto Q = Field::rationals();
  // (y - 1 - t)(y + 2 - t^2)(y - t^3): fully split over Q
  LaurentSeries r1 = LaurentSeries::constant(Q->one()) + LaurentSeries::monomial(Q->one(), Rational(1));
  LaurentSeries r2 = LaurentSeries::constant(Q->from_int(-2)) + LaurentSeries::monomial(Q->one(), Rational(2));
  LaurentSeries r3 = LaurentSeries::monomial(Q->one(), Rational(3));
  // build the cubic exactly
  std::vector<LaurentSeries> prod{LaurentSeries::constant(Q->one())};
  for (const auto& r : {r1, r2, r3}) {
    std::vector<LaurentSeries> next(prod.size() + 1, LaurentSeries(Q));
    for (std::size_t i = 0; i < prod.size(); ++i) {
      next[i + 1] += prod[i];
      next[i] -= prod[i] * r;
    }
    prod = next;
  }
  const Rational h(5);
  auto roots = discrete_np(prod, Q, {h, FactorPolicy::Plain});
  ASSERT_EQ(roots.size(), 3u);
  std::vector<LaurentSeries> back{LaurentSeries::constant(Q->one())};
  for (const auto& r : roots) {
    std::vector<LaurentSeries> next(back.size() + 1, LaurentSeries(Q));
    for (std::size_t i = 0; i < back.size(); ++i) {
      next[i + 1] += back[i];
      next[i] -= back[i] * r.series.truncated(h);
    }
    back = next;
  }
  for (std::size_t i = 0; i < prod.size(); ++i) EXPECT_TRUE((back[i] - prod[i]).truncated(h).is_zero()) << i;
}
