#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "tropskel/factor.hpp"
#include "tropskel/tower.hpp"

using namespace tropskel;

namespace {

LaurentSeries series(std::vector<std::pair<long, Elem>> terms) {
  LaurentSeries s(terms.front().second.field());
  for (auto& [e, c] : terms) s.add_term(Rational(e), c);
  return s;
}

// canonical form of a partition for comparison under relabeling
std::vector<std::vector<int>> canon(std::vector<std::vector<int>> p) {
  for (auto& c : p) std::sort(c.begin(), c.end());
  std::sort(p.begin(), p.end());
  return p;
}

struct Case1 {
  FieldPtr C, B, T;
  std::vector<LaurentSeries> roots;
  Case1() {
    ConstantField cf;
    cf.adjoin(Poly::from_ints(Field::rationals(), {1, 0, 1}));
    C = cf.field();
    B = Field::function(C, "x");
    Elem x = B->gen();
    T = extend_tower(B, Poly(B, {-x, B->zero(), B->one()}), "w");
    Elem w = T->gen(), i = T->embed(C->gen()), half = T->from_rational(Rational(1, 2));
    for (Elem wk : {w, -w})
      for (Elem s : {i, -i}) roots.push_back(series({{0, wk}, {1, half * s * wk}}));
  }
};

}  // namespace

TEST(Tower, ExtendAndDegree) {
  auto B = Field::function(Field::rationals(), "x");
  Elem x = B->gen();
  auto T = extend_tower(B, Poly(B, {-x, B->zero(), B->one()}), "w");
  EXPECT_EQ(tower_degree(T, B), 2);
  Elem w = T->gen();
  Poly g(T, {w.pow(4) + w.pow(3), T->zero(), T->from_int(4) * w * w});
  auto T2 = extend_tower(T, g, "z");
  EXPECT_EQ(T2->modulus().str(), "y^2 + 1/4*w + 1/4*x");
  EXPECT_EQ(tower_degree(T2, B), 4);
  EXPECT_EQ(tower_degree(B, B), 1);
  auto same = extend_tower(T, Poly(T, {-w, T->one()}), "c");
  EXPECT_EQ(same, T);
}

TEST(Tower, MinimalPolynomials) {
  auto B = Field::function(Field::rationals(), "x");
  Elem x = B->gen();
  auto T = extend_tower(B, Poly(B, {-x, B->zero(), B->one()}), "w");
  Elem w = T->gen();
  auto T2 = extend_tower(T, Poly(T, {w.pow(4) + w.pow(3), T->zero(), T->from_int(4) * w * w}), "z");
  EXPECT_EQ(minpoly(T->gen(), B).str(), "y^2 - x");
  // z^2 = -(x + w)/4 gives z^4 + x/2 z^2 + (x^2 - x)/16
  Poly mz = minpoly(T2->gen(), B);
  Poly expect(B, {(x * x - x) / B->from_int(16), B->zero(), x / B->from_int(2), B->zero(), B->one()});
  EXPECT_EQ(mz, expect);
  ConstantField cf;
  cf.adjoin(Poly::from_ints(Field::rationals(), {1, 0, 1}));
  EXPECT_EQ(minpoly(cf.field()->gen(), Field::rationals()).str(), "y^2 + 1");
}

TEST(Tower, ConstantNormalization) {
  ConstantField cf;
  cf.adjoin(Poly::from_ints(Field::rationals(), {1, 1, 1}));  // roots (-1 +- sqrt(-3))/2
  EXPECT_EQ(cf.field()->name(), "sqrtm3");
  cf.adjoin(Poly::from_ints(Field::rationals(), {-8, 0, 1}));
  EXPECT_EQ(cf.field()->name(), "sqrt2");
  cf.adjoin(Poly::from_ints(Field::rationals(), {-2, 0, 0, 1}));
  EXPECT_EQ(cf.field()->name(), "a1");
  EXPECT_EQ(cf.degree(), 12);
  EXPECT_EQ(cf.describe().front(), "sqrtm3: sqrtm3^2 + 3");
}

TEST(Tower, PrimitiveElement) {
  auto B = Field::function(Field::rationals(), "x");
  Elem x = B->gen();
  auto T = extend_tower(B, Poly(B, {-x, B->zero(), B->one()}), "w");
  Elem w = T->gen();
  auto T2 = extend_tower(T, Poly(T, {w.pow(4) + w.pow(3), T->zero(), T->from_int(4) * w * w}), "z");
  PrimitiveElement pe(T2, B);
  EXPECT_EQ(pe.minpoly().degree(), 4);
  EXPECT_TRUE(pe.minpoly().embed(T2).eval(pe.theta()).is_zero());
  Elem e = T2->embed(w) * T2->gen() + T2->from_int(3);
  Poly r = pe.express(e);
  EXPECT_EQ(r.embed(T2).eval(pe.theta()), e);
}

TEST(Tower, ConjugateClassesCase1) {
  Case1 c;
  auto cl = conjugate_classes(c.roots, c.B);
  EXPECT_EQ(canon(cl), (std::vector<std::vector<int>>{{0, 2}, {1, 3}}));
}

TEST(Tower, ConjugateClassesCase2) {
  // splitting data: z^2 = -(w^2+w)/4, z'^2 = -(w^2-w)/4
  auto B = Field::function(Field::rationals(), "x");
  Elem x = B->gen();
  auto T = extend_tower(B, Poly(B, {-x, B->zero(), B->one()}), "w");
  Elem w = T->gen();
  auto Tz = extend_tower(T, Poly(T, {(w * w + w) / T->from_int(4), T->zero(), T->one()}), "z");
  Elem wz = Tz->embed(w);
  auto S = extend_tower(Tz, Poly(Tz, {(wz * wz - wz) / Tz->from_int(4), Tz->zero(), Tz->one()}), "zp");
  Elem W = S->embed(w), z = S->embed(Tz->gen()), zp = S->gen();
  std::vector<LaurentSeries> roots{series({{0, z}, {1, W}}), series({{0, -z}, {1, W}}),
                                   series({{0, zp}, {1, -W}}), series({{0, -zp}, {1, -W}})};
  auto cl = conjugate_classes(roots, B);
  ASSERT_EQ(cl.size(), 1u);
  EXPECT_EQ(cl[0].size(), 4u);
  // a tail inconsistent with w -> -w breaks the orbit
  roots[2] = series({{0, zp}, {1, W}});
  EXPECT_GT(conjugate_classes(roots, B).size(), 1u);
}

TEST(Tower, ConjugateClassesRational) {
  auto Q = Field::rationals();
  std::vector<LaurentSeries> roots;
  for (long k = 1; k <= 3; ++k) roots.push_back(series({{0, Q->from_int(k)}, {2, Q->from_int(k * k)}}));
  EXPECT_EQ(conjugate_classes(roots, Q).size(), 3u);
}

// Invariants: orbit sizes add up, partition is permutation invariant, and the
// degree of the field generated by one approximation equals its orbit size.
TEST(TowerProperty, PermutationInvariance) {
  Case1 c;
  std::mt19937 rng(7);
  auto base = canon(conjugate_classes(c.roots, c.B));
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<LaurentSeries> shuffled;
    for (int p : perm) shuffled.push_back(c.roots[p]);
    auto cl = conjugate_classes(shuffled, c.B);
    std::size_t total = 0;
    for (auto& o : cl) {
      total += o.size();
      for (auto& k : o) k = perm[k];
    }
    EXPECT_EQ(total, c.roots.size());
    EXPECT_EQ(canon(cl), base);
  }
}

TEST(TowerProperty, DegreeEqualsOrbitSize) {
  Case1 c;
  for (const auto& o : conjugate_classes(c.roots, c.B)) {
    // coefficients of one member generate B(w): degree 2
    const auto& r = c.roots[o.front()];
    int deg = 1;
    for (const auto& [e, coef] : r.terms()) deg = std::max(deg, minpoly(coef, c.B).degree());
    EXPECT_EQ(static_cast<std::size_t>(deg), o.size());
    EXPECT_EQ(static_cast<std::size_t>(tower_degree(c.T, c.B)), o.size());
  }
}
