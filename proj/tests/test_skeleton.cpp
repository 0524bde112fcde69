#include <gtest/gtest.h>

#include <map>

#include "tropskel/errors.hpp"
#include "tropskel/skeleton.hpp"
#include "tropskel/tower.hpp"

using namespace tropskel;

namespace {

Skeleton run(const std::string& f, const Rational& h = Rational(4)) {
  SkeletonOptions o;
  o.height = h;
  return compute_skeleton(Curve::parse(f), o);
}

// Total length of the edges left after repeatedly pruning degree-1 vertices.
Rational core_length(const MetricGraph& g) {
  std::vector<bool> alive(g.edges.size(), true);
  for (bool changed = true; changed;) {
    changed = false;
    std::map<int, int> deg;
    for (std::size_t k = 0; k < g.edges.size(); ++k)
      if (alive[k]) {
        ++deg[g.edges[k].ends[0]];
        ++deg[g.edges[k].ends[1]];
      }
    for (std::size_t k = 0; k < g.edges.size(); ++k)
      if (alive[k] && (deg[g.edges[k].ends[0]] == 1 || deg[g.edges[k].ends[1]] == 1)) {
        alive[k] = false;
        changed = true;
      }
  }
  Rational total(0);
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    if (alive[k]) total += g.edges[k].length;
  return total;
}

// Degree conservation over every tree vertex and tree edge.
void expect_covering(const Skeleton& s, int d) {
  std::map<int, int> over_vertex;
  for (const auto& v : s.graph.vertices) over_vertex[v.over] += v.degree;
  for (std::size_t k = 0; k < s.tree.vertices.size(); ++k) EXPECT_EQ(over_vertex[static_cast<int>(k)], d);
  std::map<int, Rational> over_edge;
  for (const auto& e : s.graph.edges)
    over_edge[e.over] += s.tree.edges[e.over].annulus.length() / e.length;
  for (std::size_t k = 0; k < s.tree.edges.size(); ++k) EXPECT_EQ(over_edge[static_cast<int>(k)], Rational(d));
  EXPECT_TRUE(s.graph.connected());
}

}  // namespace

TEST(VertexGenus, HyperellipticTowers) {
  auto Q = Field::rationals();
  auto Fs = Field::function(Q, "s");
  Elem s = Fs->gen();
  auto cubic = Field::algebraic(Fs, Poly(Fs, {-(s * (s - Fs->one()) * (s - Fs->from_int(2))), Fs->zero(), Fs->one()}), "y");
  EXPECT_EQ(vertex_genus(cubic, Fs), 1);
  auto conic = Field::algebraic(Fs, Poly(Fs, {-s, Fs->zero(), Fs->one()}), "y");
  EXPECT_EQ(vertex_genus(conic, Fs), 0);
  EXPECT_EQ(places_above(conic, Fs, Poly(Q, {Q->zero(), Q->one()})), 1);
  EXPECT_EQ(places_above(conic, Fs, Poly(Q, {-Q->one(), Q->one()})), 2);
  EXPECT_EQ(places_above(conic, Fs, std::nullopt), 1);
}

TEST(Skeleton, DegreeOneCurveIsTheTree) {
  Skeleton s = run("y - x^2 - t");
  EXPECT_EQ(s.graph.vertices.size(), s.tree.vertices.size());
  EXPECT_EQ(s.graph.betti(), 0);
  EXPECT_EQ(s.graph.genus_sum(), 0);
}

// All branch-point differences are units: one vertex carrying the genus.
TEST(Skeleton, GoodReductionGenusOne) {
  Skeleton s = run("y^2 - (x-1)*(x-2)*(x-3)*(x-4)");
  EXPECT_EQ(s.graph.betti(), 0);
  EXPECT_EQ(s.graph.genus_sum(), 1);
  expect_covering(s, 2);
}

// Oracle: for y^2 = x(x - 1)(x - lambda) the loop has length -v(j) with
// j = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2).
TEST(Skeleton, TateCurveLoopIsMinusValuationOfJ) {
  auto Q = Field::rationals();
  LaurentSeries l(Q), one(Q);
  l.add_term(Rational(3), Q->one());
  one.add_term(Rational(0), Q->one());
  LaurentSeries num = pow(l * l - l + one, 3).scaled(Q->from_int(256));
  LaurentSeries den = l * l * pow(l - one, 2);
  Rational vj = *num.valuation() - *den.valuation();

  Skeleton s = run("y^2 - x*(x-1)*(x-t^3)");
  EXPECT_EQ(s.graph.betti(), 1);
  EXPECT_EQ(s.graph.genus_sum(), 0);
  EXPECT_EQ(core_length(s.graph), -vj);
  expect_covering(s, 2);
}

// Three pairs of branch points coalescing: genus 2 and a Mumford curve.
TEST(Skeleton, ThreeTwinClustersGiveTwoLoops) {
  Skeleton s = run("y^2 - x*(x-t)*(x-1)*(x-1-t)*(x-2)*(x-2-t)");
  EXPECT_EQ(s.graph.betti(), 2);
  EXPECT_EQ(s.graph.genus_sum(), 0);
  expect_covering(s, 2);
}

// Smooth plane cubic y^3 = x(x - 1)(x - t^3): Kummer order 3 on the edge,
// a single edge above it and the genus on one vertex.
TEST(Skeleton, CyclicCubicCover) {
  Skeleton s = run("y^3 - x*(x-1)*(x-t^3)");
  EXPECT_EQ(s.graph.betti() + s.graph.genus_sum(), 1);
  EXPECT_EQ(s.graph.betti(), 0);
  ASSERT_EQ(s.edges.size(), 1u);
  EXPECT_EQ(s.edges[0].kummer_order, 3);
  expect_covering(s, 3);
}

TEST(Skeleton, StableUnderDoubledHeights) {
  for (const char* f : {"y^2 - x*(x-1)*(x-t^3)", "y^2 - x*(x-t)*(x-1)*(x-1-t)*(x-2)*(x-2-t)",
                        "y^3 - x*(x-1)*(x-t^3)"}) {
    SCOPED_TRACE(f);
    Skeleton a = run(f, Rational(4)), b = run(f, Rational(8));
    EXPECT_TRUE(isomorphic(a.graph, b.graph));
    EXPECT_EQ(to_dot(a), to_dot(b));
  }
}

TEST(Skeleton, WildInputIsRejected) {
  SkeletonOptions o;
  o.characteristic = 2;
  EXPECT_THROW(compute_skeleton(Curve::parse("y^2 - x*(x-1)*(x-t)"), o), PreconditionError);
}

TEST(Graph, IsomorphismIgnoresLabels) {
  MetricGraph g;
  g.vertices = {{0, 0, 0, 1, 0}, {1, 1, 1, 1, 0}, {2, 0, 1, 1, 0}};
  g.edges = {{0, {0, 1}, Rational(2), 0}, {1, {0, 2}, Rational(3), 0}};
  MetricGraph h;
  h.vertices = {{0, 0, 1, 1, 0}, {1, 0, 0, 1, 0}, {2, 1, 1, 1, 0}};
  h.edges = {{0, {1, 0}, Rational(3), 0}, {1, {1, 2}, Rational(2), 0}};
  EXPECT_TRUE(isomorphic(g, h));
  h.edges[0].length = Rational(4);
  EXPECT_FALSE(isomorphic(g, h));
}

TEST(Export, JsonHasSchemaKeys) {
  SkeletonOptions o;
  o.expected_genus = 1;
  Skeleton s = compute_skeleton(Curve::parse("y^2 - x*(x-1)*(x-t^3)"), o);
  auto j = to_json(s);
  EXPECT_TRUE(j.contains("tree"));
  EXPECT_EQ(j["betti"], 1);
  EXPECT_TRUE(j["genus_check"]["ok"].get<bool>());
  for (const auto& v : j["skeleton"]["vertices"]) EXPECT_TRUE(v.contains("genus") && v.contains("over"));
  for (const auto& e : j["skeleton"]["edges"]) EXPECT_EQ(e["length"].size(), 2u);
}
