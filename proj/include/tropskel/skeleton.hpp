#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tropskel/curve.hpp"
#include "tropskel/mixed_np.hpp"
#include "tropskel/p1_models.hpp"

namespace tropskel {

// Genus of the function field T over Fw = C(w), with C algebraically closed
// in T (a geometric tower).  Riemann-Hurwitz on the plane model of a
// primitive element; place counts come from Newton-Puiseux at the critical
// values and at infinity.
int vertex_genus(const FieldPtr& T, const FieldPtr& Fw);

// Number of places of T above w = w0 (nullopt: w = infinity).  w0 is given
// by its minimal polynomial over C; the count is per root.
int places_above(const FieldPtr& T, const FieldPtr& Fw, const std::optional<Poly>& w0);

struct GraphVertex {
  int id = 0;
  int genus = 0;
  int over = 0;    // tree vertex
  int degree = 1;  // local degree of the covering
  int branch_leaves = 0;  // branch points over which this vertex is ramified
};

struct GraphEdge {
  int id = 0;
  int ends[2] = {0, 0};  // outer, inner
  Rational length;
  int over = 0;  // tree edge
};

struct MetricGraph {
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;
  int betti() const { return static_cast<int>(edges.size()) - static_cast<int>(vertices.size()) + 1; }
  bool connected() const;
  int genus_sum() const;
};

struct SkeletonOptions {
  Rational height{4};  // initial height above the smallest root valuation at a vertex
  int max_doublings = 8;  // per vertex
  TreeOptions tree;
  long characteristic = 0;  // of the residue field; only 0 is computed, p > 0 is checked for tameness
  std::optional<int> expected_genus;  // genus of X when known (smooth plane curve)
  bool verbose = false;
};

struct EdgeReport {
  int tree_edge = 0;
  std::vector<std::string> outer_rm, inner_rm;
  std::vector<std::vector<int>> dm_orbits;
  long kummer_order = 1;
};

struct Skeleton {
  SeparatingTree tree;
  MetricGraph graph;
  std::vector<std::string> constant_levels;
  Rational height;                       // initial relative height
  std::vector<Rational> vertex_heights;  // absolute t-heights that separated, per tree vertex
  std::vector<EdgeReport> edges;
  std::optional<int> expected_genus;
  std::vector<std::string> log;
};

Skeleton compute_skeleton(const Curve& f, const SkeletonOptions& opt = {});

// Smooth plane curve of total degree d: (d-1)(d-2)/2.
int plane_curve_genus(const Curve& f);

// Canonical form: vertices sorted by (over, genus, degree), edges by ends.
MetricGraph canonicalize(const MetricGraph& g);
// Structural comparison of two graphs (exact isomorphism respecting the
// covering map, genera and lengths).
bool isomorphic(const MetricGraph& a, const MetricGraph& b);

nlohmann::json to_json(const SeparatingTree& t);
nlohmann::json to_json(const Skeleton& s);
std::string to_dot(const Skeleton& s);
std::string to_dot(const SeparatingTree& t);

}  // namespace tropskel
