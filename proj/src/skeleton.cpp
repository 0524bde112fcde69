#include "tropskel/skeleton.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "tropskel/errors.hpp"
#include "tropskel/factor.hpp"
#include "tropskel/tower.hpp"

namespace tropskel {

// ---------------------------------------------------------------- genus

namespace {

// Plane model M(w, y) of a primitive element with coefficients in C[w].
std::vector<Poly> plane_model(const FieldPtr& T, const FieldPtr& Fw) {
  PrimitiveElement P(T, Fw);
  const Poly& M = P.minpoly();
  const FieldPtr& C = Fw->base();
  Poly den = Poly::constant(C->one());
  for (const auto& c : M.coeffs()) den = den * c.den() / gcd(den, c.den());
  std::vector<Poly> out;
  for (const auto& c : M.coeffs()) out.push_back((c * Fw->make_fraction(den, Poly::constant(C->one()))).num());
  return out;
}

int count_places(const std::vector<Poly>& model, const FieldPtr& C, const std::optional<Poly>& w0) {
  FieldPtr K = C;
  Elem root;
  if (w0) {
    Poly p = w0->monic();
    if (p.degree() == 1) {
      root = -p.coeff(0);
    } else {
      K = Field::algebraic(C, p, "w0");
      root = K->gen();
    }
  }
  long top = 0;
  for (const auto& a : model) top = std::max<long>(top, a.degree());
  SeriesPoly g;
  for (const auto& a : model) {
    LaurentSeries s(K);
    if (w0) {
      Poly shifted = a.embed(K).taylor_shift(root);
      for (int k = 0; k <= shifted.degree(); ++k) s.add_term(Rational(k), shifted.coeffs()[k]);
    } else {
      // w = 1/s, multiplied by s^top
      for (int k = 0; k <= a.degree(); ++k) s.add_term(Rational(top - k), K->embed(a.coeffs()[k]));
    }
    g.push_back(s);
  }
  NPOptions o;
  o.height = Rational(100000);
  o.policy = FactorPolicy::Plain;
  o.isolate = true;
  Rational places = 0;
  for (const auto& r : discrete_np(g, K, o)) places += Rational(r.degree * r.count) / Rational(r.series.ramification());
  if (places.get_den() != 1) throw MathError("non-integral place count");
  return static_cast<int>(places.get_num().get_si());
}

}  // namespace

int places_above(const FieldPtr& T, const FieldPtr& Fw, const std::optional<Poly>& w0) {
  if (T == Fw) return 1;
  return count_places(plane_model(T, Fw), Fw->base(), w0);
}

int vertex_genus(const FieldPtr& T, const FieldPtr& Fw) {
  if (T == Fw) return 0;
  const FieldPtr& C = Fw->base();
  std::vector<Poly> model = plane_model(T, Fw);
  const int d = static_cast<int>(model.size()) - 1;
  std::vector<Elem> cs;
  for (const auto& a : model) cs.push_back(Fw->make_fraction(a, Poly::constant(C->one())));
  Poly M(Fw, cs);
  Poly crit = discriminant(M).num() * model.back();
  long total = d - count_places(model, C, std::nullopt);
  for (const auto& [p, mult] : factor(squarefree_part(crit))) {
    if (p.degree() < 1) continue;
    total += static_cast<long>(p.degree()) * (d - count_places(model, C, p));
  }
  // 2g - 2 = -2d + sum (e_P - 1)
  long twice = total - 2L * d + 2;
  if (twice < 0 || twice % 2) throw MathError("Riemann-Hurwitz gives a non-integral genus");
  return static_cast<int>(twice / 2);
}

// ---------------------------------------------------------------- graph

bool MetricGraph::connected() const {
  if (vertices.empty()) return true;
  std::vector<int> parent(vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& e : edges) parent[find(e.ends[0])] = find(e.ends[1]);
  int roots = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++roots;
  return roots == 1;
}

int MetricGraph::genus_sum() const {
  int s = 0;
  for (const auto& v : vertices) s += v.genus;
  return s;
}

int plane_curve_genus(const Curve& f) {
  int d = 0;
  for (const auto& [k, c] : f.terms()) d = std::max(d, k.first + k.second);
  return (d - 1) * (d - 2) / 2;
}

MetricGraph canonicalize(const MetricGraph& g) {
  std::vector<int> order(g.vertices.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto &x = g.vertices[a], &y = g.vertices[b];
    return std::tie(x.over, x.genus, x.degree) < std::tie(y.over, y.genus, y.degree);
  });
  std::vector<int> rename(g.vertices.size());
  MetricGraph out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    rename[order[k]] = static_cast<int>(k);
    GraphVertex v = g.vertices[order[k]];
    v.id = static_cast<int>(k);
    out.vertices.push_back(v);
  }
  for (const auto& e : g.edges) {
    GraphEdge n = e;
    n.ends[0] = rename[e.ends[0]];
    n.ends[1] = rename[e.ends[1]];
    out.edges.push_back(n);
  }
  std::stable_sort(out.edges.begin(), out.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tie(a.ends[0], a.ends[1], a.over) < std::tie(b.ends[0], b.ends[1], b.over);
  });
  for (std::size_t k = 0; k < out.edges.size(); ++k) out.edges[k].id = static_cast<int>(k);
  return out;
}

bool isomorphic(const MetricGraph& a, const MetricGraph& b) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) return false;
  using EdgeKey = std::tuple<int, int, int, Rational>;  // (end0, end1, over, length)
  auto edge_set = [](const MetricGraph& g, const std::vector<int>& map) {
    std::multiset<EdgeKey> s;
    for (const auto& e : g.edges) s.emplace(map[e.ends[0]], map[e.ends[1]], e.over, e.length);
    return s;
  };
  std::vector<int> ident(b.vertices.size());
  std::iota(ident.begin(), ident.end(), 0);
  const auto target = edge_set(b, ident);
  std::vector<int> map(a.vertices.size(), -1);
  std::vector<bool> used(b.vertices.size(), false);
  auto compatible = [&](int i, int j) {
    const auto &x = a.vertices[i], &y = b.vertices[j];
    return x.over == y.over && x.genus == y.genus && x.degree == y.degree && x.branch_leaves == y.branch_leaves;
  };
  // partial check: edges between already mapped vertices must exist in b
  auto partial_ok = [&]() {
    std::multiset<EdgeKey> s;
    for (const auto& e : a.edges)
      if (map[e.ends[0]] >= 0 && map[e.ends[1]] >= 0) s.emplace(map[e.ends[0]], map[e.ends[1]], e.over, e.length);
    std::multiset<EdgeKey> t;
    for (const auto& k : target)
      if (used[std::get<0>(k)] && used[std::get<1>(k)]) t.insert(k);
    return s == t;
  };
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == a.vertices.size()) return edge_set(a, map) == target;
    for (std::size_t j = 0; j < b.vertices.size(); ++j) {
      if (used[j] || !compatible(static_cast<int>(i), static_cast<int>(j))) continue;
      map[i] = static_cast<int>(j);
      used[j] = true;
      if (partial_ok() && go(i + 1)) return true;
      map[i] = -1;
      used[j] = false;
    }
    return false;
  };
  return go(0);
}

// ---------------------------------------------------------------- skeleton builder

namespace {

struct Attempt {
  MetricGraph graph;
  std::vector<EdgeReport> edges;
  std::vector<Rational> heights;
  std::vector<std::string> log;
};

struct EdgeRun {
  std::vector<AdicApproximation> outer, inner;
  std::vector<int> match;
  DmOrbits dm;
};

// Heights are relative to the smallest root valuation at each vertex and are
// raised per vertex: a vertex whose orbits do not separate, or an edge whose
// box does not separate its roots, doubles only the heights involved.
Attempt build(const Curve& f, const SeparatingTree& tree, const FieldPtr& C, const Rational& h, int max_doublings,
              bool verbose) {
  Attempt A;
  const int deg = f.deg_y();
  const std::size_t nv = tree.vertices.size();
  FieldPtr Fw = Field::function(C, "s");
  FieldPtr Fu = Field::function(C, "u"), Fv = Field::function(C, "v");
  std::vector<std::vector<RootApproximation>> reps(nv);
  std::vector<Rational> base(nv), rel(nv, h), H(nv);
  std::vector<int> raised(nv, 0);
  for (std::size_t k = 0; k < nv; ++k) {
    const auto& V = tree.vertices[k];
    NewtonPolygon np = newton_polygon(f.chart(Fw, V.center.embed(C), V.radius));
    base[k] = np.segments.empty() ? Rational(0) : Rational(ceil(np.segments.front().slope));
  }
  auto raise = [&](std::size_t k, const std::string& why) {
    if (++raised[k] > max_doublings) throw BoundExceeded(why + " at " + tree.vertices[k].str());
    rel[k] *= 2;
    if (verbose) A.log.push_back(tree.vertices[k].str() + ": " + why + ", relative height " + to_string(rel[k]));
  };
  auto compute_vertex = [&](std::size_t k) {
    for (;;) {
      try {
        H[k] = base[k] + rel[k];
        reps[k] = vertex_representatives(f, tree.vertices[k], Fw, H[k]);
        return;
      } catch (const BoundExceeded& e) {
        raise(k, e.what());
      }
    }
  };
  for (std::size_t k = 0; k < nv; ++k) compute_vertex(k);

  // edge runs, cached by the heights of their ends
  std::vector<std::optional<EdgeRun>> runs(tree.edges.size());
  std::vector<std::pair<Rational, Rational>> run_heights(tree.edges.size());
  for (bool dirty = true; dirty;) {
    dirty = false;
    for (std::size_t k = 0; k < tree.edges.size() && !dirty; ++k) {
      const auto& E = tree.edges[k];
      if (runs[k] && run_heights[k] == std::make_pair(H[E.outer], H[E.inner])) continue;
      Regularization R = regularize(E.annulus);
      try {
        // common box u < H(inner), v < H(outer)
        EdgeRun run;
        run.outer = expand_at_edge(transfer_representatives(reps[E.outer], Fw, tree.vertices[E.outer], R, Side::Outer, Fu),
                                   R, Side::Outer, {H[E.inner], H[E.outer]});
        run.inner = expand_at_edge(transfer_representatives(reps[E.inner], Fw, tree.vertices[E.inner], R, Side::Inner, Fv),
                                   R, Side::Inner, {H[E.outer], H[E.inner]});
        if (static_cast<int>(run.outer.size()) != deg || static_cast<int>(run.inner.size()) != deg)
          throw MathError("edge expansion lost roots");
        std::vector<DoublePointSeries> ro, ri;
        for (const auto& a : run.outer) ro.push_back(a.r_m);
        for (const auto& a : run.inner) ri.push_back(a.r_m);
        run.match = match_roots(ro, ri);
        run.dm = dm_orbits(ro, R.n, C);
        for (const auto& orbit : run.dm.orbits)
          for (int m : orbit)
            if (run.outer[m].vertex_orbit != run.outer[orbit.front()].vertex_orbit ||
                run.inner[run.match[m]].vertex_orbit != run.inner[run.match[orbit.front()]].vertex_orbit)
              throw BoundExceeded("edge orbit straddles two vertex orbits");
        runs[k] = std::move(run);
        run_heights[k] = {H[E.outer], H[E.inner]};
      } catch (const BoundExceeded& e) {
        raise(E.outer, std::string(e.what()) + " on " + E.annulus.str());
        raise(E.inner, std::string(e.what()) + " on " + E.annulus.str());
        compute_vertex(E.outer);
        compute_vertex(E.inner);
        dirty = true;
      }
    }
  }
  A.heights = H;

  std::vector<std::vector<int>> ids(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    int total = 0;
    for (const auto& r : reps[k]) {
      GraphVertex gv;
      gv.id = static_cast<int>(A.graph.vertices.size());
      gv.over = static_cast<int>(k);
      gv.degree = r.degree * r.count;
      gv.genus = vertex_genus(r.tower, Fw);
      total += gv.degree;
      ids[k].push_back(gv.id);
      A.graph.vertices.push_back(gv);
    }
    if (total != deg) throw MathError("degree not conserved at " + tree.vertices[k].str());
    if (verbose)
      A.log.push_back("vertex " + tree.vertices[k].str() + ": " + std::to_string(reps[k].size()) +
                      " vertices above, height " + to_string(H[k]));
  }
  // ramification over branch leaves
  for (const auto& leaf : tree.leaves) {
    if (leaf.auxiliary) continue;
    const auto& V = tree.vertices[leaf.vertex];
    std::optional<Poly> w0;
    if (leaf.point) {
      Elem c = C->embed((*leaf.point - V.center.embed(leaf.point->field())).coeff(V.radius));
      w0 = Poly(C, {-c, C->one()});
    }
    for (std::size_t q = 0; q < reps[leaf.vertex].size(); ++q) {
      const auto& r = reps[leaf.vertex][q];
      if (places_above(r.tower, Fw, w0) < r.degree) ++A.graph.vertices[ids[leaf.vertex][q]].branch_leaves;
    }
  }
  std::vector<int> incidence(A.graph.vertices.size(), 0);
  for (std::size_t k = 0; k < tree.edges.size(); ++k) {
    const auto& E = tree.edges[k];
    const EdgeRun& run = *runs[k];
    EdgeReport rep;
    rep.tree_edge = static_cast<int>(k);
    for (const auto& a : run.outer) rep.outer_rm.push_back(a.r_m.str());
    for (const auto& a : run.inner) rep.inner_rm.push_back(a.r_m.str());
    rep.dm_orbits = run.dm.orbits;
    rep.kummer_order = run.dm.action.order;
    for (const auto& orbit : run.dm.orbits) {
      GraphEdge ge;
      ge.id = static_cast<int>(A.graph.edges.size());
      ge.ends[0] = ids[E.outer][run.outer[orbit.front()].vertex_orbit];
      ge.ends[1] = ids[E.inner][run.inner[run.match[orbit.front()]].vertex_orbit];
      ge.length = edge_length(E.annulus.length(), static_cast<int>(orbit.size()));
      ge.over = static_cast<int>(k);
      A.graph.edges.push_back(ge);
      incidence[ge.ends[0]] += static_cast<int>(orbit.size());
      incidence[ge.ends[1]] += static_cast<int>(orbit.size());
    }
    if (verbose)
      A.log.push_back("edge " + E.annulus.str() + ": " + std::to_string(run.dm.orbits.size()) +
                      " edges above, Kummer order " + std::to_string(run.dm.action.order));
    A.edges.push_back(std::move(rep));
  }
  // harmonicity: each vertex above v meets every adjacent tree edge with its full degree
  for (const auto& v : A.graph.vertices) {
    int adjacent = 0;
    for (const auto& E : tree.edges)
      if (E.inner == v.over || E.outer == v.over) ++adjacent;
    if (incidence[v.id] != adjacent * v.degree) throw MathError("covering is not harmonic at a vertex");
  }
  return A;
}
}  // namespace

Skeleton compute_skeleton(const Curve& f0, const SkeletonOptions& opt) {
  Tameness tm = tameness_check(f0, opt.characteristic);
  if (!tm.tame) throw PreconditionError(tm.reason);
  if (opt.characteristic != 0) throw PreconditionError("residue characteristic " + std::to_string(opt.characteristic) + " is tame but not implemented");
  Skeleton S;
  S.tree = build_separating_tree(f0, opt.tree);
  S.expected_genus = opt.expected_genus;
  IntegralModel im = integral_model(f0);
  ConstantField C(S.tree.constants);
  for (int restarts = 0;; ++restarts) {
    try {
      Attempt A = build(im.f, S.tree, C.field(), opt.height, opt.max_doublings, opt.verbose);
      S.graph = A.graph;
      S.edges = std::move(A.edges);
      S.vertex_heights = std::move(A.heights);
      S.log.insert(S.log.end(), A.log.begin(), A.log.end());
      break;
    } catch (const NeedConstant& nc) {
      if (restarts >= 16) throw BoundExceeded("too many constant extensions");
      C.adjoin(nc.poly);
      if (opt.verbose) S.log.push_back("adjoin constant: " + C.describe().back());
    }
  }
  S.height = opt.height;
  S.constant_levels = C.describe();
  if (!S.graph.connected()) throw MathError("skeleton is disconnected");
  return S;
}

// ---------------------------------------------------------------- export

namespace {

nlohmann::json rat(const Rational& q) { return {q.get_num().get_str(), q.get_den().get_str()}; }

}  // namespace

nlohmann::json to_json(const SeparatingTree& t) {
  nlohmann::json j;
  j["constants"] = t.constant_levels;
  j["degenerate"] = t.degenerate;
  j["warnings"] = t.warnings;
  for (std::size_t k = 0; k < t.vertices.size(); ++k)
    j["vertices"].push_back({{"id", k}, {"disk", t.vertices[k].str()}, {"radius", rat(t.vertices[k].radius)}});
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    const auto& e = t.edges[k];
    j["edges"].push_back({{"id", k},
                          {"annulus", e.annulus.str()},
                          {"outer", e.outer},
                          {"inner", e.inner},
                          {"length", rat(e.annulus.length())}});
  }
  for (const auto& l : t.leaves)
    j["leaves"].push_back({{"point", l.point ? l.point->str() : std::string("infinity")},
                           {"vertex", l.vertex},
                           {"auxiliary", l.auxiliary}});
  for (const auto& b : t.branch_points)
    j["branch_points"].push_back({{"series", b.series.str()},
                                  {"count", b.count},
                                  {"degree", b.degree},
                                  {"valuation", b.series.is_zero() ? nlohmann::json() : rat(*b.series.valuation())}});
  return j;
}

nlohmann::json to_json(const Skeleton& s) {
  nlohmann::json j;
  j["tree"] = to_json(s.tree);
  MetricGraph g = canonicalize(s.graph);
  nlohmann::json sk;
  sk["vertices"] = nlohmann::json::array();
  sk["edges"] = nlohmann::json::array();
  for (const auto& v : g.vertices)
    sk["vertices"].push_back({{"id", v.id},
                              {"genus", v.genus},
                              {"over", v.over},
                              {"degree", v.degree},
                              {"branch_leaves", v.branch_leaves}});
  for (const auto& e : g.edges)
    sk["edges"].push_back({{"id", e.id}, {"ends", {e.ends[0], e.ends[1]}}, {"length", rat(e.length)}, {"over", e.over}});
  j["skeleton"] = sk;
  j["betti"] = g.betti();
  nlohmann::json gc{{"betti", g.betti()}, {"vertex_genus_sum", g.genus_sum()}, {"total", g.betti() + g.genus_sum()}};
  if (s.expected_genus) {
    gc["expected"] = *s.expected_genus;
    gc["ok"] = *s.expected_genus == g.betti() + g.genus_sum();
  } else {
    gc["notice"] = "genus of X not supplied; check skipped";
  }
  j["genus_check"] = gc;
  j["constants"] = s.constant_levels;
  j["height"] = rat(s.height);
  j["vertex_heights"] = nlohmann::json::array();
  for (const auto& q : s.vertex_heights) j["vertex_heights"].push_back(rat(q));
  return j;
}

std::string to_dot(const Skeleton& s) {
  MetricGraph g = canonicalize(s.graph);
  std::ostringstream out;
  out << "graph skeleton {\n";
  for (const auto& v : g.vertices) {
    out << "  v" << v.id << " [label=\"" << v.genus << "\"";
    if (v.branch_leaves > 0) out << ", color=blue";
    out << "];\n";
  }
  for (const auto& e : g.edges)
    out << "  v" << e.ends[0] << " -- v" << e.ends[1] << " [label=\"" << to_string(e.length) << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string to_dot(const SeparatingTree& t) {
  std::ostringstream out;
  out << "graph tree {\n";
  for (std::size_t k = 0; k < t.vertices.size(); ++k) out << "  n" << k << " [label=\"" << t.vertices[k].str() << "\"];\n";
  for (const auto& e : t.edges)
    out << "  n" << e.outer << " -- n" << e.inner << " [label=\"" << to_string(e.annulus.length()) << "\"];\n";
  for (std::size_t k = 0; k < t.leaves.size(); ++k) {
    const auto& l = t.leaves[k];
    out << "  l" << k << " [shape=point, xlabel=\"" << (l.point ? l.point->str() : std::string("infinity")) << "\""
        << (l.auxiliary ? ", color=gray" : "") << "];\n";
    out << "  n" << l.vertex << " -- l" << k << " [style=dashed];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tropskel
