#include "tropskel/commands.hpp"

#include <filesystem>

#include "tropskel/errors.hpp"
#include "tropskel/factor.hpp"
#include "tropskel/galois.hpp"
#include "tropskel/tower.hpp"

namespace tropskel {

using nlohmann::json;

namespace {

constexpr int kMaxRestarts = 16;

void trace(const RunOptions& o, const std::string& line) {
  if (o.trace) *o.trace << line << '\n';
}

json rat(const Rational& q) { return render_rational(q); }

// Seeds the constants with the ones declared in the input.
ConstantField seeded_constants(const InputSpec& in) {
  ConstantField C;
  auto Q = Field::rationals();
  for (const auto& c : in.constants) {
    std::vector<Elem> coeffs;
    for (const auto& q : c.minpoly) coeffs.push_back(C.field()->embed(Q->from_rational(q)));
    Poly p(C.field(), coeffs);
    auto facs = factor(p);
    if (facs.size() != 1 || facs[0].mult != 1)
      throw PreconditionError("constant " + c.name + " is reducible over the earlier constants");
    C.adjoin(p);
  }
  return C;
}

json tower_levels(FieldPtr F) {
  json out = json::array();
  for (; F && F->kind() != Field::Kind::Rationals; F = F->base())
    if (F->kind() == Field::Kind::Algebraic) out.insert(out.begin(), F->name() + ": " + F->modulus().str(F->name()));
  return out;
}

bool involves_t(const Curve& f) {
  for (const auto& [k, c] : f.terms())
    for (const auto& [e, v] : c.terms())
      if (e != 0) return true;
  return false;
}

}  // namespace

SeparatingTree run_septree(const InputSpec& in, const RunOptions& o) {
  trace(o, "separating tree: branch points from the discriminant in x");
  SeparatingTree t = build_separating_tree(in.f);
  trace(o, std::to_string(t.vertices.size()) + " vertices, " + std::to_string(t.edges.size()) + " edges");
  return t;
}

json run_puiseux(const InputSpec& in, const std::string& disk, const Rational& height, const Rational& scale,
                 const std::string& var, const RunOptions& o) {
  TreeVertex V = parse_disk(disk);
  ConstantField C = seeded_constants(in);
  for (int restarts = 0;; ++restarts) {
    try {
      FieldPtr Fs = Field::function(C.field(), var);
      SeriesPoly g = in.f.chart(Fs, V.center.embed(C.field()), V.radius);
      if (scale != 0) g = scale_root(g, scale);
      trace(o, "chart " + V.str() + ": Newton polygon iteration to height " + to_string(height));
      NPOptions opt;
      opt.height = height;
      auto roots = discrete_np(g, Fs, opt);
      json j;
      j["chart"] = V.str();
      j["variable"] = var;
      j["height"] = rat(height);
      j["scale"] = rat(scale);
      j["constants"] = C.describe();
      j["approximations"] = json::array();
      for (const auto& r : roots)
        j["approximations"].push_back({{"series", r.series.str()},
                                       {"tower", tower_levels(r.tower)},
                                       {"lineage", r.lineage},
                                       {"count", r.count},
                                       {"degree", r.degree},
                                       {"exact", r.exact},
                                       {"liftable", r.liftable}});
      j["orbits"] = json::array();
      for (const auto& orb : dvr_orbits(roots, Fs)) j["orbits"].push_back({{"members", orb.members}, {"size", orb.size}});
      return j;
    } catch (const NeedConstant& nc) {
      if (restarts >= kMaxRestarts) throw BoundExceeded("too many constant extensions");
      C.adjoin(nc.poly);
      trace(o, "adjoin constant: " + C.describe().back());
    }
  }
}

json run_mixed(const InputSpec& in, const std::string& annulus, const MixedHeights& outer, const RunOptions& o) {
  Chart E = parse_annulus(annulus);
  Regularization R = regularize(E);
  IntegralModel im = integral_model(in.f);
  MixedHeights inner{outer.h_p, outer.h_m};
  ConstantField C = seeded_constants(in);
  auto truncated = [](const LaurentSeries& c, const Rational& k) {
    LaurentSeries out(c.field());
    for (const auto& [e, v] : c.terms())
      if (e < k) out.add_term(e, v);
    return out;
  };
  for (int restarts = 0;; ++restarts) {
    try {
      Chart Ec = Chart::annulus(E.center.embed(C.field()), E.a, E.b);
      TreeVertex Vo{E.a, truncated(Ec.center, E.a)}, Vi{E.b, Ec.center};
      trace(o, "outer end " + Vo.str() + ", heights (" + to_string(outer.h_m) + ", " + to_string(outer.h_p) + ")");
      auto ro = mixed_np(im.f, Ec, Vo, Side::Outer, C.field(), outer);
      trace(o, "inner end " + Vi.str() + ", heights (" + to_string(inner.h_m) + ", " + to_string(inner.h_p) + ")");
      auto ri = mixed_np(im.f, Ec, Vi, Side::Inner, C.field(), inner);
      std::vector<DoublePointSeries> mo, mi;
      for (const auto& a : ro) mo.push_back(a.r_m);
      for (const auto& a : ri) mi.push_back(a.r_m);
      auto side = [](const std::vector<AdicApproximation>& as) {
        json out = json::array();
        for (const auto& a : as)
          out.push_back({{"r_p", a.r_p.str()}, {"r_m", a.r_m.str()}, {"vertex_orbit", a.vertex_orbit}});
        return out;
      };
      json j;
      j["edge"] = E.str();
      j["n"] = R.n;
      j["root_scaling"] = im.m;
      j["constants"] = C.describe();
      j["outer"] = {{"vertex", Vo.str()}, {"h_m", rat(outer.h_m)}, {"h_p", rat(outer.h_p)}, {"approximations", side(ro)}};
      j["inner"] = {{"vertex", Vi.str()}, {"h_m", rat(inner.h_m)}, {"h_p", rat(inner.h_p)}, {"approximations", side(ri)}};
      j["match"] = match_roots(mo, mi);
      DmOrbits d = dm_orbits(mo, R.n, C.field());
      j["kummer_order"] = d.action.order;
      j["dm_orbits"] = d.orbits;
      j["lengths"] = json::array();
      for (const auto& orb : d.orbits) j["lengths"].push_back(rat(edge_length(E.length(), static_cast<int>(orb.size()))));
      return j;
    } catch (const NeedConstant& nc) {
      if (restarts >= kMaxRestarts) throw BoundExceeded("too many constant extensions");
      C.adjoin(nc.poly);
      trace(o, "adjoin constant: " + C.describe().back());
    }
  }
}

Skeleton run_skeleton(const InputSpec& in, const Rational& height, const RunOptions& o) {
  SkeletonOptions opt;
  opt.height = height;
  opt.max_doublings = o.max_height_doublings;
  opt.expected_genus = asserted_genus(in);
  opt.verbose = o.trace != nullptr;
  Skeleton s = compute_skeleton(in.f, opt);
  for (const auto& line : s.log) trace(o, line);
  return s;
}

json run_dedekind(const std::string& text, std::optional<std::uint64_t> prime, const RunOptions& o) {
  Curve f = std::filesystem::is_regular_file(text) ? read_input(text).f : Curve::parse(text);
  json j;
  CycleType ct;
  if (involves_t(f)) {
    if (prime) throw PreconditionError("--prime applies to polynomials over Z; this one involves t");
    trace(o, "inertia at t from the Puiseux expansions");
    ct = dedekind_cycle_type_at_t(f, o.max_height_doublings);
    j["place"] = "t";
  } else {
    bool in_x = f.deg_x() > 0, in_y = f.deg_y() > 0;
    if (in_x == in_y) throw PreconditionError("polynomial must involve exactly one of x, y");
    if (!prime) throw PreconditionError("--prime is required for a polynomial over Z");
    auto Q = Field::rationals();
    int n = in_x ? f.deg_x() : f.deg_y();
    std::vector<Elem> coeffs(n + 1, Q->zero());
    for (const auto& [k, c] : f.terms()) coeffs[in_x ? k.second : k.first] = c.coeff(Rational(0));
    trace(o, "Frobenius at p = " + std::to_string(*prime) + " from the factorization mod p");
    ct = dedekind_cycle_type(Poly(Q, coeffs), *prime);
    j["place"] = "p = " + std::to_string(*prime);
  }
  j["cycle_type"] = ct.cycles;
  j["notation"] = ct.str();
  j["certificate"] = ct.certificate;
  return j;
}

}  // namespace tropskel
