#include "tropskel/galois.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "tropskel/errors.hpp"
#include "tropskel/factor.hpp"
#include "tropskel/mixed_np.hpp"
#include "tropskel/tower.hpp"

namespace tropskel {

namespace {

std::vector<std::string> levels(FieldPtr F) {
  std::vector<std::string> out;
  for (; F && F->kind() != Field::Kind::Rationals; F = F->base())
    if (F->kind() == Field::Kind::Algebraic) out.insert(out.begin(), F->name() + ": " + F->modulus().str(F->name()));
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream s;
  for (std::size_t k = 0; k < v.size(); ++k) s << (k ? ", " : "") << v[k];
  return s.str();
}

// Is some embedding of b's coefficient tower into a's tower taking b to a,
// on the exponents below both precisions?
bool embeds_onto(const LaurentSeries& a, const LaurentSeries& b, const FieldPtr& Fw) {
  const FieldPtr &T = a.field(), &U = b.field();
  std::optional<Rational> prec = a.precision();
  if (auto pb = b.precision()) prec = prec ? std::min(*prec, *pb) : *pb;
  std::set<Rational> exps;
  for (const auto* x : {&a, &b})
    for (const auto& [e, c] : x->terms())
      if (!prec || e < *prec) exps.insert(e);
  auto equal_under = [&](const std::function<Elem(const Elem&)>& phi) {
    for (const auto& e : exps)
      if (phi(b.coeff(e)) != a.coeff(e)) return false;
    return true;
  };
  if (T->has_subfield(U.get())) return equal_under([&](const Elem& c) { return T->embed(c); });
  if (relative_degree(U, Fw) != relative_degree(T, Fw)) return false;
  PrimitiveElement P(U, Fw);
  for (const auto& [q, m] : factor(P.minpoly().embed(T))) {
    if (q.degree() != 1) continue;
    Elem beta = -q.monic().coeff(0);
    if (equal_under([&](const Elem& c) { return P.express(c).embed(T).eval(beta); })) return true;
  }
  return false;
}

// t^(1/E) -> zeta t^(1/E)
LaurentSeries inertia(const LaurentSeries& r, long E, const Elem& zeta) {
  LaurentSeries out(r.field(), r.precision());
  for (const auto& [e, c] : r.terms()) {
    Rational k = e * Rational(E);
    Integer m = k.get_num() % Integer(E);
    if (m < 0) m += Integer(E);
    out.add_term(e, c * r.field()->embed(zeta).pow(m.get_si()));
  }
  return out;
}

}  // namespace

std::vector<PrimeExtension> kummer_dedekind(const Curve& f, const TreeVertex& vertex, const FieldPtr& constants,
                                            const Rational& height, int max_doublings) {
  ConstantField C(constants);
  Rational h = height;
  for (int doublings = 0, restarts = 0;;) {
    try {
      FieldPtr Fw = Field::function(C.field(), "s");
      TreeVertex V{vertex.radius, vertex.center.embed(C.field())};
      auto reps = vertex_representatives(f, V, Fw, h);
      long E = 1;
      for (const auto& r : reps) E = std::lcm(E, r.series.ramification().get_si());
      Elem zeta = primitive_root_of_unity(E, C.field());
      // union of representatives under inertia
      std::vector<int> cls(reps.size());
      std::iota(cls.begin(), cls.end(), 0);
      std::function<int(int)> find = [&](int a) { return cls[a] == a ? a : cls[a] = find(cls[a]); };
      for (std::size_t a = 0; a < reps.size(); ++a) {
        LaurentSeries moved = inertia(reps[a].series, E, zeta);
        for (std::size_t b = 0; b < reps.size(); ++b)
          if (find(a) != find(b) && embeds_onto(moved, reps[b].series, Fw)) cls[find(b)] = find(a);
      }
      std::vector<PrimeExtension> out;
      std::map<int, std::size_t> slot;
      for (std::size_t a = 0; a < reps.size(); ++a) {
        const auto& r = reps[a];
        auto [it, fresh] = slot.emplace(find(a), out.size());
        if (fresh) {
          PrimeExtension e;
          e.degree = 0;
          e.ramification = static_cast<int>(r.series.ramification().get_si());
          e.approximation = r.series.str();
          e.residue_tower = levels(r.tower);
          out.push_back(std::move(e));
        }
        out[it->second].degree += r.degree * r.count;
      }
      for (auto& e : out) {
        if (e.degree % e.ramification != 0) throw MathError("ramification index does not divide the local degree");
        e.residue_degree = e.degree / e.ramification;
      }
      return out;
    } catch (const NeedConstant& nc) {
      if (++restarts > 16) throw BoundExceeded("too many constant extensions");
      C.adjoin(nc.poly);
    } catch (const BoundExceeded&) {
      if (++doublings > max_doublings) throw;
      h *= 2;
    }
  }
}

std::string CycleType::str() const {
  std::string s;
  for (int c : cycles) s += "(" + std::to_string(c) + ")";
  return s;
}

CycleType dedekind_cycle_type(const Poly& f, std::uint64_t p) {
  if (f.field()->kind() != Field::Kind::Rationals) throw PreconditionError("polynomial must have rational coefficients");
  if (f.degree() < 1 || !f.lc().is_one()) throw PreconditionError("polynomial must be monic of positive degree");
  if (!fp::is_prime(p) || p >= (1ULL << 31)) throw PreconditionError(std::to_string(p) + " is not a supported prime");
  FpPoly fbar;
  for (const auto& c : f.coeffs()) {
    Rational q = c.to_rational();
    if (q.get_den() != 1) throw PreconditionError("coefficients must be integers");
    Integer r = q.get_num() % Integer(static_cast<unsigned long>(p));
    if (r < 0) r += Integer(static_cast<unsigned long>(p));
    fbar.push_back(r.get_ui());
  }
  Rational D = discriminant(f).to_rational();
  if (D.get_num() % Integer(static_cast<unsigned long>(p)) == 0)
    throw PreconditionError("p = " + std::to_string(p) + " divides disc(f) = " + to_string(D));
  CycleType out;
  for (const auto& [g, m] : factor_mod_p(fbar, p))
    for (int k = 0; k < m; ++k) out.cycles.push_back(static_cast<int>(g.size()) - 1);
  std::sort(out.cycles.rbegin(), out.cycles.rend());
  out.certificate = "f mod " + std::to_string(p) + " has irreducible factors of degrees " + join_ints(out.cycles) +
                    "; p does not divide disc(f) = " + to_string(D) +
                    ", so Frobenius at p permutes the roots with cycle type " + out.str();
  return out;
}

CycleType dedekind_cycle_type_at_t(const Curve& f, int max_doublings) {
  if (f.deg_x() != 0) throw PreconditionError("polynomial must involve only y and t");
  if (f.deg_y() < 1) throw PreconditionError("polynomial must have positive degree in y");
  auto Q = Field::rationals();
  SeriesPoly g = f.substitute(LaurentSeries(Q));
  ConstantField C;
  Rational h(4);
  std::vector<RootApproximation> reps;
  for (int doublings = 0, restarts = 0;;) {
    try {
      NPOptions o;
      o.height = h;
      o.isolate = true;
      reps = discrete_np(embed(g, C.field()), C.field(), o);
      bool separated = std::all_of(reps.begin(), reps.end(), [](const auto& r) { return r.count == 1 || r.exact; });
      if (separated) break;
      for (const auto& r : reps)
        if (r.exact && r.count > 1) throw PreconditionError("polynomial has a repeated factor");
      if (++doublings > max_doublings) throw BoundExceeded("roots not separated at height " + to_string(h));
      h *= 2;
    } catch (const NeedConstant& nc) {
      if (++restarts > 16) throw BoundExceeded("too many constant extensions");
      C.adjoin(nc.poly);
    }
  }
  // roots of ramification e, counted with their conjugates over the constants
  std::map<int, int> roots;
  for (const auto& r : reps) roots[static_cast<int>(r.series.ramification().get_si())] += r.degree * r.count;
  CycleType out;
  std::ostringstream why;
  for (const auto& [e, n] : roots) {
    if (n % e != 0) throw MathError("roots of ramification " + std::to_string(e) + " do not fill whole cycles");
    for (int k = 0; k < n / e; ++k) out.cycles.push_back(e);
    why << (why.tellp() > 0 ? "; " : "") << n << " roots with exponents in (1/" << e << ")Z";
  }
  std::sort(out.cycles.rbegin(), out.cycles.rend());
  out.certificate = why.str() + "; the tame generator t^(1/e) -> zeta_e t^(1/e) of inertia at t has cycle type " +
                    out.str();
  return out;
}

}  // namespace tropskel
