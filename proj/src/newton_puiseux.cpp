#include "tropskel/newton_puiseux.hpp"

#include <algorithm>

#include "tropskel/errors.hpp"
#include "tropskel/factor.hpp"
#include "tropskel/tower.hpp"

namespace tropskel {

SeriesPoly embed(const SeriesPoly& f, const FieldPtr& F) {
  SeriesPoly r;
  r.reserve(f.size());
  for (const auto& a : f) r.push_back(a.embed(F));
  return r;
}

SeriesPoly translate(const SeriesPoly& f, const LaurentSeries& s) {
  const int n = static_cast<int>(f.size()) - 1;
  FieldPtr F = s.field();
  for (const auto& a : f) F = join(F, a.field());
  // Horner in the shifted variable: r = (...(a_n)(y+s) + a_{n-1})(y+s) ...
  SeriesPoly r;
  LaurentSeries se = s.embed(F);
  for (int i = n; i >= 0; --i) {
    SeriesPoly next(r.size() + 1, LaurentSeries(F));
    for (std::size_t j = 0; j < r.size(); ++j) {
      next[j + 1] += r[j];
      next[j] += r[j] * se;
    }
    next[0] += f[i].embed(F);
    r = std::move(next);
  }
  return r;
}

SeriesPoly scale_root(const SeriesPoly& f, const Rational& lambda) {
  SeriesPoly r;
  for (std::size_t i = 0; i < f.size(); ++i) r.push_back(f[i].shifted(lambda * static_cast<long>(i)));
  return r;
}

LaurentSeries evaluate(const SeriesPoly& f, const LaurentSeries& s) {
  LaurentSeries r(join(f.back().field(), s.field()));
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) r = r * s + f[i];
  return r;
}

// ---------------------------------------------------------------- polygon

NewtonPolygon newton_polygon(const SeriesPoly& f) {
  NewtonPolygon np;
  const int n = static_cast<int>(f.size()) - 1;
  while (np.zero_roots <= n && f[np.zero_roots].is_exact() && f[np.zero_roots].is_zero()) ++np.zero_roots;
  if (np.zero_roots > n) throw MathError("Newton polygon of the zero polynomial");
  std::vector<std::pair<int, Rational>> pts;
  for (int i = np.zero_roots; i <= n; ++i)
    if (!f[i].is_zero()) pts.emplace_back(i, *f[i].valuation());
  // lower hull, left to right
  std::vector<std::pair<int, Rational>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // drop b if it lies on or above segment a-p
      Rational lhs = (b.second - a.second) * (p.first - a.first);
      Rational rhs = (p.second - a.second) * (b.first - a.first);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(p);
  }
  for (std::size_t k = hull.size(); k-- > 1;) {
    const auto& a = hull[k - 1];
    const auto& b = hull[k];
    NPSegment s;
    s.left = a.first;
    s.right = b.first;
    s.vleft = a.second;
    s.vright = b.second;
    s.length = b.first - a.first;
    s.slope = -(b.second - a.second) / Rational(s.length);
    np.segments.push_back(s);
  }
  // coefficients known only to precision
  auto hull_at = [&](int i) -> std::optional<Rational> {
    for (std::size_t k = 1; k < hull.size(); ++k)
      if (hull[k - 1].first <= i && i <= hull[k].first)
        return hull[k - 1].second + (hull[k].second - hull[k - 1].second) * Rational(i - hull[k - 1].first) /
                                        Rational(hull[k].first - hull[k - 1].first);
    return std::nullopt;
  };
  if (pts.empty() || pts.front().first != np.zero_roots) np.certain = false;
  for (int i = np.zero_roots; i <= n; ++i) {
    if (!f[i].is_zero() || f[i].is_exact()) continue;
    auto h = hull_at(i);
    if (!h || *f[i].precision() <= *h) np.certain = false;
  }
  return np;
}

Poly residue_polynomial(const SeriesPoly& f, const NPSegment& seg) {
  const FieldPtr& F = f[seg.left].field();
  Rational m = seg.vleft + seg.slope * seg.left;
  std::vector<Elem> c;
  for (int i = seg.left; i <= seg.right; ++i) c.push_back(F->embed(f[i].coeff(m - seg.slope * i)));
  return Poly(F, c);
}

// ---------------------------------------------------------------- discrete Newton-Puiseux

namespace {

Integer factorial(int d) {
  Integer r = 1;
  for (int k = 2; k <= d; ++k) r *= k;
  return r;
}

struct Branch {
  SeriesPoly f;
  LaurentSeries prefix;
  std::optional<Rational> last;
  FieldPtr T;
  int levels = 0;
  bool liftable = false;
  int count = 0;
  std::vector<std::string> lineage;
};

class Engine {
 public:
  Engine(const FieldPtr& base, const NPOptions& opt, int d) : base_(base), opt_(opt), bound_(factorial(d)) {}

  void run(const Branch& b, std::vector<RootApproximation>& out) {
    NewtonPolygon np = newton_polygon(b.f);
    if (!np.certain) throw BoundExceeded("coefficient precision too low for the Newton polygon");
    if (opt_.isolate && b.last && b.count == 1) {
      if (np.zero_roots > 0) {
        emit(b, b.prefix, 1, true, out);
      } else {
        Integer e = b.prefix.ramification();
        for (const auto& a : b.f) e = lcm(e, a.ramification());
        emit(b, b.prefix.truncated(*b.last + Rational(1) / Rational(e)), 1, false, out);
      }
      return;
    }
    int pending = 0;
    for (const auto& seg : np.segments) {
      if (b.last && seg.slope <= *b.last) continue;
      if (seg.slope >= opt_.height) {
        pending += seg.length;
        continue;
      }
      process(b, seg, out);
    }
    if (pending > 0) emit(b, b.prefix.truncated(opt_.height), pending, false, out);
    if (np.zero_roots > 0) emit(b, b.prefix, np.zero_roots, true, out);
  }

 private:
  std::string level_name(int k) const {
    if (k < static_cast<int>(opt_.names.size())) return opt_.names[k];
    return "g" + std::to_string(k + 1);
  }

  void emit(const Branch& b, LaurentSeries s, int count, bool exact, std::vector<RootApproximation>& out) {
    RootApproximation r;
    r.series = std::move(s);
    r.tower = b.T;
    r.exact = exact;
    r.liftable = b.liftable;
    r.count = count;
    r.degree = tower_degree(b.T, base_);
    r.lineage = b.lineage;
    out.push_back(std::move(r));
  }

  void process(const Branch& b, const NPSegment& seg, std::vector<RootApproximation>& out) {
    if (bound_ % Integer(seg.slope.get_den()) != 0 || bound_ % (b.prefix.ramification()) != 0)
      throw PreconditionError("ramification index does not divide d!: wild ramification");
    Poly phi = residue_polynomial(b.f, seg);
    for (const auto& [g, mult] : factor(phi)) {
      if (g.degree() > 1 && opt_.policy == FactorPolicy::Geometric) {
        if (b.T->is_constant()) throw NeedConstant(g);
        GeometricCheck chk = geometric_check(g);
        if (!chk.irreducible) throw NeedConstant(*chk.constant_needed);
      }
      Branch nb;
      nb.levels = b.levels;
      Elem c;
      if (g.degree() == 1) {
        nb.T = b.T;
        c = -g.coeff(0);
      } else {
        nb.T = extend_tower(b.T, g, level_name(b.levels));
        nb.levels = b.levels + 1;
        c = nb.T->gen();
      }
      LaurentSeries step = LaurentSeries::monomial(c, seg.slope);
      nb.prefix = b.prefix.embed(nb.T) + step;
      nb.f = translate(embed(b.f, nb.T), step);
      nb.last = seg.slope;
      nb.liftable = b.liftable || mult == 1;
      nb.count = mult;
      nb.lineage = b.lineage;
      nb.lineage.push_back(g.str());
      run(nb, out);
    }
  }

  FieldPtr base_;
  const NPOptions& opt_;
  Integer bound_;
};

}  // namespace

std::vector<RootApproximation> discrete_np(const SeriesPoly& f, const FieldPtr& base, const NPOptions& opt) {
  if (f.size() < 2) throw PreconditionError("discrete_np needs a polynomial of positive degree");
  for (const auto& a : f)
    if (!a.is_exact()) throw PreconditionError("discrete_np needs exact coefficients");
  if (f.back().is_zero()) throw PreconditionError("leading coefficient vanishes");
  Branch b;
  b.T = base;
  b.f = embed(f, base);
  b.prefix = LaurentSeries(base);
  b.count = static_cast<int>(f.size()) - 1;
  std::vector<RootApproximation> out;
  Engine(base, opt, b.count).run(b, out);
  return out;
}

std::vector<Orbit> dvr_orbits(const std::vector<RootApproximation>& approxes, const FieldPtr& base) {
  // Distinct branches of discrete_np are distinct orbits; a pair that is
  // conjugate modulo the common precision means the height is too small.
  std::vector<Orbit> orbits;
  for (int i = 0; i < static_cast<int>(approxes.size()); ++i) {
    const auto& a = approxes[i];
    if (!a.exact && a.count > 1) throw BoundExceeded("approximations not separated: " + a.series.str());
    for (int j = 0; j < i; ++j) {
      const FieldPtr &F = approxes[j].series.field(), &G = a.series.field();
      if (!F->has_subfield(G.get()) && !G->has_subfield(F.get())) continue;
      if (conjugate_classes({approxes[j].series, a.series}, base).size() == 1)
        throw BoundExceeded("approximations not separated: " + approxes[j].series.str() + " and " + a.series.str());
    }
    orbits.push_back({{i}, a.degree * a.count});
  }
  return orbits;
}

}  // namespace tropskel
