#include "tropskel/mixed_np.hpp"

#include <numeric>

#include "tropskel/errors.hpp"
#include "tropskel/factor.hpp"
#include "tropskel/tower.hpp"

namespace tropskel {

namespace {

long as_long(const Rational& q, const char* what) {
  if (q.get_den() != 1) throw PreconditionError(std::string(what) + " must be an integer");
  return q.get_num().get_si();
}

bool integral_at_zero(const Elem& e) {
  const FieldPtr& F = e.field();
  switch (F->kind()) {
    case Field::Kind::Rationals:
      return true;
    case Field::Kind::Function:
      return !e.den().coeff(0).is_zero() || e.num().is_zero();
    case Field::Kind::Algebraic:
      for (const auto& c : e.num().coeffs())
        if (!integral_at_zero(c)) return false;
      return true;
  }
  return true;
}

// e in C(s) as a series in s known to absolute precision h.
LaurentSeries function_series(const Elem& e, const Rational& h) {
  const FieldPtr& Fs = e.field();
  const FieldPtr& C = Fs->base();
  auto poly_series = [&](const Poly& p) {
    LaurentSeries s(C);
    for (int k = 0; k <= p.degree(); ++k) s.add_term(Rational(k), C->embed(p.coeffs()[k]));
    return s;
  };
  LaurentSeries num = poly_series(e.num()), den = poly_series(e.den());
  if (num.is_zero()) return num;
  Rational vn = *num.valuation();
  return (num * inverse(den, h - vn)).truncated(h);
}

// Substitute a series for the variable of Fs in a polynomial over Fs.
LaurentSeries eval_over_series(const Poly& p, const LaurentSeries& theta, const Rational& h) {
  const FieldPtr& C = theta.field();
  LaurentSeries acc(C);
  for (int k = p.degree(); k >= 0; --k) {
    acc = acc * theta;
    LaurentSeries c = function_series(p.field()->embed(p.coeffs()[k]), h).embed(C);
    acc += c;
  }
  return acc;
}

// Roots of an irreducible polynomial over C(s) in C((s^(1/e))), one per
// embedding, to absolute precision h.
std::vector<LaurentSeries> embeddings_at_zero(const Poly& M, const Rational& h) {
  const FieldPtr& Fs = M.field();
  const FieldPtr& C = Fs->base();
  // clear denominators so that the coefficients are exact polynomials in s
  Poly den = Poly::constant(Fs->base()->one());
  for (const auto& c : M.coeffs()) {
    Poly d = c.den();
    den = den * d / gcd(den, d);
  }
  SeriesPoly g;
  for (const auto& c : M.coeffs()) {
    Elem scaled = c * Fs->make_fraction(den, Poly::constant(C->one()));
    LaurentSeries s(C);
    for (int k = 0; k <= scaled.num().degree(); ++k) s.add_term(Rational(k), scaled.num().coeffs()[k]);
    g.push_back(s);
  }
  for (Rational H = h;; H *= 2) {
    NPOptions o;
    o.height = H;
    auto roots = discrete_np(g, C, o);
    bool separated = true;
    for (const auto& r : roots)
      if (r.count != 1 || r.degree != 1) separated = false;
    if (separated) {
      std::vector<LaurentSeries> out;
      for (const auto& r : roots) out.push_back(r.series.embed(C));
      return out;
    }
    if (H > 64 * (h + 1)) throw BoundExceeded("roots of a residue tower do not separate at s = 0");
  }
}

Poly cyclotomic(long N) {
  auto Q = Field::rationals();
  std::vector<long> c(N + 1, 0);
  c[0] = -1;
  c[N] = 1;
  Poly p = Poly::from_ints(Q, c);
  for (long d = 1; d < N; ++d)
    if (N % d == 0) p = p / cyclotomic(d);
  return p;
}

}  // namespace

Regularization regularize(const Chart& annulus) {
  if (annulus.kind != Chart::Kind::Annulus) throw PreconditionError("regularization needs an annulus");
  Regularization R;
  R.annulus = annulus;
  R.a = as_long(annulus.a, "inner radius");
  R.b = as_long(annulus.b, "outer radius");
  R.n = R.b - R.a;
  if (R.n < 1) throw PreconditionError("annulus of non-positive length");
  return R;
}

SeriesPoly side_chart(const Curve& f, const Regularization& R, Side side, const FieldPtr& Fs) {
  LaurentSeries c = R.annulus.center.embed(join(Fs, R.annulus.center.field()));
  if (side == Side::Outer) return f.substitute(c + LaurentSeries::monomial(Fs->gen(), Rational(R.a)));
  return f.substitute(c + LaurentSeries::monomial(Fs->gen().inv(), Rational(R.b)));
}

IntegralModel integral_model(const Curve& f) {
  const int d = f.deg_y();
  LaurentSeries lc;
  for (const auto& [k, c] : f.terms()) {
    if (k.first != d) continue;
    if (k.second != 0) throw PreconditionError("leading coefficient in y depends on x");
    lc = c;
  }
  IntegralModel out;
  out.m = as_long(*lc.valuation(), "valuation of the leading coefficient");
  for (const auto& [k, c] : f.terms()) out.f.add(k.first, k.second, c.shifted(Rational(out.m * (d - 1 - k.first))));
  return out;
}

EtaleLift etale_lift_char0(const Poly& gbar) {
  EtaleLift l{gbar, true};
  for (const auto& c : gbar.coeffs())
    if (!integral_at_zero(c)) l.integral = false;
  return l;
}

std::vector<RootApproximation> vertex_representatives(const Curve& f, const TreeVertex& vertex, const FieldPtr& Fw,
                                                      const Rational& height) {
  SeriesPoly g = f.chart(Fw, vertex.center.embed(Fw->base()), vertex.radius);
  NPOptions o;
  o.height = height;
  auto reps = discrete_np(g, Fw, o);
  for (const auto& r : reps)
    if (r.count != 1 && !r.exact) throw BoundExceeded("vertex orbits not separated at height " + to_string(height));
  return reps;
}

std::vector<RootApproximation> transfer_representatives(const std::vector<RootApproximation>& reps,
                                                        const FieldPtr& Fw, const TreeVertex& vertex,
                                                        const Regularization& R, Side side, const FieldPtr& Fs) {
  const FieldPtr& C = Fs->base();
  LaurentSeries d = vertex.center.embed(C) - R.annulus.center.embed(C);
  Elem image;
  if (side == Side::Outer) {
    if (vertex.radius != R.a) throw PreconditionError("vertex is not the outer end of the edge");
    for (const auto& [e, c] : d.terms())
      if (e != R.a) throw PreconditionError("edge centre differs from the vertex centre beyond its radius");
    image = Fs->gen() - Fs->embed(d.coeff(Rational(R.a)));
  } else {
    if (vertex.radius != R.b || !d.is_zero()) throw PreconditionError("vertex is not the inner end of the edge");
    image = Fs->gen().inv();
  }
  MobiusMap m(Fw, image);
  std::vector<RootApproximation> out;
  for (const auto& r : reps) {
    RootApproximation t = r;
    t.series = m.apply(r.series);
    t.tower = m.apply(r.tower);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<AdicApproximation> expand_at_edge(const std::vector<RootApproximation>& reps, const Regularization& R,
                                              Side side, const MixedHeights& h) {
  std::vector<AdicApproximation> out;
  const long hp = as_long(ceil(h.h_p), "height"), hm = as_long(ceil(h.h_m), "height");
  for (int q = 0; q < static_cast<int>(reps.size()); ++q) {
    const auto& rep = reps[q];
    if (rep.count != 1 && !rep.exact) throw BoundExceeded("representative carries a multiple root");
    if (!rep.exact && (!rep.series.precision() || *rep.series.precision() < h.h_p))
      throw BoundExceeded("p-adic approximation below the requested height");
    LaurentSeries rp = rep.series.truncated(h.h_p);
    // s-precision so that n*j + i reaches h_m for every t-exponent i
    Rational imin = rp.is_zero() ? Rational(0) : std::min<Rational>(Rational(0), *rp.valuation());
    const Rational J = (h.h_m - imin) / Rational(R.n);
    const FieldPtr& T = rep.series.field();
    // Fs is the first function field in the tower
    FieldPtr Fs = T;
    while (Fs->kind() == Field::Kind::Algebraic) Fs = Fs->base();
    const FieldPtr& C = Fs->base();

    std::vector<std::vector<std::pair<Rational, LaurentSeries>>> conj;  // per embedding: (t-exp, s-series)
    for (Rational H = J + 1;; H *= 2) {
      conj.clear();
      bool enough = true;
      if (T == Fs) {
        std::vector<std::pair<Rational, LaurentSeries>> row;
        for (const auto& [e, c] : rp.terms()) {
          LaurentSeries s = function_series(c, H);
          if (s.precision() && *s.precision() < J) enough = false;
          row.emplace_back(e, s);
        }
        conj.push_back(std::move(row));
      } else {
        PrimitiveElement P(T, Fs);
        for (const auto& theta : embeddings_at_zero(P.minpoly(), H)) {
          std::vector<std::pair<Rational, LaurentSeries>> row;
          for (const auto& [e, c] : rp.terms()) {
            LaurentSeries s = eval_over_series(P.express(c), theta, H);
            if (s.precision() && *s.precision() < J) enough = false;
            row.emplace_back(e, s.truncated(J));
          }
          conj.push_back(std::move(row));
        }
      }
      if (enough) break;
      if (H > 64 * (J + 1)) throw BoundExceeded("coefficient expansions lose too much precision");
    }

    for (const auto& row : conj) {
      AdicApproximation a;
      a.r_p = rp;
      a.vertex_orbit = q;
      a.h_p = h.h_p;
      a.h_m = h.h_m;
      a.r_m = side == Side::Outer ? DoublePointSeries(C, hm, hp) : DoublePointSeries(C, hp, hm);
      for (const auto& [i, s] : row)
        for (const auto& [j, c] : s.terms()) {
          Rational big = Rational(R.n) * j + i;
          if (big >= h.h_m) continue;
          if (i.get_den() != 1 || big.get_den() != 1)
            throw PreconditionError("roots do not split over the regularization (exponent " + to_string(big) + ", " +
                                    to_string(i) + ")");
          long ie = i.get_num().get_si(), be = big.get_num().get_si();
          if (side == Side::Outer) a.r_m.add_term(be, ie, c);
          else a.r_m.add_term(ie, be, c);
        }
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<AdicApproximation> mixed_np(const Curve& f, const Chart& edge, const TreeVertex& vertex, Side side,
                                        const FieldPtr& constants, const MixedHeights& h) {
  Regularization R = regularize(edge);
  FieldPtr Fw = Field::function(constants, "s");
  FieldPtr Fs = Field::function(constants, side == Side::Outer ? "u" : "v");
  auto reps = vertex_representatives(f, vertex, Fw, h.h_p);
  return expand_at_edge(transfer_representatives(reps, Fw, vertex, R, side, Fs), R, side, h);
}

Elem primitive_root_of_unity(long N, const FieldPtr& C) {
  if (N == 1) return C->one();
  if (N == 2) return C->from_int(-1);
  std::optional<Poly> smallest;
  for (const auto& [q, mult] : factor(cyclotomic(N).embed(C))) {
    if (q.degree() == 1) return -q.monic().coeff(0);
    if (!smallest || q.degree() < smallest->degree()) smallest = q;
  }
  throw NeedConstant(smallest->monic());
}

DmOrbits dm_orbits(const std::vector<DoublePointSeries>& rs, long n, const FieldPtr& constants) {
  DmOrbits out;
  out.action.n = n;
  if (rs.empty()) return out;
  long hm = rs.front().hm(), hp = rs.front().hp();
  for (const auto& r : rs) {
    hm = std::min(hm, r.hm());
    hp = std::min(hp, r.hp());
  }
  std::vector<DoublePointSeries> red;
  for (const auto& r : rs) red.push_back(r.reduced(hm, hp).embed(constants));
  if (!separate(red, hm, hp)) throw BoundExceeded("box ideal does not separate the roots");

  long g = n;
  for (const auto& r : red)
    for (const auto& [k, c] : r.terms()) g = std::gcd(g, std::labs(k.first - k.second));
  const long N = n / g;
  out.action.order = N;
  const FieldPtr& C = constants;
  out.action.zeta = primitive_root_of_unity(N, C);
  // sigma on u^i v^j: zeta_N^((i-j)/g)
  std::vector<int> perm(red.size(), -1);
  for (std::size_t a = 0; a < red.size(); ++a) {
    DoublePointSeries s(C, hm, hp, red[a].relation());
    for (const auto& [k, c] : red[a].terms()) {
      long e = ((k.first - k.second) / g) % N;
      if (e < 0) e += N;
      s.add_term(k.first, k.second, c * out.action.zeta.pow(e));
    }
    for (std::size_t b = 0; b < red.size(); ++b)
      if (s == red[b]) perm[a] = static_cast<int>(b);
    if (perm[a] < 0) throw BoundExceeded("Kummer action does not permute the approximations");
  }
  std::vector<bool> seen(red.size(), false);
  for (std::size_t a = 0; a < red.size(); ++a) {
    if (seen[a]) continue;
    std::vector<int> orbit;
    for (int b = static_cast<int>(a); !seen[b]; b = perm[b]) {
      seen[b] = true;
      orbit.push_back(b);
    }
    // stabilizer reading: orbit size n / gcd(n, i - j over the terms)
    long gr = n;
    for (const auto& [k, c] : red[a].terms()) gr = std::gcd(gr, std::labs(k.first - k.second));
    if (static_cast<long>(orbit.size()) != n / gr) throw MathError("orbit size disagrees with the stabilizer");
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

Rational edge_length(const Rational& base_length, int orbit_size) {
  if (orbit_size < 1) throw PreconditionError("empty orbit");
  return base_length / Rational(orbit_size);
}

std::vector<int> match_roots(const std::vector<DoublePointSeries>& lhs, const std::vector<DoublePointSeries>& rhs) {
  if (lhs.size() != rhs.size()) throw BoundExceeded("different numbers of roots at the two ends");
  long hm = 1L << 40, hp = 1L << 40;
  for (const auto* side : {&lhs, &rhs})
    for (const auto& r : *side) {
      hm = std::min(hm, r.hm());
      hp = std::min(hp, r.hp());
    }
  std::vector<int> m(lhs.size(), -1);
  std::vector<bool> used(rhs.size(), false);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    DoublePointSeries a = lhs[i].reduced(hm, hp);
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      DoublePointSeries b = rhs[j].reduced(hm, hp);
      FieldPtr F = join(a.field(), b.field());
      if (!(a.embed(F) - b.embed(F)).is_zero()) continue;
      if (m[i] >= 0 || used[j]) throw BoundExceeded("common box does not separate the roots");
      m[i] = static_cast<int>(j);
      used[j] = true;
    }
    if (m[i] < 0) throw BoundExceeded("root at one end has no partner at the other");
  }
  return m;
}

}  // namespace tropskel
