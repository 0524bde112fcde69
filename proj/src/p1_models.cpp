#include "tropskel/p1_models.hpp"

#include <algorithm>
#include <numeric>

#include "tropskel/errors.hpp"

namespace tropskel {

namespace {

std::string center_str(const LaurentSeries& c) { return c.is_zero() ? "0" : c.str("t"); }

// Terms of s with exponent below k, as an exact series.
LaurentSeries cut_below(const LaurentSeries& s, const Rational& k) {
  LaurentSeries r(s.field());
  for (const auto& [e, c] : s.terms())
    if (e < k) r.add_term(e, c);
  return r;
}

// ---- exact rational linear algebra and interpolation

Rational det_q(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    while (p < n && m[p][j] == 0) ++p;
    if (p == n) return 0;
    if (p != j) {
      std::swap(m[p], m[j]);
      det = -det;
    }
    det *= m[j][j];
    for (std::size_t i = j + 1; i < n; ++i) {
      if (m[i][j] == 0) continue;
      Rational f = m[i][j] / m[j][j];
      for (std::size_t c = j; c < n; ++c) m[i][c] -= f * m[j][c];
    }
  }
  return det;
}

// Sylvester determinant of a (formal degree n) and its derivative.
Rational res_with_derivative(const std::vector<Rational>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<Rational> d;
  for (int i = 1; i <= n; ++i) d.push_back(a[i] * i);
  const int N = 2 * n - 1;
  std::vector<std::vector<Rational>> m(N, std::vector<Rational>(N, Rational(0)));
  for (int r = 0; r < n - 1; ++r)
    for (int i = 0; i <= n; ++i) m[r][r + n - i] = a[i];
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= n - 1; ++i) m[n - 1 + r][r + n - 1 - i] = d[i];
  return det_q(std::move(m));
}

// Coefficients of the interpolating polynomial through (xs[k], ys[k]).
std::vector<Rational> interpolate(const std::vector<Rational>& xs, std::vector<Rational> ys) {
  const std::size_t n = xs.size();
  // divided differences
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  std::vector<Rational> c(n, Rational(0));
  // Horner on the Newton form
  for (std::size_t k = n; k-- > 0;) {
    // c = c*(x - xs[k]) + ys[k]
    std::vector<Rational> next(n, Rational(0));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * xs[k];
    }
    next[0] += ys[k];
    c = std::move(next);
  }
  return c;
}

// Division-free determinant of a matrix of series by expansion over column subsets.
LaurentSeries series_det(const std::vector<std::vector<LaurentSeries>>& m, const FieldPtr& F) {
  const int n = static_cast<int>(m.size());
  std::vector<LaurentSeries> dp(std::size_t(1) << n, LaurentSeries(F));
  dp[0] = LaurentSeries::constant(F->one());
  for (unsigned S = 0; S < dp.size(); ++S) {
    if (dp[S].is_zero()) continue;
    int row = __builtin_popcount(S);
    if (row == n) continue;
    for (int c = 0; c < n; ++c) {
      if (S & (1u << c)) continue;
      if (m[row][c].is_zero()) continue;
      // sign: number of used columns greater than c
      int above = __builtin_popcount(S >> (c + 1));
      LaurentSeries term = dp[S] * m[row][c];
      if (above % 2) term = -term;
      dp[S | (1u << c)] += term;
    }
  }
  return dp.back();
}

}  // namespace

// ---------------------------------------------------------------- charts

std::string Chart::str() const {
  switch (kind) {
    case Kind::DiskPlus:
      return "B_" + to_string(a) + "(" + center_str(center) + ")";
    case Kind::DiskMinus:
      return "B-_" + to_string(a) + "(" + center_str(center) + ")";
    case Kind::Annulus:
      return "S_{" + to_string(a) + "," + to_string(b) + "}(" + center_str(center) + ")";
  }
  return {};
}

Rational chart_valuation(const SeriesPoly& g, const LaurentSeries& c, const Rational& k) {
  FieldPtr Fu = Field::function(c.field(), "u");
  LaurentSeries X = c.embed(Fu) + LaurentSeries::monomial(Fu->gen(), k);
  LaurentSeries r = evaluate(embed(g, Fu), X);
  if (r.is_zero()) throw MathError("valuation of zero");
  return *r.valuation();
}

Tameness tameness_check(const Curve& f, long p) {
  if (p == 0) return {true, "char(k)=0"};
  int d = f.deg_y();
  if (d < p) return {true, "deg_y(f)=" + std::to_string(d) + " < p=" + std::to_string(p)};
  return {false, "deg_y(f)=" + std::to_string(d) + " >= p=" + std::to_string(p) + ": tameness not guaranteed"};
}

// ---------------------------------------------------------------- discriminant

SeriesPoly resultant_y(const Curve& f) {
  const int n = f.deg_y(), dx = f.deg_x();
  if (n < 1) throw PreconditionError("curve has no y");
  // t = s^g with integral exponents in s
  Integer g = 0;
  long ds = 0;
  for (const auto& [k, c] : f.terms())
    for (const auto& [e, v] : c.terms()) {
      if (e.get_den() != 1 || e < 0) throw PreconditionError("t-exponents must be non-negative integers");
      g = gcd(g, e.get_num());
    }
  if (g == 0) g = 1;
  for (const auto& [k, c] : f.terms())
    for (const auto& [e, v] : c.terms()) ds = std::max(ds, static_cast<long>(Integer(e.get_num() / g).get_si()));
  // coefficient table c[i][j][e] (s-exponent e)
  std::vector<std::vector<std::map<long, Rational>>> tab(n + 1, std::vector<std::map<long, Rational>>(dx + 1));
  for (const auto& [k, c] : f.terms())
    for (const auto& [e, v] : c.terms()) tab[k.first][k.second][Integer(e.get_num() / g).get_si()] = v.to_rational();
  const long Bx = (2 * n - 1) * dx, Bs = (2 * n - 1) * ds;
  std::vector<Rational> xs, ss;
  for (long k = 0; k <= Bx; ++k) xs.emplace_back(k);
  for (long l = 0; l <= Bs; ++l) ss.emplace_back(l);
  // r[j][e]: coefficient of x^j s^e
  std::vector<std::vector<Rational>> by_x(xs.size());
  for (std::size_t kx = 0; kx < xs.size(); ++kx) {
    std::vector<Rational> vals;
    for (const auto& s0 : ss) {
      std::vector<Rational> a(n + 1, Rational(0));
      for (int i = 0; i <= n; ++i) {
        Rational xp = 1;
        for (int j = 0; j <= dx; ++j) {
          Rational cij = 0, sp = 1;
          long last = 0;
          for (const auto& [e, v] : tab[i][j]) {
            for (; last < e; ++last) sp *= s0;
            cij += v * sp;
          }
          a[i] += cij * xp;
          xp *= xs[kx];
        }
      }
      vals.push_back(res_with_derivative(a));
    }
    by_x[kx] = interpolate(ss, vals);
  }
  FieldPtr Q = Field::rationals();
  SeriesPoly out(Bx + 1, LaurentSeries(Q));
  for (long e = 0; e <= Bs; ++e) {
    std::vector<Rational> col;
    for (std::size_t kx = 0; kx < xs.size(); ++kx) col.push_back(by_x[kx][e]);
    auto cx = interpolate(xs, col);
    for (long j = 0; j <= Bx; ++j)
      if (cx[j] != 0) out[j].add_term(Rational(Integer(e) * g), Q->from_rational(cx[j]));
  }
  while (out.size() > 1 && out.back().is_zero()) out.pop_back();
  return out;
}

bool infinity_is_branch(const Curve& f) {
  int d = 0;
  for (const auto& [k, c] : f.terms()) d = std::max(d, k.first + k.second);
  const int n = f.deg_y();
  FieldPtr Q = Field::rationals();
  std::vector<LaurentSeries> a(n + 1, LaurentSeries(Q));
  for (const auto& [k, c] : f.terms())
    if (k.first + k.second == d) a[k.first] += c;
  if (a[n].is_zero()) return true;  // [0:1:0] on the curve
  std::vector<LaurentSeries> da;
  for (int i = 1; i <= n; ++i) da.push_back(a[i].scaled(Q->from_int(i)));
  const int N = 2 * n - 1;
  std::vector<std::vector<LaurentSeries>> m(N, std::vector<LaurentSeries>(N, LaurentSeries(Q)));
  for (int r = 0; r < n - 1; ++r)
    for (int i = 0; i <= n; ++i) m[r][r + n - i] = a[i];
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= n - 1; ++i) m[n - 1 + r][r + n - 1 - i] = da[i];
  return series_det(m, Q).is_zero();
}

// ---------------------------------------------------------------- tree

std::string TreeVertex::str() const { return "B_" + to_string(radius) + "(" + center_str(center) + ")"; }

std::optional<Rational> separation(const LaurentSeries& a, const LaurentSeries& b) {
  LaurentSeries d = a - b;
  if (d.is_zero()) return std::nullopt;
  return *d.valuation();
}

SeparatingTree build_separating_tree(const Curve& f, const TreeOptions& opt) {
  SeriesPoly R = resultant_y(f);
  if (R.size() == 1 && R[0].is_zero()) throw PreconditionError("discriminant is identically zero");
  SeparatingTree tree;
  ConstantField C;
  for (int restart = 0;; ++restart) {
    if (restart > 16) throw BoundExceeded("too many constant extensions for the branch locus");
    try {
      NPOptions o;
      o.height = opt.height;
      o.isolate = true;
      if (R.size() > 1) tree.branch_points = discrete_np(embed(R, C.field()), C.field(), o);
      break;
    } catch (const NeedConstant& nc) {
      C.adjoin(nc.poly);
    }
  }
  tree.constants = C.field();
  tree.constant_levels = C.describe();
  const FieldPtr& F = C.field();

  std::vector<LaurentSeries> pts;
  bool zero_is_branch = false;
  for (const auto& r : tree.branch_points) {
    if (r.count > 1 && !r.exact)
      tree.warnings.push_back("branch point of multiplicity " + std::to_string(r.count) + " not separated at height " +
                              to_string(opt.height));
    pts.push_back(r.series);
    if (r.exact && r.series.is_zero()) zero_is_branch = true;
  }
  const std::size_t nbranch = pts.size();
  if (!zero_is_branch) pts.push_back(LaurentSeries(F));

  std::vector<TreeVertex> verts;
  auto add_vertex = [&](const Rational& k, const LaurentSeries& p) {
    TreeVertex v{k, cut_below(p, k)};
    for (const auto& w : verts)
      if (w.radius == v.radius && w.center == v.center) return;
    verts.push_back(v);
  };
  add_vertex(Rational(0), LaurentSeries(F));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      auto d = separation(pts[i], pts[j]);
      if (!d) throw BoundExceeded("branch points coincide to the computed precision");
      auto pi = pts[i].precision(), pj = pts[j].precision();
      if ((pi && *d >= *pi) || (pj && *d >= *pj)) throw BoundExceeded("branch points not separated; raise the height");
      add_vertex(*d, pts[i]);
    }
  std::sort(verts.begin(), verts.end(), [](const TreeVertex& a, const TreeVertex& b) {
    if (a.radius != b.radius) return a.radius < b.radius;
    return a.center.str() < b.center.str();
  });
  tree.vertices = verts;

  auto contains = [&](const TreeVertex& big, const LaurentSeries& p, const Rational& k) {
    return big.radius <= k && cut_below(p, big.radius) == big.center;
  };
  int roots = 0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    int parent = -1;
    for (std::size_t j = 0; j < verts.size(); ++j)
      if (verts[j].radius < verts[i].radius && contains(verts[j], verts[i].center, verts[i].radius) &&
          (parent < 0 || verts[j].radius > verts[parent].radius))
        parent = static_cast<int>(j);
    if (parent < 0) {
      ++roots;
      continue;
    }
    tree.edges.push_back({static_cast<int>(i), parent,
                          Chart::annulus(verts[i].center, verts[parent].radius, verts[i].radius)});
  }
  if (roots != 1) throw MathError("vertex set does not form a tree");

  for (std::size_t i = 0; i < pts.size(); ++i) {
    int best = -1;
    Rational inf = pts[i].precision() ? *pts[i].precision() : Rational(1000000000);
    for (std::size_t j = 0; j < verts.size(); ++j)
      if (contains(verts[j], pts[i], inf) && (best < 0 || verts[j].radius > verts[best].radius)) best = static_cast<int>(j);
    tree.leaves.push_back({pts[i], best, i >= nbranch});
  }
  bool inf_branch = infinity_is_branch(f);
  if (inf_branch) tree.leaves.push_back({std::nullopt, 0, false});
  std::size_t marked = nbranch + (inf_branch ? 1 : 0);
  if (marked < 3) {
    tree.degenerate = true;
    tree.warnings.push_back("fewer than three branch points: single-vertex model");
  }
  return tree;
}

// ---------------------------------------------------------------- Mobius transfer

MobiusMap::MobiusMap(FieldPtr from, Elem image) : from_(std::move(from)), image_(std::move(image)) {
  if (from_->kind() != Field::Kind::Function) throw MathError("Mobius map must start from a rational function field");
}

FieldPtr MobiusMap::apply(const FieldPtr& F) {
  if (F->is_constant()) return F;
  if (F == from_) return image_.field();
  for (const auto& [a, b] : memo_)
    if (a == F) return b;
  if (F->kind() != Field::Kind::Algebraic) throw MathError("field is not a tower over the source chart");
  FieldPtr base = apply(F->base());
  std::vector<Elem> cs;
  for (const auto& c : F->modulus().coeffs()) cs.push_back(base->embed(apply(c)));
  FieldPtr out = Field::algebraic(base, Poly(base, cs), F->name());
  memo_.emplace_back(F, out);
  return out;
}

Elem MobiusMap::apply(const Elem& e) {
  const FieldPtr& F = e.field();
  if (F->is_constant()) return e;
  if (F == from_) {
    const FieldPtr& G = image_.field();
    return e.num().embed(G).eval(image_) / e.den().embed(G).eval(image_);
  }
  FieldPtr T = apply(F);
  std::vector<Elem> cs;
  for (const auto& c : e.num().coeffs()) cs.push_back(T->base()->embed(apply(c)));
  return T->make_algebraic(Poly(T->base(), cs));
}

LaurentSeries MobiusMap::apply(const LaurentSeries& s) {
  LaurentSeries r(apply(s.field()), s.precision());
  for (const auto& [e, c] : s.terms()) r.add_term(e, r.field()->embed(apply(c)));
  return r;
}

Elem gluing_image(const Chart& from, const Chart& to, const Rational& k, const FieldPtr& target) {
  auto inverted = [&](const Chart& c) { return c.kind == Chart::Kind::Annulus && c.b == k && c.a != k; };
  auto radius_ok = [&](const Chart& c) {
    return c.kind == Chart::Kind::Annulus ? (c.a == k || c.b == k) : c.a == k;
  };
  if (!radius_ok(from) || !radius_ok(to)) throw PreconditionError("charts do not share the vertex");
  LaurentSeries diff = to.center.embed(join(to.center.field(), from.center.field())) - from.center;
  if (!diff.is_zero() && *diff.valuation() < k) throw PreconditionError("charts do not share the vertex");
  const FieldPtr& G = target;
  Elem delta = G->embed(diff.coeff(k));
  Elem w = inverted(to) ? G->gen().inv() : G->gen();
  Elem U = delta + w;  // (x - c1)/t^k in the residue field
  return inverted(from) ? U.inv() : U;
}

}  // namespace tropskel
