#include "tropskel/factor.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "factor_internal.hpp"
#include "tropskel/errors.hpp"

namespace tropskel {

bool poly_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a.str() < b.str();
}

// ---------------------------------------------------------------- norms

namespace {

Elem det_bareiss(std::vector<std::vector<Elem>> M) {
  int n = static_cast<int>(M.size());
  FieldPtr F = M[0][0].field();
  Elem sign = F->one(), prev = F->one();
  for (int k = 0; k < n - 1; ++k) {
    if (M[k][k].is_zero()) {
      int r = k + 1;
      while (r < n && M[r][k].is_zero()) ++r;
      if (r == n) return F->zero();
      std::swap(M[r], M[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
    prev = M[k][k];
  }
  return sign * M[n - 1][n - 1];
}

Poly det_bareiss_poly(std::vector<std::vector<Poly>> M, const FieldPtr& B) {
  int n = static_cast<int>(M.size());
  Poly sign = Poly::constant(B->one()), prev = Poly::constant(B->one());
  for (int k = 0; k < n - 1; ++k) {
    if (M[k][k].is_zero()) {
      int r = k + 1;
      while (r < n && M[r][k].is_zero()) ++r;
      if (r == n) return Poly(B);
      std::swap(M[r], M[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
    prev = M[k][k];
  }
  return sign * M[n - 1][n - 1];
}

}  // namespace

Poly norm_down(const Poly& h) {
  const FieldPtr& F = h.field();
  if (F->kind() != Field::Kind::Algebraic) throw MathError("norm_down needs an algebraic extension");
  const FieldPtr& B = F->base();
  int d = F->degree();
  Elem z = F->gen();
  std::vector<std::vector<Poly>> M(d, std::vector<Poly>(d, Poly(B)));
  for (int j = 0; j < d; ++j) {
    Elem zj = z.pow(j);
    for (int k = 0; k <= h.degree(); ++k) {
      Elem c = h.coeffs()[k] * zj;
      for (int i = 0; i <= c.num().degree(); ++i) M[i][j] += Poly::monomial(c.num().coeffs()[i], k);
    }
  }
  return det_bareiss_poly(std::move(M), B);
}

Poly norm_to(const Poly& h, const FieldPtr& target) {
  Poly r = h;
  while (r.field() != target) r = norm_down(r);
  return r;
}

// ---------------------------------------------------------------- bivariate over C(u)

namespace {

using BiPoly = std::vector<Poly>;  // coefficient of y^j, each a polynomial in u over C

BiPoly to_bipoly(const Poly& f) {
  const FieldPtr& Fu = f.field();
  const FieldPtr& C = Fu->base();
  Poly L = Poly::constant(C->one());
  for (const auto& c : f.coeffs()) L = L / gcd(L, c.den()) * c.den();
  L = L.monic();
  BiPoly out;
  for (const auto& c : f.coeffs()) out.push_back(c.num() * (L / c.den()));
  Poly g(C);
  for (const auto& c : out) g = gcd(g, c);
  if (g.degree() > 0)
    for (auto& c : out) c = c / g;
  Elem l = out.back().lc();
  for (auto& c : out) c = c.scaled(l.inv());
  return out;
}

Poly from_bipoly(const BiPoly& b, const FieldPtr& Fu) {
  std::vector<Elem> c;
  for (const auto& p : b) c.push_back(Fu->make_fraction(p, Poly::constant(Fu->base()->one())));
  return Poly(Fu, c);
}

Poly specialize(const BiPoly& b, const Elem& u0) {
  std::vector<Elem> c;
  for (const auto& p : b) c.push_back(p.eval(u0));
  return Poly(u0.field(), c);
}

int deg_u(const BiPoly& b) {
  int d = 0;
  for (const auto& p : b) d = std::max(d, p.degree());
  return d;
}

// Truncated power series in s with polynomial-in-y coefficients.
using SerY = std::vector<Poly>;

SerY ser_mul(const SerY& a, const SerY& b, int P, const FieldPtr& C) {
  SerY r(P, Poly(C));
  for (int i = 0; i < P && i < static_cast<int>(a.size()); ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j < P && j < static_cast<int>(b.size()); ++j)
      if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
  }
  return r;
}

// Lift A = a0*b0 (mod s) to precision P; A monic in y in every truncation.
std::pair<SerY, SerY> hensel_s(const SerY& A, const Poly& a0, const Poly& b0, int P) {
  FieldPtr C = a0.field();
  ExtGcd eg = ext_gcd(a0, b0);
  if (eg.g.degree() != 0) throw MathError("Hensel: factors not coprime");
  SerY a(P, Poly(C)), b(P, Poly(C));
  a[0] = a0;
  b[0] = b0;
  for (int k = 1; k < P; ++k) {
    Poly e = k < static_cast<int>(A.size()) ? A[k] : Poly(C);
    for (int i = 1; i < k; ++i) e -= a[i] * b[k - i];
    if (e.is_zero()) continue;
    Poly da = (e * eg.t) % a0;
    Poly db = (e - da * b0) / a0;
    a[k] = da;
    b[k] = db;
  }
  return {a, b};
}

std::vector<Elem> sample_points(const FieldPtr& C, int n) {
  std::vector<Elem> pts;
  for (int k = 0; static_cast<int>(pts.size()) < n; ++k) {
    long v = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
    pts.push_back(C->from_int(v));
  }
  return pts;
}

bool good_point(const BiPoly& N, const Elem& u0) {
  if (N.back().eval(u0).is_zero()) return false;
  Poly s = specialize(N, u0);
  return gcd(s, s.derivative()).degree() == 0;
}

// Irreducible factors of squarefree primitive N over C(u).
std::vector<BiPoly> factor_bipoly(BiPoly N) {
  const FieldPtr C = N.back().field();
  int n = static_cast<int>(N.size()) - 1;
  if (n <= 1) return {N};
  // pick a good point with fewest specialized factors
  std::optional<Elem> best_u;
  std::vector<Poly> best;
  int tried = 0;
  for (const auto& u0 : sample_points(C, 200)) {
    if (!good_point(N, u0)) continue;
    auto fs = factor_squarefree(specialize(N, u0));
    if (!best_u || fs.size() < best.size()) {
      best_u = u0;
      best = fs;
    }
    if (best.size() == 1 || ++tried >= 3) break;
  }
  if (!best_u) throw MathError("no good specialization point");
  if (best.size() == 1) return {N};
  Elem u0 = *best_u;
  int P = deg_u(N) + N.back().degree() + 1;
  // N(u0+s, y) as series; A = N / lc
  SerY S(P, Poly(C));
  for (int j = 0; j <= n; ++j) {
    Poly c = N[j].taylor_shift(u0);
    for (int k = 0; k <= c.degree() && k < P; ++k) S[k] += Poly::monomial(c.coeffs()[k], j);
  }
  Poly lcs = N.back().taylor_shift(u0);
  // inverse of lcs mod s^P
  std::vector<Elem> li(P, C->zero());
  li[0] = lcs.coeff(0).inv();
  for (int k = 1; k < P; ++k) {
    Elem acc = C->zero();
    for (int i = 1; i <= k; ++i) acc += lcs.coeff(i) * li[k - i];
    li[k] = -acc * li[0];
  }
  SerY lis(P, Poly(C));
  for (int k = 0; k < P; ++k) lis[k] = Poly::constant(li[k]);
  SerY A = ser_mul(S, lis, P, C);
  // lift factors one at a time
  std::vector<SerY> lifted;
  SerY rest = A;
  for (std::size_t i = 0; i + 1 < best.size(); ++i) {
    Poly restc(C);
    restc = Poly::constant(C->one());
    for (std::size_t j = i + 1; j < best.size(); ++j) restc = restc * best[j];
    auto [a, b] = hensel_s(rest, best[i], restc, P);
    lifted.push_back(a);
    rest = b;
  }
  lifted.push_back(rest);

  std::vector<BiPoly> out;
  std::vector<bool> used(lifted.size(), false);
  std::size_t remaining = lifted.size();
  BiPoly cur = N;
  FieldPtr Fu = Field::function(C, "u");
  for (std::size_t s = 1; 2 * s <= remaining; ++s) {
    bool progress = true;
    while (progress && 2 * s <= remaining) {
      progress = false;
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < lifted.size(); ++i)
        if (!used[i]) idx.push_back(i);
      std::vector<int> sel(idx.size(), 0);
      std::fill(sel.begin(), sel.begin() + s, 1);
      std::sort(sel.begin(), sel.end(), std::greater<>());
      do {
        SerY H = SerY(P, Poly(C));
        Poly lcc = cur.back().taylor_shift(u0);
        for (int k = 0; k <= lcc.degree() && k < P; ++k) H[k] = Poly::constant(lcc.coeffs()[k]);
        for (std::size_t i = 0; i < idx.size(); ++i)
          if (sel[i]) H = ser_mul(H, lifted[idx[i]], P, C);
        // back to polynomial in u
        int dy = 0;
        for (const auto& h : H) dy = std::max(dy, h.degree());
        BiPoly G(dy + 1, Poly(C));
        for (int j = 0; j <= dy; ++j) {
          std::vector<Elem> cs;
          for (int k = 0; k < P; ++k) cs.push_back(H[k].coeff(j));
          G[j] = Poly(C, cs).taylor_shift(-u0);
        }
        Poly g = from_bipoly(G, Fu);
        Poly c = from_bipoly(cur, Fu);
        auto [q, r] = divmod(c, g);
        if (r.is_zero()) {
          BiPoly gp = to_bipoly(g);
          out.push_back(gp);
          cur = to_bipoly(q);
          for (std::size_t i = 0; i < idx.size(); ++i)
            if (sel[i]) used[idx[i]] = true;
          remaining -= s;
          progress = true;
          break;
        }
      } while (std::prev_permutation(sel.begin(), sel.end()));
    }
  }
  if (cur.size() > 1) out.push_back(cur);
  return out;
}

std::vector<Poly> factor_squarefree_function(const Poly& f) {
  const FieldPtr& Fu = f.field();
  if (!Fu->base()->is_constant()) throw MathError("factorization over nested function fields is not supported");
  std::vector<Poly> out;
  for (auto& b : factor_bipoly(to_bipoly(f))) out.push_back(from_bipoly(b, Fu).monic());
  return out;
}

// Trager: f squarefree over an algebraic extension F of B.
std::vector<Poly> factor_squarefree_algebraic(const Poly& f) {
  const FieldPtr& F = f.field();
  Elem a = F->gen();
  for (long k = 0; k < 50; ++k) {
    long kk = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
    Elem shift = a * F->from_int(kk);
    Poly g = f.taylor_shift(-shift);  // g(y) = f(y - k a)
    Poly N = norm_down(g);
    if (gcd(N, N.derivative()).degree() != 0) continue;
    auto facs = factor_squarefree(N);
    if (facs.size() == 1) return {f.monic()};
    std::vector<Poly> out;
    for (const auto& h : facs) {
      Poly d = gcd(g, h.embed(F));
      out.push_back(d.taylor_shift(shift).monic());
    }
    return out;
  }
  throw MathError("Trager: no squarefree norm found");
}

}  // namespace

namespace {
int max_factor_degree = 8;
}  // namespace

void set_max_factor_degree(int d) { max_factor_degree = d; }
int get_max_factor_degree() { return max_factor_degree; }

std::vector<Poly> factor_squarefree(const Poly& f) {
  if (f.degree() < 1) return {};
  if (f.degree() == 1) return {f.monic()};
  const FieldPtr& F = f.field();
  std::vector<Poly> out;
  switch (F->kind()) {
    case Field::Kind::Rationals:
      out = detail::factor_squarefree_q(f);
      break;
    case Field::Kind::Algebraic:
      out = factor_squarefree_algebraic(f);
      break;
    case Field::Kind::Function:
      out = factor_squarefree_function(f);
      break;
  }
  std::sort(out.begin(), out.end(), poly_less);
  Poly prod = Poly::constant(f.lc());
  for (const auto& q : out) prod = prod * q;
  if (!(prod == f)) throw MathError("factor product does not reconstruct the input");
  return out;
}

std::vector<Factor> factor(const Poly& f) {
  if (f.degree() > max_factor_degree)
    throw BoundExceeded("degree " + std::to_string(f.degree()) + " exceeds the factorization limit " +
                        std::to_string(max_factor_degree));
  std::vector<Factor> out;
  for (auto& [p, m] : squarefree_decomposition(f))
    for (auto& q : factor_squarefree(p)) out.push_back({q, m});
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
    if (a.poly == b.poly) return a.mult < b.mult;
    return poly_less(a.poly, b.poly);
  });
  Poly prod = Poly::constant(f.lc());
  for (const auto& q : out)
    for (int k = 0; k < q.mult; ++k) prod = prod * q.poly;
  if (!(prod == f)) throw MathError("factor product does not reconstruct the input");
  return out;
}

// ---------------------------------------------------------------- geometric test

namespace {

// Irreducible polynomial over C(u) with a root generating the same field as a root of g.
Poly primitive_norm(const Poly& g) {
  Poly cur = g;
  while (cur.field()->kind() == Field::Kind::Algebraic) {
    const FieldPtr& F = cur.field();
    Elem a = F->gen();
    bool done = false;
    for (long k = 0; k < 50 && !done; ++k) {
      long kk = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
      Poly sh = cur.taylor_shift(-a * F->from_int(kk));
      Poly N = norm_down(sh);
      if (gcd(N, N.derivative()).degree() == 0) {
        cur = N;
        done = true;
      }
    }
    if (!done) throw MathError("no squarefree norm for primitive element");
  }
  return cur.monic();
}

}  // namespace

GeometricCheck geometric_check(const Poly& g) {
  GeometricCheck res;
  if (g.degree() <= 1) return res;
  Poly P = primitive_norm(g);
  const FieldPtr& Fu = P.field();
  if (Fu->kind() != Field::Kind::Function) throw MathError("geometric_check needs a tower over C(u)");
  const FieldPtr& C = Fu->base();
  BiPoly N = to_bipoly(P);
  long G = 0;
  std::optional<Elem> best_u;
  std::optional<Poly> best_q;
  int good = 0;
  for (const auto& u0 : sample_points(C, 400)) {
    if (!good_point(N, u0)) continue;
    for (auto& q : factor_squarefree(specialize(N, u0))) {
      G = std::gcd(G, static_cast<long>(q.degree()));
      if (!best_q || q.degree() < best_q->degree()) {
        best_q = q;
        best_u = u0;
      }
    }
    if (G == 1) return res;
    if (++good >= 5) break;
  }
  if (!best_q) throw MathError("geometric_check: no good point");
  if (best_q->degree() == 1) return res;
  FieldPtr C2 = Field::algebraic(C, *best_q, "z_");
  FieldPtr Fu2 = Field::function(C2, Fu->name());
  std::vector<Elem> cs;
  for (const auto& c : P.coeffs()) {
    Poly n = c.num().embed(C2), d = c.den().embed(C2);
    cs.push_back(Fu2->make_fraction(n, d));
  }
  auto facs = factor_squarefree(Poly(Fu2, cs));
  if (facs.size() == 1) return res;
  res.irreducible = false;
  res.constant_needed = *best_q;
  return res;
}

}  // namespace tropskel
