// Zassenhaus factorization over Q: factor mod p, Hensel lift, recombine.
#include <algorithm>

#include "factor_internal.hpp"
#include "tropskel/errors.hpp"

namespace tropskel::detail {

namespace {

using ZPoly = std::vector<Integer>;

void ztrim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  ztrim(r);
  return r;
}

Integer mods(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  if (2 * r > m) r -= m;
  return r;
}

ZPoly zmod(ZPoly a, const Integer& m) {
  for (auto& x : a) {
    x %= m;
    if (x < 0) x += m;
  }
  ztrim(a);
  return a;
}

// a mod b over Z/m with b monic.
ZPoly zrem_monic(ZPoly a, const ZPoly& b, const Integer& m) {
  a = zmod(a, m);
  int db = static_cast<int>(b.size()) - 1;
  for (int k = static_cast<int>(a.size()) - 1; k >= db; --k) {
    Integer c = a[k];
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) a[k - db + j] -= c * b[j];
  }
  if (static_cast<int>(a.size()) > db) a.resize(db);
  return zmod(a, m);
}

ZPoly from_fp(const FpPoly& a) {
  ZPoly r;
  for (auto x : a) r.emplace_back(static_cast<unsigned long>(x));
  return r;
}

FpPoly to_fp(const ZPoly& a, std::uint64_t p) {
  FpPoly r;
  Integer P(static_cast<unsigned long>(p));
  for (const auto& x : a) {
    Integer y = x % P;
    if (y < 0) y += P;
    r.push_back(y.get_ui());
  }
  fp::trim(r);
  return r;
}

// Lift F = a*b (mod p) to modulus p^k; a, b, F monic.
std::pair<ZPoly, ZPoly> hensel_pair(const ZPoly& F, ZPoly a, ZPoly b, std::uint64_t p, int k) {
  FpPoly ap = to_fp(a, p), bp = to_fp(b, p);
  // s*a + t*b = 1 mod p
  FpPoly r0 = ap, r1 = bp, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = fp::divmod(r0, r1, p);
    r0 = r1;
    r1 = r;
    FpPoly s2 = fp::sub(s0, fp::mul(q, s1, p), p);
    s0 = s1;
    s1 = s2;
    FpPoly t2 = fp::sub(t0, fp::mul(q, t1, p), p);
    t0 = t1;
    t1 = t2;
  }
  std::uint64_t li = fp::inv(r0[0], p);
  for (auto& x : s0) x = x * li % p;
  for (auto& x : t0) x = x * li % p;
  ZPoly s = from_fp(s0), t = from_fp(t0);
  Integer P(static_cast<unsigned long>(p)), pk = P;
  for (int step = 1; step < k; ++step) {
    Integer next = pk * P;
    ZPoly ab = zmul(a, b);
    ZPoly e(std::max(F.size(), ab.size()), 0);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = (i < F.size() ? F[i] : 0) - (i < ab.size() ? ab[i] : 0);
    for (auto& x : e) x = (x % next + next) % next / pk;  // exact: e == 0 mod pk
    ztrim(e);
    ZPoly da = zrem_monic(zmul(e, t), zmod(a, P), P);
    ZPoly db = zrem_monic(zmul(e, s), zmod(b, P), P);
    for (std::size_t i = 0; i < da.size(); ++i) a[i] += pk * da[i];
    for (std::size_t i = 0; i < db.size(); ++i) b[i] += pk * db[i];
    a = zmod(a, next);
    b = zmod(b, next);
    pk = next;
  }
  return {a, b};
}

void hensel_tree(const ZPoly& F, const std::vector<ZPoly>& facs, std::size_t lo, std::size_t hi, std::uint64_t p,
                 int k, const Integer& pk, std::vector<ZPoly>& out) {
  if (hi - lo == 1) {
    out.push_back(zmod(F, pk));
    return;
  }
  std::size_t mid = (lo + hi) / 2;
  Integer P(static_cast<unsigned long>(p));
  ZPoly a{1}, b{1};
  for (std::size_t i = lo; i < mid; ++i) a = zmod(zmul(a, facs[i]), P);
  for (std::size_t i = mid; i < hi; ++i) b = zmod(zmul(b, facs[i]), P);
  auto [A, B] = hensel_pair(F, a, b, p, k);
  hensel_tree(A, facs, lo, mid, p, k, pk, out);
  hensel_tree(B, facs, mid, hi, p, k, pk, out);
}

// Exact division test over Z; returns quotient if g | f.
std::optional<ZPoly> zdivide(const ZPoly& f, const ZPoly& g) {
  ZPoly r = f;
  int dg = static_cast<int>(g.size()) - 1;
  if (static_cast<int>(r.size()) - 1 < dg) return std::nullopt;
  ZPoly q(r.size() - g.size() + 1, 0);
  for (int k = static_cast<int>(r.size()) - 1; k >= dg; --k) {
    if (r[k] == 0) continue;
    if (r[k] % g.back() != 0) return std::nullopt;
    Integer c = r[k] / g.back();
    q[k - dg] = c;
    for (int j = 0; j <= dg; ++j) r[k - dg + j] -= c * g[j];
  }
  for (const auto& x : r)
    if (x != 0) return std::nullopt;
  ztrim(q);
  return q;
}

Integer content(const ZPoly& a) {
  Integer g = 0;
  for (const auto& x : a) g = gcd(g, x);
  return g;
}

ZPoly primitive(ZPoly a) {
  Integer c = content(a);
  if (a.back() < 0) c = -c;
  for (auto& x : a) x /= c;
  return a;
}

// f primitive squarefree, deg >= 1, positive lc.
std::vector<ZPoly> zassenhaus(ZPoly f) {
  int n = static_cast<int>(f.size()) - 1;
  if (n == 1) return {f};
  // choose prime giving fewest modular factors among a few candidates
  std::uint64_t best_p = 0;
  std::vector<FpPoly> best;
  int tried = 0;
  for (std::uint64_t p = 3; tried < 6 && p < 100000; p += 2) {
    if (!fp::is_prime(p)) continue;
    Integer P(static_cast<unsigned long>(p));
    if (f.back() % P == 0) continue;
    FpPoly fp_ = to_fp(f, p);
    FpPoly g = fp::gcd(fp_, fp::derivative(fp_, p), p);
    if (g.size() > 1) continue;
    ++tried;
    auto fac = factor_mod_p(fp_, p);
    if (best_p == 0 || fac.size() < best.size()) {
      best_p = p;
      best.clear();
      for (auto& [q, m] : fac) best.push_back(q);
    }
    if (best.size() == 1) break;
  }
  if (best_p == 0) throw MathError("no good prime for Zassenhaus");
  if (best.size() == 1) return {f};
  std::uint64_t p = best_p;
  Integer P(static_cast<unsigned long>(p));
  // Mignotte-type bound on factor coefficients
  Integer norm2 = 0;
  for (const auto& x : f) norm2 += x * x;
  Integer nrm = sqrt(norm2) + 1;
  Integer lcabs = abs(f.back());
  Integer bound = (Integer(1) << n) * nrm * lcabs * 2 + 1;
  int k = 1;
  Integer pk = P;
  while (pk <= bound) {
    pk *= P;
    ++k;
  }
  // monic image of f mod p^k
  Integer lcinv;
  mpz_invert(lcinv.get_mpz_t(), f.back().get_mpz_t(), pk.get_mpz_t());
  ZPoly F = f;
  for (auto& x : F) x = x * lcinv;
  F = zmod(F, pk);
  std::vector<ZPoly> facs;
  for (auto& q : best) facs.push_back(from_fp(q));
  std::vector<ZPoly> lifted;
  hensel_tree(F, facs, 0, facs.size(), p, k, pk, lifted);

  std::vector<ZPoly> out;
  std::vector<bool> used(lifted.size(), false);
  std::size_t remaining = lifted.size();
  ZPoly cur = f;
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
        ZPoly g{cur.back()};
        for (std::size_t i = 0; i < idx.size(); ++i)
          if (sel[i]) g = zmod(zmul(g, lifted[idx[i]]), pk);
        for (auto& x : g) x = mods(x, pk);
        ztrim(g);
        g = primitive(g);
        if (auto q = zdivide(cur, g)) {
          out.push_back(g);
          cur = *q;
          for (std::size_t i = 0; i < idx.size(); ++i)
            if (sel[i]) used[idx[i]] = true;
          remaining -= s;
          progress = true;
          break;
        }
      } while (std::prev_permutation(sel.begin(), sel.end()));
    }
  }
  if (cur.size() > 1) out.push_back(primitive(cur));
  return out;
}

}  // namespace

std::vector<Poly> factor_squarefree_q(const Poly& f) {
  FieldPtr q = f.field();
  // clear denominators
  Integer den = 1;
  for (const auto& c : f.coeffs()) den = lcm(den, c.to_rational().get_den());
  ZPoly z;
  for (const auto& c : f.coeffs()) {
    Rational r = c.to_rational() * den;
    z.push_back(r.get_num());
  }
  z = primitive(z);
  // strip factor x^k handled naturally (x is found as a factor)
  std::vector<Poly> out;
  int shift = 0;
  while (z[shift] == 0) ++shift;
  if (shift > 0) {
    out.push_back(Poly::var(q));
    z.erase(z.begin(), z.begin() + shift);
  }
  if (z.size() > 1) {
    for (auto& g : zassenhaus(z)) {
      std::vector<Elem> c;
      for (auto& x : g) c.push_back(q->from_rational(Rational(x)));
      out.push_back(Poly(q, c).monic());
    }
  }
  return out;
}

}  // namespace tropskel::detail
