#include <algorithm>
#include <functional>
#include <random>

#include "tropskel/errors.hpp"
#include "tropskel/factor.hpp"

namespace tropskel {

namespace fp {

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
  while (nr) {
    std::int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (r != 1) throw MathError("not invertible mod p");
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(p) : t);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FpPoly mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

FpPoly sub(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    r[i] = (x + p - y) % p;
  }
  trim(r);
  return r;
}

std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  if (b.empty()) throw MathError("division by zero polynomial mod p");
  FpPoly r = a;
  trim(r);
  if (r.size() < b.size()) return {{}, r};
  FpPoly q(r.size() - b.size() + 1, 0);
  std::uint64_t li = inv(b.back(), p);
  for (std::size_t k = r.size(); k-- >= b.size();) {
    std::uint64_t c = r[k] * li % p;
    q[k - b.size() + 1] = c;
    if (c)
      for (std::size_t j = 0; j < b.size(); ++j) {
        std::size_t idx = k - b.size() + 1 + j;
        r[idx] = (r[idx] + p - c * b[j] % p) % p;
      }
    if (k == 0) break;
  }
  r.resize(b.size() - 1);
  trim(r);
  trim(q);
  return {q, r};
}

FpPoly gcd(FpPoly a, FpPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    std::uint64_t li = inv(a.back(), p);
    for (auto& x : a) x = x * li % p;
  }
  return a;
}

FpPoly powmod(FpPoly base, Integer e, const FpPoly& m, std::uint64_t p) {
  FpPoly r{1};
  base = divmod(base, m, p).second;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = divmod(mul(r, base, p), m, p).second;
    e >>= 1;
    if (e > 0) base = divmod(mul(base, base, p), m, p).second;
  }
  return r;
}

FpPoly derivative(const FpPoly& a, std::uint64_t p) {
  FpPoly r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * (i % p) % p);
  trim(r);
  return r;
}

}  // namespace fp

namespace {

FpPoly monic(FpPoly a, std::uint64_t p) {
  fp::trim(a);
  std::uint64_t li = fp::inv(a.back(), p);
  for (auto& x : a) x = x * li % p;
  return a;
}

// Equal-degree splitting of a squarefree product of degree-d irreducibles.
void edf(const FpPoly& f, int d, std::uint64_t p, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  int n = static_cast<int>(f.size()) - 1;
  if (n == d) {
    out.push_back(f);
    return;
  }
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  while (true) {
    FpPoly a(n, 0);
    for (auto& x : a) x = dist(rng);
    fp::trim(a);
    if (a.size() < 2) continue;
    FpPoly b;
    if (p == 2) {
      // trace map a + a^2 + ... + a^(2^(d-1))
      FpPoly t = a, s = a;
      for (int k = 1; k < d; ++k) {
        t = fp::divmod(fp::mul(t, t, p), f, p).second;
        s.resize(std::max(s.size(), t.size()), 0);
        for (std::size_t i = 0; i < t.size(); ++i) s[i] ^= t[i];
        fp::trim(s);
      }
      b = s;
    } else {
      Integer e;
      mpz_ui_pow_ui(e.get_mpz_t(), p, d);
      e = (e - 1) / 2;
      b = fp::sub(fp::powmod(a, e, f, p), FpPoly{1}, p);
    }
    FpPoly g = fp::gcd(f, b, p);
    if (g.size() > 1 && g.size() < f.size()) {
      edf(g, d, p, rng, out);
      edf(monic(fp::divmod(f, g, p).first, p), d, p, rng, out);
      return;
    }
  }
}

std::vector<FpPoly> factor_squarefree_fp(FpPoly f, std::uint64_t p, std::mt19937_64& rng) {
  std::vector<FpPoly> out;
  FpPoly x{0, 1};
  FpPoly h = x;
  for (int d = 1; 2 * d <= static_cast<int>(f.size()) - 1; ++d) {
    h = fp::powmod(h, Integer(static_cast<unsigned long>(p)), f, p);
    FpPoly g = fp::gcd(f, fp::sub(h, x, p), p);
    if (g.size() > 1) {
      edf(g, d, p, rng, out);
      f = monic(fp::divmod(f, g, p).first, p);
      h = fp::divmod(h, f, p).second;
    }
  }
  if (f.size() > 1) out.push_back(f);
  return out;
}

}  // namespace

std::vector<std::pair<FpPoly, int>> factor_mod_p(const FpPoly& f0, std::uint64_t p) {
  FpPoly f = f0;
  for (auto& x : f) x %= p;
  fp::trim(f);
  if (f.empty()) throw MathError("factor_mod_p of zero polynomial");
  f = monic(f, p);
  std::mt19937_64 rng(0x5eed);
  std::vector<std::pair<FpPoly, int>> out;
  // squarefree decomposition (with p-th power handling)
  std::function<void(FpPoly, int)> rec = [&](FpPoly g, int mult) {
    if (g.size() <= 1) return;
    FpPoly dg = fp::derivative(g, p);
    if (dg.empty()) {
      // g = h(x^p) = h(x)^p over F_p
      FpPoly h;
      for (std::size_t i = 0; i < g.size(); i += p) h.push_back(g[i]);
      rec(h, mult * static_cast<int>(p));
      return;
    }
    FpPoly c = fp::gcd(g, dg, p);
    FpPoly w = monic(fp::divmod(g, c, p).first, p);
    int i = 1;
    while (w.size() > 1) {
      FpPoly y = fp::gcd(w, c, p);
      FpPoly fac = monic(fp::divmod(w, y, p).first, p);
      if (fac.size() > 1)
        for (auto& q : factor_squarefree_fp(fac, p, rng)) out.emplace_back(q, i * mult);
      w = y;
      c = monic(fp::divmod(c, y, p).first, p);
      ++i;
    }
    if (c.size() > 1) rec(c, mult);
  };
  rec(f, 1);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    for (std::size_t i = a.first.size(); i-- > 0;)
      if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
    return a.second < b.second;
  });
  return out;
}

}  // namespace tropskel
