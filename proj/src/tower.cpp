#include "tropskel/tower.hpp"

#include <set>

#include "tropskel/errors.hpp"

namespace tropskel {

namespace {

// Squarefree kernel d and cofactor s of a nonzero integer: n = s^2 d.
std::pair<Integer, Integer> squarefree_split(Integer n) {
  Integer d = n < 0 ? Integer(-1) : Integer(1), s = 1;
  n = abs(n);
  for (Integer p = 2; p * p <= n; ++p) {
    if (p > 1000000) return {Integer(0), Integer(0)};
    while (n % (p * p) == 0) {
      n /= p * p;
      s *= p;
    }
    if (n % p == 0) {
      n /= p;
      d *= p;
    }
  }
  return {d * n, s};
}

std::string sqrt_name(const Integer& d) {
  if (d == -1) return "i";
  return d < 0 ? "sqrtm" + Integer(-d).get_str() : "sqrt" + d.get_str();
}

bool rational_coeffs(const Poly& q) {
  for (const auto& c : q.coeffs())
    if (!c.is_rational()) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- constants

void ConstantField::adjoin(const Poly& q0) {
  if (!field_->is_constant()) throw MathError("constant field must be a number field tower");
  Poly q = q0.embed(field_).monic();
  if (q.degree() <= 1) return;
  if (q.degree() == 2 && rational_coeffs(q)) {
    Rational b = q.coeff(1).to_rational(), c = q.coeff(0).to_rational();
    Rational D = b * b - 4 * c;
    Integer N = D.get_num() * D.get_den();
    auto [d, s] = squarefree_split(N);
    if (d != 0) {
      Poly m = Poly::from_ints(field_, {0, 0, 1}) - Poly::constant(field_->from_rational(Rational(d)));
      field_ = Field::algebraic(field_, m, sqrt_name(d));
      return;
    }
  }
  field_ = Field::algebraic(field_, q, "a" + std::to_string(++counter_));
}

int ConstantField::degree() const { return relative_degree(field_, Field::rationals()); }

std::vector<std::string> ConstantField::describe() const {
  std::vector<std::string> out;
  for (FieldPtr f = field_; f && f->kind() == Field::Kind::Algebraic; f = f->base())
    out.insert(out.begin(), f->name() + ": " + f->modulus().str(f->name()));
  return out;
}

// ---------------------------------------------------------------- linear algebra

int relative_degree(const FieldPtr& F, const FieldPtr& B) {
  if (F == B) return 1;
  if (F->kind() != Field::Kind::Algebraic) throw MathError("not a finite extension of the given subfield");
  return F->degree() * relative_degree(F->base(), B);
}

std::vector<Elem> coords(const Elem& e, const FieldPtr& B) {
  const FieldPtr& F = e.field();
  if (F == B) return {e};
  if (B->has_subfield(F.get())) return {B->embed(e)};
  if (F->kind() != Field::Kind::Algebraic) throw MathError("not a finite extension of the given subfield");
  std::vector<Elem> out;
  for (int j = 0; j < F->degree(); ++j) {
    auto c = coords(e.num().coeff(j), B);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

std::optional<std::vector<Elem>> solve_columns(const std::vector<std::vector<Elem>>& cols,
                                               const std::vector<Elem>& target) {
  const std::size_t m = target.size(), k = cols.size();
  if (k == 0) {
    for (const auto& x : target)
      if (!x.is_zero()) return std::nullopt;
    return std::vector<Elem>{};
  }
  // augmented row-major matrix
  std::vector<std::vector<Elem>> a(m, std::vector<Elem>(k + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = cols[j][i];
    a[i][k] = target[i];
  }
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t j = 0; j < k && row < m; ++j) {
    std::size_t p = row;
    while (p < m && a[p][j].is_zero()) ++p;
    if (p == m) continue;
    std::swap(a[p], a[row]);
    Elem inv = a[row][j].inv();
    for (std::size_t c = j; c <= k; ++c) a[row][c] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || a[i][j].is_zero()) continue;
      Elem f = a[i][j];
      for (std::size_t c = j; c <= k; ++c) a[i][c] -= f * a[row][c];
    }
    pivot_col.push_back(static_cast<int>(j));
    ++row;
  }
  for (std::size_t i = row; i < m; ++i)
    if (!a[i][k].is_zero()) return std::nullopt;
  std::vector<Elem> x(k, target.front().field()->zero());
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = a[r][k];
  return x;
}

// ---------------------------------------------------------------- towers

FieldPtr extend_tower(const FieldPtr& T, const Poly& g, const std::string& name) {
  Poly h = g.embed(T);
  if (h.degree() < 1) throw MathError("cannot extend by a constant polynomial");
  if (h.degree() == 1) return T;
  return Field::algebraic(T, h.monic(), name);
}

int tower_degree(const FieldPtr& T, const FieldPtr& base) { return relative_degree(T, base); }

Poly minpoly(const Elem& e, const FieldPtr& B) {
  std::vector<std::vector<Elem>> cols;
  Elem p = e.field()->one();
  for (;;) {
    auto c = coords(p, B);
    if (auto lam = solve_columns(cols, c)) {
      std::vector<Elem> m;
      for (auto& x : *lam) m.push_back(-x);
      m.push_back(B->one());
      return Poly(B, m);
    }
    cols.push_back(std::move(c));
    p *= e;
  }
}

PrimitiveElement::PrimitiveElement(const FieldPtr& T, const FieldPtr& B) : T_(T), B_(B) {
  const int N = relative_degree(T, B);
  std::vector<Elem> gens;  // top level first
  for (FieldPtr f = T; f != B; f = f->base()) gens.push_back(T->embed(f->gen()));
  for (long k = 0;; ++k) {
    Elem th = T->zero();
    Elem w = T->one();
    for (const auto& g : gens) {
      th += g * w;
      w *= T->from_int(k);
    }
    Poly M = tropskel::minpoly(th, B);
    if (M.degree() == N) {
      theta_ = th;
      M_ = M;
      break;
    }
    if (k > 64) throw MathError("no primitive element found");
  }
  Elem p = T->one();
  for (int k = 0; k < N; ++k) {
    powers_.push_back(coords(p, B));
    p *= theta_;
  }
}

Poly PrimitiveElement::express(const Elem& e) const {
  auto lam = solve_columns(powers_, coords(T_->embed(e), B_));
  if (!lam) throw MathError("element not in the field generated by theta");
  return Poly(B_, *lam);
}

// ---------------------------------------------------------------- conjugacy

namespace {

// Is there a B-embedding sending cs[i] -> ds[i] for all i?  Generators are
// handled one at a time: the minimal polynomial of c_i over B(c_0..c_{i-1})
// is written in a monomial basis of that subfield, transported by c_j -> d_j
// and evaluated at d_i.
bool conjugate(const std::vector<Elem>& cs, const std::vector<Elem>& ds, const FieldPtr& B) {
  FieldPtr T = cs.empty() ? B : cs.front().field();
  std::vector<Elem> mc{T->one()}, md{T->one()};  // basis monomials at c and d
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Elem& c = cs[i];
    const Elem& d = ds[i];
    std::vector<std::vector<Elem>> cols;
    std::vector<Elem> colc, cold;  // values m(c) c^l and m(d) d^l
    Elem cp = T->one(), dp = T->one();
    std::optional<std::vector<Elem>> lam;
    int k = 0;
    for (;; ++k) {
      std::vector<Elem> tgt = coords(cp, B);
      if ((lam = solve_columns(cols, tgt))) break;
      for (std::size_t j = 0; j < mc.size(); ++j) {
        cols.push_back(coords(mc[j] * cp, B));
        colc.push_back(mc[j] * cp);
        cold.push_back(md[j] * dp);
      }
      cp *= c;
      dp *= d;
    }
    // c^k = sum lam_j colc_j, so d^k must equal sum lam_j cold_j
    Elem rhs = T->zero();
    for (std::size_t j = 0; j < lam->size(); ++j) rhs += T->embed((*lam)[j]) * cold[j];
    if (rhs != dp) return false;
    if (k > 1) {
      mc = colc;
      md = cold;
    }
  }
  return true;
}

}  // namespace

std::vector<std::vector<int>> conjugate_classes(const std::vector<LaurentSeries>& approxes, const FieldPtr& B) {
  if (approxes.empty()) return {};
  FieldPtr T = approxes.front().field();
  for (const auto& a : approxes) T = join(T, a.field());
  std::optional<Rational> prec;
  for (const auto& a : approxes)
    if (a.precision()) prec = prec ? std::min<Rational>(*prec, *a.precision()) : *a.precision();
  std::set<Rational> exps;
  for (const auto& a : approxes)
    for (const auto& [e, c] : a.terms())
      if (!prec || e < *prec) exps.insert(e);
  std::vector<std::vector<Elem>> seqs;
  for (const auto& a : approxes) {
    std::vector<Elem> s;
    for (const auto& e : exps) s.push_back(T->embed(a.coeff(e)));
    seqs.push_back(std::move(s));
  }
  std::vector<std::vector<int>> classes;
  for (int i = 0; i < static_cast<int>(seqs.size()); ++i) {
    bool placed = false;
    for (auto& cl : classes) {
      if (conjugate(seqs[cl.front()], seqs[i], B)) {
        cl.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({i});
  }
  return classes;
}

}  // namespace tropskel
