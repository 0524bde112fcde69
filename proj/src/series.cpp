#include "tropskel/series.hpp"

#include <algorithm>

#include "tropskel/errors.hpp"
#include "tropskel/format.hpp"

namespace tropskel {

namespace {

std::optional<Rational> min_prec(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

}  // namespace

std::string exponent_str(const Rational& e) { return to_string(e); }

// ---------------------------------------------------------------- LaurentSeries

LaurentSeries::LaurentSeries(FieldPtr f, std::optional<Rational> prec) : f_(std::move(f)), prec_(std::move(prec)) {}

LaurentSeries LaurentSeries::monomial(const Elem& c, const Rational& e, std::optional<Rational> prec) {
  LaurentSeries s(c.field(), prec);
  s.add_term(e, c);
  return s;
}

void LaurentSeries::cut() {
  if (!prec_) return;
  terms_.erase(terms_.lower_bound(*prec_), terms_.end());
}

void LaurentSeries::add_term(const Rational& e, const Elem& c) {
  if (prec_ && e >= *prec_) return;
  if (c.is_zero()) return;
  Elem cc = c.field() == f_ ? c : f_->embed(c);
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, cc);
  } else {
    it->second += cc;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

std::optional<Rational> LaurentSeries::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first;
}

Rational LaurentSeries::valuation_bound() const {
  if (!terms_.empty()) return terms_.begin()->first;
  if (prec_) return *prec_;
  throw MathError("valuation of exact zero");
}

Elem LaurentSeries::coeff(const Rational& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? f_->zero() : it->second;
}

Elem LaurentSeries::leading_coeff() const {
  if (terms_.empty()) throw MathError("leading coefficient of zero series");
  return terms_.begin()->second;
}

Integer LaurentSeries::ramification() const {
  Integer r = 1;
  for (const auto& [e, c] : terms_) r = lcm(r, e.get_den());
  if (prec_) r = lcm(r, prec_->get_den());
  return r;
}

LaurentSeries LaurentSeries::truncated(const Rational& h) const {
  LaurentSeries s = *this;
  s.prec_ = min_prec(prec_, h);
  s.cut();
  return s;
}

LaurentSeries LaurentSeries::shifted(const Rational& q) const {
  LaurentSeries s(f_, prec_ ? std::optional<Rational>(*prec_ + q) : std::nullopt);
  for (const auto& [e, c] : terms_) s.terms_.emplace(e + q, c);
  return s;
}

LaurentSeries LaurentSeries::scaled(const Elem& c) const {
  FieldPtr F = join(f_, c.field());
  LaurentSeries s(F, prec_);
  if (c.is_zero()) {
    // exact zero scalar annihilates the unknown tail as well
    s.prec_.reset();
    return s;
  }
  for (const auto& [e, x] : terms_) s.terms_.emplace(e, F->embed(x) * c);
  return s;
}

LaurentSeries LaurentSeries::embed(const FieldPtr& F) const {
  if (F == f_) return *this;
  LaurentSeries s(F, prec_);
  for (const auto& [e, c] : terms_) s.terms_.emplace(e, F->embed(c));
  return s;
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries s = *this;
  for (auto& [e, c] : s.terms_) c = -c;
  return s;
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o) {
  if (!f_) return *this = o;
  if (o.f_ != f_) {
    FieldPtr F = join(f_, o.f_);
    if (F != f_) *this = embed(F);
    return *this += o.embed(F);
  }
  prec_ = min_prec(prec_, o.prec_);
  cut();
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& o) { return *this += -o; }

bool LaurentSeries::operator==(const LaurentSeries& o) const {
  if (prec_ != o.prec_ || terms_.size() != o.terms_.size()) return false;
  auto it = o.terms_.begin();
  for (const auto& [e, c] : terms_) {
    if (e != it->first || c != it->second) return false;
    ++it;
  }
  return true;
}

std::string LaurentSeries::str(const std::string& var) const {
  std::vector<std::string> parts;
  for (const auto& [e, c] : terms_) parts.push_back(times_monomial(c.str(), power(var, exponent_str(e))));
  std::string out = parts.empty() && !prec_ ? "0" : join_terms(parts);
  if (prec_) {
    std::string o = "O(" + (*prec_ == 0 ? std::string("1") : power(var, exponent_str(*prec_))) + ")";
    out = parts.empty() ? o : out + " + " + o;
  }
  return out;
}

LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { return a += b; }
LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b) { return a -= b; }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  FieldPtr F = join(a.field(), b.field());
  // exact zero kills everything
  if (a.is_exact() && a.is_zero()) return LaurentSeries(F);
  if (b.is_exact() && b.is_zero()) return LaurentSeries(F);
  std::optional<Rational> prec;
  if (a.precision()) prec = *a.precision() + b.valuation_bound();
  if (b.precision()) prec = min_prec(prec, *b.precision() + a.valuation_bound());
  LaurentSeries r(F, prec);
  for (const auto& [ea, ca] : a.terms()) {
    if (prec && ea + b.valuation_bound() >= *prec) break;
    for (const auto& [eb, cb] : b.terms()) {
      Rational e = ea + eb;
      if (prec && e >= *prec) break;
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

LaurentSeries pow(const LaurentSeries& a, int k) {
  if (k < 0) throw MathError("negative power of series");
  LaurentSeries r = LaurentSeries::constant(a.field()->one());
  LaurentSeries b = a;
  while (k > 0) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

LaurentSeries inverse(const LaurentSeries& a, const Rational& h) {
  if (a.is_zero()) throw MathError("inverse of zero series");
  Rational v = *a.valuation();
  // a = c t^v (1 + g), g of positive valuation; 1/a = c^-1 t^-v sum (-g)^k
  Elem c = a.leading_coeff();
  LaurentSeries g = a.shifted(-v).scaled(c.inv()) - LaurentSeries::constant(a.field()->one());
  Rational target = h + v;  // precision needed for the bracket
  if (a.precision()) target = std::min<Rational>(target, *a.precision() - v);
  LaurentSeries acc(a.field(), target);
  acc.add_term(Rational(0), a.field()->one());
  if (!g.is_zero()) {
    Rational step = g.valuation_bound();
    LaurentSeries term = LaurentSeries::constant(a.field()->one()).truncated(target);
    LaurentSeries mg = (-g).truncated(target);
    for (Rational e = step; e < target; e += step) {
      term = term * mg;
      acc += term;
    }
  } else if (g.precision()) {
    acc = acc.truncated(*g.precision());
  }
  return acc.scaled(c.inv()).shifted(-v);
}

LaurentSeries taylor_expand(const Poly& p, const Elem& c) {
  Poly q = p.taylor_shift(c);
  LaurentSeries s(q.field());
  for (int k = 0; k <= q.degree(); ++k) s.add_term(Rational(k), q.coeffs()[k]);
  return s;
}

// ---------------------------------------------------------------- DoublePointSeries

DoublePointSeries::DoublePointSeries(FieldPtr f, long hm, long hp, Rational n)
    : f_(std::move(f)), hm_(hm), hp_(hp), n_(std::move(n)) {}

void DoublePointSeries::add_term(long i, long j, const Elem& c) {
  if (!in_box(i, j) || c.is_zero()) return;
  Elem cc = c.field() == f_ ? c : f_->embed(c);
  auto it = terms_.find({i, j});
  if (it == terms_.end()) {
    terms_.emplace(Key{i, j}, cc);
  } else {
    it->second += cc;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DoublePointSeries DoublePointSeries::reduced(long hm, long hp) const {
  DoublePointSeries r(f_, std::min(hm, hm_), std::min(hp, hp_), n_);
  for (const auto& [k, c] : terms_) r.add_term(k.first, k.second, c);
  return r;
}

DoublePointSeries DoublePointSeries::embed(const FieldPtr& F) const {
  DoublePointSeries r(F, hm_, hp_, n_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, F->embed(c));
  return r;
}

DoublePointSeries DoublePointSeries::operator-() const {
  DoublePointSeries r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

DoublePointSeries& DoublePointSeries::operator+=(const DoublePointSeries& o) {
  if (o.n_ != n_) throw MathError("double-point series with different relations");
  if (o.hm_ < hm_ || o.hp_ < hp_) *this = reduced(o.hm_, o.hp_);
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
  return *this;
}

DoublePointSeries& DoublePointSeries::operator-=(const DoublePointSeries& o) { return *this += -o; }

bool DoublePointSeries::operator==(const DoublePointSeries& o) const {
  if (hm_ != o.hm_ || hp_ != o.hp_ || terms_.size() != o.terms_.size()) return false;
  auto it = o.terms_.begin();
  for (const auto& [k, c] : terms_) {
    if (k != it->first || c != it->second) return false;
    ++it;
  }
  return true;
}

std::string DoublePointSeries::str(const std::string& u, const std::string& v) const {
  std::vector<std::string> parts;
  for (const auto& [k, c] : terms_) {
    std::string mu = power(u, std::to_string(k.first)), mv = power(v, std::to_string(k.second));
    std::string mon = mu.empty() ? mv : (mv.empty() ? mu : mu + "*" + mv);
    parts.push_back(times_monomial(c.str(), mon));
  }
  std::string out = join_terms(parts);
  std::string o = "O(" + power(u, std::to_string(hm_)) + ", " + power(v, std::to_string(hp_)) + ")";
  return parts.empty() ? o : out + " + " + o;
}

DoublePointSeries operator+(DoublePointSeries a, const DoublePointSeries& b) { return a += b; }
DoublePointSeries operator-(DoublePointSeries a, const DoublePointSeries& b) { return a -= b; }

DoublePointSeries operator*(const DoublePointSeries& a, const DoublePointSeries& b) {
  if (a.relation() != b.relation()) throw MathError("double-point series with different relations");
  DoublePointSeries r(join(a.field(), b.field()), std::min(a.hm(), b.hm()), std::min(a.hp(), b.hp()), a.relation());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return r;
}

bool separate(const std::vector<DoublePointSeries>& rs, long hm, long hp) {
  for (const auto& r : rs)
    if (r.hm() < hm || r.hp() < hp) throw PreconditionError("approximation precision below separating ideal");
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i + 1; j < rs.size(); ++j)
      if ((rs[i] - rs[j]).reduced(hm, hp).is_zero()) return false;
  return true;
}

}  // namespace tropskel
