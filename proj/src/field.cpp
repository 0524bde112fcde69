#include "tropskel/field.hpp"

#include "tropskel/errors.hpp"
#include "tropskel/format.hpp"

namespace tropskel {


// ---------------------------------------------------------------- Field

Field::Field(Kind k, FieldPtr base, Poly modulus, std::string name)
    : kind_(k), base_(std::move(base)), modulus_(std::move(modulus)), name_(std::move(name)) {
  depth_ = base_ ? base_->depth_ + 1 : 0;
}

FieldPtr Field::rationals() {
  static const FieldPtr q = std::make_shared<Field>(Kind::Rationals, nullptr, Poly(), "Q");
  return q;
}

FieldPtr Field::algebraic(const FieldPtr& base, const Poly& modulus, std::string name) {
  if (modulus.field() != base) throw MathError("modulus not over base field");
  if (modulus.degree() < 1 || !modulus.lc().is_one()) throw MathError("modulus must be monic of degree >= 1");
  return std::make_shared<Field>(Kind::Algebraic, base, modulus, std::move(name));
}

FieldPtr Field::function(const FieldPtr& base, std::string var) {
  return std::make_shared<Field>(Kind::Function, base, Poly(), std::move(var));
}

bool Field::is_constant() const {
  for (const Field* f = this; f; f = f->base_.get())
    if (f->kind_ == Kind::Function) return false;
  return true;
}

FieldPtr Field::constants() const {
  FieldPtr cur = shared_from_this();
  while (!cur->is_constant()) cur = cur->base_;
  return cur;
}

bool Field::has_subfield(const Field* sub) const {
  for (const Field* f = this; f; f = f->base_.get())
    if (f == sub) return true;
  return false;
}

Elem Field::zero() const {
  Elem e;
  e.f_ = shared_from_this();
  if (kind_ == Kind::Algebraic) e.num_ = Poly(base_);
  if (kind_ == Kind::Function) {
    e.num_ = Poly(base_);
    e.den_ = Poly::constant(base_->one());
  }
  return e;
}

Elem Field::one() const { return from_int(1); }

Elem Field::from_int(long n) const { return from_rational(Rational(n)); }

Elem Field::from_rational(const Rational& q) const {
  Elem e = zero();
  switch (kind_) {
    case Kind::Rationals:
      e.q_ = q;
      break;
    case Kind::Algebraic:
      e.num_ = Poly::constant(base_->from_rational(q));
      break;
    case Kind::Function:
      e.num_ = Poly::constant(base_->from_rational(q));
      break;
  }
  return e;
}

Elem Field::gen() const {
  if (kind_ == Kind::Rationals) throw MathError("Q has no generator");
  Elem e = zero();
  Poly y = Poly::var(base_);
  if (kind_ == Kind::Algebraic && modulus_.degree() == 1) y = Poly::constant(-modulus_.coeff(0));
  e.num_ = y;
  return e;
}

Elem Field::embed(const Elem& e) const {
  if (e.f_.get() == this) return e;
  if (!base_) throw MathError("cannot embed element of unrelated field");
  Elem b = base_->embed(e);
  Elem out = zero();
  out.num_ = Poly::constant(b);
  return out;
}

Elem Field::make_algebraic(const Poly& rep) const {
  Elem e = zero();
  e.num_ = rep.field().get() == base_.get() ? rep : rep.embed(base_);
  e.num_ = e.num_ % modulus_;
  return e;
}

Elem Field::make_fraction(const Poly& num, const Poly& den) const {
  if (den.is_zero()) throw MathError("zero denominator");
  Elem e = zero();
  if (num.is_zero()) return e;
  Poly n = num.field().get() == base_.get() ? num : num.embed(base_);
  Poly d = den.field().get() == base_.get() ? den : den.embed(base_);
  if (d.degree() > 0) {
    Poly g = gcd(n, d);
    if (g.degree() > 0) {
      n = n / g;
      d = d / g;
    }
  }
  Elem l = d.lc();
  if (!l.is_one()) {
    Elem li = l.inv();
    n = n.scaled(li);
    d = d.scaled(li);
  }
  e.num_ = std::move(n);
  e.den_ = std::move(d);
  return e;
}

Elem Field::add(const Elem& a, const Elem& b) const {
  Elem e = zero();
  switch (kind_) {
    case Kind::Rationals:
      e.q_ = a.q_ + b.q_;
      return e;
    case Kind::Algebraic:
      e.num_ = a.num_ + b.num_;
      return e;
    case Kind::Function:
      if (a.den_ == b.den_) {
        if (a.den_.degree() == 0) {
          e.num_ = a.num_ + b.num_;
          return e;
        }
        return make_fraction(a.num_ + b.num_, a.den_);
      }
      return make_fraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  return e;
}

Elem Field::neg(const Elem& a) const {
  Elem e = a;
  if (kind_ == Kind::Rationals)
    e.q_ = -a.q_;
  else
    e.num_ = -a.num_;
  return e;
}

Elem Field::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

Elem Field::mul(const Elem& a, const Elem& b) const {
  Elem e = zero();
  switch (kind_) {
    case Kind::Rationals:
      e.q_ = a.q_ * b.q_;
      return e;
    case Kind::Algebraic: {
      if (a.num_.is_zero() || b.num_.is_zero()) return e;
      Poly p = a.num_ * b.num_;
      if (p.degree() >= modulus_.degree()) p = p % modulus_;
      e.num_ = std::move(p);
      return e;
    }
    case Kind::Function:
      if (a.num_.is_zero() || b.num_.is_zero()) return e;
      if (a.den_.degree() == 0 && b.den_.degree() == 0) {
        e.num_ = a.num_ * b.num_;
        return e;
      }
      {
        // cross-cancel before multiplying
        Poly g1 = gcd(a.num_, b.den_);
        Poly g2 = gcd(b.num_, a.den_);
        Poly n = (a.num_ / g1) * (b.num_ / g2);
        Poly d = (a.den_ / g2) * (b.den_ / g1);
        Elem l = d.lc();
        if (!l.is_one()) {
          Elem li = l.inv();
          n = n.scaled(li);
          d = d.scaled(li);
        }
        e.num_ = std::move(n);
        e.den_ = std::move(d);
        return e;
      }
  }
  return e;
}

Elem Field::inv(const Elem& a) const {
  if (is_zero(a)) throw MathError("division by zero");
  Elem e = zero();
  switch (kind_) {
    case Kind::Rationals:
      e.q_ = 1 / a.q_;
      return e;
    case Kind::Algebraic: {
      ExtGcd eg = ext_gcd(a.num_, modulus_);
      if (eg.g.degree() != 0) throw MathError("non-invertible element: modulus not irreducible");
      e.num_ = eg.s.scaled(eg.g.lc().inv()) % modulus_;
      return e;
    }
    case Kind::Function: {
      Poly n = a.den_, d = a.num_;
      Elem l = d.lc();
      Elem li = l.inv();
      e.num_ = n.scaled(li);
      e.den_ = d.scaled(li);
      return e;
    }
  }
  return e;
}

bool Field::is_zero(const Elem& a) const {
  if (kind_ == Kind::Rationals) return a.q_ == 0;
  return a.num_.is_zero();
}

bool Field::eq(const Elem& a, const Elem& b) const {
  if (kind_ == Kind::Rationals) return a.q_ == b.q_;
  if (kind_ == Kind::Algebraic) return a.num_ == b.num_;
  return a.num_ == b.num_ && a.den_ == b.den_;
}

std::string Field::str(const Elem& a) const {
  switch (kind_) {
    case Kind::Rationals:
      return to_string(a.q_);
    case Kind::Algebraic:
      return a.num_.str(name_);
    case Kind::Function: {
      std::string n = a.num_.str(name_);
      if (a.den_.degree() == 0) return n;
      return wrap(n) + "/" + wrap(a.den_.str(name_));
    }
  }
  return "";
}

FieldPtr join(const FieldPtr& a, const FieldPtr& b) {
  if (a == b) return a;
  if (a->has_subfield(b.get())) return a;
  if (b->has_subfield(a.get())) return b;
  throw MathError("fields are not nested");
}

// ---------------------------------------------------------------- Elem

namespace {
void unify(Elem& a, Elem& b) {
  if (a.field() == b.field()) return;
  FieldPtr j = join(a.field(), b.field());
  a = j->embed(a);
  b = j->embed(b);
}
}  // namespace

bool Elem::is_zero() const { return f_->is_zero(*this); }
bool Elem::is_one() const { return *this == f_->one(); }

bool Elem::is_rational() const {
  if (f_->kind() == Field::Kind::Rationals) return true;
  if (f_->kind() == Field::Kind::Function && den_.degree() != 0) return false;
  if (num_.degree() > 0) return false;
  if (num_.is_zero()) return true;
  return num_.coeff(0).is_rational();
}

Rational Elem::to_rational() const {
  if (f_->kind() == Field::Kind::Rationals) return q_;
  if (!is_rational()) throw MathError("element is not rational: " + str());
  if (num_.is_zero()) return Rational(0);
  return num_.coeff(0).to_rational();
}

Elem Elem::operator-() const { return f_->neg(*this); }

Elem& Elem::operator+=(const Elem& o) {
  if (f_ == o.f_) return *this = f_->add(*this, o);
  Elem b = o;
  unify(*this, b);
  return *this = f_->add(*this, b);
}

Elem& Elem::operator-=(const Elem& o) {
  if (f_ == o.f_) return *this = f_->sub(*this, o);
  Elem b = o;
  unify(*this, b);
  return *this = f_->sub(*this, b);
}

Elem& Elem::operator*=(const Elem& o) {
  if (f_ == o.f_) return *this = f_->mul(*this, o);
  Elem b = o;
  unify(*this, b);
  return *this = f_->mul(*this, b);
}

Elem& Elem::operator/=(const Elem& o) {
  Elem b = o;
  unify(*this, b);
  return *this = f_->mul(*this, f_->inv(b));
}

Elem Elem::inv() const { return f_->inv(*this); }

Elem Elem::pow(long e) const {
  if (e < 0) return inv().pow(-e);
  Elem r = f_->one(), b = *this;
  while (e > 0) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

bool Elem::operator==(const Elem& o) const {
  if (f_ == o.f_) return f_->eq(*this, o);
  Elem a = *this, b = o;
  unify(a, b);
  return a.f_->eq(a, b);
}

std::string Elem::str() const { return f_->str(*this); }

Elem operator+(Elem a, const Elem& b) { return a += b; }
Elem operator-(Elem a, const Elem& b) { return a -= b; }
Elem operator*(Elem a, const Elem& b) { return a *= b; }
Elem operator/(Elem a, const Elem& b) { return a /= b; }

// ---------------------------------------------------------------- Poly

Poly::Poly(FieldPtr f, std::vector<Elem> c) : f_(std::move(f)), c_(std::move(c)) {
  for (auto& x : c_)
    if (x.field() != f_) x = f_->embed(x);
  trim();
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::constant(const Elem& c) { return Poly(c.field(), {c}); }

Poly Poly::monomial(const Elem& c, int k) {
  std::vector<Elem> v(k + 1, c.field()->zero());
  v[k] = c;
  return Poly(c.field(), std::move(v));
}

Poly Poly::var(const FieldPtr& f) { return monomial(f->one(), 1); }

Poly Poly::from_ints(const FieldPtr& f, const std::vector<long>& c) {
  std::vector<Elem> v;
  v.reserve(c.size());
  for (long x : c) v.push_back(f->from_int(x));
  return Poly(f, std::move(v));
}

Elem Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return f_->zero();
  return c_[i];
}

const Elem& Poly::lc() const {
  if (c_.empty()) throw MathError("leading coefficient of zero polynomial");
  return c_.back();
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.empty()) return *this;
  if (!f_) f_ = o.f_;
  if (o.f_ != f_) return *this += o.embed(f_);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), f_->zero());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = f_->add(c_[i], o.c_[i]);
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Poly& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    if (!f_) f_ = o.f_;
    return *this;
  }
  if (o.f_ != f_) return *this *= o.embed(f_);
  std::vector<Elem> r(c_.size() + o.c_.size() - 1, f_->zero());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j].is_zero()) continue;
      r[i + j] = f_->add(r[i + j], f_->mul(c_[i], o.c_[j]));
    }
  }
  c_ = std::move(r);
  trim();
  return *this;
}

Poly operator+(Poly a, const Poly& b) { return a += b; }
Poly operator-(Poly a, const Poly& b) { return a -= b; }
Poly operator*(const Poly& a, const Poly& b) {
  Poly r = a;
  return r *= b;
}

Poly Poly::scaled(const Elem& c) const {
  Elem cc = c.field() == f_ ? c : f_->embed(c);
  Poly r = *this;
  for (auto& x : r.c_) x = f_->mul(x, cc);
  r.trim();
  return r;
}

Poly Poly::shifted(int k) const {
  if (c_.empty()) return *this;
  Poly r = *this;
  r.c_.insert(r.c_.begin(), k, f_->zero());
  return r;
}

Poly Poly::monic() const {
  if (c_.empty() || lc().is_one()) return *this;
  return scaled(lc().inv());
}

Poly Poly::derivative() const {
  std::vector<Elem> r;
  for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(f_->mul(c_[i], f_->from_int(static_cast<long>(i))));
  return Poly(f_, std::move(r));
}

Elem Poly::eval(const Elem& x) const {
  FieldPtr F = join(f_, x.field());
  Elem r = F->zero();
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

Poly Poly::compose(const Poly& g) const {
  FieldPtr F = join(f_, g.field());
  Poly r(F);
  for (std::size_t i = c_.size(); i-- > 0;) r = r * g + Poly::constant(F->embed(c_[i]));
  return r;
}

Poly Poly::taylor_shift(const Elem& c) const {
  FieldPtr F = join(f_, c.field());
  std::vector<Elem> a;
  for (const auto& x : c_) a.push_back(F->embed(x));
  Elem cc = F->embed(c);
  int n = static_cast<int>(a.size());
  // Horner-style synthetic division repeated n times
  for (int i = 0; i < n; ++i)
    for (int j = n - 2; j >= i; --j) a[j] = a[j] + cc * a[j + 1];
  return Poly(F, std::move(a));
}

Poly Poly::embed(const FieldPtr& target) const {
  if (target == f_) return *this;
  std::vector<Elem> r;
  r.reserve(c_.size());
  for (const auto& x : c_) r.push_back(target->embed(x));
  return Poly(target, std::move(r));
}

std::string Poly::str(const std::string& var) const {
  std::vector<std::string> terms;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const Elem& c = c_[i];
    if (c.is_zero()) continue;
    std::string mon = i == 0 ? "" : power(var, std::to_string(i));
    terms.push_back(times_monomial(c.str(), mon));
  }
  return join_terms(terms);
}

bool Poly::operator==(const Poly& o) const {
  if (c_.size() != o.c_.size()) return false;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw MathError("polynomial division by zero");
  FieldPtr F = a.field() ? join(a.field(), b.field()) : b.field();
  Poly r = a.embed(F);
  Poly bb = b.embed(F);
  int db = bb.degree();
  if (r.degree() < db) return {Poly(F), r};
  Elem li = bb.lc().inv();
  std::vector<Elem> q(r.degree() - db + 1, F->zero());
  std::vector<Elem> rc = r.coeffs();
  for (int k = static_cast<int>(rc.size()) - 1; k >= db; --k) {
    if (rc[k].is_zero()) continue;
    Elem c = F->mul(rc[k], li);
    q[k - db] = c;
    for (int j = 0; j <= db; ++j) rc[k - db + j] = F->sub(rc[k - db + j], F->mul(c, bb.coeffs()[j]));
  }
  rc.resize(db);
  return {Poly(F, std::move(q)), Poly(F, std::move(rc))};
}

Poly operator/(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw MathError("inexact polynomial division");
  return q;
}

Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

Poly pseudo_rem(const Poly& a, const Poly& b) {
  FieldPtr F = join(a.field(), b.field());
  int d = a.degree() - b.degree();
  if (d < 0) return a.embed(F);
  // lc(b)^(d+1) a mod b without field inversion
  std::vector<Elem> rc = a.embed(F).coeffs();
  const auto& bc = b.coeffs();
  Elem l = F->embed(b.lc());
  int db = b.degree();
  for (int k = static_cast<int>(rc.size()) - 1; k >= db; --k) {
    Elem c = rc[k];
    for (auto& x : rc) x = F->mul(x, l);
    for (int j = 0; j <= db; ++j) rc[k - db + j] = F->sub(rc[k - db + j], F->mul(c, F->embed(bc[j])));
  }
  rc.resize(db);
  return Poly(F, std::move(rc));
}

namespace {

// Subresultant PRS; returns the chain's last nonzero member and the resultant.
struct PrsResult {
  Poly last;
  Elem res;
};

PrsResult subresultant_prs(Poly A, Poly B) {
  FieldPtr F = join(A.field(), B.field());
  A = A.embed(F);
  B = B.embed(F);
  Elem s = F->one();
  if (A.degree() < B.degree()) {
    std::swap(A, B);
    if ((A.degree() % 2) && (B.degree() % 2)) s = -s;
  }
  Elem g = F->one(), h = F->one();
  while (true) {
    if (B.is_zero()) return {A, F->zero()};
    if (B.degree() == 0) {
      Elem res = A.degree() == 0 ? F->one() : s * h.pow(1 - A.degree()) * B.lc().pow(A.degree());
      return {B, res};
    }
    int delta = A.degree() - B.degree();
    if ((A.degree() % 2) && (B.degree() % 2)) s = -s;
    Poly R = pseudo_rem(A, B);
    A = B;
    if (R.is_zero()) return {A, F->zero()};
    B = R.scaled((g * h.pow(delta)).inv());
    g = A.lc();
    h = delta == 0 ? h : g.pow(delta) / h.pow(delta - 1);
  }
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.degree() == 0 || b.degree() == 0) return Poly::constant(join(a.field(), b.field())->one());
  PrsResult r = subresultant_prs(a, b);
  if (r.last.degree() == 0) return Poly::constant(r.last.field()->one());
  return r.last.monic();
}

ExtGcd ext_gcd(const Poly& a, const Poly& b) {
  FieldPtr F = join(a.field(), b.field());
  Poly r0 = a.embed(F), r1 = b.embed(F);
  Poly s0 = Poly::constant(F->one()), s1(F);
  Poly t0(F), t1 = Poly::constant(F->one());
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  Elem li = r0.lc().inv();
  return {r0.scaled(li), s0.scaled(li), t0.scaled(li)};
}

Elem resultant(const Poly& a, const Poly& b) {
  FieldPtr F = join(a.field(), b.field());
  if (a.is_zero() || b.is_zero()) return F->zero();
  if (a.degree() == 0) return F->embed(a.lc()).pow(b.degree());
  if (b.degree() == 0) return F->embed(b.lc()).pow(a.degree());
  PrsResult r = subresultant_prs(a, b);
  // subresultant_prs may have swapped; sign handled inside
  return r.res;
}

Elem discriminant(const Poly& a) {
  int n = a.degree();
  if (n < 1) throw MathError("discriminant of constant");
  Elem r = resultant(a, a.derivative()) / a.lc();
  if ((n * (n - 1) / 2) % 2) r = -r;
  return r;
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p) {
  std::vector<std::pair<Poly, int>> out;
  if (p.degree() < 1) return out;
  Poly f = p.monic();
  Poly fp = f.derivative();
  Poly a = gcd(f, fp);
  Poly b = f / a;
  Poly c = fp / a;
  Poly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Poly g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = b / g;
    c = d / g;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

Poly squarefree_part(const Poly& p) {
  if (p.degree() < 1) return p;
  return p.monic() / gcd(p, p.derivative());
}

}  // namespace tropskel
