#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tropskel/rational.hpp"

namespace tropskel {

class Field;
class Elem;
using FieldPtr = std::shared_ptr<const Field>;

// Dense univariate polynomial over a Field; coefficient i multiplies y^i.
// Invariant: no trailing zeros, so the zero polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(FieldPtr f) : f_(std::move(f)) {}
  Poly(FieldPtr f, std::vector<Elem> c);

  static Poly constant(const Elem& c);
  static Poly monomial(const Elem& c, int k);
  static Poly var(const FieldPtr& f);
  static Poly from_ints(const FieldPtr& f, const std::vector<long>& c);

  const FieldPtr& field() const { return f_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Elem coeff(int i) const;
  const Elem& lc() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly scaled(const Elem& c) const;
  Poly shifted(int k) const;  // times y^k
  Poly monic() const;
  Poly derivative() const;
  Elem eval(const Elem& x) const;
  Poly compose(const Poly& g) const;
  Poly taylor_shift(const Elem& c) const;  // p(y + c)
  Poly embed(const FieldPtr& target) const;

  std::string str(const std::string& var = "y") const;
  bool operator==(const Poly& o) const;

 private:
  void trim();
  FieldPtr f_;
  std::vector<Elem> c_;
};

Poly operator+(Poly a, const Poly& b);
Poly operator-(Poly a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);  // exact quotient, throws otherwise
Poly operator%(const Poly& a, const Poly& b);
Poly pseudo_rem(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);  // monic; subresultant PRS
// s*a + t*b = g with g monic gcd.
struct ExtGcd {
  Poly g, s, t;
};
ExtGcd ext_gcd(const Poly& a, const Poly& b);
Elem resultant(const Poly& a, const Poly& b);
Elem discriminant(const Poly& a);
// Yun; returns (factor, multiplicity), factors monic and pairwise coprime.
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p);
Poly squarefree_part(const Poly& p);

// Element of a field in the runtime tower.  Value type; equality is exact.
class Elem {
 public:
  Elem() = default;
  const FieldPtr& field() const { return f_; }
  bool valid() const { return static_cast<bool>(f_); }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;  // lies in the prime field after full reduction
  Rational to_rational() const;

  Elem operator-() const;
  Elem& operator+=(const Elem& o);
  Elem& operator-=(const Elem& o);
  Elem& operator*=(const Elem& o);
  Elem& operator/=(const Elem& o);
  Elem inv() const;
  Elem pow(long e) const;

  bool operator==(const Elem& o) const;
  bool operator!=(const Elem& o) const { return !(*this == o); }
  std::string str() const;

  // Representation access for Algebraic / Function elements.
  const Rational& q() const { return q_; }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

 private:
  friend class Field;
  FieldPtr f_;
  Rational q_;
  Poly num_;  // Algebraic: reduced representative; Function: numerator
  Poly den_;  // Function: monic denominator
};

Elem operator+(Elem a, const Elem& b);
Elem operator-(Elem a, const Elem& b);
Elem operator*(Elem a, const Elem& b);
Elem operator/(Elem a, const Elem& b);

class Field : public std::enable_shared_from_this<Field> {
 public:
  enum class Kind { Rationals, Algebraic, Function };

  static FieldPtr rationals();
  // modulus must be monic irreducible over base
  static FieldPtr algebraic(const FieldPtr& base, const Poly& modulus, std::string name);
  static FieldPtr function(const FieldPtr& base, std::string var);

  Kind kind() const { return kind_; }
  const FieldPtr& base() const { return base_; }
  const std::string& name() const { return name_; }
  const Poly& modulus() const { return modulus_; }
  int degree() const { return modulus_.degree(); }  // Algebraic only
  bool is_constant() const;  // no Function level anywhere below
  FieldPtr constants() const;  // largest constant subfield in the chain
  bool has_subfield(const Field* sub) const;
  int depth() const { return depth_; }

  Elem zero() const;
  Elem one() const;
  Elem from_int(long n) const;
  Elem from_rational(const Rational& q) const;
  Elem gen() const;  // generator (Algebraic) or variable (Function)
  Elem embed(const Elem& e) const;
  Elem make_algebraic(const Poly& rep) const;
  Elem make_fraction(const Poly& num, const Poly& den) const;

  // internals used by Elem
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem inv(const Elem& a) const;
  Elem neg(const Elem& a) const;
  bool eq(const Elem& a, const Elem& b) const;
  bool is_zero(const Elem& a) const;
  std::string str(const Elem& a) const;

  Field(Kind k, FieldPtr base, Poly modulus, std::string name);

 private:
  Kind kind_;
  FieldPtr base_;
  Poly modulus_;
  std::string name_;
  int depth_ = 0;
};

// Common field containing both (one must be a subfield of the other).
FieldPtr join(const FieldPtr& a, const FieldPtr& b);

}  // namespace tropskel
