#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tropskel/field.hpp"

namespace tropskel {

// Puiseux/Laurent series in one parameter with rational exponents.
// precision == nullopt means the series is exact (a Laurent polynomial).
class LaurentSeries {
 public:
  LaurentSeries() = default;
  explicit LaurentSeries(FieldPtr f, std::optional<Rational> prec = std::nullopt);
  static LaurentSeries monomial(const Elem& c, const Rational& e, std::optional<Rational> prec = std::nullopt);
  static LaurentSeries constant(const Elem& c) { return monomial(c, Rational(0)); }

  const FieldPtr& field() const { return f_; }
  const std::map<Rational, Elem>& terms() const { return terms_; }
  const std::optional<Rational>& precision() const { return prec_; }
  bool is_exact() const { return !prec_.has_value(); }
  bool is_zero() const { return terms_.empty(); }  // exact zero or zero to precision
  std::optional<Rational> valuation() const;
  Elem coeff(const Rational& e) const;
  Elem leading_coeff() const;
  Integer ramification() const;  // lcm of exponent denominators (1 if none)
  // lower bound for the valuation: valuation if known, else precision
  Rational valuation_bound() const;

  LaurentSeries truncated(const Rational& h) const;
  LaurentSeries shifted(const Rational& q) const;
  LaurentSeries scaled(const Elem& c) const;
  LaurentSeries embed(const FieldPtr& F) const;
  void add_term(const Rational& e, const Elem& c);

  LaurentSeries operator-() const;
  LaurentSeries& operator+=(const LaurentSeries& o);
  LaurentSeries& operator-=(const LaurentSeries& o);
  bool operator==(const LaurentSeries& o) const;

  std::string str(const std::string& var = "t") const;

 private:
  void cut();
  FieldPtr f_;
  std::map<Rational, Elem> terms_;
  std::optional<Rational> prec_;
};

LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b);
LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b);
LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries pow(const LaurentSeries& a, int k);
// 1/a known to absolute precision h (a must have a known leading term).
LaurentSeries inverse(const LaurentSeries& a, const Rational& h);
// Expansion of p(c + s) for a polynomial p over the coefficient field.
LaurentSeries taylor_expand(const Poly& p, const Elem& c);

std::string exponent_str(const Rational& e);

// Two-parameter expansion sum c_ij u^i v^j in k[[u,v]]/(uv - tau^n), kept
// modulo the box ideal (u^hm, v^hp).  Exponents are integers.
class DoublePointSeries {
 public:
  using Key = std::pair<long, long>;
  DoublePointSeries() = default;
  DoublePointSeries(FieldPtr f, long hm, long hp, Rational n = Rational(1));

  const FieldPtr& field() const { return f_; }
  const std::map<Key, Elem>& terms() const { return terms_; }
  long hm() const { return hm_; }
  long hp() const { return hp_; }
  const Rational& relation() const { return n_; }

  void add_term(long i, long j, const Elem& c);
  bool in_box(long i, long j) const { return i < hm_ && j < hp_; }
  DoublePointSeries reduced(long hm, long hp) const;
  DoublePointSeries embed(const FieldPtr& F) const;

  DoublePointSeries operator-() const;
  DoublePointSeries& operator+=(const DoublePointSeries& o);
  DoublePointSeries& operator-=(const DoublePointSeries& o);
  bool operator==(const DoublePointSeries& o) const;
  bool is_zero() const { return terms_.empty(); }

  std::string str(const std::string& u = "u", const std::string& v = "v") const;

 private:
  FieldPtr f_;
  std::map<Key, Elem> terms_;
  long hm_ = 0, hp_ = 0;
  Rational n_{1};
};

DoublePointSeries operator+(DoublePointSeries a, const DoublePointSeries& b);
DoublePointSeries operator-(DoublePointSeries a, const DoublePointSeries& b);
DoublePointSeries operator*(const DoublePointSeries& a, const DoublePointSeries& b);

// True iff all pairwise differences are nonzero modulo (u^hm, v^hp).
bool separate(const std::vector<DoublePointSeries>& rs, long hm, long hp);

}  // namespace tropskel
