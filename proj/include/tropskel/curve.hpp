#pragma once

#include <map>
#include <string>
#include <utility>

#include "tropskel/newton_puiseux.hpp"

namespace tropskel {

// f(x, y) = sum c_ij(t) x^j y^i with c_ij polynomials in t over Q.
class Curve {
 public:
  using Key = std::pair<int, int>;  // (deg_y, deg_x)

  Curve() = default;
  // Accepts +, -, *, ^, parentheses, rational literals and the variables t, x, y.
  static Curve parse(const std::string& text);

  const std::map<Key, LaurentSeries>& terms() const { return terms_; }
  int deg_y() const;
  int deg_x() const;
  std::string str() const;

  // x -> 1/x, multiplied by x^deg_x.
  Curve reversed_x() const;
  // Coefficients in y of f(center + u t^k, y) over Fu = C(u).
  SeriesPoly chart(const FieldPtr& Fu, const LaurentSeries& center, const Rational& k) const;
  // Coefficients in y of f(X, y) for a series X.
  SeriesPoly substitute(const LaurentSeries& X) const;
  // Coefficients in y of f as a polynomial in x over the field of the center.
  std::vector<std::vector<LaurentSeries>> by_y() const;

  void add(int i, int j, const LaurentSeries& c);

 private:
  std::map<Key, LaurentSeries> terms_;
};

}  // namespace tropskel
