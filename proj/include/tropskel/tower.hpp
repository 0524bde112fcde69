#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropskel/field.hpp"
#include "tropskel/series.hpp"

namespace tropskel {

// Thrown when a computation needs a constant that is not in the current
// constant field; the driver adjoins it and restarts.
class NeedConstant : public std::runtime_error {
 public:
  explicit NeedConstant(Poly minpoly) : std::runtime_error("constant field extension required"), poly(std::move(minpoly)) {}
  Poly poly;  // monic irreducible over the constant field in use
};

// The growing constant field C (a number-field tower over Q).
class ConstantField {
 public:
  ConstantField() : field_(Field::rationals()) {}
  explicit ConstantField(FieldPtr f) : field_(std::move(f)) {}
  const FieldPtr& field() const { return field_; }
  // Adjoin a root of q (irreducible over field()). Quadratics with rational
  // coefficients are normalized to sqrt of a squarefree integer ("i" for -1).
  void adjoin(const Poly& q);
  int degree() const;
  std::vector<std::string> describe() const;  // "name: minpoly" per level

 private:
  FieldPtr field_;
  int counter_ = 0;
};

// Dimension of F over subfield B and coordinates in the monomial basis.
int relative_degree(const FieldPtr& F, const FieldPtr& B);
std::vector<Elem> coords(const Elem& e, const FieldPtr& B);

// Solve sum_j x_j cols[j] = target over the field of the entries.
std::optional<std::vector<Elem>> solve_columns(const std::vector<std::vector<Elem>>& cols,
                                               const std::vector<Elem>& target);

// One more level; linear polynomials return T itself.
FieldPtr extend_tower(const FieldPtr& T, const Poly& g, const std::string& name);
int tower_degree(const FieldPtr& T, const FieldPtr& base);
// Monic minimal polynomial of e over the subfield B.
Poly minpoly(const Elem& e, const FieldPtr& B);

// theta generating T over B with minimal polynomial M; express() writes an
// element of T as a polynomial in theta over B.
class PrimitiveElement {
 public:
  PrimitiveElement(const FieldPtr& T, const FieldPtr& B);
  const Elem& theta() const { return theta_; }
  const Poly& minpoly() const { return M_; }
  Poly express(const Elem& e) const;

 private:
  FieldPtr T_, B_;
  Elem theta_;
  Poly M_;
  std::vector<std::vector<Elem>> powers_;  // coordinates of theta^k
};

// Partition of approximations (same coefficient tower T over base B) into
// conjugacy classes over B.
std::vector<std::vector<int>> conjugate_classes(const std::vector<LaurentSeries>& approxes, const FieldPtr& B);

}  // namespace tropskel
