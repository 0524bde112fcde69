#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tropskel/curve.hpp"
#include "tropskel/p1_models.hpp"

namespace tropskel {

// One extension of the prime of a disk chart, given by the orbit of a root.
struct PrimeExtension {
  int degree = 1;          // local degree e * f
  int ramification = 1;    // e, from the exponent denominators
  int residue_degree = 1;  // f
  std::string approximation;
  std::vector<std::string> residue_tower;  // "name: minpoly" from the bottom up
};

// Extensions of the prime of the disk chart at `vertex` to the function field
// of f (one per irreducible factor of f over the completion).  The height is
// doubled until the orbits separate, at most max_doublings times.
std::vector<PrimeExtension> kummer_dedekind(const Curve& f, const TreeVertex& vertex, const FieldPtr& constants,
                                            const Rational& height = Rational(4), int max_doublings = 6);

struct CycleType {
  std::vector<int> cycles;  // decreasing
  std::string certificate;
  std::string str() const;  // e.g. "(3)(1)"
};

// Frobenius at p: degrees of the factors of f mod p.  f monic with integer
// coefficients; throws PreconditionError if p is not prime or divides disc(f).
CycleType dedekind_cycle_type(const Poly& f, std::uint64_t p);

// Inertia at the place t of Q(t) for f in y and t only: a root whose Puiseux
// exponents have denominator e lies in an e-cycle of the tame generator.
CycleType dedekind_cycle_type_at_t(const Curve& f, int max_doublings = 6);

}  // namespace tropskel
