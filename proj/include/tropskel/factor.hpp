#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tropskel/field.hpp"

namespace tropskel {

// ---- prime fields (p < 2^31) --------------------------------------------
using FpPoly = std::vector<std::uint64_t>;  // coefficient i multiplies x^i

namespace fp {
void trim(FpPoly& a);
FpPoly mul(const FpPoly& a, const FpPoly& b, std::uint64_t p);
FpPoly sub(const FpPoly& a, const FpPoly& b, std::uint64_t p);
std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b, std::uint64_t p);
FpPoly gcd(FpPoly a, FpPoly b, std::uint64_t p);
FpPoly powmod(FpPoly base, Integer e, const FpPoly& m, std::uint64_t p);
FpPoly derivative(const FpPoly& a, std::uint64_t p);
std::uint64_t inv(std::uint64_t a, std::uint64_t p);
bool is_prime(std::uint64_t n);
}  // namespace fp

// Monic irreducible factors with multiplicity, sorted by (degree, coefficients).
std::vector<std::pair<FpPoly, int>> factor_mod_p(const FpPoly& f, std::uint64_t p);

// ---- characteristic zero ----------------------------------------------------
struct Factor {
  Poly poly;  // monic irreducible
  int mult;
};

// Degree cap for factor() inputs (BoundExceeded above it); internal norms are
// not capped.  Both entry points check that the factors multiply back to f.
void set_max_factor_degree(int d);
int get_max_factor_degree();

// Full factorization over f.field().  Supported fields: Q, number-field towers,
// C(u) with C a number-field tower, and algebraic towers over C(u).
std::vector<Factor> factor(const Poly& f);

// Factorization of a squarefree polynomial (no multiplicity bookkeeping).
std::vector<Poly> factor_squarefree(const Poly& f);

// Norm from an Algebraic field F down to F->base(): prod of conjugates of h.
Poly norm_down(const Poly& h);

// Norm all the way down to the first field satisfying stop (inclusive).
Poly norm_to(const Poly& h, const FieldPtr& target);

// Geometric irreducibility of g (irreducible over T, a tower over C(u)).
// If g splits over Cbar(u)-tower, returns the monic minimal polynomial over C of
// a constant that has to be adjoined.
struct GeometricCheck {
  bool irreducible = true;
  std::optional<Poly> constant_needed;
};
GeometricCheck geometric_check(const Poly& g);

// Canonical order used for all factor lists.
bool poly_less(const Poly& a, const Poly& b);

}  // namespace tropskel
