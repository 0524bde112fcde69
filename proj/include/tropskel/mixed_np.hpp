#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tropskel/curve.hpp"
#include "tropskel/p1_models.hpp"

namespace tropskel {

// Regularized annulus S_{a,b}(c): u^n = (x - c)/t^a, v^n = t^b/(x - c),
// uv = t with n = b - a.
struct Regularization {
  Chart annulus;
  long n = 1;
  long a = 0, b = 0;
};
Regularization regularize(const Chart& annulus);

// Which end of the edge is the vertex: Outer is radius a (prime (v)),
// Inner is radius b (prime (u)).
enum class Side { Outer, Inner };

// Residue coordinate s at the vertex end: s = u^n at the outer end,
// s = v^n at the inner end.  Coefficients of f(x(s), y) as series in t.
SeriesPoly side_chart(const Curve& f, const Regularization& R, Side side, const FieldPtr& Fs);

// f(y) -> t^(m(d-1)) f(y / t^m) when the leading coefficient in y is t^m
// times a unit of Q[t] free of x; the roots get multiplied by t^m.
struct IntegralModel {
  Curve f;
  long m = 0;
};
IntegralModel integral_model(const Curve& f);

// In residue characteristic zero the constant-term section lifts a residue
// factor verbatim; integral is false if a coefficient has a pole at s = 0.
struct EtaleLift {
  Poly g;
  bool integral = true;
};
EtaleLift etale_lift_char0(const Poly& gbar);

struct AdicApproximation {
  LaurentSeries r_p;       // in t, coefficients in the tower over C(s)
  DoublePointSeries r_m;   // in u, v of the regularized chart
  int vertex_orbit = 0;    // index of the D_p representative r_p comes from
  Rational h_p, h_m;       // heights in the uniformizer and the residue parameter
};

struct MixedHeights {
  Rational h_m{4};
  Rational h_p{2};
};

// Mixed expansion at one end of an edge.  reps are the D_p representatives at the
// vertex, written over Fs = C(s) (see transfer_representatives).  Every
// embedding of a representative's tower into C((s^(1/e))) gives one r_m.
// Throws NeedConstant if the expansions need a new constant.
std::vector<AdicApproximation> expand_at_edge(const std::vector<RootApproximation>& reps, const Regularization& R,
                                              Side side, const MixedHeights& h);

// D_p representatives from a disk chart B_k(c_V) with coordinate w moved to
// the edge coordinate s: w = s + delta at the outer end, w = 1/s at the inner
// end.  Fails if the centres differ by more than a monomial at the radius.
std::vector<RootApproximation> transfer_representatives(const std::vector<RootApproximation>& reps,
                                                        const FieldPtr& Fw, const TreeVertex& vertex,
                                                        const Regularization& R, Side side, const FieldPtr& Fs);

// Representatives at a disk vertex of the tree (geometric factorization over
// the constants of Fw); convenience wrapper used by the CLI and the skeleton.
std::vector<RootApproximation> vertex_representatives(const Curve& f, const TreeVertex& vertex, const FieldPtr& Fw,
                                                      const Rational& height);

// Mixed expansion for one end, from scratch: vertex representatives, transfer and
// expansion.  `vertex` must be the tree vertex at that end of the edge.
std::vector<AdicApproximation> mixed_np(const Curve& f, const Chart& edge, const TreeVertex& vertex, Side side,
                                        const FieldPtr& constants, const MixedHeights& h);

// Generator u -> zeta u, v -> zeta^-1 v of the Kummer group of the
// regularization, restricted to the order it actually has on the roots.
struct KummerAction {
  long n = 1;      // regularization degree
  long order = 1;  // order of the induced permutation group
  Elem zeta;       // primitive order-th root of unity
};

// A primitive N-th root of unity in C; NeedConstant with a factor of the
// cyclotomic polynomial if C has none.
Elem primitive_root_of_unity(long N, const FieldPtr& C);

struct DmOrbits {
  KummerAction action;
  std::vector<std::vector<int>> orbits;
};

// Orbits of sigma on the r_m modulo their common box.  Throws NeedConstant
// when the constants lack a primitive root of unity of the needed order and
// BoundExceeded if the box does not separate the roots.
DmOrbits dm_orbits(const std::vector<DoublePointSeries>& rs, long n, const FieldPtr& constants);

// Length of an edge above e for an orbit of the given size.
Rational edge_length(const Rational& base_length, int orbit_size);

// Pairs (i, j) with lhs[i] == rhs[j] modulo the common box; throws
// BoundExceeded unless this is a bijection.
std::vector<int> match_roots(const std::vector<DoublePointSeries>& lhs, const std::vector<DoublePointSeries>& rhs);

}  // namespace tropskel
