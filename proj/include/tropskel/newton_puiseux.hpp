#pragma once

#include <string>
#include <vector>

#include "tropskel/field.hpp"
#include "tropskel/series.hpp"

namespace tropskel {

// Polynomial in y whose coefficients are series in t; entry i multiplies y^i.
using SeriesPoly = std::vector<LaurentSeries>;

SeriesPoly translate(const SeriesPoly& f, const LaurentSeries& s);  // f(y + s)
SeriesPoly scale_root(const SeriesPoly& f, const Rational& lambda);  // f(t^lambda y)
SeriesPoly embed(const SeriesPoly& f, const FieldPtr& F);
LaurentSeries evaluate(const SeriesPoly& f, const LaurentSeries& s);

// Segment of the lower convex hull of {(i, v(a_i))}.  slope is the valuation
// of the corresponding roots; left < right are the i-coordinates.
struct NPSegment {
  Rational slope;
  int length = 0;
  int left = 0, right = 0;
  Rational vleft, vright;
};

struct NewtonPolygon {
  std::vector<NPSegment> segments;  // increasing slope
  int zero_roots = 0;               // exact zero trailing coefficients
  // false if a coefficient known only up to its precision could lie on or
  // below the hull
  bool certain = true;
};

NewtonPolygon newton_polygon(const SeriesPoly& f);

// Residue polynomial of a segment: coefficients of t^m on the segment, shifted
// so that the constant term is nonzero.
Poly residue_polynomial(const SeriesPoly& f, const NPSegment& seg);

enum class FactorPolicy {
  Geometric,  // residue factors must stay irreducible over the algebraic closure of the constants
  Plain,      // irreducible factors over the current tower are accepted as they are
};

struct NPOptions {
  Rational height{1};  // roots are returned modulo t^height
  FactorPolicy policy = FactorPolicy::Geometric;
  std::vector<std::string> names{"w", "z"};  // tower level names along a branch, then g3, g4, ...
  // stop a branch as soon as it carries a single root; its precision is
  // then the next admissible exponent
  bool isolate = false;
};

struct RootApproximation {
  LaurentSeries series;
  FieldPtr tower;
  bool exact = false;     // an exact factor y - series was split off
  bool liftable = false;  // residue root was simple at some stage
  int count = 1;          // roots represented per embedding of the tower
  int degree = 1;         // tower degree over the base field
  std::vector<std::string> lineage;  // residue factors chosen along the branch
};

// Newton-Puiseux iteration over base[[t^(1/r)]].  Exact input coefficients are required.
// Throws NeedConstant when the geometric policy needs a new constant.
std::vector<RootApproximation> discrete_np(const SeriesPoly& f, const FieldPtr& base, const NPOptions& opt);

struct Orbit {
  std::vector<int> members;
  int size = 1;  // number of roots in the orbit
};
// One orbit per representative.  Throws BoundExceeded unless the
// approximations are separated (no two conjugate modulo their precision, no
// inexact approximation standing for several roots).
std::vector<Orbit> dvr_orbits(const std::vector<RootApproximation>& approxes, const FieldPtr& base);

}  // namespace tropskel
