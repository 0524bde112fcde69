#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tropskel/curve.hpp"
#include "tropskel/tower.hpp"

namespace tropskel {

// Disk B_a(c), negatively oriented disk, or annulus S_{a,b}(c).
// Disk: x = c + u t^a.  Disk minus: x = c + t^a / u.
// Annulus: u = (x - c)/t^a, v = t^b/(x - c), uv = t^(b-a).
struct Chart {
  enum class Kind { DiskPlus, DiskMinus, Annulus };
  Kind kind = Kind::DiskPlus;
  LaurentSeries center;
  Rational a, b;

  static Chart disk(LaurentSeries c, Rational k) { return {Kind::DiskPlus, std::move(c), std::move(k), Rational(0)}; }
  static Chart annulus(LaurentSeries c, Rational a, Rational b) {
    return {Kind::Annulus, std::move(c), std::move(a), std::move(b)};
  }
  std::string str() const;
  Rational length() const { return b - a; }
};

// Valuation of g(x) (a polynomial in x with series coefficients) at the
// Gauss point of B_k(c).
Rational chart_valuation(const SeriesPoly& g, const LaurentSeries& c, const Rational& k);

struct Tameness {
  bool tame;
  std::string reason;
};
// p = 0 means residue characteristic zero.
Tameness tameness_check(const Curve& f, long p = 0);

// Res_y(f, df/dy) as a polynomial in x with coefficients in Q[t].
SeriesPoly resultant_y(const Curve& f);
// True if the fibre over x = infinity of the plane curve f is ramified.
bool infinity_is_branch(const Curve& f);

struct TreeVertex {
  Rational radius;
  LaurentSeries center;  // truncated below radius
  std::string str() const;
};

struct TreeEdge {
  int inner;  // vertex with radius b
  int outer;  // vertex with radius a
  Chart annulus;
};

struct TreeLeaf {
  std::optional<LaurentSeries> point;  // nullopt is infinity
  int vertex;
  bool auxiliary = false;  // the marked point 0, not a branch point
};

struct SeparatingTree {
  FieldPtr constants;
  std::vector<std::string> constant_levels;
  std::vector<TreeVertex> vertices;  // sorted by (radius, center)
  std::vector<TreeEdge> edges;
  std::vector<TreeLeaf> leaves;
  std::vector<RootApproximation> branch_points;
  bool degenerate = false;  // fewer than three marked points
  std::vector<std::string> warnings;
};

struct TreeOptions {
  Rational height{200};  // cap for the expansions of the branch points
};

SeparatingTree build_separating_tree(const Curve& f, const TreeOptions& opt = {});

// Valuation of the difference of two expansions; nullopt if they agree to
// the common precision.
std::optional<Rational> separation(const LaurentSeries& a, const LaurentSeries& b);

// Substitute u -> image (an element of a function field C(v)) into an
// element of a tower over C(u); towers are rebuilt over C(v).
class MobiusMap {
 public:
  MobiusMap(FieldPtr from, Elem image);
  Elem apply(const Elem& e);
  FieldPtr apply(const FieldPtr& F);
  LaurentSeries apply(const LaurentSeries& s);

 private:
  FieldPtr from_;
  Elem image_;
  std::vector<std::pair<FieldPtr, FieldPtr>> memo_;
};

// Residue coordinate of `from` at its vertex of radius k, written in the
// coordinate of `to` (an element of target = C(v)).  At radius b of an
// annulus the coordinate is v = t^b/(x - c); otherwise it is (x - c)/t^k.
Elem gluing_image(const Chart& from, const Chart& to, const Rational& k, const FieldPtr& target);

}  // namespace tropskel
