#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

#include "tropskel/curve.hpp"
#include "tropskel/p1_models.hpp"

namespace tropskel {

struct ConstantSpec {
  std::string name;
  std::vector<Rational> minpoly;  // low degree first, monic, irreducible over Q
};

// Input file:
//   { "constants": [{"name": "i", "minpoly": [1, 0, 1]}],
//     "variables": ["x", "y"],
//     "f": [{"exps": [i_x, i_y], "coeff": [{"tpow": q, "value": q}]}],
//     "options": {...} }
// Rationals are integers, "n/d" strings or [n, d] pairs.  "f" may also be a
// polynomial string in t, x, y.  Only rational coefficient values are
// accepted; constants are validated and carried along.
struct InputSpec {
  std::vector<ConstantSpec> constants;
  std::array<std::string, 2> variables{"x", "y"};
  Curve f;
  nlohmann::json options = nlohmann::json::object();
};

// Throws ParseError naming the offending field.
InputSpec parse_input(const nlohmann::json& j);
InputSpec read_input(const std::string& path);
// Normal form: terms sorted by exps, t-powers increasing, rationals as
// ["n", "d"] strings.  render(parse(render(x))) == render(x).
nlohmann::json render_input(const InputSpec& in);

Rational parse_rational(const nlohmann::json& j, const std::string& where);
nlohmann::json render_rational(const Rational& q);

// "B_k(c)" with c a polynomial in t.
TreeVertex parse_disk(const std::string& spec);
// "S_{a,b}(c)".
Chart parse_annulus(const std::string& spec);

// Genus of X asserted by the options ("genus", or "smooth_plane": true).
std::optional<int> asserted_genus(const InputSpec& in);

}  // namespace tropskel
