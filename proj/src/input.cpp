#include "tropskel/input.hpp"

#include <fstream>
#include <regex>
#include <set>

#include "tropskel/errors.hpp"
#include "tropskel/factor.hpp"
#include "tropskel/skeleton.hpp"

namespace tropskel {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

bool is_identifier(const std::string& s) {
  static const std::regex id("[A-Za-z_][A-Za-z0-9_]*");
  return std::regex_match(s, id);
}

int parse_exponent(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long>() < 0 || j.get<long>() > 1000) fail(where, "expected a small non-negative integer");
  return j.get<int>();
}

// A polynomial in t alone, e.g. a chart center.
LaurentSeries parse_t_polynomial(const std::string& text) {
  // Curve::parse rejects the zero polynomial, so parse text + y and drop y.
  Curve g = Curve::parse("(" + text + ") + y");
  LaurentSeries c(Field::rationals());
  for (const auto& [k, v] : g.terms()) {
    if (k == Curve::Key{1, 0}) {
      if (!(v == LaurentSeries::constant(Field::rationals()->one())))
        throw ParseError("center must not involve y");
    } else if (k == Curve::Key{0, 0}) {
      c = v;
    } else {
      throw ParseError("center must be a polynomial in t");
    }
  }
  return c;
}

LaurentSeries truncated_below(const LaurentSeries& c, const Rational& k) {
  LaurentSeries out(c.field());
  for (const auto& [e, v] : c.terms())
    if (e < k) out.add_term(e, v);
  return out;
}

}  // namespace

Rational parse_rational(const json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_array() && j.size() == 2) {
      Integer num, den;
      for (int k = 0; k < 2; ++k) {
        Integer& z = k ? den : num;
        if (j[k].is_number_integer())
          z = Integer(j[k].get<long>());
        else if (j[k].is_string() && z.set_str(j[k].get<std::string>(), 10) == 0)
          ;
        else
          fail(where, "rational entries must be integers");
      }
      if (den == 0) fail(where, "zero denominator");
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  fail(where, "expected a rational (integer, \"n/d\" or [n, d])");
}

json render_rational(const Rational& q) { return json::array({q.get_num().get_str(), q.get_den().get_str()}); }

InputSpec parse_input(const json& j) {
  if (!j.is_object()) fail("$", "expected an object");
  static const std::set<std::string> known{"constants", "variables", "f", "options"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) fail("$." + k, "unknown field");
  InputSpec in;

  if (j.contains("constants")) {
    const json& cs = j["constants"];
    if (!cs.is_array()) fail("$.constants", "expected an array");
    std::set<std::string> names;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      std::string at = "$.constants[" + std::to_string(k) + "]";
      const json& c = cs[k];
      if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) fail(at + ".name", "expected a string");
      ConstantSpec spec;
      spec.name = c["name"].get<std::string>();
      if (!is_identifier(spec.name) || spec.name == "t" || spec.name == "x" || spec.name == "y" || !names.insert(spec.name).second)
        fail(at + ".name", "invalid or repeated name '" + spec.name + "'");
      if (!c.contains("minpoly") || !c["minpoly"].is_array() || c["minpoly"].size() < 2)
        fail(at + ".minpoly", "expected at least two coefficients, low degree first");
      for (std::size_t i = 0; i < c["minpoly"].size(); ++i)
        spec.minpoly.push_back(parse_rational(c["minpoly"][i], at + ".minpoly[" + std::to_string(i) + "]"));
      if (spec.minpoly.back() == 0) fail(at + ".minpoly", "leading coefficient is zero");
      Rational lc = spec.minpoly.back();
      for (auto& q : spec.minpoly) q /= lc;
      auto Q = Field::rationals();
      std::vector<Elem> coeffs;
      for (const auto& q : spec.minpoly) coeffs.push_back(Q->from_rational(q));
      auto facs = factor(Poly(Q, coeffs));
      if (facs.size() != 1 || facs[0].mult != 1) fail(at + ".minpoly", "not irreducible over Q");
      in.constants.push_back(std::move(spec));
    }
  }

  if (j.contains("variables")) {
    const json& vs = j["variables"];
    if (!vs.is_array() || vs.size() != 2) fail("$.variables", "expected two names");
    for (int k = 0; k < 2; ++k) {
      if (!vs[k].is_string() || !is_identifier(vs[k].get<std::string>()) || vs[k] == "t")
        fail("$.variables[" + std::to_string(k) + "]", "expected an identifier other than t");
      in.variables[k] = vs[k].get<std::string>();
    }
    if (in.variables[0] == in.variables[1]) fail("$.variables", "names must differ");
  }

  if (!j.contains("f")) fail("$.f", "missing");
  const json& f = j["f"];
  auto Q = Field::rationals();
  if (f.is_string()) {
    if (in.variables[0] != "x" || in.variables[1] != "y") fail("$.f", "string form requires variables [\"x\", \"y\"]");
    try {
      in.f = Curve::parse(f.get<std::string>());
    } catch (const ParseError& e) {
      fail("$.f", e.what());
    }
  } else if (f.is_array()) {
    for (std::size_t k = 0; k < f.size(); ++k) {
      std::string at = "$.f[" + std::to_string(k) + "]";
      const json& term = f[k];
      if (!term.is_object()) fail(at, "expected an object");
      if (!term.contains("exps") || !term["exps"].is_array() || term["exps"].size() != 2)
        fail(at + ".exps", "expected [i_x, i_y]");
      int ix = parse_exponent(term["exps"][0], at + ".exps[0]");
      int iy = parse_exponent(term["exps"][1], at + ".exps[1]");
      if (!term.contains("coeff") || !term["coeff"].is_array()) fail(at + ".coeff", "expected an array");
      LaurentSeries c(Q);
      for (std::size_t m = 0; m < term["coeff"].size(); ++m) {
        std::string cat = at + ".coeff[" + std::to_string(m) + "]";
        const json& mono = term["coeff"][m];
        if (!mono.is_object() || !mono.contains("tpow") || !mono.contains("value"))
          fail(cat, "expected {\"tpow\": q, \"value\": q}");
        Rational e = parse_rational(mono["tpow"], cat + ".tpow");
        if (e.get_den() != 1 || e < 0) fail(cat + ".tpow", "t-exponents must be non-negative integers");
        const json& val = mono["value"];
        if (val.is_string() && val.get<std::string>().find_first_not_of("0123456789/-+ ") != std::string::npos)
          fail(cat + ".value", "only rational values are supported");
        c += LaurentSeries::monomial(Q->from_rational(parse_rational(val, cat + ".value")), e);
      }
      in.f.add(iy, ix, c);
    }
    if (in.f.terms().empty()) fail("$.f", "zero polynomial");
  } else {
    fail("$.f", "expected a term array or a polynomial string");
  }
  if (in.f.deg_y() < 1) fail("$.f", "polynomial must involve " + in.variables[1]);

  if (j.contains("options")) {
    if (!j["options"].is_object()) fail("$.options", "expected an object");
    in.options = j["options"];
    const json& o = in.options;
    if (o.contains("smooth_plane") && !o["smooth_plane"].is_boolean()) fail("$.options.smooth_plane", "expected a boolean");
    if (o.contains("genus") && (!o["genus"].is_number_integer() || o["genus"].get<long>() < 0))
      fail("$.options.genus", "expected a non-negative integer");
    if (o.contains("name") && !o["name"].is_string()) fail("$.options.name", "expected a string");
  }
  return in;
}

InputSpec read_input(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ParseError(path + ": cannot open");
  json j;
  try {
    j = json::parse(file);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_input(j);
}

json render_input(const InputSpec& in) {
  json out = json::object();
  if (!in.constants.empty()) {
    json cs = json::array();
    for (const auto& c : in.constants) {
      json mp = json::array();
      for (const auto& q : c.minpoly) mp.push_back(render_rational(q));
      cs.push_back({{"name", c.name}, {"minpoly", mp}});
    }
    out["constants"] = cs;
  }
  out["variables"] = {in.variables[0], in.variables[1]};
  std::map<std::pair<int, int>, const LaurentSeries*> sorted;  // (i_x, i_y)
  for (const auto& [k, c] : in.f.terms()) sorted[{k.second, k.first}] = &c;
  json terms = json::array();
  for (const auto& [e, c] : sorted) {
    json coeff = json::array();
    for (const auto& [p, v] : c->terms())
      coeff.push_back({{"tpow", render_rational(p)}, {"value", render_rational(v.to_rational())}});
    terms.push_back({{"exps", {e.first, e.second}}, {"coeff", coeff}});
  }
  out["f"] = terms;
  out["options"] = in.options;
  return out;
}

TreeVertex parse_disk(const std::string& spec) {
  static const std::regex re(R"(\s*B_\{?\s*(-?[0-9]+(?:/[0-9]+)?)\s*\}?\s*\((.*)\)\s*)");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) throw ParseError("disk: expected B_k(c), got '" + spec + "'");
  Rational k = parse_rational(m[1].str());
  return {k, truncated_below(parse_t_polynomial(m[2].str()), k)};
}

Chart parse_annulus(const std::string& spec) {
  static const std::regex re(
      R"(\s*S_\{\s*(-?[0-9]+(?:/[0-9]+)?)\s*,\s*(-?[0-9]+(?:/[0-9]+)?)\s*\}\s*\((.*)\)\s*)");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) throw ParseError("annulus: expected S_{a,b}(c), got '" + spec + "'");
  Rational a = parse_rational(m[1].str()), b = parse_rational(m[2].str());
  if (!(a < b)) throw ParseError("annulus: need a < b in '" + spec + "'");
  return Chart::annulus(truncated_below(parse_t_polynomial(m[3].str()), b), a, b);
}

std::optional<int> asserted_genus(const InputSpec& in) {
  if (in.options.contains("genus")) return in.options["genus"].get<int>();
  if (in.options.value("smooth_plane", false)) return plane_curve_genus(in.f);
  return std::nullopt;
}

}  // namespace tropskel
