#include "tropskel/curve.hpp"

#include <array>
#include <cctype>

#include "tropskel/errors.hpp"
#include "tropskel/format.hpp"

namespace tropskel {

namespace {

using Mono = std::array<long, 3>;  // exponents of t, x, y
using Tri = std::map<Mono, Rational>;

Tri tri_add(Tri a, const Tri& b, int sign = 1) {
  for (const auto& [m, c] : b) {
    a[m] += sign * c;
    if (a[m] == 0) a.erase(m);
  }
  return a;
}

Tri tri_mul(const Tri& a, const Tri& b) {
  Tri r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mono m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      r[m] += ca * cb;
      if (r[m] == 0) r.erase(m);
    }
  return r;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Tri parse() {
    Tri r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in polynomial");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Tri expr() {
    Tri r;
    int sign = 1;
    if (eat('-')) sign = -1;
    else eat('+');
    r = tri_add(r, term(), sign);
    for (;;) {
      if (eat('+')) r = tri_add(r, term());
      else if (eat('-')) r = tri_add(r, term(), -1);
      else return r;
    }
  }

  Tri term() {
    Tri r = power();
    while (eat('*')) r = tri_mul(r, power());
    return r;
  }

  Tri power() {
    Tri base = atom();
    if (!eat('^')) return base;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected exponent");
    long e = std::stol(s_.substr(start, pos_ - start));
    Tri r{{Mono{0, 0, 0}, Rational(1)}};
    for (long k = 0; k < e; ++k) r = tri_mul(r, base);
    return r;
  }

  Tri atom() {
    skip();
    if (eat('(')) {
      Tri r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == 't' || c == 'x' || c == 'y') {
      ++pos_;
      Mono m{0, 0, 0};
      m[c == 't' ? 0 : (c == 'x' ? 1 : 2)] = 1;
      return {{m, Rational(1)}};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
      return {{Mono{0, 0, 0}, parse_rational(s_.substr(start, pos_ - start))}};
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

void Curve::add(int i, int j, const LaurentSeries& c) {
  auto it = terms_.find({i, j});
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(Key{i, j}, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Curve Curve::parse(const std::string& text) {
  Tri p = Parser(text).parse();
  Curve f;
  FieldPtr Q = Field::rationals();
  for (const auto& [m, c] : p) f.add(static_cast<int>(m[2]), static_cast<int>(m[1]), LaurentSeries::monomial(Q->from_rational(c), Rational(m[0])));
  if (f.terms_.empty()) throw ParseError("zero polynomial");
  return f;
}

int Curve::deg_y() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.first);
  return d;
}

int Curve::deg_x() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.second);
  return d;
}

std::string Curve::str() const {
  std::vector<std::string> parts;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [k, c] = *it;
    std::string mx = power("x", std::to_string(k.second)), my = power("y", std::to_string(k.first));
    std::string mon = mx.empty() ? my : (my.empty() ? mx : mx + "*" + my);
    parts.push_back(times_monomial(c.str("t"), mon));
  }
  return join_terms(parts);
}

Curve Curve::reversed_x() const {
  Curve r;
  int dx = deg_x();
  for (const auto& [k, c] : terms_) r.add(k.first, dx - k.second, c);
  return r;
}

std::vector<std::vector<LaurentSeries>> Curve::by_y() const {
  std::vector<std::vector<LaurentSeries>> out(deg_y() + 1);
  for (const auto& [k, c] : terms_) {
    auto& row = out[k.first];
    if (static_cast<int>(row.size()) <= k.second) row.resize(k.second + 1, LaurentSeries(c.field()));
    row[k.second] += c;
  }
  for (auto& row : out)
    if (row.empty()) row.push_back(LaurentSeries(Field::rationals()));
  return out;
}

SeriesPoly Curve::chart(const FieldPtr& Fu, const LaurentSeries& center, const Rational& k) const {
  return substitute(center.embed(Fu) + LaurentSeries::monomial(Fu->gen(), k));
}

SeriesPoly Curve::substitute(const LaurentSeries& X) const {
  const FieldPtr& Fu = X.field();
  std::vector<LaurentSeries> powers{LaurentSeries::constant(Fu->one())};
  for (int j = 1; j <= deg_x(); ++j) powers.push_back(powers.back() * X);
  SeriesPoly out(deg_y() + 1, LaurentSeries(Fu));
  for (const auto& [key, c] : terms_) out[key.first] += c.embed(Fu) * powers[key.second];
  return out;
}

}  // namespace tropskel
