#include "tropskel/format.hpp"

#include <cctype>

namespace tropskel {

bool is_atomic(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i >= s.size()) return false;
  if (std::isdigit(static_cast<unsigned char>(s[i]))) {
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i])) && s[i] != '/') return false;
    return true;
  }
  for (; i < s.size(); ++i)
    if (!std::isalnum(static_cast<unsigned char>(s[i])) && s[i] != '_') return false;
  return true;
}

bool is_sum_free(const std::string& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && (ch == ' ' || ch == '/' || ((ch == '+' || ch == '-') && i > 0 && s[i - 1] != '^')))
      return false;
  }
  return true;
}

std::string wrap(const std::string& s) { return is_atomic(s) ? s : "(" + s + ")"; }

std::string times_monomial(const std::string& c, const std::string& mon) {
  if (mon.empty()) return c;
  if (c == "1") return mon;
  if (c == "-1") return "-" + mon;
  if (is_atomic(c)) return c + "*" + mon;
  if (c[0] == '(' && is_sum_free(c)) return c + "*" + mon;
  return "(" + c + ")*" + mon;
}

std::string join_terms(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  std::string out = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) {
    const std::string& t = terms[i];
    if (!t.empty() && t[0] == '-')
      out += " - " + t.substr(1);
    else
      out += " + " + t;
  }
  return out;
}

std::string power(const std::string& var, const std::string& exp) {
  if (exp == "0") return "";
  if (exp == "1") return var;
  if (exp.find('/') != std::string::npos || exp[0] == '-') return var + "^(" + exp + ")";
  return var + "^" + exp;
}

}  // namespace tropskel
