#pragma once

#include <string>
#include <vector>

namespace tropskel {

// Rendering helpers shared by polynomials and series.
bool is_atomic(const std::string& s);       // integer/rational literal or identifier
bool is_sum_free(const std::string& s);     // no top-level +, - or /
std::string wrap(const std::string& s);     // parenthesize unless atomic
std::string times_monomial(const std::string& coeff, const std::string& mon);
std::string join_terms(const std::vector<std::string>& terms);
std::string power(const std::string& var, const std::string& exp);

}  // namespace tropskel
