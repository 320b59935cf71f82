#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "region_carver/errors.hpp"
#include "region_carver/polynomial.hpp"

namespace region_carver {

/// {"vars": [...], "terms": [{"exp": [...], "coef": c}, ...]}, terms in
/// descending graded-lex order.
inline nlohmann::json polynomial_to_json(const Polynomial<double>& p, const std::vector<std::string>& vars) {
  if (vars.size() != p.nvars()) throw DimensionError("variable names do not match polynomial");
  nlohmann::json terms = nlohmann::json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it)
    terms.push_back({{"exp", it->first.exponents()}, {"coef", it->second}});
  return {{"vars", vars}, {"terms", std::move(terms)}};
}

struct NamedPolynomial {
  std::vector<std::string> vars;
  Polynomial<double> poly;
};

inline NamedPolynomial polynomial_from_json(const nlohmann::json& j) {
  NamedPolynomial out;
  out.vars = j.at("vars").get<std::vector<std::string>>();
  out.poly = Polynomial<double>(out.vars.size());
  for (const auto& t : j.at("terms")) {
    auto e = t.at("exp").get<std::vector<int>>();
    if (e.size() != out.vars.size()) throw DimensionError("term exponent vector has wrong length");
    out.poly.add_term(Monomial(std::move(e)), t.at("coef").get<double>());
  }
  return out;
}

}  // namespace region_carver
