#pragma once

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "region_carver/arrangement.hpp"
#include "region_carver/errors.hpp"
#include "region_carver/generators.hpp"
#include "region_carver/parse.hpp"
#include "region_carver/polynomial.hpp"

namespace region_carver {

/// A parsed input file: the arrangement and an optional fixed quadric.
struct ArrangementInput {
  Arrangement arrangement;
  std::optional<Polynomial<double>> q;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool strip_key(std::string_view& line, std::string_view key) {
  if (line.substr(0, key.size()) != key) return false;
  line = trim(line.substr(key.size()));
  return true;
}

}  // namespace detail

/// Text format:
///   vars: x y z
///   q: x^2 + y^2 + z^2 + 1     (optional)
///   x^2 + y^2 - 1
///   ...
/// with '#' starting a comment. ParseError offsets count from the start of
/// the text.
inline ArrangementInput parse_input(std::string_view text) {
  std::vector<std::string> vars;
  bool have_vars = false;
  std::optional<std::pair<std::string, std::size_t>> q_src;
  std::vector<Polynomial<double>> polys;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(offset, end - offset);
    const std::size_t line_start = offset;
    offset = end + 1;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    const std::size_t col = line_start + static_cast<std::size_t>(line.data() - raw.data());
    if (detail::strip_key(line, "vars:")) {
      if (have_vars) throw ParseError("duplicate vars line", col);
      std::istringstream is{std::string(line)};
      for (std::string v; is >> v;) vars.push_back(v);
      if (vars.empty()) throw ParseError("vars line names no variables", col);
      have_vars = true;
      continue;
    }
    if (!have_vars) throw ParseError("input must start with a 'vars:' line", col);
    if (detail::strip_key(line, "q:")) {
      if (q_src) throw ParseError("duplicate q line", col);
      q_src.emplace(std::string(line), line_start + static_cast<std::size_t>(line.data() - raw.data()));
      continue;
    }
    try {
      polys.push_back(parse_polynomial(line, vars));
    } catch (const ParseError& e) {
      throw ParseError(std::string("in polynomial '") + std::string(line) + "': " + e.message(), col + e.position());
    }
  }
  if (!have_vars) throw ParseError("missing 'vars:' line", 0);
  if (polys.empty()) throw ParseError("no polynomials given", text.size());
  for (std::size_t i = 0; i < polys.size(); ++i)
    if (polys[i].is_zero()) throw ParseError("polynomial " + std::to_string(i + 1) + " is zero", 0);
  ArrangementInput out{Arrangement::make(std::move(polys), vars), std::nullopt};
  if (q_src) {
    try {
      out.q = parse_polynomial(q_src->first, vars);
    } catch (const ParseError& e) {
      throw ParseError(std::string("in q: ") + e.message(), q_src->second + e.position());
    }
  }
  return out;
}

inline ArrangementInput read_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return parse_input(buf.str());
}

inline std::string format_input(const Arrangement& arr, const std::optional<Polynomial<double>>& q = std::nullopt,
                                std::string_view comment = {}) {
  std::string out;
  if (!comment.empty()) out += "# " + std::string(comment) + "\n";
  out += "vars:";
  for (const auto& v : arr.vars) out += " " + v;
  out += "\n";
  if (q) out += "q: " + to_string(*q, arr.vars) + "\n";
  for (const auto& p : arr.polys) out += to_string(p, arr.vars) + "\n";
  return out;
}

inline void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline ArrangementInput example_input(std::string_view name) {
  const auto& e = builtin_example(name);
  ArrangementInput out{Arrangement::parse(e.polys, e.vars), std::nullopt};
  if (e.q) out.q = parse_polynomial(*e.q, e.vars);
  return out;
}

}  // namespace region_carver
