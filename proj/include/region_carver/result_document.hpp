#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "region_carver/arrangement.hpp"
#include "region_carver/errors.hpp"
#include "region_carver/morse.hpp"
#include "region_carver/parse.hpp"
#include "region_carver/regions.hpp"

namespace region_carver {

/// Rounds to 12 significant digits, the precision of stored coordinates.
inline double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

struct PointRecord {
  RealVector x;
  double log_g = 0.0;
  int index = 0;
  friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

struct RegionRecord {
  std::size_t id = 0;
  std::string sigma;
  std::vector<int> mu;
  int chi = 0;
  std::string boundedness = "unknown";
  std::vector<std::size_t> members;
  std::vector<PointRecord> points;
  friend bool operator==(const RegionRecord&, const RegionRecord&) = default;
};

struct ProjectiveRecord {
  std::vector<std::vector<std::size_t>> groups;
  std::size_t infinity_regions = 0;
  bool heuristic_incomplete = false;
  friend bool operator==(const ProjectiveRecord&, const ProjectiveRecord&) = default;
};

struct DiagnosticsRecord {
  std::uint64_t seed_used = 0;
  int attempts = 1;
  std::int64_t bezout = 0;
  std::size_t paths_converged = 0;
  std::size_t paths_diverged = 0;
  std::size_t paths_failed = 0;
  std::size_t paths_extraneous = 0;
  std::size_t paths_retracked = 0;
  double max_newton_residual = 0.0;
  std::size_t flows = 0;
  std::size_t flow_steps = 0;
  std::size_t flows_unmatched = 0;
  std::size_t flow_breakdowns = 0;
  bool incomplete_graph = false;
  std::vector<std::string> warnings;
  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

/// Machine-readable result of a regions run.
struct ResultDocument {
  std::vector<std::string> vars;
  std::vector<std::string> polynomials;
  std::string q;
  std::vector<int> s;
  int t = 1;
  std::uint64_t seed = 0;
  std::int64_t ml_bound = 0;
  std::size_t complex_critical_points = 0;
  std::size_t real_critical_points = 0;
  std::vector<RegionRecord> regions;
  std::optional<ProjectiveRecord> projective;
  std::optional<double> delta;
  DiagnosticsRecord diagnostics;
  std::map<std::string, double> timing;  // seconds; not part of any golden comparison
  friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

inline ResultDocument make_document(const RegionsResult& res, std::uint64_t seed,
                                    std::map<std::string, double> timing = {}) {
  const MorseFunction& m = res.morse;
  const Arrangement& arr = m.arrangement();
  ResultDocument doc;
  doc.vars = arr.vars;
  for (const auto& p : arr.polys) doc.polynomials.push_back(to_string(p, arr.vars));
  doc.q = to_string(m.q(), arr.vars);
  doc.s = m.s();
  doc.t = m.t();
  doc.seed = seed;
  doc.ml_bound = res.diagnostics.ml_bound;
  doc.complex_critical_points = res.complex_points.size();
  doc.real_critical_points = res.critical_points.size();
  for (const auto& r : res.regions) {
    RegionRecord rr{r.id, r.sigma.to_string(), r.mu, r.chi, to_string(r.boundedness), r.members, {}};
    for (std::size_t i : r.members) {
      const auto& cp = res.critical_points[i];
      PointRecord pr{cp.x, round12(cp.log_g), cp.index};
      for (auto& v : pr.x) v = round12(v);
      rr.points.push_back(std::move(pr));
    }
    doc.regions.push_back(std::move(rr));
  }
  if (res.projective)
    doc.projective = ProjectiveRecord{res.projective->groups, res.projective->infinity_regions,
                                      res.projective->heuristic_incomplete};
  doc.delta = res.delta;
  const auto& d = res.diagnostics;
  doc.diagnostics = {d.seed_used,        d.attempts,         d.bezout,          d.paths_converged,
                     d.paths_diverged,   d.paths_failed,     d.paths_extraneous, d.paths_retracked,
                     d.max_newton_residual, d.flows,         d.flow_steps,      d.flows_unmatched,
                     d.flow_breakdowns,  d.incomplete_graph, d.warnings};
  doc.timing = std::move(timing);
  return doc;
}

inline nlohmann::json to_json(const ResultDocument& doc) {
  using nlohmann::json;
  json regions = json::array();
  for (const auto& r : doc.regions) {
    json pts = json::array();
    for (const auto& p : r.points) pts.push_back({{"x", p.x}, {"log_g", p.log_g}, {"index", p.index}});
    regions.push_back({{"id", r.id},
                       {"sigma", r.sigma},
                       {"mu", r.mu},
                       {"chi", r.chi},
                       {"boundedness", r.boundedness},
                       {"members", r.members},
                       {"points", std::move(pts)}});
  }
  const auto& d = doc.diagnostics;
  json j = {
      {"arrangement", {{"vars", doc.vars}, {"polynomials", doc.polynomials}}},
      {"morse", {{"q", doc.q}, {"s", doc.s}, {"t", doc.t}, {"seed", doc.seed}}},
      {"ml_bound", doc.ml_bound},
      {"complex_critical_points", doc.complex_critical_points},
      {"real_critical_points", doc.real_critical_points},
      {"regions", std::move(regions)},
      {"diagnostics",
       {{"seed_used", d.seed_used},
        {"attempts", d.attempts},
        {"bezout", d.bezout},
        {"paths",
         {{"converged", d.paths_converged},
          {"diverged", d.paths_diverged},
          {"failed", d.paths_failed},
          {"extraneous", d.paths_extraneous},
          {"retracked", d.paths_retracked}}},
        {"max_newton_residual", d.max_newton_residual},
        {"flows", d.flows},
        {"flow_steps", d.flow_steps},
        {"flows_unmatched", d.flows_unmatched},
        {"flow_breakdowns", d.flow_breakdowns},
        {"incomplete_graph", d.incomplete_graph},
        {"warnings", d.warnings}}},
      {"timing", doc.timing},
  };
  if (doc.projective)
    j["projective"] = {{"groups", doc.projective->groups},
                       {"infinity_regions", doc.projective->infinity_regions},
                       {"heuristic_incomplete", doc.projective->heuristic_incomplete}};
  if (doc.delta) j["delta"] = *doc.delta;
  return j;
}

inline ResultDocument document_from_json(const nlohmann::json& j) {
  ResultDocument doc;
  try {
    doc.vars = j.at("arrangement").at("vars").get<std::vector<std::string>>();
    doc.polynomials = j.at("arrangement").at("polynomials").get<std::vector<std::string>>();
    const auto& m = j.at("morse");
    doc.q = m.at("q").get<std::string>();
    doc.s = m.at("s").get<std::vector<int>>();
    doc.t = m.at("t").get<int>();
    doc.seed = m.at("seed").get<std::uint64_t>();
    doc.ml_bound = j.at("ml_bound").get<std::int64_t>();
    doc.complex_critical_points = j.at("complex_critical_points").get<std::size_t>();
    doc.real_critical_points = j.at("real_critical_points").get<std::size_t>();
    for (const auto& r : j.at("regions")) {
      RegionRecord rr;
      rr.id = r.at("id").get<std::size_t>();
      rr.sigma = r.at("sigma").get<std::string>();
      rr.mu = r.at("mu").get<std::vector<int>>();
      rr.chi = r.at("chi").get<int>();
      rr.boundedness = r.at("boundedness").get<std::string>();
      rr.members = r.at("members").get<std::vector<std::size_t>>();
      for (const auto& p : r.at("points"))
        rr.points.push_back({p.at("x").get<RealVector>(), p.at("log_g").get<double>(), p.at("index").get<int>()});
      doc.regions.push_back(std::move(rr));
    }
    if (j.contains("projective")) {
      const auto& p = j.at("projective");
      doc.projective = ProjectiveRecord{p.at("groups").get<std::vector<std::vector<std::size_t>>>(),
                                        p.at("infinity_regions").get<std::size_t>(),
                                        p.at("heuristic_incomplete").get<bool>()};
    }
    if (j.contains("delta")) doc.delta = j.at("delta").get<double>();
    const auto& d = j.at("diagnostics");
    auto& dd = doc.diagnostics;
    dd.seed_used = d.at("seed_used").get<std::uint64_t>();
    dd.attempts = d.at("attempts").get<int>();
    dd.bezout = d.at("bezout").get<std::int64_t>();
    const auto& paths = d.at("paths");
    dd.paths_converged = paths.at("converged").get<std::size_t>();
    dd.paths_diverged = paths.at("diverged").get<std::size_t>();
    dd.paths_failed = paths.at("failed").get<std::size_t>();
    dd.paths_extraneous = paths.at("extraneous").get<std::size_t>();
    dd.paths_retracked = paths.at("retracked").get<std::size_t>();
    dd.max_newton_residual = d.at("max_newton_residual").get<double>();
    dd.flows = d.at("flows").get<std::size_t>();
    dd.flow_steps = d.at("flow_steps").get<std::size_t>();
    dd.flows_unmatched = d.at("flows_unmatched").get<std::size_t>();
    dd.flow_breakdowns = d.at("flow_breakdowns").get<std::size_t>();
    dd.incomplete_graph = d.at("incomplete_graph").get<bool>();
    dd.warnings = d.at("warnings").get<std::vector<std::string>>();
    if (j.contains("timing")) doc.timing = j.at("timing").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed result document: ") + e.what(), 0);
  }
  return doc;
}

inline std::string serialize(const ResultDocument& doc) { return to_json(doc).dump(2) + "\n"; }

inline ResultDocument parse_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("result document is not valid JSON: ") + e.what(), e.byte);
  }
  return document_from_json(j);
}

/// Rebuilds enough of a RegionsResult from a stored document to answer
/// membership queries: the Morse function, the real critical points and the
/// regions.
inline RegionsResult regions_result_from_document(const ResultDocument& doc) {
  const Arrangement arr = Arrangement::parse(doc.polynomials, doc.vars);
  MorseFunction m(arr, parse_polynomial(doc.q, doc.vars), doc.s, doc.t, doc.diagnostics.seed_used);
  RegionsResult res{{}, m, {}, {}, {}, std::nullopt, doc.delta};
  std::size_t count = 0;
  for (const auto& r : doc.regions) count += r.members.size();
  res.critical_points.resize(count);
  for (const auto& r : doc.regions) {
    Region reg;
    reg.id = r.id;
    reg.sigma = SignVector::from_string(r.sigma);
    reg.members = r.members;
    reg.mu = r.mu;
    reg.chi = r.chi;
    for (Boundedness b : {Boundedness::bounded, Boundedness::unbounded, Boundedness::undecided})
      if (r.boundedness == to_string(b)) reg.boundedness = b;
    if (r.points.size() != r.members.size()) throw ParseError("region points do not match its members", 0);
    for (std::size_t i = 0; i < r.members.size(); ++i) {
      if (r.members[i] >= count) throw ParseError("critical point index out of range", 0);
      auto& cp = res.critical_points[r.members[i]];
      cp.x = r.points[i].x;
      cp.log_g = r.points[i].log_g;
      cp.index = r.points[i].index;
      cp.sigma = reg.sigma;
    }
    res.regions.push_back(std::move(reg));
  }
  res.diagnostics.seed_used = doc.diagnostics.seed_used;
  res.diagnostics.ml_bound = doc.ml_bound;
  return res;
}

}  // namespace region_carver
