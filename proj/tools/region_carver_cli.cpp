#include <cctype>
#include <chrono>
#include <climits>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "region_carver/errors.hpp"
#include "region_carver/generators.hpp"
#include "region_carver/io.hpp"
#include "region_carver/projective.hpp"
#include "region_carver/regions.hpp"
#include "region_carver/result_document.hpp"

namespace rc = region_carver;

namespace {

enum Exit { kOk = 0, kParse = 1, kSolver = 2, kIo = 3, kOnHypersurface = 4 };

using Clock = std::chrono::steady_clock;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Common {
  std::optional<std::uint64_t> seed;
  std::string output;
  unsigned threads = 1;
  bool verbose = false;

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("REGION_CARVER_SEED")) {
      try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(env, &used);
        if (used == std::string(env).size()) return v;
      } catch (const std::exception&) {
      }
      throw UsageError("REGION_CARVER_SEED is not an unsigned integer");
    }
    return 1;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Random seed (falls back to $REGION_CARVER_SEED, then 1)");
  app->add_option("-o,--output", c.output, "Write the result here instead of stdout");
  app->add_option("--threads", c.threads, "Worker threads, 0 for all cores")->default_val(1);
  app->add_flag("-v,--verbose", c.verbose, "Progress and diagnostics on stderr");
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) std::cout << text << std::flush;
  else rc::write_text(c.output, text);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      throw UsageError("'" + item + "' is not a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw UsageError("'" + item + "' is not a number");
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_list(s)) {
    if (v != static_cast<int>(v)) throw UsageError("expected integers, got " + std::to_string(v));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// regions ---------------------------------------------------------------

struct RegionsArgs {
  Common common;
  std::string input;
  std::string example;
  bool bounded_check = false;
  bool projective = false;
  double delta = 1e-5;
  std::string s;
  std::optional<int> t;
};

int run_regions(const RegionsArgs& a) {
  const auto t0 = Clock::now();
  if (a.input.empty() == a.example.empty()) throw UsageError("give exactly one of an input file or --example");
  if (!(a.delta > 0.0)) throw UsageError("--delta must be positive");
  const rc::ArrangementInput in = a.example.empty() ? rc::read_input(a.input) : rc::example_input(a.example);
  const std::uint64_t seed = a.common.resolved_seed();

  rc::RegionsOptions opt;
  opt.threads = rc::resolve_threads(a.common.threads);
  opt.q = in.q;
  opt.t = a.t;
  if (!a.s.empty()) {
    opt.s = parse_int_list(a.s);
    if (opt.s->size() != in.arrangement.k()) throw UsageError("--s needs one exponent per polynomial");
  }
  if (a.common.verbose)
    std::cerr << "regions: n=" << in.arrangement.n << " k=" << in.arrangement.k() << " seed=" << seed << "\n";

  rc::RegionsResult res = [&] {
    try {
      return rc::compute_regions(in.arrangement, seed, opt);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  std::map<std::string, double> timing;
  timing["regions_s"] = seconds_since(t0);
  if (a.common.verbose)
    std::cerr << "  " << res.complex_points.size() << " complex / " << res.critical_points.size()
              << " real critical points, " << res.regions.size() << " regions\n";

  rc::ProjectiveOptions popt;
  popt.threads = opt.threads;
  if (a.projective || a.bounded_check) {
    const auto t1 = Clock::now();
    res.projective = rc::compute_projective_regions(res, popt);
    timing["projective_s"] = seconds_since(t1);
  }
  if (a.bounded_check) {
    const auto t1 = Clock::now();
    rc::apply_boundedness(res, a.delta, popt);
    timing["boundedness_s"] = seconds_since(t1);
  }
  timing["total_s"] = seconds_since(t0);
  if (a.common.verbose)
    for (const auto& w : res.diagnostics.warnings) std::cerr << "  warning: " << w << "\n";
  emit(a.common, rc::serialize(rc::make_document(res, seed, timing)));
  return kOk;
}

// membership --------------------------------------------------------------

struct MembershipArgs {
  Common common;
  std::string result;
  std::string point;
};

int run_membership(const MembershipArgs& a) {
  std::ifstream in(a.result);
  if (!in) throw rc::IoError("cannot open '" + a.result + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const rc::ResultDocument doc = rc::parse_document(buf.str());
  const rc::RegionsResult res = rc::regions_result_from_document(doc);
  const std::vector<double> p = parse_list(a.point);
  if (p.size() != res.morse.n())
    throw UsageError("point has " + std::to_string(p.size()) + " coordinates, expected " +
                     std::to_string(res.morse.n()));
  const rc::Region& r = rc::membership(res, p);
  nlohmann::json j = {{"point", p},
                      {"region", r.id},
                      {"sigma", r.sigma.to_string()},
                      {"chi", r.chi},
                      {"boundedness", rc::to_string(r.boundedness)}};
  emit(a.common, j.dump(2) + "\n");
  return kOk;
}

// generators --------------------------------------------------------------

struct GenRandomArgs {
  Common common;
  std::size_t n = 2, k = 2;
  int d = 2;
};

int run_gen_random(const GenRandomArgs& a) {
  const std::uint64_t seed = a.common.resolved_seed();
  const auto arr = rc::random_arrangement(a.n, a.k, a.d, seed);
  emit(a.common, rc::format_input(arr, std::nullopt,
                                  "random dense arrangement n=" + std::to_string(a.n) + " k=" + std::to_string(a.k) +
                                      " d=" + std::to_string(a.d) + " seed=" + std::to_string(seed)));
  return kOk;
}

struct GenSpectraArgs {
  Common common;
  std::size_t n = 2, m = 2;
  bool elliptope = false;
};

int run_gen_spectrahedron(const GenSpectraArgs& a) {
  if (a.elliptope) {
    emit(a.common, rc::format_input(rc::elliptope(), std::nullopt, "elliptope"));
    return kOk;
  }
  const std::uint64_t seed = a.common.resolved_seed();
  const auto arr = rc::random_spectrahedron(a.n, a.m, seed);
  emit(a.common, rc::format_input(arr, std::nullopt,
                                  "principal minors of a random pencil n=" + std::to_string(a.n) +
                                      " m=" + std::to_string(a.m) + " seed=" + std::to_string(seed)));
  return kOk;
}

// bench -------------------------------------------------------------------

struct BenchArgs {
  Common common;
  std::vector<std::string> random;
  std::vector<std::string> spectra;
  int reps = 5;
};

struct BenchRow {
  std::string kind;
  std::size_t n = 0, k = 0, m = 0;
  int d = 0;
  std::int64_t ml_bound = 0;
  int ok = 0, failures = 0;
  std::size_t min_reg = SIZE_MAX, max_reg = 0, min_sigma = SIZE_MAX, max_sigma = 0, max_per_sigma = 0;
  int min_chi = INT32_MAX, max_chi = INT32_MIN;
  double seconds = 0.0;
  bool within_bound = true;
};

void bench_instance(BenchRow& row, const rc::Arrangement& arr, std::uint64_t seed, unsigned threads, bool verbose) {
  const auto t0 = Clock::now();
  try {
    rc::RegionsOptions opt;
    opt.threads = threads;
    const auto res = rc::compute_regions(arr, seed, opt);
    row.seconds += seconds_since(t0);
    ++row.ok;
    std::map<rc::SignVector, std::size_t> per_sigma;
    for (const auto& r : res.regions) {
      ++per_sigma[r.sigma];
      row.min_chi = std::min(row.min_chi, r.chi);
      row.max_chi = std::max(row.max_chi, r.chi);
    }
    row.min_reg = std::min(row.min_reg, res.regions.size());
    row.max_reg = std::max(row.max_reg, res.regions.size());
    row.min_sigma = std::min(row.min_sigma, per_sigma.size());
    row.max_sigma = std::max(row.max_sigma, per_sigma.size());
    for (const auto& [s, c] : per_sigma) row.max_per_sigma = std::max(row.max_per_sigma, c);
    row.ml_bound = res.diagnostics.ml_bound;
    if (static_cast<std::int64_t>(res.regions.size()) > res.diagnostics.ml_bound) row.within_bound = false;
    if (verbose) std::cerr << "  seed " << seed << ": " << res.regions.size() << " regions\n";
  } catch (const rc::Error& e) {
    ++row.failures;
    if (verbose) std::cerr << "  seed " << seed << " failed: " << e.what() << "\n";
  }
}

int run_bench(const BenchArgs& a) {
  if (a.reps < 1) throw UsageError("-N must be at least 1");
  if (a.random.empty() && a.spectra.empty()) throw UsageError("give at least one --random or --spectrahedron spec");
  const std::uint64_t seed = a.common.resolved_seed();
  const unsigned threads = rc::resolve_threads(a.common.threads);
  std::vector<BenchRow> rows;
  for (const auto& spec : a.random) {
    const auto v = parse_int_list(spec);
    if (v.size() != 3 || v[0] < 1 || v[1] < 1 || v[2] < 1) throw UsageError("--random takes n,k,d");
    BenchRow row{"random", static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1]), 0, v[2]};
    if (a.common.verbose) std::cerr << "random n=" << v[0] << " k=" << v[1] << " d=" << v[2] << "\n";
    for (int r = 0; r < a.reps; ++r) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(r);
      bench_instance(row, rc::random_arrangement(row.n, row.k, row.d, s), s, threads, a.common.verbose);
    }
    rows.push_back(row);
  }
  for (const auto& spec : a.spectra) {
    const auto v = parse_int_list(spec);
    if (v.size() != 2 || v[0] < 1 || v[1] < 1) throw UsageError("--spectrahedron takes n,m");
    BenchRow row{"spectrahedron", static_cast<std::size_t>(v[0]), (std::size_t{1} << v[1]) - 1,
                 static_cast<std::size_t>(v[1]), v[1]};
    if (a.common.verbose) std::cerr << "spectrahedron n=" << v[0] << " m=" << v[1] << "\n";
    for (int r = 0; r < a.reps; ++r) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(r);
      bench_instance(row, rc::random_spectrahedron(row.n, row.m, s), s, threads, a.common.verbose);
    }
    rows.push_back(row);
  }
  std::ostringstream out;
  out << "kind,n,k,d,m,N,ml_bound,min_reg,max_reg,min_sigma,max_sigma,max_reg_per_sigma,min_chi,max_chi,"
         "mean_seconds,failures,within_bound\n";
  for (const auto& r : rows) {
    out << r.kind << ',' << r.n << ',' << r.k << ',' << r.d << ',' << r.m << ',' << a.reps << ',' << r.ml_bound << ',';
    if (r.ok > 0) {
      out << r.min_reg << ',' << r.max_reg << ',' << r.min_sigma << ',' << r.max_sigma << ',' << r.max_per_sigma << ','
          << r.min_chi << ',' << r.max_chi << ',' << r.seconds / r.ok;
    } else {
      out << ",,,,,,,";
    }
    out << ',' << r.failures << ',' << (r.within_bound ? "true" : "false") << '\n';
  }
  emit(a.common, out.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regions of the complement of a real hypersurface arrangement"};
  app.require_subcommand(1);

  RegionsArgs ra;
  auto* regions = app.add_subcommand("regions", "Enumerate the regions of an arrangement");
  regions->add_option("input", ra.input, "Arrangement file (vars: line, one polynomial per line)");
  regions->add_option("--example", ra.example, "Built-in example")
      ->check(CLI::IsMember({"ellipsoids", "hyperboloid", "discriminant8", "elliptope", "paraboloids"}));
  regions->add_flag("--bounded-check", ra.bounded_check, "Classify regions as bounded, unbounded or undecided");
  regions->add_flag("--projective", ra.projective, "Fuse regions across the hyperplane at infinity");
  regions->add_option("--delta", ra.delta, "Slab width for the boundedness check")->default_val(1e-5);
  regions->add_option("--s", ra.s, "Comma separated exponents s_i");
  regions->add_option("--t", ra.t, "Exponent t of the quadric");
  add_common(regions, ra.common);

  MembershipArgs ma;
  auto* member = app.add_subcommand("membership", "Find the region containing a point");
  member->add_option("result", ma.result, "Result document written by 'regions'")->required();
  member->add_option("point", ma.point, "Comma separated coordinates")->required();
  add_common(member, ma.common);

  GenRandomArgs ga;
  auto* gen_random = app.add_subcommand("gen-random", "Random dense arrangement with Gaussian coefficients");
  gen_random->add_option("-n", ga.n, "Dimension")->required()->check(CLI::PositiveNumber);
  gen_random->add_option("-k", ga.k, "Number of polynomials")->required()->check(CLI::PositiveNumber);
  gen_random->add_option("-d", ga.d, "Degree")->required()->check(CLI::PositiveNumber);
  add_common(gen_random, ga.common);

  GenSpectraArgs sa;
  auto* gen_spectra = app.add_subcommand("gen-spectrahedron", "Principal minors of a random symmetric pencil");
  gen_spectra->add_option("-n", sa.n, "Dimension")->check(CLI::PositiveNumber);
  gen_spectra->add_option("-m", sa.m, "Matrix size")->check(CLI::PositiveNumber);
  gen_spectra->add_flag("--elliptope", sa.elliptope, "Emit the elliptope instead of a random pencil");
  add_common(gen_spectra, sa.common);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Region statistics over seeded random instances, as CSV");
  bench->add_option("--random", ba.random, "n,k,d of a dense random family (repeatable)");
  bench->add_option("--spectrahedron", ba.spectra, "n,m of a spectrahedral family (repeatable)");
  bench->add_option("-N", ba.reps, "Instances per family")->default_val(5);
  add_common(bench, ba.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*regions) return run_regions(ra);
    if (*member) return run_membership(ma);
    if (*gen_random) return run_gen_random(ga);
    if (*gen_spectra) return run_gen_spectrahedron(sa);
    if (*bench) return run_bench(ba);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const rc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const rc::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const rc::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const rc::OnHypersurfaceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOnHypersurface;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  return kOk;
}
