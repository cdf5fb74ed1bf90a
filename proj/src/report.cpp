#include "avgcycles/report.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "avgcycles/errors.hpp"
#include "avgcycles/flowsim.hpp"
#include "avgcycles/trigkernel.hpp"

namespace avgcycles {

using trig::kPi;
using trig::kTwoPi;

namespace {

bool second_order(const std::string& g) { return g == "prop12" || g == "cor13" || g == "prop18" || g == "prop21" || g == "th4"; }

long long expected_count(const CaseRequest& c) {
  if (c.generator == "th4") return 2;
  if (second_order(c.generator)) return count_second_order(c.generator, c.n, c.m);
  return count_first_order(c.n, c.m, c.phi);
}

std::string phi_label(double phi) {
  if (std::abs(phi - kPi) < 1e-14) return "pi";
  if (std::abs(phi - kTwoPi) < 1e-14) return "2pi";
  std::ostringstream os;
  os << std::setprecision(6) << phi;
  return os.str();
}

}  // namespace

bool Report::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

void th4_reference_target(PolyVec& P, PolyVec& Q) {
  const Poly r = Poly::variable(2, 0), z = Poly::variable(2, 1), one = Poly::constant(2, 1.0);
  P = {one * -1.5, z + one};
  Q = {r * r + one * 0.5, r * r * -1.0};
}

std::vector<CaseRequest> plan_cases(const ReproduceConfig& cfg) {
  static const std::vector<std::string> known = {"th3", "th4", "th6", "th7", "all"};
  if (std::find(known.begin(), known.end(), cfg.suite) == known.end())
    throw ConfigError("unknown suite '" + cfg.suite + "' (expected th3, th4, th6, th7 or all)");
  if (cfg.max_n < 1) throw ConfigError("--max-n must be >= 1");
  for (int m : cfg.m_values)
    if (m < 0) throw ConfigError("--m values must be >= 0");
  const double phi3 = cfg.phi.value_or(kPi / 2);
  const bool all = cfg.suite == "all";
  auto has_m = [&](int m) { return std::find(cfg.m_values.begin(), cfg.m_values.end(), m) != cfg.m_values.end(); };
  std::vector<CaseRequest> out;
  if (all || cfg.suite == "th3") {
    for (int m : cfg.m_values)
      for (int n = 1; n <= cfg.max_n; ++n) out.push_back({"prop10", n, m, phi3});
    for (int m : cfg.m_values)
      for (int n = 1; n <= cfg.max_n; ++n) out.push_back({"prop12", n, m, phi3});
    if (has_m(1))
      for (int n = 1; n <= cfg.max_n; ++n) out.push_back({"cor13", n, 1, phi3});
  }
  if (all || cfg.suite == "th4") out.push_back({"th4", 1, 1, kPi / 2});
  if (all || cfg.suite == "th6") {
    for (int m : cfg.m_values)
      for (int n = 1; n <= cfg.max_n; ++n) out.push_back({"prop16", n, m, kPi});
    for (int m : cfg.m_values)
      for (int n = 1; n <= cfg.max_n; ++n) out.push_back({"prop18", n, m, kPi});
  }
  if (all || cfg.suite == "th7") {
    for (int m : cfg.m_values)
      for (int n = 1; n <= cfg.max_n; ++n) out.push_back({"prop20", n, m, kTwoPi});
    if (has_m(0))
      for (int n = 1; n <= cfg.max_n; ++n) out.push_back({"prop21", n, 0, kTwoPi});
  }
  return out;
}

GeneratedCase generate(const CaseRequest& c, std::uint64_t seed) {
  GeneratorOptions opt;
  opt.seed = seed;
  if (c.generator == "prop10") return gen_prop10(c.n, c.m, c.phi, opt);
  if (c.generator == "prop16") return gen_prop16(c.n, c.m, opt);
  if (c.generator == "prop20") return gen_prop20(c.n, c.m, opt);
  if (c.generator == "prop12") return gen_prop12(c.n, c.m, c.phi, opt);
  if (c.generator == "cor13") return gen_cor13(c.n, c.phi, opt);
  if (c.generator == "prop18") return gen_prop18(c.n, c.m, opt);
  if (c.generator == "prop21") return gen_prop21(c.n, opt);
  if (c.generator == "th4") {
    PolyVec P, Q;
    th4_reference_target(P, Q);
    return gen_th4(P, Q, c.phi, 1e-3, opt);
  }
  throw ConfigError("unknown generator '" + c.generator + "'");
}

int verify_cycles(const SystemSpec& s, const std::vector<ZeroRecord>& zeros, double eps) {
  int ok = 0;
  for (const ZeroRecord& z : zeros) {
    if (!z.simple) continue;
    try {
      const CycleRecord c = refine_cycle(s, eps, z.nu);
      // the cycle must stay attached to its own zero, not drift to a neighbour
      bool own = c.converged;
      for (const ZeroRecord& other : zeros) {
        if (&other == &z) continue;
        double dist = 0.0;
        for (std::size_t k = 0; k < other.nu.size(); ++k)
          dist += (c.fixed_point[static_cast<Eigen::Index>(k)] - other.nu[k]) *
                  (c.fixed_point[static_cast<Eigen::Index>(k)] - other.nu[k]);
        if (std::sqrt(dist) <= c.distance) own = false;
      }
      ok += own;
    } catch (const FlowError&) {
    }
  }
  return ok;
}

ReportRow run_case(const CaseRequest& c, std::uint64_t seed, double verify_eps) {
  ReportRow row;
  row.generator = c.generator;
  row.n = c.n;
  row.m = c.m;
  row.phi = c.phi;
  row.expected = expected_count(c);
  row.upper_bound = second_order(c.generator) ? bound_second_order(c.n, c.m) : bound_first_order(c.n, c.m);
  try {
    const GeneratedCase gc = generate(c, seed);
    const PolyVec F = certified_system(gc);
    row.bezout = bezout_bound(F);
    const ZeroSearch zs = find_simple_zeros(F, gc.box);
    for (const ZeroRecord& z : zs.zeros) row.found += z.simple;
    // first-order counts are exact; second-order ones are lower bounds
    row.pass = second_order(c.generator) ? row.found >= row.expected && row.found <= row.upper_bound
                                         : row.found == row.expected;
    if (verify_eps > 0.0) {
      row.verified_cycles = verify_cycles(gc.spec, zs.zeros, verify_eps);
      if (row.verified_cycles < row.found) {
        row.pass = false;
        row.note = "unverified cycles";
      }
    }
  } catch (const Error& e) {
    row.pass = false;
    row.note = e.what();
  }
  return row;
}

Report reproduce(const ReproduceConfig& cfg) {
  Report rep;
  rep.suite = cfg.suite;
  rep.seed = cfg.seed;
  rep.verify_eps = cfg.verify_eps;
  const std::vector<CaseRequest> cases = plan_cases(cfg);
  const unsigned workers = std::max(1u, cfg.threads ? cfg.threads : std::thread::hardware_concurrency());
  rep.rows.resize(cases.size());
  for (std::size_t begin = 0; begin < cases.size(); begin += workers) {
    const std::size_t end = std::min(cases.size(), begin + workers);
    std::vector<std::future<ReportRow>> jobs;
    for (std::size_t k = begin; k < end; ++k)
      jobs.push_back(std::async(std::launch::async, run_case, cases[k], cfg.seed, cfg.verify_eps));
    for (std::size_t k = begin; k < end; ++k) rep.rows[k] = jobs[k - begin].get();
  }
  return rep;
}

void write_report_csv(std::ostream& os, const Report& r) {
  os << "# suite=" << r.suite << " seed=" << r.seed << " verify_eps=" << r.verify_eps << "\n";
  os << "generator,n,m,phi,expected,found,bezout,upper_bound,verified_cycles,pass,note\n";
  os << std::setprecision(17);
  for (const ReportRow& x : r.rows) {
    std::string note = x.note;
    std::replace(note.begin(), note.end(), ',', ';');
    os << x.generator << "," << x.n << "," << x.m << "," << x.phi << "," << x.expected << "," << x.found << ","
       << x.bezout << "," << x.upper_bound << "," << x.verified_cycles << "," << (x.pass ? "PASS" : "FAIL") << ","
       << note << "\n";
  }
}

void write_report_table(std::ostream& os, const Report& r) {
  os << "suite " << r.suite << ", seed " << r.seed;
  if (r.verify_eps > 0.0) os << ", cycles verified at eps = " << r.verify_eps;
  os << "\n\n";
  os << std::left << std::setw(10) << "generator" << std::right << std::setw(3) << "n" << std::setw(3) << "m"
     << std::setw(9) << "phi" << std::setw(10) << "expected" << std::setw(7) << "found" << std::setw(8) << "bezout"
     << std::setw(8) << "bound" << std::setw(8) << "cycles" << "  result\n";
  for (const ReportRow& x : r.rows) {
    os << std::left << std::setw(10) << x.generator << std::right << std::setw(3) << x.n << std::setw(3) << x.m
       << std::setw(9) << phi_label(x.phi) << std::setw(10) << x.expected << std::setw(7) << x.found << std::setw(8)
       << x.bezout << std::setw(8) << x.upper_bound << std::setw(8)
       << (x.verified_cycles < 0 ? std::string("-") : std::to_string(x.verified_cycles)) << "  "
       << (x.pass ? "PASS" : "FAIL");
    if (!x.note.empty()) os << "  (" << x.note << ")";
    os << "\n";
  }
  const auto passed = std::count_if(r.rows.begin(), r.rows.end(), [](const ReportRow& x) { return x.pass; });
  os << "\n" << passed << "/" << r.rows.size() << " cases pass\n";
}

}  // namespace avgcycles
