// avgcycles: averaged functions, zeros, cycle verification and the
// reproduction matrix from the command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "avgcycles/avgcore.hpp"
#include "avgcycles/errors.hpp"
#include "avgcycles/flowsim.hpp"
#include "avgcycles/generators.hpp"
#include "avgcycles/report.hpp"
#include "avgcycles/rootfind.hpp"
#include "avgcycles/trigkernel.hpp"

namespace fs = std::filesystem;
using namespace avgcycles;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

// Where the system under study comes from: a spec file or a named generator.
struct Source {
  std::string spec_path;
  std::string generator;
  int n = 1;
  int m = 0;
  std::optional<double> phi;
  std::uint64_t seed = 1;
  int order = 0;  // 0 = 2 when f1 vanishes identically, else 1
  std::string box;
  bool literal_gamma = false;
  std::string out_dir = ".";
};

struct Loaded {
  SystemSpec spec;
  std::optional<GeneratedCase> generated;
  int order = 1;
  PolyVec system;  // f1, or r f2
  SearchBox box;
};

void add_source_options(CLI::App* cmd, Source& src) {
  cmd->add_option("--spec", src.spec_path, "system spec (JSON)");
  cmd->add_option("--generator", src.generator, "prop10, prop12, cor13, prop16, prop18, prop20, prop21 or th4");
  cmd->add_option("--n", src.n, "polynomial degree for --generator");
  cmd->add_option("--m", src.m, "number of averaged tail variables for --generator");
  cmd->add_option("--phi", src.phi, "switching angle (radians)");
  cmd->add_option("--seed", src.seed, "RNG seed");
  cmd->add_option("--order", src.order, "averaging order 1 or 2 (default: 2 if f1 == 0)")->check(CLI::Range(0, 2));
  cmd->add_option("--box", src.box, "search box lo:hi[:seeds] per variable, comma separated");
  cmd->add_flag("--literal-gamma", src.literal_gamma, "use e^{-s} weights in gamma as printed");
  cmd->add_option("--out-dir", src.out_dir, "output directory");
}

SearchBox parse_box(const std::string& text, int vars) {
  SearchBox box;
  std::stringstream ss(text);
  std::string axis;
  while (std::getline(ss, axis, ',')) {
    std::vector<std::string> parts;
    std::stringstream as(axis);
    std::string p;
    while (std::getline(as, p, ':')) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw ConfigError("--box: axis '" + axis + "' is not lo:hi[:seeds]");
    try {
      box.lo.push_back(std::stod(parts[0]));
      box.hi.push_back(std::stod(parts[1]));
      box.grid.push_back(parts.size() == 3 ? std::stoi(parts[2]) : 15);
    } catch (const std::exception&) {
      throw ConfigError("--box: cannot parse axis '" + axis + "'");
    }
  }
  if (static_cast<int>(box.lo.size()) != vars)
    throw ConfigError("--box: expected " + std::to_string(vars) + " axes, got " + std::to_string(box.lo.size()));
  return box;
}

Loaded load(const Source& src) {
  if (src.spec_path.empty() == src.generator.empty()) throw ConfigError("give exactly one of --spec and --generator");
  Loaded out;
  AvgOptions avg;
  avg.gamma = src.literal_gamma ? GammaConvention::literal_text : GammaConvention::derived;
  avg.f1_zero_tol = 1e-9;
  if (!src.generator.empty()) {
    const double phi = src.phi.value_or(src.generator == "prop16" || src.generator == "prop18" ? trig::kPi
                                        : src.generator == "prop20" || src.generator == "prop21" ? trig::kTwoPi
                                                                                                   : trig::kPi / 2);
    out.generated = generate({src.generator, src.n, src.m, phi}, src.seed);
    out.spec = out.generated->spec;
    out.order = out.generated->order;
    out.box = out.generated->box;
  } else {
    out.spec = load_spec(src.spec_path);
    out.box = default_search_box(out.spec.m);
    PolyVec f1 = build_f1(out.spec);
    double worst = 0.0;
    for (const Poly& p : f1) worst = std::max(worst, p.max_abs_coeff());
    out.order = worst <= avg.f1_zero_tol ? 2 : 1;
  }
  if (src.order) out.order = src.order;
  if (!src.box.empty()) out.box = parse_box(src.box, out.spec.m + 1);
  out.system = out.order == 1 ? build_f1(out.spec) : build_f2(out.spec, avg);
  return out;
}

fs::path prepare(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw ConfigError("cannot write " + p.string());
  return os;
}

nlohmann::json poly_json(const Poly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exponent", e}, {"coef", c}});
  return terms;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(flag + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

int cmd_averaged(const Source& src) {
  const Loaded L = load(src);
  AvgOptions avg;
  avg.gamma = src.literal_gamma ? GammaConvention::literal_text : GammaConvention::derived;
  avg.f1_zero_tol = 1e-9;
  const AveragedSystem A = average(L.spec, false, avg);
  std::optional<PolyVec> rf2;
  try {
    rf2 = build_f2(L.spec, avg);
  } catch (const F1NotZero&) {
  }
  const fs::path dir = prepare(src.out_dir);
  std::ostringstream text;
  for (std::size_t l = 0; l < A.f1.size(); ++l) text << "f1_" << l << " = " << A.f1[l].to_string() << "\n";
  if (rf2)
    for (std::size_t l = 0; l < rf2->size(); ++l) text << "r*f2_" << l << " = " << (*rf2)[l].to_string() << "\n";
  else
    text << "f2 not defined: f1 is not identically zero\n";
  std::cout << text.str();
  open_out(dir / "averaged.txt") << text.str();

  nlohmann::json j;
  j["seed"] = src.seed;
  j["variables"] = nlohmann::json::array();
  for (int k = 0; k <= L.spec.m; ++k) j["variables"].push_back(variable_name(k));
  j["f1"] = nlohmann::json::array();
  for (const Poly& p : A.f1) j["f1"].push_back(poly_json(p));
  if (rf2) {
    j["r_f2"] = nlohmann::json::array();
    for (const Poly& p : *rf2) j["r_f2"].push_back(poly_json(p));
  }
  open_out(dir / "averaged.json") << j.dump(2) << "\n";
  return 0;
}

int cmd_zeros(const Source& src) {
  const Loaded L = load(src);
  const ZeroSearch zs = find_simple_zeros(L.system, L.box);
  const fs::path dir = prepare(src.out_dir);
  std::ofstream os = open_out(dir / "zeros.csv");
  os << "# seed=" << src.seed << " order=" << L.order << "\n";
  write_zero_csv(os, zs.zeros);
  int simple = 0;
  for (const auto& z : zs.zeros) simple += z.simple;
  std::cout << "order " << L.order << ": " << zs.zeros.size() << " zeros, " << simple << " simple; bezout "
            << bezout_bound(L.system) << "; " << zs.seeds << " seeds (" << zs.seeds_hit_r_min << " hit r_min, "
            << zs.seeds_diverged << " diverged)\n";
  if (!zs.zeros.empty()) write_zero_csv(std::cout, zs.zeros);
  if (L.generated) {
    const bool ok = L.order == 1 ? simple == L.generated->expected
                                 : simple >= L.generated->expected && simple <= L.generated->upper_bound;
    std::cout << "expected " << L.generated->expected << ": " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : kExitFail;
  }
  return simple == static_cast<int>(zs.zeros.size()) ? 0 : kExitFail;
}

int cmd_verify(const Source& src, const std::string& sweep_text) {
  const Loaded L = load(src);
  const std::vector<double> sweep = parse_list(sweep_text, "--eps-sweep");
  const ZeroSearch zs = find_simple_zeros(L.system, L.box);
  std::vector<CycleRecord> records;
  bool ok = true;
  for (const ZeroRecord& z : zs.zeros) {
    if (!z.simple) continue;
    std::vector<double> eps, dist;
    for (double e : sweep) {
      try {
        const CycleRecord c = refine_cycle(L.spec, e, z.nu);
        records.push_back(c);
        eps.push_back(e);
        dist.push_back(std::max(c.distance, 1e-300));
      } catch (const FlowError& err) {
        ok = false;
        std::cout << "zero";
        for (double v : z.nu) std::cout << " " << v;
        std::cout << ": " << err.what() << "\n";
      }
    }
    if (eps.size() >= 2) {
      std::cout << "zero";
      for (double v : z.nu) std::cout << " " << v;
      std::cout << ": distance slope " << loglog_slope(eps, dist) << " over " << eps.size() << " eps values\n";
    }
  }
  const fs::path dir = prepare(src.out_dir);
  std::ofstream os = open_out(dir / "cycles.csv");
  os << "# seed=" << src.seed << " order=" << L.order << "\n";
  write_cycle_csv(os, records);
  std::cout << records.size() << " cycle records, " << (ok ? "all converged" : "some failed") << "\n";
  return ok && !records.empty() ? 0 : kExitFail;
}

int cmd_reproduce(const ReproduceConfig& cfg, const std::string& out_dir) {
  const Report rep = reproduce(cfg);
  const fs::path dir = prepare(out_dir);
  std::ofstream csv = open_out(dir / "report.csv");
  write_report_csv(csv, rep);
  std::ostringstream table;
  write_report_table(table, rep);
  open_out(dir / "report.txt") << table.str();
  std::cout << table.str();
  return rep.all_pass() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Averaged functions and limit cycles of discontinuous piecewise polynomial systems"};
  app.require_subcommand(1);

  Source src;
  auto* averaged = app.add_subcommand("averaged", "write f1 and r*f2");
  add_source_options(averaged, src);
  auto* zeros = app.add_subcommand("zeros", "locate and certify simple zeros");
  add_source_options(zeros, src);
  auto* verify = app.add_subcommand("verify", "continue zeros to limit cycles over an eps sweep");
  add_source_options(verify, src);
  std::string sweep = "1e-2,5e-3,2.5e-3,1.25e-3,1e-3";
  verify->add_option("--eps-sweep", sweep, "comma-separated eps values");

  ReproduceConfig cfg;
  std::string m_list = "0,1";
  std::string out_dir = ".";
  std::optional<double> phi;
  auto* repro = app.add_subcommand("reproduce", "run the generator matrix and write the report");
  repro->add_option("--suite", cfg.suite, "th3, th4, th6, th7 or all");
  repro->add_option("--max-n", cfg.max_n, "largest degree n");
  repro->add_option("--m", m_list, "comma-separated m values");
  repro->add_option("--phi", phi, "switching angle for th3 (default pi/2)");
  repro->add_option("--seed", cfg.seed, "RNG seed");
  repro->add_option("--verify-eps", cfg.verify_eps, "eps for cycle verification (0 skips)");
  repro->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  repro->add_option("--out-dir", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (averaged->parsed()) return cmd_averaged(src);
    if (zeros->parsed()) return cmd_zeros(src);
    if (verify->parsed()) return cmd_verify(src, sweep);
    cfg.phi = phi;
    cfg.m_values.clear();
    for (double v : parse_list(m_list, "--m")) cfg.m_values.push_back(static_cast<int>(v));
    return cmd_reproduce(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
