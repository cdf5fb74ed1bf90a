#pragma once

// The reproduction matrix: every generator run for a range of (n, m), its
// zeros certified against the expected count and optionally continued to
// limit cycles of the full discontinuous flow.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "avgcycles/generators.hpp"

namespace avgcycles {

struct ReportRow {
  std::string generator;
  int n = 0;
  int m = 0;
  double phi = 0.0;
  long long expected = 0;
  long long found = 0;
  long long bezout = 0;
  long long upper_bound = 0;
  int verified_cycles = -1;  // -1 when verification was not requested
  bool pass = false;
  std::string note;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  double verify_eps = 0.0;
  std::vector<ReportRow> rows;

  bool all_pass() const;
};

struct ReproduceConfig {
  std::string suite = "all";  // th3, th4, th6, th7 or all
  int max_n = 2;
  std::vector<int> m_values = {0, 1};
  std::optional<double> phi;  // th3 angle; pi/2 when unset
  std::uint64_t seed = 1;
  double verify_eps = 0.0;    // 0 skips the flow verification
  unsigned threads = 0;       // 0 = hardware concurrency
};

struct CaseRequest {
  std::string generator;
  int n = 0;
  int m = 0;
  double phi = 0.0;
};

/// Cases of a suite, in report order. Throws ConfigError on an unknown suite.
std::vector<CaseRequest> plan_cases(const ReproduceConfig& cfg);

/// Runs one case. Generator failures become failing rows, never exceptions.
ReportRow run_case(const CaseRequest& c, std::uint64_t seed, double verify_eps);

/// Runs every planned case in parallel and assembles the rows in order.
Report reproduce(const ReproduceConfig& cfg);

/// Generates a case by name (prop10, prop12, ...); gen_th4 uses the built-in
/// two-root target.
GeneratedCase generate(const CaseRequest& c, std::uint64_t seed);

/// The r P + Q pair with roots (1, 0) and (1/2, -1/2) used by the th4 rows.
void th4_reference_target(PolyVec& P, PolyVec& Q);

/// Number of zeros whose predicted cycle converges under refine_cycle at eps.
int verify_cycles(const SystemSpec& s, const std::vector<ZeroRecord>& zeros, double eps);

void write_report_csv(std::ostream& os, const Report& r);
void write_report_table(std::ostream& os, const Report& r);

}  // namespace avgcycles
