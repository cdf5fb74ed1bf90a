#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace avgcycles {

/// Exponent multi-index (i, j, k_1, ..., k_d) -> lambda.
struct CoefficientTable {
  std::map<std::vector<int>, double> entries;

  double get(const std::vector<int>& e) const;
  void set(const std::vector<int>& e, double v);
  bool empty() const { return entries.empty(); }
};

/// One zone's worth of a polynomial field: the x, y and z_1..z_d components.
struct FieldTables {
  CoefficientTable x;               // a or alpha
  CoefficientTable y;               // b or beta
  std::vector<CoefficientTable> z;  // c_l or gamma_l

  /// Component 0 = x, 1 = y, 2 + l = z_{l+1}.
  CoefficientTable& component(int c);
  const CoefficientTable& component(int c) const;
};

enum class Zone { plus = 0, minus = 1 };
inline int zone_index(Zone z) { return static_cast<int>(z); }

struct SystemSpec {
  int n = 1;
  int m = 0;
  int d = 0;
  double phi = 0.0;
  std::vector<double> mu;
  /// first[zone] holds a, b, c_l; second[zone] holds alpha, beta, gamma_l.
  std::array<FieldTables, 2> first;
  std::array<FieldTables, 2> second;

  /// Empty tables with consistent shape.
  static SystemSpec zero(int n, int m, int d, double phi, std::vector<double> mu);

  FieldTables& tables(int order, Zone zone);
  const FieldTables& tables(int order, Zone zone) const;

  /// Throws InvalidArgument on any violated invariant.
  void validate() const;
};

/// A single coefficient slot of a spec.
struct CoefRef {
  int order = 1;       // 1 or 2
  Zone zone = Zone::plus;
  int component = 0;   // 0 = x, 1 = y, 2 + l = z_{l+1}
  std::vector<int> exponent;

  auto operator<=>(const CoefRef&) const = default;
  std::string to_string() const;
};

double get_coef(const SystemSpec& s, const CoefRef& c);
void set_coef(SystemSpec& s, const CoefRef& c, double v);

/// All exponent vectors (i, j, k_1..k_d) of total degree <= n.
std::vector<std::vector<int>> all_exponents(int n, int d);

/// Every coefficient slot of the given order.
std::vector<CoefRef> all_coefficients(const SystemSpec& s, int order);

/// Seeded random spec: every coefficient drawn uniformly from [-1, 1], tail
/// eigenvalues from +-[0.3, 1.2].
SystemSpec random_spec(int n, int m, int d, double phi, std::uint64_t seed, bool second_order = true);

SystemSpec spec_from_json_text(const std::string& text);
SystemSpec load_spec(const std::filesystem::path& path);
std::string spec_to_json_text(const SystemSpec& s);
void save_spec(const SystemSpec& s, const std::filesystem::path& path);

}  // namespace avgcycles
