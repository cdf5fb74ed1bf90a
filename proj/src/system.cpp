#include "avgcycles/system.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "avgcycles/errors.hpp"
#include "avgcycles/trigkernel.hpp"

namespace avgcycles {

using nlohmann::json;

double CoefficientTable::get(const std::vector<int>& e) const {
  auto it = entries.find(e);
  return it == entries.end() ? 0.0 : it->second;
}

void CoefficientTable::set(const std::vector<int>& e, double v) {
  if (v == 0.0)
    entries.erase(e);
  else
    entries[e] = v;
}

CoefficientTable& FieldTables::component(int c) {
  if (c == 0) return x;
  if (c == 1) return y;
  return z.at(static_cast<std::size_t>(c - 2));
}

const CoefficientTable& FieldTables::component(int c) const {
  if (c == 0) return x;
  if (c == 1) return y;
  return z.at(static_cast<std::size_t>(c - 2));
}

SystemSpec SystemSpec::zero(int n, int m, int d, double phi, std::vector<double> mu) {
  SystemSpec s;
  s.n = n;
  s.m = m;
  s.d = d;
  s.phi = phi;
  s.mu = std::move(mu);
  for (auto* group : {&s.first, &s.second})
    for (auto& t : *group) t.z.assign(static_cast<std::size_t>(d), {});
  return s;
}

FieldTables& SystemSpec::tables(int order, Zone zone) {
  if (order != 1 && order != 2) throw InvalidArgument("order must be 1 or 2");
  return (order == 1 ? first : second)[zone_index(zone)];
}

const FieldTables& SystemSpec::tables(int order, Zone zone) const {
  if (order != 1 && order != 2) throw InvalidArgument("order must be 1 or 2");
  return (order == 1 ? first : second)[zone_index(zone)];
}

void SystemSpec::validate() const {
  if (n < 1) throw InvalidArgument("spec: n must be >= 1");
  if (d < 0 || m < 0 || m > d) throw InvalidArgument("spec: need 0 <= m <= d");
  if (!(phi > 0.0) || phi > trig::kTwoPi + 1e-15) throw InvalidArgument("spec: phi must lie in (0, 2pi]");
  if (static_cast<int>(mu.size()) != d) throw InvalidArgument("spec: mu must have length d");
  for (int k = 0; k < d; ++k) {
    if (!std::isfinite(mu[k])) throw InvalidArgument("spec: mu must be finite");
    if (k < m && mu[k] != 0.0) throw InvalidArgument("spec: mu_1..mu_m must be zero");
    if (k >= m && mu[k] == 0.0) throw InvalidArgument("spec: mu_omega must be nonzero for omega > m");
  }
  for (const auto* group : {&first, &second})
    for (const auto& t : *group) {
      if (static_cast<int>(t.z.size()) != d) throw InvalidArgument("spec: need d z-component tables");
      for (int c = 0; c < d + 2; ++c)
        for (const auto& [e, v] : t.component(c).entries) {
          if (static_cast<int>(e.size()) != d + 2)
            throw InvalidArgument("spec: exponent key must have d+2 entries");
          int sum = 0;
          for (int x : e) {
            if (x < 0) throw InvalidArgument("spec: negative exponent");
            sum += x;
          }
          if (sum > n) throw InvalidArgument("spec: term degree exceeds n");
          if (!std::isfinite(v)) throw InvalidArgument("spec: non-finite coefficient");
        }
    }
}

std::string CoefRef::to_string() const {
  static const char* first_names[] = {"a", "b"};
  static const char* second_names[] = {"alpha", "beta"};
  std::ostringstream os;
  if (component < 2)
    os << (order == 1 ? first_names : second_names)[component];
  else
    os << (order == 1 ? "c" : "gamma") << (component - 1);
  os << (zone == Zone::plus ? "+" : "-") << "[";
  for (std::size_t k = 0; k < exponent.size(); ++k) os << (k ? "," : "") << exponent[k];
  os << "]";
  return os.str();
}

double get_coef(const SystemSpec& s, const CoefRef& c) {
  return s.tables(c.order, c.zone).component(c.component).get(c.exponent);
}

void set_coef(SystemSpec& s, const CoefRef& c, double v) {
  s.tables(c.order, c.zone).component(c.component).set(c.exponent, v);
}

std::vector<std::vector<int>> all_exponents(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(d + 2), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == d + 2) {
      out.push_back(e);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[pos] = v;
      self(self, pos + 1, left - v);
    }
    e[pos] = 0;
  };
  rec(rec, 0, n);
  return out;
}

std::vector<CoefRef> all_coefficients(const SystemSpec& s, int order) {
  std::vector<CoefRef> out;
  const auto exps = all_exponents(s.n, s.d);
  for (Zone z : {Zone::plus, Zone::minus})
    for (int c = 0; c < s.d + 2; ++c)
      for (const auto& e : exps) out.push_back({order, z, c, e});
  return out;
}

SystemSpec random_spec(int n, int m, int d, double phi, std::uint64_t seed, bool second_order) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), mag(0.3, 1.2);
  std::vector<double> mu(static_cast<std::size_t>(d), 0.0);
  for (int k = m; k < d; ++k) mu[k] = (rng() % 2 ? 1.0 : -1.0) * mag(rng);
  SystemSpec s = SystemSpec::zero(n, m, d, phi, mu);
  for (int order : {1, 2}) {
    if (order == 2 && !second_order) break;
    for (const CoefRef& c : all_coefficients(s, order)) set_coef(s, c, coef(rng));
  }
  return s;
}

namespace {

std::vector<int> parse_key(const std::string& key, int d, const std::string& where) {
  std::vector<int> e;
  std::stringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      e.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(where + ": bad exponent key \"" + key + "\"");
    }
  }
  if (static_cast<int>(e.size()) != d + 2)
    throw ConfigError(where + ": exponent key \"" + key + "\" needs " + std::to_string(d + 2) + " entries");
  return e;
}

std::string make_key(const std::vector<int>& e) {
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) s += (k ? "," : "") + std::to_string(e[k]);
  return s;
}

CoefficientTable table_from_json(const json& j, int d, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  CoefficientTable t;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw ConfigError(where + "[" + k + "]: expected a number");
    t.set(parse_key(k, d, where), v.get<double>());
  }
  return t;
}

json table_to_json(const CoefficientTable& t) {
  json j = json::object();
  for (const auto& [e, v] : t.entries) j[make_key(e)] = v;
  return j;
}

const std::array<std::string, 3> kFirstNames = {"a", "b", "c"};
const std::array<std::string, 3> kSecondNames = {"alpha", "beta", "gamma"};

}  // namespace

SystemSpec spec_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("spec parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("spec: top level must be an object");
  static const std::set<std::string> top = {"n", "m", "d", "phi", "mu", "tables"};
  for (const auto& [k, v] : doc.items())
    if (!top.count(k)) throw ConfigError("spec: unknown field \"" + k + "\"");
  for (const char* req : {"n", "m", "d", "phi"})
    if (!doc.contains(req)) throw ConfigError(std::string("spec: missing field \"") + req + "\"");

  SystemSpec s;
  try {
    const int d = doc.at("d").get<int>();
    std::vector<double> mu = doc.contains("mu") ? doc.at("mu").get<std::vector<double>>() : std::vector<double>{};
    s = SystemSpec::zero(doc.at("n").get<int>(), doc.at("m").get<int>(), d, doc.at("phi").get<double>(), mu);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("spec: ") + e.what());
  }

  if (doc.contains("tables")) {
    const json& tables = doc.at("tables");
    if (!tables.is_object()) throw ConfigError("spec.tables: expected an object");
    for (const auto& [key, val] : tables.items()) {
      const auto us = key.rfind('_');
      const std::string base = us == std::string::npos ? key : key.substr(0, us);
      const std::string side = us == std::string::npos ? "" : key.substr(us + 1);
      if (side != "plus" && side != "minus") throw ConfigError("spec.tables: unknown field \"" + key + "\"");
      const Zone zone = side == "plus" ? Zone::plus : Zone::minus;
      int order = 0, comp = -1;
      for (int c = 0; c < 3; ++c) {
        if (base == kFirstNames[c]) order = 1, comp = c;
        if (base == kSecondNames[c]) order = 2, comp = c;
      }
      if (order == 0) throw ConfigError("spec.tables: unknown field \"" + key + "\"");
      const std::string where = "spec.tables." + key;
      FieldTables& ft = s.tables(order, zone);
      if (comp < 2) {
        ft.component(comp) = table_from_json(val, s.d, where);
      } else {
        if (!val.is_array() || static_cast<int>(val.size()) != s.d)
          throw ConfigError(where + ": expected an array of d tables");
        for (int l = 0; l < s.d; ++l)
          ft.z[l] = table_from_json(val[l], s.d, where + "[" + std::to_string(l) + "]");
      }
    }
  }
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

SystemSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_json_text(ss.str());
}

std::string spec_to_json_text(const SystemSpec& s) {
  json doc;
  doc["n"] = s.n;
  doc["m"] = s.m;
  doc["d"] = s.d;
  doc["phi"] = s.phi;
  doc["mu"] = s.mu;
  json tables = json::object();
  for (int order : {1, 2})
    for (Zone zone : {Zone::plus, Zone::minus}) {
      const auto& names = order == 1 ? kFirstNames : kSecondNames;
      const std::string side = zone == Zone::plus ? "_plus" : "_minus";
      const FieldTables& ft = s.tables(order, zone);
      tables[names[0] + side] = table_to_json(ft.x);
      tables[names[1] + side] = table_to_json(ft.y);
      json arr = json::array();
      for (const auto& t : ft.z) arr.push_back(table_to_json(t));
      tables[names[2] + side] = arr;
    }
  doc["tables"] = tables;
  return doc.dump(2);
}

void save_spec(const SystemSpec& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << spec_to_json_text(s) << "\n";
}

}  // namespace avgcycles
