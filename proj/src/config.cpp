#include "dzak/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "dzak/error.hpp"
#include "dzak/norm_report.hpp"

namespace dzak {

namespace {

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::Simulate, "simulate"},       {Command::VerifyLinear, "verify-linear"},
    {Command::VerifyBilinear, "verify-bilinear"}, {Command::Counterexample, "counterexample"},
    {Command::Norms, "norms"},             {Command::Picard, "picard"},
};

[[noreturn]] void config_fail(int detail, int line, const std::string& what) {
  fail(ErrorDomain::Config, detail, line > 0 ? "line " + std::to_string(line) + ": " + what : what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && !std::isnan(out);  // "inf" allowed (p1 = inf)
}

Value parse_value(const KeySpec& k, const std::string& raw, int line) {
  auto bad = [&]() -> Value {
    config_fail(config_errc::type, line, "key '" + k.name + "': '" + raw + "' is not a valid value of its type");
  };
  switch (k.type) {
    case ValueType::Int: {
      long long v = 0;
      auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
      if (ec != std::errc() || p != raw.data() + raw.size()) return bad();
      return v;
    }
    case ValueType::UInt: {
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
      if (ec != std::errc() || p != raw.data() + raw.size()) return bad();
      return v;
    }
    case ValueType::Float: {
      double v = 0;
      if (!parse_double(raw, v)) return bad();
      return v;
    }
    case ValueType::Bool:
      if (raw == "true") return true;
      if (raw == "false") return false;
      return bad();
    case ValueType::Enum:
      if (std::find(k.choices.begin(), k.choices.end(), raw) == k.choices.end()) return bad();
      return raw;
    case ValueType::FloatList: {
      std::vector<double> out;
      std::stringstream ss(raw);
      std::string item;
      while (std::getline(ss, item, ',')) {
        double v = 0;
        if (!parse_double(trim(item), v)) return bad();
        out.push_back(v);
      }
      if (out.empty()) return bad();
      return out;
    }
  }
  return bad();
}

std::string format_value(const Value& v) {
  struct {
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& x) const { return x; }
    std::string operator()(const std::vector<double>& x) const {
      std::string s;
      for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + format_double(x[i]);
      return s;
    }
  } fmt;
  return std::visit(fmt, v);
}

const SectionSpec& section_spec(const std::string& name) {
  for (const auto& s : config_schema())
    if (s.name == name) return s;
  fail(ErrorDomain::Config, config_errc::syntax, "no schema section " + name);
}

bool is_pow2(long long v) { return v > 0 && (v & (v - 1)) == 0; }

void check_constraints(const RunConfig& c) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) config_fail(config_errc::constraint, 0, what);
  };
  auto positive = [&](const std::string& k) { need(c.get_double(k) > 0.0 && std::isfinite(c.get_double(k)), k + " must be positive and finite"); };
  auto lattice = [&](const std::string& k) { need(is_pow2(c.get_int(k)) && c.get_int(k) >= 4, k + " must be a power of two >= 4"); };
  auto dim = [&] { need(c.get_int("d") == 3 || c.get_int("d") == 4, "d must be 3 or 4"); };
  switch (c.command) {
    case Command::Simulate:
      dim();
      lattice("n"), lattice("nd");
      for (auto k : {"box", "box_d", "dt", "horizon", "drift_tol"}) positive(k);
      need(c.get_int("cadence") >= 1, "cadence must be >= 1");
      need(std::llround(c.get_double("horizon") / c.get_double("dt")) % c.get_int("cadence") == 0,
           "cadence must divide the step count horizon/dt");
      need(c.get_double("amplitude") >= 0.0, "amplitude must be >= 0");
      break;
    case Command::Picard: {
      dim();
      lattice("n"), lattice("nd");
      for (auto k : {"box", "box_d", "horizon", "strang_tol"}) positive(k);
      const double d = static_cast<double>(c.get_int("d"));
      need(c.get_double("s") > 0.5 * (d - 2.0), "s must exceed (d-2)/2 = " + format_double(0.5 * (d - 2.0)));
      need(c.get_double("sprime") > 0.5, "sprime must exceed 1/2");
      need(c.get_int("iterations") >= 4, "iterations must be >= 4 (three successive comparisons)");
      need(c.get_int("steps") >= 3 && c.get_int("steps") % 2 == 1, "steps must be odd and >= 3");
      need(c.get_int("strang_steps") >= 1, "strang_steps must be >= 1");
      break;
    }
    case Command::VerifyLinear:
      dim();
      lattice("n");
      need(c.get_int("nt") >= 2, "nt must be >= 2");
      need(c.get_int("trials") >= 0, "trials must be >= 0");
      need(c.get_int("direction") >= 0 && c.get_int("direction") < c.get_int("d") - 1, "direction must index a transverse axis");
      for (double N : c.get_list("Ns")) need(N >= 1.0 && is_pow2(static_cast<long long>(N)) && N == std::floor(N), "Ns must be powers of two");
      need(c.get_list("Ns").size() >= 2, "Ns needs at least two values");
      break;
    case Command::VerifyBilinear:
      dim();
      need(is_pow2(static_cast<long long>(c.get_double("K"))) && c.get_double("K") >= 4.0, "K must be a power of two >= 4");
      need(c.get_double("low") >= 1.0 && is_pow2(static_cast<long long>(c.get_double("low"))), "low must be a power of two");
      need(c.get_double("T") > 0.0 && c.get_double("T") <= 1.0, "T must lie in (0, 1]");
      need(c.get_int("trials") >= 0 && c.get_int("nt") >= 2, "trials >= 0 and nt >= 2 required");
      need(c.get_double("t_half_T") > 0.0 && c.get_double("t_half_T") <= 0.5, "t_half_T must lie in (0, 1/2]");
      break;
    case Command::Counterexample:
      need(c.get_int("d") >= 2, "d must be >= 2");
      need(is_pow2(c.get_int("N_min")) && is_pow2(c.get_int("N_max")), "N_min and N_max must be powers of two");
      need(c.get_int("N_max") >= c.get_int("N_min"), "N_max must be >= N_min");
      need(c.get_int("sign") == 1 || c.get_int("sign") == -1, "sign must be 1 or -1");
      need(c.get_double("p1") >= 1.0 && c.get_double("p2") >= 1.0, "p1 and p2 must be >= 1");
      need(c.get_double("rel_tol") > 0.0 && c.get_double("rel_tol") <= 0.05, "rel_tol must lie in (0, 0.05]");
      break;
    case Command::Norms:
      dim();
      lattice("n");
      need(c.get_int("nt") >= 2, "nt must be >= 2");
      positive("T"), positive("box");
      need(c.get_double("N") >= 1.0 && is_pow2(static_cast<long long>(c.get_double("N"))), "N must be a power of two");
      break;
  }
}

}  // namespace

const char* command_name(Command c) {
  for (auto [k, n] : kCommands)
    if (k == c) return n;
  return "?";
}

Command parse_command(const std::string& name) {
  for (auto [k, n] : kCommands)
    if (name == n) return k;
  fail(ErrorDomain::Config, config_errc::syntax, "unknown command '" + name + "'");
}

const std::vector<SectionSpec>& config_schema() {
  using V = ValueType;
  static const std::vector<SectionSpec> schema = {
      {"run", {{"seed", V::UInt, "1", {}, "base seed; --seed overrides"}}},
      {"simulate",
       {{"d", V::Int, "3", {}, "spatial dimension (3 or 4)"},
        {"n", V::Int, "64", {}, "points per transverse axis"},
        {"nd", V::Int, "32", {}, "points along x_d"},
        {"box", V::Float, "24", {}, "transverse period"},
        {"box_d", V::Float, "24", {}, "x_d period"},
        {"dt", V::Float, "0.001", {}, "time step"},
        {"horizon", V::Float, "0.5", {}, "final time"},
        {"cadence", V::Int, "50", {}, "steps between snapshots"},
        {"nonlinearity", V::Enum, "real-part", {"real-part", "dropped"}, "Re(N) E or N E"},
        {"dealias", V::Bool, "true", {}, "2/3 rule on |E|^2"},
        {"coupling", V::Float, "1", {}, "scale of both nonlinear terms"},
        {"data", V::Enum, "packet", {"packet", "zero"}, "initial data"},
        {"amplitude", V::Float, "0.5", {}, "data amplitude"},
        {"s", V::Float, "1", {}, "diagnostic regularity"},
        {"sprime", V::Float, "0.75", {}, "diagnostic regularity along x_d"},
        {"drift_tol", V::Float, "1e-10", {}, "allowed relative drift of ||E||_2"},
        {"snapshot", V::Bool, "true", {}, "write the final state"}}},
      {"picard",
       {{"d", V::Int, "3", {}, "spatial dimension (3 or 4)"},
        {"n", V::Int, "32", {}, "points per transverse axis"},
        {"nd", V::Int, "16", {}, "points along x_d"},
        {"box", V::Float, "16", {}, "transverse period"},
        {"box_d", V::Float, "16", {}, "x_d period"},
        {"horizon", V::Float, "0.25", {}, "T"},
        {"steps", V::Int, "65", {}, "quadrature samples on [0, T]"},
        {"iterations", V::Int, "5", {}, "applications of the Duhamel map"},
        {"amplitude", V::Float, "0.2", {}, "data amplitude"},
        {"s", V::Float, "1", {}, "regularity (must exceed (d-2)/2)"},
        {"sprime", V::Float, "0.75", {}, "regularity along x_d (must exceed 1/2)"},
        {"nonlinearity", V::Enum, "real-part", {"real-part", "dropped"}, "Re(N) E or N E"},
        {"dealias", V::Bool, "true", {}, "2/3 rule on |E|^2"},
        {"coupling", V::Float, "1", {}, "scale of both nonlinear terms"},
        {"block_norms", V::Bool, "false", {}, "also report F / W norms of the differences"},
        {"compare_strang", V::Bool, "true", {}, "compare the last iterate with a Strang run"},
        {"strang_steps", V::Int, "1024", {}, "Strang steps on [0, T]"},
        {"strang_tol", V::Float, "1e-4", {}, "allowed L^2 distance to the Strang solution"}}},
      {"verify-linear",
       {{"estimate", V::Enum, "local-smoothing", {"local-smoothing", "maximal", "strichartz", "inhomogeneous"}, "estimate"},
        {"d", V::Int, "4", {}, "dimension (3 or 4)"},
        {"Ns", V::FloatList, "4,8,16,32,64", {}, "dyadic frequencies"},
        {"trials", V::Int, "10", {}, "random trials per N"},
        {"presets", V::Bool, "true", {}, "add the adversarial presets"},
        {"n", V::Int, "64", {}, "points per transverse axis"},
        {"nt", V::Int, "128", {}, "time samples"},
        {"direction", V::Int, "0", {}, "transverse index of e"},
        {"spacing_ref", V::Float, "1.0471975511965976", {}, "lattice spacing at N = 1"},
        {"window_ref", V::Float, "4", {}, "localization width at N = 1"},
        {"horizon_ref", V::Float, "5", {}, "time horizon at N = 1"},
        {"slope_tol", V::Float, "0.15", {}, "local smoothing: |slope + 1/2| bound"},
        {"spread_max", V::Float, "3", {}, "max/min worst ratio bound"},
        {"fit_tol", V::Float, "0.2", {}, "maximal function: weighted slope bound"}}},
      {"verify-bilinear",
       {{"which", V::Enum, "both", {"a1", "b1", "both"}, "estimate(s)"},
        {"d", V::Int, "3", {}, "dimension (3 or 4)"},
        {"K", V::Float, "8", {}, "large frequency; the sweep runs K and 2K"},
        {"low", V::Float, "1", {}, "small frequency"},
        {"trials", V::Int, "2", {}, "random trials per case"},
        {"T", V::Float, "1", {}, "horizon, data on [-T, T]"},
        {"nt", V::Int, "512", {}, "time samples"},
        {"window", V::Float, "0.5", {}, "localization width of random data"},
        {"presets", V::Bool, "true", {}, "add the adversarial presets"},
        {"slope_tol", V::Float, "0.2", {}, "bound on |log2 worst-ratio slope|"},
        {"t_half", V::Bool, "true", {}, "run the T^{1/2} scaling check"},
        {"t_half_T", V::Float, "0.25", {}, "base horizon of the scaling check (T and 2T)"},
        {"t_half_tol", V::Float, "1e-6", {}, "relative tolerance of the scaling check"}}},
      {"counterexample",
       {{"d", V::Int, "3", {}, "dimension; points live in R^{d+1}"},
        {"N_min", V::Int, "16", {}, "smallest N (>= 16)"},
        {"N_max", V::Int, "1024", {}, "largest N"},
        {"s", V::Float, "1", {}, "regularity"},
        {"sprime", V::Float, "0.75", {}, "regularity along x_d"},
        {"p1", V::Float, "2", {}, "modulation exponent of the E spaces"},
        {"b1", V::Float, "0.5", {}, "modulation weight of u"},
        {"b2", V::Float, "0.5", {}, "modulation weight of v"},
        {"p2", V::Float, "2", {}, "modulation exponent of the W spaces"},
        {"sign", V::Int, "1", {}, "choice of a_N^+ (1) or a_N^- (-1)"},
        {"rel_tol", V::Float, "0.02", {}, "Monte Carlo relative standard error target"},
        {"part1", V::Bool, "true", {}, "run part 1"},
        {"part2", V::Bool, "true", {}, "run part 2 (needs 1 < p1 < inf)"},
        {"slab_law", V::Bool, "true", {}, "slab measures at the largest N"},
        {"norm_lo", V::Float, "0.3333333333333333", {}, "lower bracket of the input norms"},
        {"norm_hi", V::Float, "3", {}, "upper bracket of the input norms"},
        {"r2_min", V::Float, "0.99", {}, "part 1: R^2 bound of the linear fit"},
        {"exponent_tol", V::Float, "0.2", {}, "part 2: relative tolerance of the exponent"},
        {"slab_tol", V::Float, "0.1", {}, "slab law: allowed max/min - 1 at radius 1"}}},
      {"norms",
       {{"d", V::Int, "3", {}, "dimension (3 or 4)"},
        {"n", V::Int, "64", {}, "points per transverse axis"},
        {"box", V::Float, "6.283185307179586", {}, "transverse period"},
        {"nt", V::Int, "32", {}, "time samples"},
        {"T", V::Float, "0.05", {}, "free flow on [-T, T]"},
        {"N", V::Float, "8", {}, "dyadic frequency of the data"},
        {"data", V::Enum, "random", {"random", "packet"}, "data at frequency N"}}},
  };
  return schema;
}

std::uint64_t RunConfig::seed() const { return std::get<std::uint64_t>(run.at("seed")); }

long long RunConfig::get_int(const std::string& key) const {
  auto it = params.find(key);
  require(it != params.end(), ErrorDomain::Config, config_errc::syntax, "missing key " + key);
  return std::get<long long>(it->second);
}

double RunConfig::get_double(const std::string& key) const {
  auto it = params.find(key);
  require(it != params.end(), ErrorDomain::Config, config_errc::syntax, "missing key " + key);
  if (auto p = std::get_if<long long>(&it->second)) return static_cast<double>(*p);
  return std::get<double>(it->second);
}

bool RunConfig::get_bool(const std::string& key) const { return std::get<bool>(params.at(key)); }

const std::string& RunConfig::get_enum(const std::string& key) const { return std::get<std::string>(params.at(key)); }

const std::vector<double>& RunConfig::get_list(const std::string& key) const {
  return std::get<std::vector<double>>(params.at(key));
}

std::string RunConfig::effective_text() const {
  std::string out = "[run]\n";
  for (const auto& k : section_spec("run").keys) out += k.name + " = " + format_value(run.at(k.name)) + "\n";
  const std::string sec = command_name(command);
  out += "\n[" + sec + "]\n";
  for (const auto& k : section_spec(sec).keys) out += k.name + " = " + format_value(params.at(k.name)) + "\n";
  return out;
}

RunConfig parse_config(const std::string& text, Command command) {
  RunConfig c;
  c.command = command;
  const std::string own = command_name(command);
  std::map<std::string, int> seen_run, seen_own;
  std::string section = "run";
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') config_fail(config_errc::syntax, line, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      const bool known = std::any_of(config_schema().begin(), config_schema().end(),
                                     [&](const SectionSpec& x) { return x.name == section; });
      if (!known) config_fail(config_errc::syntax, line, "unknown section [" + section + "]");
      if (section != "run" && section != own)
        config_fail(config_errc::syntax, line, "section [" + section + "] does not apply to command " + own);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) config_fail(config_errc::syntax, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
    if (key.empty()) config_fail(config_errc::syntax, line, "empty key");
    const SectionSpec& spec = section_spec(section);
    const auto k = std::find_if(spec.keys.begin(), spec.keys.end(), [&](const KeySpec& x) { return x.name == key; });
    if (k == spec.keys.end()) config_fail(config_errc::syntax, line, "unknown key '" + key + "' in [" + section + "]");
    auto& seen = section == "run" ? seen_run : seen_own;
    if (auto it = seen.find(key); it != seen.end())
      config_fail(config_errc::syntax, line,
                  "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
    seen[key] = line;
    (section == "run" ? c.run : c.params)[key] = parse_value(*k, val, line);
  }
  for (const auto& k : section_spec("run").keys)
    if (!c.run.count(k.name)) c.run[k.name] = parse_value(k, k.default_value, 0);
  for (const auto& k : section_spec(own).keys)
    if (!c.params.count(k.name)) c.params[k.name] = parse_value(k, k.default_value, 0);
  check_constraints(c);
  return c;
}

}  // namespace dzak
