#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace dzak {

enum class Command { Simulate, VerifyLinear, VerifyBilinear, Counterexample, Norms, Picard };

const char* command_name(Command c);
/// Config error (10) for an unknown name.
Command parse_command(const std::string& name);

// Detail codes of the Config domain.
namespace config_errc {
inline constexpr int syntax = 0;      // malformed line, unknown section or key, duplicate key
inline constexpr int type = 1;        // value does not parse as the key's type
inline constexpr int constraint = 2;  // value out of range or violating a hypothesis
inline constexpr int io = 6;
}  // namespace config_errc

enum class ValueType { Int, UInt, Float, Bool, Enum, FloatList };

struct KeySpec {
  std::string name;
  ValueType type;
  std::string default_value;
  std::vector<std::string> choices;  // Enum only
  std::string doc;
};

struct SectionSpec {
  std::string name;  // "run" or a command name
  std::vector<KeySpec> keys;
};

/// The published schema: [run] plus one section per command.
const std::vector<SectionSpec>& config_schema();

using Value = std::variant<long long, std::uint64_t, double, bool, std::string, std::vector<double>>;

struct RunConfig {
  Command command = Command::Simulate;
  std::map<std::string, Value> run;     // [run] keys
  std::map<std::string, Value> params;  // the command's section, defaults filled
  std::string out_dir = ".";

  std::uint64_t seed() const;
  long long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;  // Int keys convert
  bool get_bool(const std::string& key) const;
  const std::string& get_enum(const std::string& key) const;
  const std::vector<double>& get_list(const std::string& key) const;

  /// Canonical text of every key of [run] and the command's section, in schema order.
  std::string effective_text() const;
};

/// Parses the line-oriented format: "# comment", "[section]", "key = value". Keys before
/// the first header belong to [run]. Only [run] and the command's own section are
/// accepted. Errors carry the line number.
RunConfig parse_config(const std::string& text, Command command);

}  // namespace dzak
