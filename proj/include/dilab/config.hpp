#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dilab {

using ConfigValue = std::variant<bool, double, std::string, std::vector<double>, std::vector<std::string>>;

struct SchemaEntry {
  std::string key;  // "section.name", or "name" for top-level keys
  ConfigValue fallback;
  std::string help;
};

/// Every accepted key with its default value; the default fixes the key's type.
const std::vector<SchemaEntry>& config_schema();

/// Sectioned key-value configuration:
///
///   experiment = "finite_T_identity"
///   [grid]
///   N = 512
///   [sweep]
///   N_ladder = [256, 512, 1024]
///
/// Values are numbers, booleans, double-quoted strings or one-line arrays of numbers or strings.
/// Unknown sections or keys, duplicates and type mismatches are schema errors.
class ExperimentConfig {
 public:
  ExperimentConfig();

  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_string(const std::string& text, const std::string& origin = "<string>");

  /// Applies an override of the form "section.key=value".
  void set(const std::string& assignment);
  void set(const std::string& key, const ConfigValue& value);

  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> texts(const std::string& key) const;
  bool explicitly_set(const std::string& key) const { return explicit_.count(key) > 0; }

  std::string experiment() const { return text("experiment"); }

  /// Effective configuration, defaults included, nested by section.
  nlohmann::json to_json() const;
  std::string to_text() const;

 private:
  const ConfigValue& get(const std::string& key) const;
  void assign(const std::string& key, const std::string& raw, const std::string& where);

  std::map<std::string, ConfigValue> values_;
  std::set<std::string> explicit_;
};

}  // namespace dilab
