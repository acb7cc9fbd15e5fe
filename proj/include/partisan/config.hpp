#pragma once

#include "partisan/classifier.hpp"
#include "partisan/evalharness.hpp"
#include "partisan/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace partisan {

// Configuration files use a small typed subset of TOML:
//
//   # comment
//   [section]
//   key = 1.5            # integer, float, true/false, "string"
//   list = ["a", "b"]    # single-line arrays of scalars
//   [[row]]              # repeated table (ablation rows)
//
// Keys are validated against a fixed schema per section; unknown sections
// or keys are errors.

using ConfigScalar = std::variant<bool, std::int64_t, double, std::string>;

struct ConfigValue {
  std::variant<bool, std::int64_t, double, std::string, std::vector<ConfigScalar>> data;
  std::size_t line = 0;
};

struct ConfigTable {
  std::string name;
  bool repeated = false;  // declared with [[name]]
  std::size_t line = 0;
  std::vector<std::pair<std::string, ConfigValue>> entries;

  const ConfigValue* find(std::string_view key) const noexcept;
  void set(const std::string& key, ConfigValue value);
};

class ConfigDocument {
 public:
  /// Throws Error(config) with the offending line number.
  static ConfigDocument parse(std::string_view text);
  static ConfigDocument load(const std::filesystem::path& path);

  /// First [name] table, or nullptr.
  const ConfigTable* table(std::string_view name) const noexcept;
  /// Every [[name]] table in file order.
  std::vector<const ConfigTable*> repeated(std::string_view name) const;
  const std::vector<ConfigTable>& tables() const noexcept { return tables_; }

  /// Creates [section] when missing.
  void set(const std::string& section, const std::string& key, ConfigValue value);
  void remove(std::string_view name);

  /// Directory that relative paths inside the file resolve against.
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
  void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

  std::string to_string() const;

 private:
  std::vector<ConfigTable> tables_;
  std::filesystem::path base_dir_;
};

struct RunSettings {
  FeatureConfig features;
  TrainOptions training;
};

/// Reads every feature, lexicon and classifier setting; lexicon files are
/// loaded relative to the document's base directory. Missing keys keep
/// their defaults. Sections [grid] and [[row]] are checked but ignored.
RunSettings settings_from_config(const ConfigDocument& doc);

/// [[row]] tables applied on top of `base`: name, enabled, nb_scaling.
std::vector<NamedConfig> ablation_rows(const ConfigDocument& doc, const FeatureConfig& base);

/// [grid] entries in file order.
std::vector<GridAxis> grid_axes(const ConfigDocument& doc);

/// Writes a grid assignment back into the document (family scale factors
/// and word k) and drops the [grid] section.
void apply_assignment(ConfigDocument& doc, std::span<const std::pair<std::string, double>> assignment);

}  // namespace partisan
