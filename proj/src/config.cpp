#include "partisan/config.hpp"

#include "partisan/error.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace partisan {
namespace {

[[noreturn]] void fail_at(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::config, "config line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

bool is_bare_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::string parse_string(std::string_view s, std::size_t line) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') fail_at(line, "malformed string");
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '"') fail_at(line, "unescaped quote in string");
    if (c == '\\') {
      if (i + 2 >= s.size()) fail_at(line, "dangling escape in string");
      switch (s[++i]) {
        case '"': c = '"'; break;
        case '\\': c = '\\'; break;
        case 'n': c = '\n'; break;
        case 't': c = '\t'; break;
        default: fail_at(line, "unsupported escape in string");
      }
    }
    out.push_back(c);
  }
  return out;
}

ConfigScalar parse_scalar(std::string_view s, std::size_t line) {
  if (s.empty()) fail_at(line, "missing value");
  if (s.front() == '"') return parse_string(s, line);
  if (s == "true") return true;
  if (s == "false") return false;

  std::string digits;
  for (char c : s) {
    if (c != '_') digits.push_back(c);
  }
  if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
  const bool is_float = digits.find_first_of(".eE") != std::string::npos ||
                        digits.find("inf") != std::string::npos ||
                        digits.find("nan") != std::string::npos;
  const char* first = digits.data();
  const char* last = digits.data() + digits.size();
  if (is_float) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail_at(line, "invalid number '" + std::string(s) + "'");
    return v;
  }
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail_at(line, "invalid value '" + std::string(s) + "'");
  return v;
}

std::vector<ConfigScalar> parse_array(std::string_view s, std::size_t line) {
  if (s.back() != ']') fail_at(line, "arrays must close on the same line");
  std::string_view body = trim(s.substr(1, s.size() - 2));
  std::vector<ConfigScalar> out;
  std::size_t start = 0;
  bool in_string = false;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i < body.size()) {
      const char c = body[i];
      if (in_string) {
        if (c == '\\') {
          ++i;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
        continue;
      }
      if (c == '[') fail_at(line, "nested arrays are not supported");
      if (c != ',') continue;
    }
    const auto item = trim(body.substr(start, i - start));
    start = i + 1;
    if (item.empty()) {
      if (i == body.size()) break;  // trailing comma or empty array
      fail_at(line, "empty array element");
    }
    out.push_back(parse_scalar(item, line));
  }
  return out;
}

std::string render_scalar(const ConfigScalar& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          std::string s = fmt::format("{}", x);
          if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
          return s;
        } else {
          std::string out = "\"";
          for (char c : x) {
            switch (c) {
              case '"': out += "\\\""; break;
              case '\\': out += "\\\\"; break;
              case '\n': out += "\\n"; break;
              case '\t': out += "\\t"; break;
              default: out.push_back(c);
            }
          }
          return out + "\"";
        }
      },
      v);
}

// Typed accessors ---------------------------------------------------------

std::string where(const ConfigTable& t, std::string_view key) {
  return "key '" + std::string(key) + "' in [" + t.name + "]";
}

double get_number(const ConfigTable& t, std::string_view key, const ConfigValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v.data)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v.data)) return *d;
  fail_at(v.line, where(t, key) + ": expected a number");
}

std::int64_t get_int(const ConfigTable& t, std::string_view key, const ConfigValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v.data)) return *i;
  fail_at(v.line, where(t, key) + ": expected an integer");
}

bool get_bool(const ConfigTable& t, std::string_view key, const ConfigValue& v) {
  if (const auto* b = std::get_if<bool>(&v.data)) return *b;
  fail_at(v.line, where(t, key) + ": expected true or false");
}

std::string get_string(const ConfigTable& t, std::string_view key, const ConfigValue& v) {
  if (const auto* s = std::get_if<std::string>(&v.data)) return *s;
  fail_at(v.line, where(t, key) + ": expected a string");
}

const std::vector<ConfigScalar>& get_array(const ConfigTable& t, std::string_view key,
                                           const ConfigValue& v) {
  if (const auto* a = std::get_if<std::vector<ConfigScalar>>(&v.data)) return *a;
  fail_at(v.line, where(t, key) + ": expected an array");
}

FamilyMap<bool> get_families(const ConfigTable& t, std::string_view key, const ConfigValue& v) {
  FamilyMap<bool> enabled;
  for (const auto& item : get_array(t, key, v)) {
    const auto* name = std::get_if<std::string>(&item);
    if (!name) fail_at(v.line, where(t, key) + ": expected family names");
    const auto family = parse_family(*name);
    if (!family) fail_at(v.line, where(t, key) + ": unknown family '" + *name + "'");
    enabled[*family] = true;
  }
  return enabled;
}

std::size_t get_positive_size(const ConfigTable& t, std::string_view key, const ConfigValue& v) {
  const auto i = get_int(t, key, v);
  if (i < 1) fail_at(v.line, where(t, key) + ": must be >= 1");
  return static_cast<std::size_t>(i);
}

void check_keys(const ConfigTable& t, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : t.entries) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) fail_at(value.line, "unknown " + where(t, key));
  }
}

void check_sections(const ConfigDocument& doc) {
  static const std::set<std::string, std::less<>> plain = {
      "features", "word_ngrams", "char_trigrams", "bias",    "lexical", "lexicons",
      "richness", "readability", "classifier",    "grid",
  };
  for (const auto& t : doc.tables()) {
    if (t.repeated ? t.name != "row" : !plain.contains(t.name)) {
      fail_at(t.line, "unknown section [" + std::string(t.repeated ? "[" : "") + t.name +
                          (t.repeated ? "]" : "") + "]");
    }
  }
}

Lexicon load_lexicon_allow_empty(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open lexicon file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::vector<std::string> raw;
  std::istringstream lines(buffer.str());
  std::string line;
  while (std::getline(lines, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    raw.emplace_back(t);
  }
  return Lexicon(name, raw);
}

}  // namespace

const ConfigValue* ConfigTable::find(std::string_view key) const noexcept {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

void ConfigTable::set(const std::string& key, ConfigValue value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries.emplace_back(key, std::move(value));
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  ConfigTable* current = nullptr;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool repeated = line.starts_with("[[");
      const std::string_view close = repeated ? "]]" : "]";
      if (!line.ends_with(close)) fail_at(line_no, "malformed section header");
      const auto name = trim(line.substr(repeated ? 2 : 1, line.size() - (repeated ? 4 : 2)));
      if (!is_bare_key(name)) fail_at(line_no, "invalid section name");
      if (!repeated && doc.table(name)) {
        fail_at(line_no, "duplicate section [" + std::string(name) + "]");
      }
      doc.tables_.push_back({std::string(name), repeated, line_no, {}});
      current = &doc.tables_.back();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail_at(line_no, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!is_bare_key(key)) fail_at(line_no, "invalid key '" + std::string(key) + "'");
    if (!current) fail_at(line_no, "key '" + std::string(key) + "' outside of a section");
    if (current->find(key)) {
      fail_at(line_no, "duplicate key '" + std::string(key) + "' in [" + current->name + "]");
    }
    if (value.empty()) fail_at(line_no, "missing value");
    ConfigValue v;
    v.line = line_no;
    if (value.front() == '[') {
      v.data = parse_array(value, line_no);
    } else {
      std::visit([&v](auto&& x) { v.data = std::move(x); }, parse_scalar(value, line_no));
    }
    current->entries.emplace_back(std::string(key), std::move(v));
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    ConfigDocument doc = parse(buffer.str());
    doc.base_dir_ = path.parent_path();
    return doc;
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

const ConfigTable* ConfigDocument::table(std::string_view name) const noexcept {
  for (const auto& t : tables_) {
    if (!t.repeated && t.name == name) return &t;
  }
  return nullptr;
}

std::vector<const ConfigTable*> ConfigDocument::repeated(std::string_view name) const {
  std::vector<const ConfigTable*> out;
  for (const auto& t : tables_) {
    if (t.repeated && t.name == name) out.push_back(&t);
  }
  return out;
}

void ConfigDocument::set(const std::string& section, const std::string& key, ConfigValue value) {
  for (auto& t : tables_) {
    if (!t.repeated && t.name == section) {
      t.set(key, std::move(value));
      return;
    }
  }
  ConfigTable t{section, false, 0, {}};
  t.set(key, std::move(value));
  tables_.push_back(std::move(t));
}

void ConfigDocument::remove(std::string_view name) {
  std::erase_if(tables_, [name](const ConfigTable& t) { return t.name == name; });
}

std::string ConfigDocument::to_string() const {
  std::string out;
  for (const auto& t : tables_) {
    if (!out.empty()) out.push_back('\n');
    out += t.repeated ? "[[" + t.name + "]]\n" : "[" + t.name + "]\n";
    for (const auto& [key, value] : t.entries) {
      out += key + " = ";
      if (const auto* arr = std::get_if<std::vector<ConfigScalar>>(&value.data)) {
        out.push_back('[');
        for (std::size_t i = 0; i < arr->size(); ++i) {
          if (i > 0) out += ", ";
          out += render_scalar((*arr)[i]);
        }
        out.push_back(']');
      } else {
        std::visit(
            [&out](const auto& x) {
              if constexpr (!std::is_same_v<std::decay_t<decltype(x)>, std::vector<ConfigScalar>>) {
                out += render_scalar(ConfigScalar(x));
              }
            },
            value.data);
      }
      out.push_back('\n');
    }
  }
  return out;
}

RunSettings settings_from_config(const ConfigDocument& doc) {
  check_sections(doc);
  RunSettings s;
  FeatureConfig& f = s.features;

  if (const auto* t = doc.table("features")) {
    check_keys(*t, {"enabled", "max_df", "standardize"});
    if (const auto* v = t->find("enabled")) f.enabled = get_families(*t, "enabled", *v);
    if (const auto* v = t->find("max_df")) f.max_df = get_number(*t, "max_df", *v);
    if (const auto* v = t->find("standardize")) f.standardize = get_bool(*t, "standardize", *v);
  }
  if (const auto* t = doc.table("word_ngrams")) {
    check_keys(*t, {"k", "alpha", "nb_scaling", "binary_tf", "scale"});
    if (const auto* v = t->find("k")) f.k = get_positive_size(*t, "k", *v);
    if (const auto* v = t->find("alpha")) f.alpha = get_number(*t, "alpha", *v);
    if (const auto* v = t->find("nb_scaling")) f.nb_scaling = get_bool(*t, "nb_scaling", *v);
    if (const auto* v = t->find("binary_tf")) f.binary_tf = get_bool(*t, "binary_tf", *v);
  }
  if (const auto* t = doc.table("char_trigrams")) {
    check_keys(*t, {"k", "nb_scaling", "scale"});
    if (const auto* v = t->find("k")) f.char_k = get_positive_size(*t, "k", *v);
    if (const auto* v = t->find("nb_scaling")) f.nb_char = get_bool(*t, "nb_scaling", *v);
  }
  if (const auto* t = doc.table("bias")) {
    check_keys(*t, {"threshold", "left_lexicon", "right_lexicon", "scale"});
    if (const auto* v = t->find("threshold")) f.so_threshold = get_number(*t, "threshold", *v);
    const auto* left = t->find("left_lexicon");
    const auto* right = t->find("right_lexicon");
    if ((left == nullptr) != (right == nullptr)) {
      fail_at(t->line, "[bias] needs both left_lexicon and right_lexicon, or neither");
    }
    if (left) {
      f.bias_lexicons = BiasLexicons{
          load_lexicon_allow_empty(doc.base_dir() / get_string(*t, "left_lexicon", *left), "bias_left"),
          load_lexicon_allow_empty(doc.base_dir() / get_string(*t, "right_lexicon", *right), "bias_right"),
      };
    }
  }
  if (const auto* t = doc.table("lexical")) {
    check_keys(*t, {"normalize", "scale"});
    if (const auto* v = t->find("normalize")) f.normalize_lexicon_counts = get_bool(*t, "normalize", *v);
  }
  if (const auto* t = doc.table("lexicons")) {
    for (const auto& [name, value] : t->entries) {
      f.lexicons.push_back(load_lexicon(doc.base_dir() / get_string(*t, name, value), name));
    }
  }
  for (Family fam : kFamilies) {
    const auto* t = doc.table(family_name(fam));
    if (!t) continue;
    if (fam == Family::richness || fam == Family::readability) check_keys(*t, {"scale"});
    if (const auto* v = t->find("scale")) f.scale[fam] = get_number(*t, "scale", *v);
  }

  if (const auto* t = doc.table("classifier")) {
    check_keys(*t, {"C", "solver", "tol", "max_iter", "seed"});
    TrainOptions& o = s.training;
    if (const auto* v = t->find("C")) o.C = get_number(*t, "C", *v);
    if (const auto* v = t->find("solver")) {
      const auto name = get_string(*t, "solver", *v);
      const auto solver = parse_solver(name);
      if (!solver) fail_at(v->line, "unknown solver '" + name + "'");
      o.solver = *solver;
    }
    if (const auto* v = t->find("tol")) o.tol = get_number(*t, "tol", *v);
    if (const auto* v = t->find("max_iter")) o.max_iter = get_positive_size(*t, "max_iter", *v);
    if (const auto* v = t->find("seed")) {
      const auto seed = get_int(*t, "seed", *v);
      if (seed < 0) fail_at(v->line, "seed must be non-negative");
      o.seed = static_cast<std::uint64_t>(seed);
    }
  }

  grid_axes(doc);
  ablation_rows(doc, f);
  return s;
}

std::vector<NamedConfig> ablation_rows(const ConfigDocument& doc, const FeatureConfig& base) {
  std::vector<NamedConfig> rows;
  std::set<std::string> names;
  for (const ConfigTable* t : doc.repeated("row")) {
    check_keys(*t, {"name", "enabled", "nb_scaling"});
    const auto* name = t->find("name");
    if (!name) fail_at(t->line, "[[row]] requires a name");
    NamedConfig row{get_string(*t, "name", *name), base};
    if (!names.insert(row.name).second) fail_at(t->line, "duplicate row name '" + row.name + "'");
    if (const auto* v = t->find("enabled")) row.config.enabled = get_families(*t, "enabled", *v);
    if (const auto* v = t->find("nb_scaling")) row.config.nb_scaling = get_bool(*t, "nb_scaling", *v);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<GridAxis> grid_axes(const ConfigDocument& doc) {
  std::vector<GridAxis> axes;
  const auto* t = doc.table("grid");
  if (!t) return axes;
  for (const auto& [key, value] : t->entries) {
    if (key != "k" && !parse_family(key)) fail_at(value.line, "unknown grid parameter '" + key + "'");
    GridAxis axis{key, {}};
    for (const auto& item : get_array(*t, key, value)) {
      if (const auto* i = std::get_if<std::int64_t>(&item)) {
        axis.values.push_back(static_cast<double>(*i));
      } else if (const auto* d = std::get_if<double>(&item)) {
        axis.values.push_back(*d);
      } else {
        fail_at(value.line, where(*t, key) + ": expected numbers");
      }
    }
    if (axis.values.empty()) fail_at(value.line, where(*t, key) + ": empty candidate list");
    axes.push_back(std::move(axis));
  }
  return axes;
}

void apply_assignment(ConfigDocument& doc, std::span<const std::pair<std::string, double>> assignment) {
  for (const auto& [parameter, value] : assignment) {
    if (parameter == "k") {
      doc.set("word_ngrams", "k", ConfigValue{static_cast<std::int64_t>(value), 0});
    } else {
      doc.set(parameter, "scale", ConfigValue{value, 0});
    }
  }
  doc.remove("grid");
}

}  // namespace partisan
