#include "nhl_cli/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "nhl/errors.hpp"
#include "schema_text.hpp"

namespace nhl::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxGridPoints = 1000000;

const char* kCommandNames[] = {"spectrum", "phase-scan", "ep-find", "evolve",
                               "reflect",  "emit",       "currents"};

bool type_matches(const std::string& type, const json& v) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "null") return v.is_null();
  return false;
}

const json& resolve(const json& root, const json& schema) {
  if (!schema.contains("$ref")) return schema;
  const auto ref = schema["$ref"].get<std::string>();
  if (ref.rfind("#/", 0) != 0) throw InvalidArgument("unsupported schema reference " + ref);
  return root.at(json::json_pointer(ref.substr(1)));
}

void check(const json& root, const json& schema_in, const json& v, const std::string& path,
           std::vector<std::string>& errors) {
  const json& schema = resolve(root, schema_in);
  const std::string where = path.empty() ? "/" : path;
  if (schema.contains("type") && !type_matches(schema["type"].get<std::string>(), v)) {
    errors.push_back(where + ": expected " + schema["type"].get<std::string>());
    return;
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == v;
    if (!found) errors.push_back(where + ": value " + v.dump() + " not in " + schema["enum"].dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>())
      errors.push_back(where + ": must be >= " + schema["minimum"].dump());
    if (schema.contains("exclusiveMinimum") && !(x > schema["exclusiveMinimum"].get<double>()))
      errors.push_back(where + ": must be > " + schema["exclusiveMinimum"].dump());
  }
  if (v.is_object()) {
    const json props = schema.value("properties", json::object());
    for (const auto& r : schema.value("required", json::array()))
      if (!v.contains(r.get<std::string>()))
        errors.push_back(where + ": missing required key '" + r.get<std::string>() + "'");
    for (auto it = v.begin(); it != v.end(); ++it) {
      const std::string child = path + "/" + it.key();
      if (props.contains(it.key()))
        check(root, props[it.key()], it.value(), child, errors);
      else if (schema.contains("additionalProperties") && !schema["additionalProperties"].get<bool>())
        errors.push_back(child + ": unknown key");
    }
  }
  if (v.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i)
      check(root, schema["items"], v[i], path + "/" + std::to_string(i), errors);
  }
}

// --- TOML subset -----------------------------------------------------------

class TomlReader {
 public:
  explicit TomlReader(std::string_view text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        skip_space();
        std::vector<std::string> keys{bare_key()};
        skip_space();
        while (peek() == '.') {
          ++pos_;
          skip_space();
          keys.push_back(bare_key());
          skip_space();
        }
        expect(']');
        end_of_line();
        table = &root;
        for (const auto& k : keys) {
          if (!table->contains(k)) (*table)[k] = json::object();
          table = &(*table)[k];
          if (!table->is_object()) fail("key '" + k + "' is not a table");
        }
        continue;
      }
      const std::string key = bare_key();
      skip_space();
      expect('=');
      skip_space();
      if (table->contains(key)) fail("duplicate key '" + key + "'");
      (*table)[key] = value();
      end_of_line();
    }
    return root;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidArgument("TOML line " + std::to_string(line_) + ": " + msg);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }

  void skip_blank_lines() {
    while (!eof()) {
      skip_space();
      skip_comment();
      if (peek() == '\r') ++pos_;
      if (peek() != '\n') return;
      ++pos_;
      ++line_;
    }
  }

  // Whitespace, comments and newlines inside arrays and inline tables.
  void skip_all() {
    while (!eof()) {
      skip_space();
      skip_comment();
      if (peek() == '\n') {
        ++line_;
        ++pos_;
      } else if (peek() == '\r') {
        ++pos_;
      } else {
        return;
      }
    }
  }

  void end_of_line() {
    skip_space();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    ++pos_;
    ++line_;
  }

  std::string bare_key() {
    if (peek() == '"') return string();
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      ++pos_;
    if (pos_ == start) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string string() {
    expect('"');
    std::string out;
    while (!eof() && peek() != '"') {
      char c = s_[pos_++];
      if (c == '\n') fail("unterminated string");
      if (c == '\\') {
        if (eof()) fail("unterminated escape");
        const char e = s_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += c;
    }
    expect('"');
    return out;
  }

  json number() {
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                      peek() == '-' || peek() == '.' || peek() == '_'))
      ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    std::erase(tok, '_');
    if (tok == "inf" || tok == "+inf" || tok == "-inf" || tok.find("nan") != std::string::npos)
      fail("non-finite numbers are not accepted");
    const bool is_float = tok.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      long long v = 0;
      const auto [p, ec] = std::from_chars(tok.data() + (tok[0] == '+'), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size()) fail("bad integer '" + tok + "'");
      return v;
    }
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data() + (tok[0] == '+'), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) fail("bad number '" + tok + "'");
    return v;
  }

  json value() {
    const char c = peek();
    if (c == '"') return string();
    if (c == '[') {
      ++pos_;
      json arr = json::array();
      skip_all();
      while (peek() != ']') {
        arr.push_back(value());
        skip_all();
        if (peek() == ',') {
          ++pos_;
          skip_all();
        } else if (peek() != ']') {
          fail("expected ',' or ']'");
        }
      }
      ++pos_;
      return arr;
    }
    if (c == '{') {
      ++pos_;
      json obj = json::object();
      skip_space();
      while (peek() != '}') {
        const std::string key = bare_key();
        skip_space();
        expect('=');
        skip_space();
        if (obj.contains(key)) fail("duplicate key '" + key + "'");
        obj[key] = value();
        skip_space();
        if (peek() == ',') {
          ++pos_;
          skip_space();
        } else if (peek() != '}') {
          fail("expected ',' or '}'");
        }
      }
      ++pos_;
      return obj;
    }
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') return number();
    fail("unsupported value");
  }
};

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : "; ") + x;
  return out;
}

}  // namespace

std::string_view to_string(Command c) { return kCommandNames[static_cast<int>(c)]; }

Command command_from_string(std::string_view s) {
  for (int i = 0; i < 7; ++i)
    if (s == kCommandNames[i]) return static_cast<Command>(i);
  throw InvalidArgument("unknown command '" + std::string(s) + "'");
}

std::string block_key(Command c) {
  std::string k(to_string(c));
  for (auto& ch : k)
    if (ch == '-') ch = '_';
  return k;
}

const json& run_config_schema() {
  static const json schema = json::parse(kRunConfigSchema);
  return schema;
}

std::vector<std::string> validate(const json& schema, const json& doc) {
  std::vector<std::string> errors;
  check(schema, schema, doc, "", errors);
  return errors;
}

json parse_toml_subset(std::string_view text) { return TomlReader(text).parse(); }

RunConfig parse_run_config(const json& doc) {
  auto errors = validate(run_config_schema(), doc);
  if (!errors.empty()) throw InvalidArgument("config does not match the schema: " + join(errors));

  const Command cmd = command_from_string(doc["command"].get<std::string>());
  const std::string key = block_key(cmd);
  for (int i = 0; i < 7; ++i) {
    const std::string other = block_key(static_cast<Command>(i));
    if (other != key && doc.contains(other))
      errors.push_back("/" + other + ": block does not belong to command '" +
                       std::string(to_string(cmd)) + "'");
  }
  json params = doc.value(key, json::object());
  if (cmd == Command::PhaseScan || cmd == Command::EpFind || cmd == Command::Evolve ||
      cmd == Command::Reflect || cmd == Command::Emit || cmd == Command::Currents) {
    if (!doc.contains(key)) errors.push_back("/" + key + ": required for command '" +
                                             std::string(to_string(cmd)) + "'");
  }
  if (cmd == Command::PhaseScan && doc.contains(key)) {
    for (const char* axis : {"re", "im"})
      if (!(params[axis]["max"].get<double>() > params[axis]["min"].get<double>()))
        errors.push_back("/phase_scan/" + std::string(axis) + ": max must exceed min");
    const auto n = params["re"]["n"].get<std::size_t>() * params["im"]["n"].get<std::size_t>();
    if (n > kMaxGridPoints) errors.push_back("/phase_scan: grid exceeds 10^6 points");
  }
  for (const char* blk : {"evolve", "emit"}) {
    if (!params.contains("initial") || key != blk) continue;
    const auto& init = params["initial"];
    const bool gauss = init["type"] == "gaussian";
    for (const char* f : {"k0", "center", "alpha"})
      if (gauss != init.contains(f))
        errors.push_back("/" + key + "/initial/" + f +
                         (gauss ? ": required for a gaussian" : ": only valid for a gaussian"));
    if (gauss == init.contains("site"))
      errors.push_back("/" + key + "/initial/site" +
                       (gauss ? ": only valid for a delta" : ": required for a delta"));
  }
  if (!errors.empty()) throw InvalidArgument("invalid config: " + join(errors));

  // Model-level rules (parameter key, N, J) are enforced by the core parser.
  return {cmd, model_from_json(doc["model"]), params, doc};
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  json doc;
  if (path.extension() == ".toml") {
    doc = parse_toml_subset(text);
  } else {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
  }
  return parse_run_config(doc);
}

}  // namespace nhl::cli
