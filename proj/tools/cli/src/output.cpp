#include "nhl_cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nhl/errors.hpp"

namespace nhl::cli {

namespace {

void escape_into(std::string& out, const std::string& s) {
  // nlohmann's own dump handles escaping of a bare string correctly.
  out += nlohmann::json(s).dump();
}

void dump_into(std::string& out, const nlohmann::json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        escape_into(out, it.key());
        out += indent < 0 ? ":" : ": ";
        dump_into(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_into(out, v, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += fmt_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

std::string cell(const nlohmann::json& v) {
  if (v.is_number_float()) return fmt_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string fmt_double(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";  // folds -0 as well
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const nlohmann::json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  if (indent >= 0) out += '\n';
  return out;
}

TableFormat table_format_from_string(std::string_view s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "json") return TableFormat::Json;
  throw InvalidArgument("unknown table format '" + std::string(s) + "' (csv|json)");
}

std::string_view extension(TableFormat f) { return f == TableFormat::Csv ? ".csv" : ".json"; }

std::string render_table(const Table& t, const nlohmann::json& meta, TableFormat f) {
  if (f == TableFormat::Json) {
    nlohmann::json j;
    j["meta"] = meta;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows) j["rows"].push_back(r);
    return dump_json(j);
  }
  std::string out = "# " + dump_json(meta, -1) + "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out += ',';
      out += cell(r[c]);
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidArgument("cannot open " + tmp + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw InvalidArgument("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nhl::cli
