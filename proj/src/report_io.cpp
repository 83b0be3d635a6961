#include "qtrunc/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace qtrunc {

#ifndef QTRUNC_VERSION
#define QTRUNC_VERSION "0.0.0"
#endif

const char* version() { return QTRUNC_VERSION; }

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("table row width does not match the columns");
  rows.push_back(std::move(row));
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + s + "' (csv or json)");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render_csv(const Table& table, const OutputHeader& header) {
  std::ostringstream os;
  os << "# qtrunc " << version() << '\n';
  os << "# command=" << header.command << '\n';
  for (const auto& [k, v] : header.config) os << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << csv_field(table.columns[i]);
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string render_json(const Table& table, const OutputHeader& header) {
  nlohmann::ordered_json doc;
  doc["header"]["tool"] = "qtrunc";
  doc["header"]["version"] = version();
  doc["header"]["command"] = header.command;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : header.config) cfg[k] = v;
  doc["header"]["config"] = cfg;
  doc["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[table.columns[i]] = row[i];
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string render(const Table& table, const OutputHeader& header, OutputFormat fmt) {
  return fmt == OutputFormat::csv ? render_csv(table, header) : render_json(table, header);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  fs::create_directories(dir);
  std::random_device rd;
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path.string());
  }
}

Table reports_table(const std::vector<ExperimentReport>& reports) {
  Table t;
  t.columns = {"id", "inputs", "empirical", "analytic", "margin", "sound", "runtime_s", "note"};
  for (const auto& r : reports) {
    t.add_row({r.id, r.inputs, format_double(r.empirical), format_double(r.analytic), format_double(r.margin),
               r.sound ? "true" : "false", format_double(r.runtime_s), r.note});
  }
  return t;
}

}  // namespace qtrunc
