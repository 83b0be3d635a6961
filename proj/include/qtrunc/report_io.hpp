#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qtrunc/verify.hpp"

namespace qtrunc {

const char* version();

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

/// Key/value pairs echoed at the top of every artifact.
struct OutputHeader {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
};

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& s);

/// Round-trip exact text for doubles (shortest form that parses back bit-identically).
std::string format_double(double v);

/// "# "-prefixed header lines followed by a standard CSV body.
std::string render_csv(const Table& table, const OutputHeader& header);
/// {"header": {...}, "columns": [...], "rows": [{...}, ...]}.
std::string render_json(const Table& table, const OutputHeader& header);
std::string render(const Table& table, const OutputHeader& header, OutputFormat fmt);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Columns: id, inputs, empirical, analytic, margin, sound, runtime_s, note.
Table reports_table(const std::vector<ExperimentReport>& reports);

}  // namespace qtrunc
