#pragma once

// Minimal CSV writer: '#' comment lines, a header row, then data rows.
// Numbers use the shortest round-trip representation so output is stable.

#include <charconv>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qdm {

using CsvCell = std::variant<double, long long, std::string>;

class CsvWriter {
public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(std::string_view text) { out_ << "# " << text << '\n'; }

  void header(const std::vector<std::string>& columns) {
    write_fields(columns);
  }

  void row(const std::vector<CsvCell>& cells) {
    std::vector<std::string> fields;
    fields.reserve(cells.size());
    for (const auto& c : cells) fields.push_back(render(c));
    write_fields(fields);
    ++rows_;
  }

  std::size_t rows() const { return rows_; }

  static std::string render(const CsvCell& c) {
    if (const double* d = std::get_if<double>(&c)) {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, *d);
      return std::string(buf, res.ptr);
    }
    if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
  }

  static std::string quote(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    q += '"';
    return q;
  }

private:
  void write_fields(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << quote(fields[i]);
    }
    out_ << '\n';
  }

  std::ostream& out_;
  std::size_t rows_ = 0;
};

}  // namespace qdm
