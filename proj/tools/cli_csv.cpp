#include "cli_csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace decosim::cli {

namespace {

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.16e", value);
  return buffer;
}

CsvBuilder::CsvBuilder(std::vector<std::string> header) : n_columns_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ',';
    out_ += quote_if_needed(header[i]);
  }
  out_ += '\n';
}

void CsvBuilder::row(const std::vector<Cell>& cells) {
  if (cells.size() != n_columns_) {
    throw std::logic_error("CsvBuilder: row width does not match header");
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    if (std::holds_alternative<double>(cells[i])) {
      out_ += format_double(std::get<double>(cells[i]));
    } else if (std::holds_alternative<long>(cells[i])) {
      out_ += std::to_string(std::get<long>(cells[i]));
    } else {
      out_ += quote_if_needed(std::get<std::string>(cells[i]));
    }
  }
  out_ += '\n';
  ++n_rows_;
}

}  // namespace decosim::cli
