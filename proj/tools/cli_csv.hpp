#pragma once

#include <string>
#include <variant>
#include <vector>

namespace decosim::cli {

// CSV cell: doubles render as 17-significant-digit lowercase scientific
// (lossless round trip), integers and strings as-is with RFC-4180 quoting.
using Cell = std::variant<double, long, std::string>;

std::string format_double(double value);

class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);

  void row(const std::vector<Cell>& cells);
  const std::string& str() const { return out_; }
  long n_rows() const { return n_rows_; }

 private:
  std::string out_;
  size_t n_columns_;
  long n_rows_ = 0;
};

}  // namespace decosim::cli
