#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace he3sq::csv {

/// Full double precision (17 significant digits), locale independent.
std::string format(double v);

class Writer {
 public:
  Writer(std::ostream& os, std::vector<std::string> header);
  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }
  std::size_t columns() const { return header_.size(); }

 private:
  std::ostream& os_;
  std::vector<std::string> header_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::optional<std::size_t> index_of(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

/// Parses a numeric CSV with a header line. Throws std::runtime_error on
/// ragged rows or non-numeric cells.
Table read(std::istream& is);
Table read_file(const std::string& path);

}  // namespace he3sq::csv
