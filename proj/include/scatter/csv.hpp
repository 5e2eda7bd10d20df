#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scatter::csv {

/// Shortest representation that round-trips the double exactly.
std::string format_double(double v);

/// RFC-4180 style quoting: fields containing comma, quote or newline are
/// wrapped in double quotes with embedded quotes doubled.
std::string escape_field(const std::string& field);

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);

  Writer& field(const std::string& s);
  Writer& field(double v);
  Writer& field(std::int64_t v);
  void end_row();

 private:
  std::ostream& os_;
  bool row_started_ = false;
};

}  // namespace scatter::csv
