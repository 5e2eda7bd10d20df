#include "scatter/csv.hpp"

#include <cmath>
#include <cstdio>

namespace scatter::csv {

std::string format_double(double v) {
  char buf[40];
  // Shortest form that parses back to the same double.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v || (std::isnan(back) && std::isnan(v))) return buf;
  }
  return buf;
}

std::string escape_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

void Writer::header(const std::vector<std::string>& names) { row(names); }

void Writer::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os_ << ',';
    os_ << escape_field(fields[i]);
  }
  os_ << '\n';
}

Writer& Writer::field(const std::string& s) {
  if (row_started_) os_ << ',';
  os_ << escape_field(s);
  row_started_ = true;
  return *this;
}

Writer& Writer::field(double v) { return field(format_double(v)); }

Writer& Writer::field(std::int64_t v) { return field(std::to_string(v)); }

void Writer::end_row() {
  os_ << '\n';
  row_started_ = false;
}

}  // namespace scatter::csv
