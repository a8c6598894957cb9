#include <cstdio>
#include <fstream>

#include "csv.hpp"
#include "sscool/errors.hpp"

namespace sscool::cli {

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string csv_table(const std::vector<std::string>& comments, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& c : comments) {
    out += c;
    out += '\n';
  }
  out += header;
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_sci(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw contract_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw diagnostic_error("write failed: " + path);
}

}  // namespace sscool::cli
