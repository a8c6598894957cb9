#pragma once
#include <string>
#include <vector>

namespace sscool::cli {

// %.16e — 17 significant digits, lossless double round-trip.
std::string format_sci(double v);

// Comment lines (each already starting with '#'), then the header, then rows.
std::string csv_table(const std::vector<std::string>& comments, const std::string& header,
                      const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sscool::cli
