#pragma once

#include <string>
#include <vector>

namespace critlab {

// Nine significant digits; the number format used in every CSV.
std::string fmt_g9(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
bool files_identical(const std::string& a, const std::string& b);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace critlab
