#pragma once

#include "mves/linalg.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mves::csv {

/// Splits one CSV record on commas and trims blanks and a trailing '\r'.
std::vector<std::string> split_record(std::string_view line);

/// Parses a decimal float; throws ParseError carrying `line`.
double parse_real(std::string_view field, std::size_t line);

/// Fixed 17-significant-digit rendering used by every file we write.
std::string format_real(double v);

/// Numeric matrix, one CSV record per row. With `header` the first record
/// is skipped. Blank lines are ignored.
Matrix read_matrix(std::istream& in, bool header = false);
Matrix read_matrix(const std::filesystem::path& path, bool header = false);

/// LF line endings, 17 significant digits, optional header record.
void write_matrix(std::ostream& out, const Matrix& m,
                  const std::vector<std::string>& header = {});
void write_matrix(const std::filesystem::path& path, const Matrix& m,
                  const std::vector<std::string>& header = {});

}  // namespace mves::csv
