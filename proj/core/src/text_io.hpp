#ifndef PKSVM_SRC_TEXT_IO_HPP
#define PKSVM_SRC_TEXT_IO_HPP

#include <charconv>
#include <filesystem>
#include <string>
#include <string_view>

namespace pksvm::detail {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Full-string double parse; returns false on trailing garbage or overflow.
bool parse_double(std::string_view text, double& out);

/// Writes content to a temporary file in the target directory, then renames
/// it over the destination, so readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pksvm::detail

#endif  // PKSVM_SRC_TEXT_IO_HPP
