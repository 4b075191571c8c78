#ifndef QAMPLIFY_CSV_HPP
#define QAMPLIFY_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

namespace qamplify::io {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(std::string_view name) const;  // npos if absent
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::string &path);

std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view content);

// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double v);

// FNV-1a 64-bit, used for provenance hashes.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace qamplify::io

#endif
