#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace iwaves {

/// Library version string.
std::string_view version();

/// Round-trip decimal text: 17 significant digits.
std::string format_double(double x);

/// 64-bit FNV-1a hash.
std::uint64_t fnv1a64(std::string_view data);

/// "# iwaves <version> config_hash=<16 hex digits>" for the given canonical
/// configuration text.
std::string header_line(std::string_view canonical_config);

/// Minimal CSV writer; the header comment lines come first.
class CsvWriter {
 public:
  CsvWriter(std::vector<std::string> comments, std::vector<std::string> columns);
  void row(std::initializer_list<std::string> cells);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return text_; }
  void save(const std::filesystem::path& path) const;

 private:
  std::size_t columns_;
  std::string text_;
};

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace iwaves
