#include "iwaves/io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "iwaves/errors.hpp"

namespace iwaves {

std::string_view version() { return IWAVES_VERSION; }

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string header_line(std::string_view canonical_config) {
  return fmt::format("# iwaves {} config_hash={:016x}", version(), fnv1a64(canonical_config));
}

CsvWriter::CsvWriter(std::vector<std::string> comments, std::vector<std::string> columns)
    : columns_(columns.size()) {
  for (const auto& c : comments) text_ += c + "\n";
  row(columns);
}

void CsvWriter::row(std::initializer_list<std::string> cells) {
  row(std::vector<std::string>(cells));
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw InputError("CSV row has the wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvWriter::save(const std::filesystem::path& path) const { write_text(path, text_); }

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

}  // namespace iwaves
