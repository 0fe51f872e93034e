#include "format.hpp"

#include <array>
#include <charconv>

namespace lmg::cli {

std::string number(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ec == std::errc{} ? end : buf.data());
}

std::string number(int value) { return std::to_string(value); }

CsvWriter::CsvWriter(const std::vector<std::pair<std::string, std::string>>& header) {
  for (const auto& [key, value] : header) text_ += "# " + key + "=" + value + "\n";
}

void CsvWriter::comment(const std::string& line) { text_ += "# " + line + "\n"; }

void CsvWriter::columns(const std::vector<std::string>& names) { row(names); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

std::string json_header(const std::vector<std::pair<std::string, std::string>>& header) {
  std::string text;
  for (const auto& [key, value] : header) text += "// " + key + "=" + value + "\n";
  return text;
}

}  // namespace lmg::cli
