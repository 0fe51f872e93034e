#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lmg::cli {

/// Shortest decimal that round-trips to the same double.
std::string number(double value);
std::string number(int value);

/// Writes CSV rows with a '#' comment header.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::pair<std::string, std::string>>& header);

  void comment(const std::string& line);
  void columns(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

/// "// key=value" lines for JSON output (parseable with comment support).
std::string json_header(const std::vector<std::pair<std::string, std::string>>& header);

}  // namespace lmg::cli
