#pragma once

// Minimal RFC-4180 CSV: comma separated, fields quoted only when they hold
// a comma, quote, CR or LF; embedded quotes doubled; LF line endings.

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace bidi::csv {

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

// Shortest decimal form that round-trips.
std::string real(double x);

class Writer {
 public:
  Writer(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws if `name` is not a column.
  std::size_t column(std::string_view name) const;
};

Table read(const std::filesystem::path& path);

}  // namespace bidi::csv
