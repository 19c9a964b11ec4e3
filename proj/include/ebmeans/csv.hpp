#ifndef EBMEANS_CSV_HPP
#define EBMEANS_CSV_HPP

#include <string>
#include <vector>

namespace ebmeans::csv {

// Minimal comma-separated table: a header row plus string cells. No quoting;
// values must not contain commas. CRLF input is tolerated, output is LF.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // column index by header name; throws std::invalid_argument when absent
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

Table read_file(const std::string& path);

// %.17g rendering used for every numeric cell we write
std::string format_double(double v);

double parse_double(const std::string& cell, const std::string& context);
long parse_long(const std::string& cell, const std::string& context);

class Writer {
 public:
  explicit Writer(const std::string& path);
  ~Writer();
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void row(const std::vector<std::string>& cells);

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace ebmeans::csv

#endif
