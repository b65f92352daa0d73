#ifndef VMLAB_OUTPUTS_HPP
#define VMLAB_OUTPUTS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vml {

/// Deterministic CSV writer: fixed header, "%.17g" cells.
class CsvWriter {
 public:
  CsvWriter(std::string path, std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  void close();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string buffer_;
  std::size_t ncols_;
  bool closed_ = false;
};

/// FNV-1a 64-bit over a byte string / file contents.
std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t fnv1a_file(const std::string& path);
std::string hex64(std::uint64_t v);

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
  bool line = true;
};

/// Hand-rolled standalone SVG line plot (optionally log-log).
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, bool loglog);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace vml

#endif
