#include "vmlab/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vml {

CsvWriter::CsvWriter(std::string path, std::vector<std::string> columns)
    : path_(std::move(path)), ncols_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += columns[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncols_)
    throw std::runtime_error("CsvWriter: column count mismatch in " + path_);
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    if (i) buffer_ += ',';
    buffer_ += buf;
  }
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  write_text_file(path_, buffer_);
  closed_ = true;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::string& path) { return fnv1a(read_text_file(path)); }

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

namespace {

double map_coord(double v, double lo, double hi, double plo, double phi) {
  if (hi == lo) return 0.5 * (plo + phi);
  return plo + (v - lo) / (hi - lo) * (phi - plo);
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, bool loglog) {
  const double W = 720, H = 480, L = 70, R = 20, T = 40, B = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto tx = [&](double v) { return loglog ? std::log10(v) : v; };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double X = tx(s.x[i]), Y = tx(s.y[i]);
      if (!std::isfinite(X) || !std::isfinite(Y)) continue;
      xmin = std::min(xmin, X);
      xmax = std::max(xmax, X);
      ymin = std::min(ymin, Y);
      ymax = std::max(ymax, Y);
    }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  double padx = 0.05 * (xmax - xmin + 1e-12), pady = 0.05 * (ymax - ymin + 1e-12);
  xmin -= padx;
  xmax += padx;
  ymin -= pady;
  ymax += pady;

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
     << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << title << (loglog ? " (log-log)" : "") << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R
     << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  char buf[128];
  for (int k = 0; k <= 4; ++k) {
    double fx = xmin + k * (xmax - xmin) / 4.0;
    double fy = ymin + k * (ymax - ymin) / 4.0;
    double px = map_coord(fx, xmin, xmax, L, W - R);
    double py = map_coord(fy, ymin, ymax, H - B, T);
    std::snprintf(buf, sizeof(buf), "%.3g", loglog ? std::pow(10.0, fx) : fx);
    os << "<text x=\"" << px << "\" y=\"" << H - B + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.3g", loglog ? std::pow(10.0, fy) : fy);
    os << "<text x=\"" << L - 6 << "\" y=\"" << py + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << buf
       << "</text>\n";
  }

  int ci = 0;
  double legend_y = T + 16;
  for (const auto& s : series) {
    const char* col = colors[ci % 6];
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double X = tx(s.x[i]), Y = tx(s.y[i]);
      if (!std::isfinite(X) || !std::isfinite(Y)) continue;
      pts << map_coord(X, xmin, xmax, L, W - R) << ","
          << map_coord(Y, ymin, ymax, H - B, T) << " ";
    }
    if (s.line)
      os << "<polyline fill=\"none\" stroke=\"" << col
         << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double X = tx(s.x[i]), Y = tx(s.y[i]);
      if (!std::isfinite(X) || !std::isfinite(Y)) continue;
      os << "<circle cx=\"" << map_coord(X, xmin, xmax, L, W - R) << "\" cy=\""
         << map_coord(Y, ymin, ymax, H - B, T) << "\" r=\"2.5\" fill=\"" << col
         << "\"/>\n";
    }
    os << "<text x=\"" << W - R - 8 << "\" y=\"" << legend_y
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
       << col << "\">" << s.label << "</text>\n";
    legend_y += 16;
    ++ci;
  }
  os << "</svg>\n";
  write_text_file(path, os.str());
}

}  // namespace vml
