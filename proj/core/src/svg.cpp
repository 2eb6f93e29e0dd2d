#include "fixread/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fixread/errors.hpp"

namespace fixread::svg {
namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 400;
constexpr int kMargin = 48;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::ofstream open_svg(const std::string& path, int w, int h) {
  std::ofstream out(path);
  if (!out) {
    throw error("cannot open for writing: " + path);
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
      << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out;
}

void title_text(std::ofstream& out, const std::string& title) {
  out << "<text x=\"" << kMargin << "\" y=\"20\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << title << "</text>\n";
}

// blue -> white -> red, v in [-1, 1]
std::string diverging_color(double v) {
  v = std::clamp(v, -1.0, 1.0);
  int r, g, b;
  if (v < 0) {
    r = static_cast<int>(255 * (1.0 + v));
    g = static_cast<int>(255 * (1.0 + v));
    b = 255;
  } else {
    r = 255;
    g = static_cast<int>(255 * (1.0 - v));
    b = static_cast<int>(255 * (1.0 - v));
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<double>& x, const std::vector<Series>& series,
                      const std::vector<bool>& mask) {
  if (x.empty() || series.empty()) {
    throw error("write_line_chart: empty input");
  }
  double lo = series[0].y[0], hi = lo;
  for (const auto& s : series) {
    for (double v : s.y) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi <= lo) hi = lo + 1.0;

  const double x0 = x.front();
  const double x1 = x.back() == x0 ? x0 + 1.0 : x.back();
  auto px = [&](double v) {
    return kMargin + (v - x0) / (x1 - x0) * (kWidth - 2 * kMargin);
  };
  auto py = [&](double v) {
    return kHeight - kMargin - (v - lo) / (hi - lo) * (kHeight - 2 * kMargin);
  };

  auto out = open_svg(path, kWidth, kHeight);
  title_text(out, title);

  if (!mask.empty()) {
    for (std::size_t i = 0; i + 1 < mask.size() && i + 1 < x.size(); ++i) {
      if (!mask[i]) continue;
      out << "<rect x=\"" << num(px(x[i])) << "\" y=\"" << kMargin << "\" width=\""
          << num(px(x[i + 1]) - px(x[i])) << "\" height=\"" << kHeight - 2 * kMargin
          << "\" fill=\"#c8f0c8\"/>\n";
    }
  }

  // axes
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << num(x0) << "</text>\n";
  out << "<text x=\"" << kWidth - kMargin - 20 << "\" y=\"" << kHeight - kMargin + 16
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << num(x1) << "</text>\n";
  out << "<text x=\"4\" y=\"" << kHeight - kMargin
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << num(lo) << "</text>\n";
  out << "<text x=\"4\" y=\"" << kMargin + 4
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << num(hi) << "</text>\n";

  int legend_y = kMargin + 14;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.y.size() && i < x.size(); ++i) {
      out << num(px(x[i])) << "," << num(py(s.y[i])) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin - 140 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << s.color << "\">"
        << s.label << "</text>\n";
    legend_y += 14;
  }
  out << "</svg>\n";
}

void write_grid_heatmap(const std::string& path, const std::string& title,
                        const std::vector<double>& values, int columns) {
  if (values.empty() || columns < 1) {
    throw error("write_grid_heatmap: empty input");
  }
  const int rows = (static_cast<int>(values.size()) + columns - 1) / columns;
  const int cell = 18;
  const int w = columns * cell + 2 * kMargin;
  const int h = rows * cell + 2 * kMargin;

  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) peak = 1.0;

  auto out = open_svg(path, w, h);
  title_text(out, title);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int r = static_cast<int>(i) / columns;
    const int c = static_cast<int>(i) % columns;
    out << "<rect x=\"" << kMargin + c * cell << "\" y=\"" << kMargin + r * cell
        << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
        << diverging_color(values[i] / peak) << "\" stroke=\"#ddd\"/>\n";
  }
  out << "</svg>\n";
}

void write_matrix_heatmap(const std::string& path, const std::string& title,
                          const RowMatrix& image) {
  if (image.rows == 0 || image.cols == 0) {
    throw error("write_matrix_heatmap: empty input");
  }
  const int w = kWidth;
  const int h = kHeight;
  const double cell_w = static_cast<double>(w - 2 * kMargin) / image.cols;
  const double cell_h = static_cast<double>(h - 2 * kMargin) / image.rows;

  double peak = 0.0;
  for (double v : image.data) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) peak = 1.0;

  auto out = open_svg(path, w, h);
  title_text(out, title);
  for (std::size_t r = 0; r < image.rows; ++r) {
    for (std::size_t c = 0; c < image.cols; ++c) {
      out << "<rect x=\"" << num(kMargin + c * cell_w) << "\" y=\""
          << num(kMargin + r * cell_h) << "\" width=\"" << num(cell_w + 0.5)
          << "\" height=\"" << num(cell_h + 0.5) << "\" fill=\""
          << diverging_color(image.at(r, c) / peak) << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace fixread::svg
