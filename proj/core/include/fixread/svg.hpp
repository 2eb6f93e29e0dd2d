#pragma once

#include <string>
#include <vector>

#include "fixread/matrix.hpp"

namespace fixread::svg {

struct Series {
  std::string label;
  std::string color;  // CSS color
  std::vector<double> y;
};

// Simple line chart; mask (optional, same length as x) shades significant
// spans, the convention used for FRP difference plots.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<double>& x, const std::vector<Series>& series,
                      const std::vector<bool>& mask = {});

// Per-channel values as a colored grid keyed by channel index; diverging
// palette centered at zero when values span both signs.
void write_grid_heatmap(const std::string& path, const std::string& title,
                        const std::vector<double>& values, int columns);

// Trials x samples raster (ERP-image style).
void write_matrix_heatmap(const std::string& path, const std::string& title,
                          const RowMatrix& image);

}  // namespace fixread::svg
