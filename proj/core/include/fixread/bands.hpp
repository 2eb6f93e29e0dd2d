#pragma once

#include <array>
#include <string_view>

#include "fixread/types.hpp"

namespace fixread {

struct BandDef {
  std::string_view name;
  double low_hz;
  double high_hz;
};

// The five analysis bands, ordered, with non-overlapping interiors.
inline constexpr std::array<BandDef, kBandCount> kBands = {{
    {"delta", 0.5, 4.0},
    {"theta", 4.0, 8.0},
    {"alpha", 8.0, 13.0},
    {"beta", 13.0, 30.0},
    {"gamma", 30.0, 64.0},
}};

}  // namespace fixread
