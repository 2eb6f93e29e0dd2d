#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "fixread/analysis.hpp"
#include "fixread/dsp.hpp"
#include "fixread/errors.hpp"

namespace fixread::analysis {
namespace {

void require_channel(const std::vector<FrpEpoch>& epochs, int channel) {
  if (epochs.empty()) {
    throw error("FRP analysis: no epochs");
  }
  for (const auto& e : epochs) {
    if (channel < 0 || channel >= e.channels) {
      throw error("FRP analysis: channel " + std::to_string(channel) + " out of range");
    }
  }
}

}  // namespace

FrpEpoch extract_frp_window(const RowMatrix& continuous, int onset_sample) {
  const auto channels = static_cast<int>(continuous.rows);
  const auto total = static_cast<int>(continuous.cols);
  const int start = onset_sample - FrpEpoch::kOnsetIndex;
  const int stop = start + FrpEpoch::kSamples;
  if (start < 0 || stop > total) {
    throw error("extract_frp_window: window [" + std::to_string(start) + "," +
                std::to_string(stop) + ") out of bounds for T = " + std::to_string(total));
  }
  FrpEpoch out;
  out.channels = channels;
  out.data.resize(static_cast<std::size_t>(channels) * FrpEpoch::kSamples);
  for (int c = 0; c < channels; ++c) {
    for (int t = 0; t < FrpEpoch::kSamples; ++t) {
      out.data[static_cast<std::size_t>(c) * FrpEpoch::kSamples + t] =
          static_cast<float>(continuous.at(c, start + t));
    }
  }
  return out;
}

std::vector<double> mean_frp(const std::vector<FrpEpoch>& epochs, int channel) {
  require_channel(epochs, channel);
  std::vector<double> out(FrpEpoch::kSamples, 0.0);
  for (const auto& e : epochs) {
    const auto row = e.channel(channel);
    for (int t = 0; t < FrpEpoch::kSamples; ++t) out[t] += row[t];
  }
  for (double& v : out) v /= static_cast<double>(epochs.size());
  return out;
}

ErpImage erp_image(const std::vector<FrpEpoch>& epochs, int channel, int smooth) {
  require_channel(epochs, channel);
  if (smooth < 1) {
    throw error("erp_image: smooth must be >= 1");
  }
  const auto trials = epochs.size();
  if (trials < static_cast<std::size_t>(smooth)) {
    throw error("erp_image: need at least " + std::to_string(smooth) + " trials");
  }

  ErpImage out;
  out.channel = channel;
  out.smooth = smooth;
  out.image = RowMatrix(trials, FrpEpoch::kSamples);

  // moving average down the trial axis, window truncated at the edges
  const int back = (smooth - 1) / 2;
  const int forward = smooth / 2;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::size_t lo = i >= static_cast<std::size_t>(back) ? i - back : 0;
    const std::size_t hi = std::min(trials, i + forward + 1);
    auto dst = out.image.row(i);
    for (std::size_t r = lo; r < hi; ++r) {
      const auto row = epochs[r].channel(channel);
      for (int t = 0; t < FrpEpoch::kSamples; ++t) dst[t] += row[t];
    }
    const double inv = 1.0 / static_cast<double>(hi - lo);
    for (int t = 0; t < FrpEpoch::kSamples; ++t) dst[t] *= inv;
  }
  return out;
}

PsdCurve welch_psd(const std::vector<FrpEpoch>& epochs, int channel, int window,
                   double overlap) {
  require_channel(epochs, channel);
  if (window < 8) {
    throw error("welch_psd: window too short");
  }
  if (FrpEpoch::kSamples < window) {
    throw error("welch_psd: epoch shorter than the window");
  }
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw error("welch_psd: overlap must lie in [0,1)");
  }
  const double rate = 500.0;
  const int hop = std::max(1, static_cast<int>(window * (1.0 - overlap)));
  const auto taper = dsp::hann_window(static_cast<std::size_t>(window));
  double taper_power = 0.0;
  for (double w : taper) taper_power += w * w;

  PsdCurve curve;
  curve.window = window;
  curve.overlap = overlap;
  curve.density.assign(static_cast<std::size_t>(window) / 2 + 1, 0.0);
  curve.frequencies_hz.resize(curve.density.size());
  for (std::size_t k = 0; k < curve.density.size(); ++k) {
    curve.frequencies_hz[k] = rate * static_cast<double>(k) / window;
  }

  std::size_t segments = 0;
  std::vector<double> seg(window);
  for (const auto& e : epochs) {
    const auto row = e.channel(channel);
    for (int start = 0; start + window <= FrpEpoch::kSamples; start += hop) {
      double mean = 0.0;
      for (int t = 0; t < window; ++t) mean += row[start + t];
      mean /= window;
      for (int t = 0; t < window; ++t) seg[t] = (row[start + t] - mean) * taper[t];

      const auto spec = dsp::rfft(seg);
      const double norm = 1.0 / (rate * taper_power);
      for (std::size_t k = 0; k < spec.size(); ++k) {
        const bool interior = k != 0 && k != spec.size() - 1;
        curve.density[k] += (interior ? 2.0 : 1.0) * std::norm(spec[k]) * norm;
      }
      ++segments;
    }
  }
  for (double& v : curve.density) v /= static_cast<double>(segments);
  return curve;
}

std::vector<bool> pointwise_significance(const std::vector<FrpEpoch>& group_a,
                                         const std::vector<FrpEpoch>& group_b,
                                         int channel, double alpha) {
  require_channel(group_a, channel);
  require_channel(group_b, channel);
  if (group_a.size() < 2 || group_b.size() < 2) {
    throw error("pointwise_significance: need at least 2 epochs per group");
  }

  const auto na = static_cast<double>(group_a.size());
  const auto nb = static_cast<double>(group_b.size());
  std::vector<bool> mask(FrpEpoch::kSamples, false);

  for (int t = 0; t < FrpEpoch::kSamples; ++t) {
    double ma = 0.0, mb = 0.0;
    for (const auto& e : group_a) ma += e.channel(channel)[t];
    for (const auto& e : group_b) mb += e.channel(channel)[t];
    ma /= na;
    mb /= nb;
    double va = 0.0, vb = 0.0;
    for (const auto& e : group_a) {
      const double d = e.channel(channel)[t] - ma;
      va += d * d;
    }
    for (const auto& e : group_b) {
      const double d = e.channel(channel)[t] - mb;
      vb += d * d;
    }
    va /= na - 1.0;
    vb /= nb - 1.0;

    const double se2 = va / na + vb / nb;
    if (se2 <= 0.0) {
      mask[t] = ma != mb;  // degenerate: zero variance in both groups
      continue;
    }
    const double tstat = (ma - mb) / std::sqrt(se2);
    // Welch-Satterthwaite degrees of freedom
    const double df = se2 * se2 /
                      (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
    boost::math::students_t_distribution<double> dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(tstat)));
    mask[t] = p < alpha;
  }
  return mask;
}

TopographyMap band_topography(const std::vector<FrpEpoch>& hrw_epochs,
                              const std::vector<FrpEpoch>& lrw_epochs, double rate_hz) {
  if (hrw_epochs.empty() || lrw_epochs.empty()) {
    throw error("band_topography: both groups must be non-empty");
  }
  const int channels = hrw_epochs.front().channels;

  auto group_mean = [&](const std::vector<FrpEpoch>& epochs) {
    std::array<std::vector<double>, kBandCount> maps;
    for (auto& m : maps) m.assign(channels, 0.0);
    for (const auto& e : epochs) {
      const auto bp = features::band_power(features::view_of(e, rate_hz));
      for (int c = 0; c < channels; ++c) {
        for (int b = 0; b < kBandCount; ++b) {
          maps[b][c] += bp[static_cast<std::size_t>(c) * kBandCount + b];
        }
      }
    }
    for (auto& m : maps) {
      for (double& v : m) v /= static_cast<double>(epochs.size());
    }
    return maps;
  };

  TopographyMap out;
  out.channels = channels;
  out.hrw = group_mean(hrw_epochs);
  out.lrw = group_mean(lrw_epochs);
  for (int b = 0; b < kBandCount; ++b) {
    out.diff[b].resize(channels);
    for (int c = 0; c < channels; ++c) {
      out.diff[b][c] = out.hrw[b][c] - out.lrw[b][c];
    }
  }
  return out;
}

double psd_band_difference(const PsdCurve& hrw, const PsdCurve& lrw, double low_hz,
                           double high_hz) {
  if (hrw.frequencies_hz != lrw.frequencies_hz) {
    throw error("psd_band_difference: frequency grids differ");
  }
  double acc = 0.0;
  for (std::size_t k = 1; k < hrw.frequencies_hz.size(); ++k) {
    const double f0 = hrw.frequencies_hz[k - 1];
    const double f1 = hrw.frequencies_hz[k];
    if (f0 < low_hz || f1 > high_hz) continue;
    const double da = hrw.density[k - 1] - lrw.density[k - 1];
    const double db = hrw.density[k] - lrw.density[k];
    acc += 0.5 * (da + db) * (f1 - f0);
  }
  return acc;
}

}  // namespace fixread::analysis
