#include "fixread/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fixread/dsp.hpp"
#include "fixread/errors.hpp"
#include "fixread/parallel.hpp"

namespace fixread::features {
namespace {

std::vector<double> channel_as_double(const EpochView& epoch, int c) {
  auto span = epoch.channel(c);
  std::vector<double> x(span.size());
  for (std::size_t i = 0; i < span.size(); ++i) {
    if (!std::isfinite(span[i])) {
      throw error("epoch " + std::to_string(epoch.epoch_id) + ": non-finite sample");
    }
    x[i] = span[i];
  }
  return x;
}

double entropy_bits(const std::vector<int>& counts, int total) {
  double h = 0.0;
  for (int c : counts) {
    if (c == 0) continue;  // 0 log 0 := 0
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

std::vector<double> band_power(const EpochView& epoch) {
  if (epoch.samples < 2) {
    throw error("band_power: need at least 2 samples");
  }
  std::vector<double> out(static_cast<std::size_t>(epoch.channels) * kBandCount);
  for (int c = 0; c < epoch.channels; ++c) {
    const auto x = channel_as_double(epoch, c);
    const auto psd = dsp::periodogram(x, epoch.rate_hz, 512);
    for (int b = 0; b < kBandCount; ++b) {
      out[static_cast<std::size_t>(c) * kBandCount + b] =
          dsp::integrate_band(psd, kBands[b].low_hz, kBands[b].high_hz);
    }
  }
  return out;
}

SquareMatrix cond_entropy_matrix(const EpochView& epoch, int bins) {
  const int t = epoch.samples;
  const int n = epoch.channels;
  if (bins < 2) {
    throw error("cond_entropy_matrix: need at least 2 bins");
  }
  if (t < bins) {
    throw error("cond_entropy_matrix: need at least as many samples as bins");
  }

  // quantize each channel into equal-width bins over its own range
  std::vector<std::vector<int>> q(n);
  std::vector<double> marginal(n);
  for (int c = 0; c < n; ++c) {
    const auto x = channel_as_double(epoch, c);
    double lo = x[0], hi = x[0];
    for (double v : x) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    q[c].resize(t, 0);
    if (hi > lo) {
      const double scale = bins / (hi - lo);
      for (int i = 0; i < t; ++i) {
        const int bin = static_cast<int>((x[i] - lo) * scale);
        q[c][i] = std::min(bin, bins - 1);
      }
    }
    std::vector<int> counts(bins, 0);
    for (int b : q[c]) counts[b]++;
    marginal[c] = entropy_bits(counts, t);
  }

  const double h_max = std::log2(static_cast<double>(bins));
  SquareMatrix out(n);
  std::vector<int> joint(static_cast<std::size_t>(bins) * bins);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::fill(joint.begin(), joint.end(), 0);
      for (int s = 0; s < t; ++s) {
        joint[static_cast<std::size_t>(q[i][s]) * bins + q[j][s]]++;
      }
      const double h_joint = entropy_bits(joint, t);
      // H(X|Y) = H(X,Y) - H(Y), clamped into [0, log2 bins]
      out.at(i, j) = std::clamp(h_joint - marginal[j], 0.0, h_max);
      out.at(j, i) = std::clamp(h_joint - marginal[i], 0.0, h_max);
    }
    out.at(i, i) = 0.0;
  }
  return out;
}

std::vector<double> flatten_half(const SquareMatrix& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.n) * (m.n + 1) / 2);
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j <= i; ++j) {
      out.push_back(m.at(i, j));
    }
  }
  return out;
}

SquareMatrix plv_matrix(const EpochView& epoch) {
  const int t = epoch.samples;
  const int n = epoch.channels;
  if (t < 8) {
    throw error("plv_matrix: need at least 8 samples");
  }

  // unit phasors of each channel's analytic-signal phase
  std::vector<std::vector<std::complex<double>>> phasor(n);
  for (int c = 0; c < n; ++c) {
    auto x = channel_as_double(epoch, c);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= t;
    for (double& v : x) v -= mean;
    auto analytic = dsp::analytic_signal(x);
    phasor[c].resize(t);
    for (int s = 0; s < t; ++s) {
      const double mag = std::abs(analytic[s]);
      phasor[c][s] = mag > 1e-300 ? analytic[s] / mag : std::complex<double>(1.0, 0.0);
    }
  }

  SquareMatrix out(n);
  for (int i = 0; i < n; ++i) {
    out.at(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      std::complex<double> acc{0.0, 0.0};
      for (int s = 0; s < t; ++s) {
        acc += phasor[i][s] * std::conj(phasor[j][s]);
      }
      const double plv = std::clamp(std::abs(acc) / t, 0.0, 1.0);
      out.at(i, j) = plv;
      out.at(j, i) = plv;
    }
  }
  return out;
}

Adjacency binarize_at_median(const SquareMatrix& weights) {
  const int n = weights.n;
  Adjacency adj;
  adj.n = n;
  adj.edge.assign(static_cast<std::size_t>(n) * n, 0);
  if (n < 2) return adj;

  std::vector<double> offdiag;
  offdiag.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      offdiag.push_back(weights.at(i, j));
    }
  }
  std::sort(offdiag.begin(), offdiag.end());
  const std::size_t q = offdiag.size();
  const double median = (q % 2 == 1)
                            ? offdiag[q / 2]
                            : 0.5 * (offdiag[q / 2 - 1] + offdiag[q / 2]);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (weights.at(i, j) > median) {
        adj.edge[static_cast<std::size_t>(i) * n + j] = 1;
        adj.edge[static_cast<std::size_t>(j) * n + i] = 1;
      }
    }
  }
  return adj;
}

std::vector<double> clustering_from_adjacency(const Adjacency& adj) {
  const int n = adj.n;
  std::vector<double> coef(n, 0.0);
  std::vector<int> neighbors;
  for (int v = 0; v < n; ++v) {
    neighbors.clear();
    for (int u = 0; u < n; ++u) {
      if (u != v && adj.at(v, u)) neighbors.push_back(u);
    }
    const auto k = static_cast<int>(neighbors.size());
    if (k < 2) continue;
    int edges = 0;
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        if (adj.at(neighbors[a], neighbors[b])) ++edges;
      }
    }
    coef[v] = 2.0 * edges / (static_cast<double>(k) * (k - 1));
  }
  return coef;
}

std::vector<double> clustering_coefficients(const SquareMatrix& plv) {
  return clustering_from_adjacency(binarize_at_median(plv));
}

std::string_view feature_tag_id(FeatureTag tag) {
  switch (tag) {
    case FeatureTag::Bp30: return "BP30";
    case FeatureTag::CondEn30: return "CONDEN30";
    case FeatureTag::Plv30: return "PLV30";
    case FeatureTag::Combined90: return "COMBINED90";
  }
  return "";
}

FeatureTag parse_feature_tag(std::string_view s) {
  if (s == "BP30" || s == "bp") return FeatureTag::Bp30;
  if (s == "CONDEN30" || s == "conden") return FeatureTag::CondEn30;
  if (s == "PLV30" || s == "plv") return FeatureTag::Plv30;
  if (s == "COMBINED90" || s == "combined") return FeatureTag::Combined90;
  throw error("unknown feature tag: '" + std::string{s} + "'");
}

int feature_tag_dim(FeatureTag tag) {
  return tag == FeatureTag::Combined90 ? 90 : 30;
}

FeatureVector combine(const FeatureVector& bp30, const FeatureVector& ce30,
                      const FeatureVector& plv30) {
  if (bp30.epoch_id != ce30.epoch_id || bp30.epoch_id != plv30.epoch_id) {
    throw error("combine: feature vectors come from different epochs");
  }
  for (const auto* f : {&bp30, &ce30, &plv30}) {
    if (f->values.size() != 30) {
      throw error("combine: expected 30-dim inputs, got " +
                  std::to_string(f->values.size()));
    }
  }
  FeatureVector out;
  out.epoch_id = bp30.epoch_id;
  out.tag = FeatureTag::Combined90;
  out.values.reserve(90);
  out.values.insert(out.values.end(), bp30.values.begin(), bp30.values.end());
  out.values.insert(out.values.end(), ce30.values.begin(), ce30.values.end());
  out.values.insert(out.values.end(), plv30.values.begin(), plv30.values.end());
  return out;
}

RawFeatureTable compute_raw_features(const SessionBundle& bundle, int bins, int jobs) {
  const std::size_t n = bundle.epochs.size();
  const int c = bundle.channels;
  RawFeatureTable table;
  table.epoch_ids.resize(n);
  table.bp = RowMatrix(n, static_cast<std::size_t>(c) * kBandCount);
  table.cond_en = RowMatrix(n, static_cast<std::size_t>(c) * (c + 1) / 2);
  table.clustering = RowMatrix(n, static_cast<std::size_t>(c));

  parallel_for(n, jobs, [&](std::size_t i) {
    const auto view = view_of(bundle.epochs[i]);
    table.epoch_ids[i] = view.epoch_id;

    const auto bp = band_power(view);
    std::copy(bp.begin(), bp.end(), table.bp.row(i).begin());

    const auto ce = flatten_half(cond_entropy_matrix(view, bins));
    std::copy(ce.begin(), ce.end(), table.cond_en.row(i).begin());

    const auto cc = clustering_coefficients(plv_matrix(view));
    std::copy(cc.begin(), cc.end(), table.clustering.row(i).begin());
  });
  return table;
}

}  // namespace fixread::features
