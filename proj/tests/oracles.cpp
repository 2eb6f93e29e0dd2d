#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace oracles {
namespace {

std::size_t pow2_at_least(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

double direct_dft_band_power(std::span<const double> x, double rate_hz,
                             std::size_t min_length, double low_hz, double high_hz) {
  const std::size_t t = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(t);

  const std::size_t n = pow2_at_least(std::max(min_length, t));
  std::vector<double> padded(n, 0.0);
  for (std::size_t i = 0; i < t; ++i) padded[i] = x[i] - mean;

  // naive DFT, one-sided PSD normalized to integrate to the variance
  const std::size_t bins = n / 2 + 1;
  std::vector<double> psd(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double phase =
          -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(i) /
          static_cast<double>(n);
      re += padded[i] * std::cos(phase);
      im += padded[i] * std::sin(phase);
    }
    const bool interior = k != 0 && k != bins - 1;
    psd[k] = (interior ? 2.0 : 1.0) * (re * re + im * im) / (rate_hz * static_cast<double>(t));
  }

  const double df = rate_hz / static_cast<double>(n);
  auto value_at = [&](double f) {
    const double pos = f / df;
    const auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= bins) return psd[bins - 1];
    const double frac = pos - static_cast<double>(k);
    return psd[k] * (1.0 - frac) + psd[k + 1] * frac;
  };

  const double fmax = df * static_cast<double>(bins - 1);
  const double a = std::clamp(low_hz, 0.0, fmax);
  const double b = std::clamp(high_hz, 0.0, fmax);
  if (b <= a) return 0.0;

  const auto ka = static_cast<std::size_t>(std::ceil(a / df - 1e-12));
  const auto kb = static_cast<std::size_t>(std::floor(b / df + 1e-12));
  if (ka > kb) {
    return 0.5 * (value_at(a) + value_at(b)) * (b - a);
  }
  double total = 0.0;
  if (df * static_cast<double>(ka) > a) {
    total += 0.5 * (value_at(a) + psd[ka]) * (df * static_cast<double>(ka) - a);
  }
  for (std::size_t k = ka; k < kb; ++k) {
    total += 0.5 * (psd[k] + psd[k + 1]) * df;
  }
  if (b > df * static_cast<double>(kb)) {
    total += 0.5 * (psd[kb] + value_at(b)) * (b - df * static_cast<double>(kb));
  }
  return total;
}

double cond_entropy_direct(std::span<const double> x, std::span<const double> y,
                           int bins) {
  const std::size_t t = x.size();
  auto quantize = [&](std::span<const double> v) {
    double lo = v[0], hi = v[0];
    for (double s : v) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    std::vector<int> q(v.size(), 0);
    if (hi > lo) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        q[i] = std::min(static_cast<int>((v[i] - lo) / (hi - lo) * bins), bins - 1);
      }
    }
    return q;
  };
  const auto qx = quantize(x);
  const auto qy = quantize(y);

  std::vector<int> joint(static_cast<std::size_t>(bins) * bins, 0);
  std::vector<int> marg_y(bins, 0);
  for (std::size_t i = 0; i < t; ++i) {
    joint[static_cast<std::size_t>(qx[i]) * bins + qy[i]]++;
    marg_y[qy[i]]++;
  }

  double h = 0.0;
  for (int yv = 0; yv < bins; ++yv) {
    if (marg_y[yv] == 0) continue;
    const double py = static_cast<double>(marg_y[yv]) / static_cast<double>(t);
    double inner = 0.0;
    for (int xv = 0; xv < bins; ++xv) {
      const int c = joint[static_cast<std::size_t>(xv) * bins + yv];
      if (c == 0) continue;
      const double p_x_given_y = static_cast<double>(c) / static_cast<double>(marg_y[yv]);
      inner -= p_x_given_y * std::log2(p_x_given_y);
    }
    h += py * inner;
  }
  return h;
}

EigenResult jacobi_eigen(const fixread::RowMatrix& symmetric) {
  const int n = static_cast<int>(symmetric.rows);
  std::vector<double> a(symmetric.data);
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

  fixread::RowMatrix v(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;

  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off < 1e-24) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double sign = theta >= 0.0 ? 1.0 : -1.0;
        const double tv = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tv * tv + 1.0);
        const double s = tv * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v.at(k, p);
          const double vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int lhs, int rhs) { return at(lhs, lhs) > at(rhs, rhs); });

  EigenResult result;
  result.values.resize(n);
  result.vectors = fixread::RowMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    result.values[r] = at(order[r], order[r]);
    for (int k = 0; k < n; ++k) {
      result.vectors.at(r, k) = v.at(k, order[r]);
    }
  }
  return result;
}

fixread::RowMatrix pca_project_oracle(const fixread::RowMatrix& x, int k) {
  const std::size_t n = x.rows;
  const std::size_t d = x.cols;
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += x.at(i, j);
  }
  for (double& m : mean) m /= static_cast<double>(n);

  fixread::RowMatrix cov(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < d; ++r) {
      const double dr = x.at(i, r) - mean[r];
      for (std::size_t c = 0; c < d; ++c) {
        cov.at(r, c) += dr * (x.at(i, c) - mean[c]);
      }
    }
  }
  for (double& vv : cov.data) vv /= static_cast<double>(n - 1);

  const auto eig = jacobi_eigen(cov);
  fixread::RowMatrix proj(n, static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        acc += (x.at(i, c) - mean[c]) * eig.vectors.at(j, c);
      }
      proj.at(i, static_cast<std::size_t>(j)) = acc;
    }
  }
  return proj;
}

double permutation_pvalue(std::span<const double> a, std::span<const double> b,
                          int permutations, std::uint64_t seed) {
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  double observed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = a[i] - b[i];
    observed += diff[i];
  }
  observed = std::abs(observed / static_cast<double>(n));

  std::mt19937_64 gen(seed);
  int at_least = 0;
  for (int p = 0; p < permutations; ++p) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m += (gen() & 1ULL) ? diff[i] : -diff[i];
    }
    if (std::abs(m / static_cast<double>(n)) >= observed - 1e-15) ++at_least;
  }
  return (at_least + 1.0) / (permutations + 1.0);
}

std::vector<double> clustering_bruteforce(const std::vector<std::uint8_t>& adj, int n) {
  std::vector<double> coef(n, 0.0);
  auto edge = [&](int i, int j) { return adj[static_cast<std::size_t>(i) * n + j] != 0; };
  for (int v = 0; v < n; ++v) {
    int degree = 0;
    for (int u = 0; u < n; ++u) {
      if (u != v && edge(v, u)) ++degree;
    }
    if (degree < 2) continue;
    int pairs = 0;
    int connected = 0;
    for (int a = 0; a < n; ++a) {
      if (a == v || !edge(v, a)) continue;
      for (int b = a + 1; b < n; ++b) {
        if (b == v || !edge(v, b)) continue;
        ++pairs;
        if (edge(a, b)) ++connected;
      }
    }
    coef[v] = static_cast<double>(connected) / static_cast<double>(pairs);
  }
  return coef;
}

}  // namespace oracles
