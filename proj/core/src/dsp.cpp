#include "fixread/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fixread/errors.hpp"

namespace fixread::dsp {
namespace {

// The FFTW planner is not thread-safe; executing distinct plans is. Plans
// are cached per size, created with FFTW_UNALIGNED so they can run on
// plain std::vector storage via the new-array execute API.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan complex_plan(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto& table = sign == FFTW_FORWARD ? c2c_fwd_ : c2c_bwd_;
    auto it = table.find(n);
    if (it != table.end()) return it->second;
    std::vector<std::complex<double>> in(n), out(n);
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    table.emplace(n, plan);
    return plan;
  }

  fftw_plan real_plan(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = r2c_.find(n);
    if (it != r2c_.end()) return it->second;
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(
        static_cast<int>(n), in.data(),
        reinterpret_cast<fftw_complex*>(out.data()),
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    r2c_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> c2c_fwd_;
  std::map<std::size_t, fftw_plan> c2c_bwd_;
  std::map<std::size_t, fftw_plan> r2c_;
};

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x) {
  if (x.empty()) throw error("fft: empty input");
  std::vector<std::complex<double>> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(x.size());
  fftw_plan plan = PlanCache::instance().complex_plan(x.size(), FFTW_FORWARD);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> x) {
  if (x.empty()) throw error("ifft: empty input");
  std::vector<std::complex<double>> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(x.size());
  fftw_plan plan = PlanCache::instance().complex_plan(x.size(), FFTW_BACKWARD);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  if (x.empty()) throw error("rfft: empty input");
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(x.size() / 2 + 1);
  fftw_plan plan = PlanCache::instance().real_plan(x.size());
  fftw_execute_dft_r2c(plan, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<std::complex<double>> analytic_signal(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw error("analytic_signal: need at least 2 samples");
  std::vector<std::complex<double>> spec;
  {
    std::vector<std::complex<double>> in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = x[i];
    spec = fft(in);
  }
  // keep DC (and Nyquist when even), double positive, zero negative
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
  for (std::size_t k = half + 1; k < n; ++k) spec[k] = 0.0;
  return ifft(spec);
}

Psd periodogram(std::span<const double> x, double rate_hz, std::size_t min_length) {
  const std::size_t t = x.size();
  if (t < 2) throw error("periodogram: need at least 2 samples");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(t);

  const std::size_t n = next_pow2(std::max(min_length, t));
  std::vector<double> padded(n, 0.0);
  for (std::size_t i = 0; i < t; ++i) padded[i] = x[i] - mean;

  auto spec = rfft(padded);
  Psd psd;
  psd.df = rate_hz / static_cast<double>(n);
  psd.density.resize(spec.size());
  const double norm = 1.0 / (rate_hz * static_cast<double>(t));
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double mag2 = std::norm(spec[k]);
    const bool interior = k != 0 && k != spec.size() - 1;
    psd.density[k] = (interior ? 2.0 : 1.0) * mag2 * norm;
  }
  return psd;
}

double integrate_band(const Psd& psd, double a, double b) {
  const double fmax = psd.df * static_cast<double>(psd.density.size() - 1);
  a = std::clamp(a, 0.0, fmax);
  b = std::clamp(b, 0.0, fmax);
  if (b <= a) return 0.0;

  auto value_at = [&](double f) {
    const double pos = f / psd.df;
    const auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= psd.density.size()) return psd.density.back();
    const double frac = pos - static_cast<double>(k);
    return psd.density[k] * (1.0 - frac) + psd.density[k + 1] * frac;
  };

  const auto first_grid = static_cast<std::size_t>(std::ceil(a / psd.df - 1e-12));
  const auto last_grid = static_cast<std::size_t>(std::floor(b / psd.df + 1e-12));

  if (first_grid > last_grid) {
    // both endpoints inside one grid cell
    return 0.5 * (value_at(a) + value_at(b)) * (b - a);
  }

  double total = 0.0;
  const double fa = psd.df * static_cast<double>(first_grid);
  const double fb = psd.df * static_cast<double>(last_grid);
  if (fa > a) total += 0.5 * (value_at(a) + psd.density[first_grid]) * (fa - a);
  for (std::size_t k = first_grid; k < last_grid; ++k) {
    total += 0.5 * (psd.density[k] + psd.density[k + 1]) * psd.df;
  }
  if (b > fb) total += 0.5 * (psd.density[last_grid] + value_at(b)) * (b - fb);
  return total;
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(n - 1)));
  }
  return w;
}

}  // namespace fixread::dsp
