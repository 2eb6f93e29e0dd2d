#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fixread::dsp {

std::size_t next_pow2(std::size_t n);

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x);

// Inverse transform including the 1/N normalization.
std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> x);

// Real-input transform; returns the n/2+1 non-negative-frequency bins.
std::vector<std::complex<double>> rfft(std::span<const double> x);

// Analytic signal via the frequency-domain method: negative frequencies
// zeroed, positive doubled. Input length is preserved.
std::vector<std::complex<double>> analytic_signal(std::span<const double> x);

struct Psd {
  std::vector<double> density;  // one-sided, index k at frequency k*df
  double df = 0.0;
};

// One-sided periodogram of the mean-removed signal, zero-padded to at
// least min_length samples (rounded to a power of two). Normalized so the
// trapezoid integral over [0, rate/2] recovers the signal variance.
Psd periodogram(std::span<const double> x, double rate_hz, std::size_t min_length);

// Trapezoid integral of a sampled density over [a, b], with linear
// interpolation at the interval endpoints.
double integrate_band(const Psd& psd, double a, double b);

std::vector<double> hann_window(std::size_t n);

}  // namespace fixread::dsp
