#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fixread/features.hpp"
#include "fixread/grouping.hpp"
#include "fixread/matrix.hpp"
#include "fixread/types.hpp"

namespace fixread::analysis {

// ---- eye-fixation statistics ----

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
  int n = 0;  // subjects contributing
};

struct GroupGazeStats {
  int word_count = 0;  // corpus-level words in the group
  MeanSd fixations_incl_zero;  // fixations/word, zero-fixation words included
  MeanSd fixations_excl_zero;  // ... and excluded
  MeanSd gd_ms, trt_ms, ffd_ms, sfd_ms, gopast_ms;
};

struct GazeStatsTable {
  GroupGazeStats hrw;
  GroupGazeStats lrw;
  int total_words = 0;
  // paired across subjects; absent with fewer than 3 usable pairs
  std::optional<double> p_fix_incl, p_fix_excl, p_gd, p_trt, p_ffd, p_sfd, p_gopast;
  std::vector<std::string> notes;  // subjects excluded from a measure, etc.
};

// Per subject and group: fixations/word computed both with and without
// zero-fixation words, plus the five duration means over fixated words;
// aggregated across subjects as mean ± sd with paired p-values.
GazeStatsTable fixation_stats(const std::vector<SessionBundle>& bundles,
                              const std::vector<WordGrouping>& groupings);

void render_gaze_stats(const GazeStatsTable& table, const std::string& path,
                       std::uint64_t seed);

// Two-sided paired t-test over per-subject means. All-zero differences
// give exactly 1.0; zero-variance nonzero differences are an error.
double paired_pvalue(std::span<const double> a, std::span<const double> b);

// ---- fixation-related potentials ----

// Cuts [onset-50, onset+200) out of a continuous C x T recording.
FrpEpoch extract_frp_window(const RowMatrix& continuous, int onset_sample);

// Per-timepoint average across trials for one channel.
std::vector<double> mean_frp(const std::vector<FrpEpoch>& epochs, int channel);

struct ErpImage {
  int channel = 0;
  int smooth = 1;
  RowMatrix image;  // trials x 250, smoothed across the trial axis
};

// Trials stay in input order; vertical moving average of width `smooth`,
// window truncated at the edges. smooth = 1 is the identity.
ErpImage erp_image(const std::vector<FrpEpoch>& epochs, int channel, int smooth = 10);

struct PsdCurve {
  std::vector<double> frequencies_hz;
  std::vector<double> density;  // uV^2/Hz
  int window = 128;
  double overlap = 0.5;
};

// Welch estimate: cosine-tapered (Hann) segments with 50% overlap,
// averaged over segments and trials; integral approximates the variance.
PsdCurve welch_psd(const std::vector<FrpEpoch>& epochs, int channel, int window = 128,
                   double overlap = 0.5);

// Per-timepoint two-sided unequal-variance t-test; true where p < alpha.
std::vector<bool> pointwise_significance(const std::vector<FrpEpoch>& group_a,
                                         const std::vector<FrpEpoch>& group_b,
                                         int channel, double alpha = 0.05);

struct TopographyMap {
  int channels = 0;
  // per band: C per-channel mean band powers
  std::array<std::vector<double>, kBandCount> hrw;
  std::array<std::vector<double>, kBandCount> lrw;
  std::array<std::vector<double>, kBandCount> diff;  // hrw - lrw
};

TopographyMap band_topography(const std::vector<FrpEpoch>& hrw_epochs,
                              const std::vector<FrpEpoch>& lrw_epochs,
                              double rate_hz = 500.0);

// Integrated PSD difference (HRW - LRW) over a frequency range; the
// scalar summary reported for the [0.5,10] and [25,45] Hz windows.
double psd_band_difference(const PsdCurve& hrw, const PsdCurve& lrw, double low_hz,
                           double high_hz);

}  // namespace fixread::analysis
