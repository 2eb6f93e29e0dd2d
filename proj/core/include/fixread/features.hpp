#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fixread/bands.hpp"
#include "fixread/matrix.hpp"
#include "fixread/types.hpp"

namespace fixread::features {

// Non-owning view over one epoch's C x T samples; adapts both the word
// epochs and the fixed-length FRP windows.
struct EpochView {
  EpochId epoch_id = 0;
  int channels = 0;
  int samples = 0;
  double rate_hz = 500.0;
  const float* data = nullptr;

  std::span<const float> channel(int c) const {
    return {data + static_cast<std::size_t>(c) * samples,
            static_cast<std::size_t>(samples)};
  }
};

inline EpochView view_of(const EegEpoch& e) {
  return {e.epoch_id, e.channels, e.samples, e.rate_hz, e.data.data()};
}
inline EpochView view_of(const FrpEpoch& e, double rate_hz = 500.0) {
  return {e.epoch_id, e.channels, FrpEpoch::kSamples, rate_hz, e.data.data()};
}

// ---- band power ----

// Per-channel power in the five bands, channel-major (value[c*5+b], uV^2).
// Periodogram of the mean-removed signal zero-padded to >= 512 samples,
// integrated per band with the trapezoid rule.
std::vector<double> band_power(const EpochView& epoch);

// ---- conditional entropy ----

// C x C matrix with entry (i,j) = H(X_i | X_j) in bits. Channels are
// quantized into `bins` equal-width amplitude bins over their own range;
// a constant channel occupies a single bin. Asymmetric; zero diagonal.
SquareMatrix cond_entropy_matrix(const EpochView& epoch, int bins = 8);

// Lower triangle including the diagonal, row-major: C(C+1)/2 values
// (5565 for C = 105).
std::vector<double> flatten_half(const SquareMatrix& m);

// ---- PLV connectivity ----

// Phase locking value between every channel pair, computed from the
// broadband analytic-signal phase of each mean-removed channel.
// Symmetric, unit diagonal, entries in [0,1].
SquareMatrix plv_matrix(const EpochView& epoch);

struct Adjacency {
  int n = 0;
  std::vector<std::uint8_t> edge;  // n x n, symmetric, zero diagonal

  bool at(int i, int j) const { return edge[static_cast<std::size_t>(i) * n + j] != 0; }
};

// Binarize at the median off-diagonal weight (strictly greater => edge).
Adjacency binarize_at_median(const SquareMatrix& weights);

// C(v) = 2 e(N(v)) / (|N(v)| (|N(v)|-1)); nodes of degree < 2 get 0.
std::vector<double> clustering_from_adjacency(const Adjacency& adj);

std::vector<double> clustering_coefficients(const SquareMatrix& plv);

// ---- dimensionality reduction ----

struct PcaModel {
  int k = 0;
  int dim = 0;
  std::vector<double> mean;                // dim
  RowMatrix components;                    // k x dim, rows orthonormal
  std::vector<double> explained_variance;  // non-increasing
  std::string source_tag;

  std::vector<double> apply(std::span<const double> x) const;
};

// Mean-centered eigendecomposition of the sample covariance (Gram trick
// when dim > rows). Component signs fixed so the largest-magnitude
// coordinate of each row is positive.
PcaModel fit_pca(const RowMatrix& x, int k = 30, const std::string& source_tag = "");

std::vector<double> apply_pca(const PcaModel& model, std::span<const double> x);

void save_pca(const PcaModel& model, const std::string& path);
PcaModel load_pca(const std::string& path);

// Top-k node indices by clustering-coefficient variance across training
// epochs, ties to the lower index; returned ascending.
std::vector<int> select_nodes(const RowMatrix& coefs, int k = 30);

// ---- feature vectors ----

enum class FeatureTag { Bp30, CondEn30, Plv30, Combined90 };

std::string_view feature_tag_id(FeatureTag tag);
FeatureTag parse_feature_tag(std::string_view s);
int feature_tag_dim(FeatureTag tag);

struct FeatureVector {
  EpochId epoch_id = 0;
  FeatureTag tag = FeatureTag::Bp30;
  std::vector<double> values;
};

// [BP30 | CONDEN30 | PLV30] concatenation; all three must come from the
// same epoch and be 30-dimensional.
FeatureVector combine(const FeatureVector& bp30, const FeatureVector& ce30,
                      const FeatureVector& plv30);

// ---- per-bundle driver ----

// Raw (unreduced) per-epoch features, row i = bundle.epochs[i]:
// band power 5C, flattened conditional entropy C(C+1)/2, clustering
// coefficients C.
struct RawFeatureTable {
  std::vector<EpochId> epoch_ids;
  RowMatrix bp;
  RowMatrix cond_en;
  RowMatrix clustering;
};

RawFeatureTable compute_raw_features(const SessionBundle& bundle, int bins = 8,
                                     int jobs = 1);

}  // namespace fixread::features
