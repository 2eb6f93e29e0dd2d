#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fixread/features.hpp"
#include "fixread/grouping.hpp"
#include "fixread/matrix.hpp"
#include "fixread/types.hpp"

namespace fixread::classify {

inline constexpr int kLrw = 0;
inline constexpr int kHrw = 1;

// Enumeration order is the tie-break order for best_of and the row order
// of the report table.
enum class ClassifierKind {
  Lda,
  Qda,
  LogReg,
  GaussNb,
  KernelNb,
  SvmLinear,
  SvmQuad,
  SvmCubic,
  SvmGaussFine,
  SvmGaussMedium,
  SvmGaussCoarse,
};

inline constexpr int kClassifierCount = 11;

inline constexpr std::array<ClassifierKind, kClassifierCount> kAllClassifiers = {
    ClassifierKind::Lda,          ClassifierKind::Qda,
    ClassifierKind::LogReg,       ClassifierKind::GaussNb,
    ClassifierKind::KernelNb,     ClassifierKind::SvmLinear,
    ClassifierKind::SvmQuad,      ClassifierKind::SvmCubic,
    ClassifierKind::SvmGaussFine, ClassifierKind::SvmGaussMedium,
    ClassifierKind::SvmGaussCoarse,
};

std::string_view classifier_name(ClassifierKind kind);  // paper-style display name
std::string_view classifier_id(ClassifierKind kind);    // stable machine id
ClassifierKind parse_classifier(std::string_view s);

// Every hyperparameter of the classifier family, pinned.
struct Hyper {
  double ridge_factor = 1e-6;    // LDA/QDA diagonal ridge: factor*trace/d
  double logreg_tol = 1e-8;      // gradient max-norm
  int logreg_max_iter = 1000;
  double nb_var_floor = 1e-9;
  double svm_c = 1.0;
  double svm_tol = 1e-3;         // SMO KKT tolerance
  long svm_max_iter = 100000;    // successful working-set steps
};

// ---- trained models ----

struct LinearModel {  // LDA and logistic regression share the surface form
  std::vector<double> weights;
  double bias = 0.0;
};

struct QdaModel {
  // per class: mean, inverse covariance (ridged), log-determinant, log prior
  std::array<std::vector<double>, 2> mean;
  std::array<RowMatrix, 2> inv_cov;
  std::array<double, 2> log_det{};
  std::array<double, 2> log_prior{};
};

struct GaussNbModel {
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> var;
  std::array<double, 2> log_prior{};
};

struct KernelNbModel {
  std::array<RowMatrix, 2> train;           // class rows
  std::array<std::vector<double>, 2> bandwidth;  // per feature (Silverman)
  std::array<double, 2> log_prior{};
};

enum class KernelKind { Linear, Poly, Rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  double gamma = 1.0;
  int degree = 1;
};

struct SvmModel {
  KernelSpec kernel;
  RowMatrix support_vectors;
  std::vector<double> coef;  // alpha_i * y_i per support vector
  double bias = 0.0;
};

struct Model {
  ClassifierKind kind = ClassifierKind::Lda;
  int dim = 0;
  std::variant<LinearModel, QdaModel, GaussNbModel, KernelNbModel, SvmModel> impl;
};

// Fits one classifier on standardized features; labels are {0,1}.
// Deterministic given seed (only the SVM working-set tie-breaking uses it).
Model train(ClassifierKind kind, const RowMatrix& x, const std::vector<int>& y,
            const Hyper& hyper = {}, std::uint64_t seed = 0);

// Signed score per row; > 0 means HRW, ties go to LRW.
std::vector<double> decision_values(const Model& model, const RowMatrix& x);
std::vector<int> predict(const Model& model, const RowMatrix& x);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

// ---- data plumbing ----

// Per-feature z-scoring; zero-variance features map to 0.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> inv_sd;

  static Scaler fit(const RowMatrix& x);
  RowMatrix apply(const RowMatrix& x) const;
};

// Epoch rows with raw (unreduced) feature blocks; reduction to the tagged
// 30/90 dims happens inside cross-validation, per fold.
struct LabeledSet {
  std::string subject_id;
  features::FeatureTag tag = features::FeatureTag::Combined90;
  std::vector<EpochId> epoch_ids;
  std::vector<int> labels;  // aligned with rows
  RowMatrix bp;
  RowMatrix cond_en;
  RowMatrix clustering;

  std::size_t size() const { return labels.size(); }
};

// Joins epochs to groupings; epochs of sentences without a usable
// grouping (failed or degenerate) are dropped.
LabeledSet build_labeled_set(const SessionBundle& bundle,
                             const features::RawFeatureTable& raw,
                             const std::vector<WordGrouping>& groupings,
                             features::FeatureTag tag);

// Non-repetitive random downsampling of the majority class to the
// minority count; output order is a seeded shuffle.
LabeledSet balance_classes(const LabeledSet& set, std::uint64_t seed);

// ---- cross-validation ----

struct ClassifierScore {
  ClassifierKind kind = ClassifierKind::Lda;
  std::vector<double> fold_accuracies;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation across folds
};

struct CvReport {
  std::string subject_id;
  features::FeatureTag tag = features::FeatureTag::Combined90;
  std::uint64_t seed = 0;
  int folds = 5;
  std::string fold_digest;  // hash of the fold assignment
  std::vector<std::string> fold_model_digests;  // scaler+reducers per fold
  std::vector<ClassifierScore> results;
};

struct CvOptions {
  int folds = 5;
  int reduce_dim = 30;  // per feature block, clamped to what the data supports
  bool shuffle_labels = false;  // chance-level control
  Hyper hyper;
};

// Stratified seeded folds; per fold, the reducers (PCA / node selection)
// and the scaler are fit on training rows only, then every requested
// classifier is trained and scored on the held-out fold.
CvReport cross_validate(const LabeledSet& set,
                        const std::vector<ClassifierKind>& kinds,
                        std::uint64_t seed, const CvOptions& options = {});

std::pair<ClassifierKind, double> best_of(const CvReport& report);

void save_cv_reports(const std::vector<CvReport>& reports, const std::string& path);
std::vector<CvReport> load_cv_reports(const std::string& path);

// Table-shaped CSV: one row per classifier, one column per feature set,
// "mean ± sd" cells on a 0-100 scale.
void render_cv_table(const std::vector<CvReport>& reports, const std::string& path,
                     std::uint64_t seed);

}  // namespace fixread::classify
