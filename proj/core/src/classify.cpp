#include "fixread/classify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "fixread/errors.hpp"
#include "fixread/rng.hpp"
#include "svm_internal.hpp"

namespace fixread::classify {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd to_eigen(const RowMatrix& x) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
      x.data.data(), static_cast<Eigen::Index>(x.rows),
      static_cast<Eigen::Index>(x.cols));
}

struct ClassSplit {
  std::vector<std::size_t> rows[2];
};

ClassSplit split_classes(const std::vector<int>& y) {
  ClassSplit split;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != kLrw && y[i] != kHrw) {
      throw error("train: labels must be 0 (LRW) or 1 (HRW)");
    }
    split.rows[y[i]].push_back(i);
  }
  if (split.rows[0].size() < 2 || split.rows[1].size() < 2) {
    throw error("train: need at least 2 rows per class");
  }
  return split;
}

MatrixXd class_rows(const RowMatrix& x, const std::vector<std::size_t>& rows) {
  MatrixXd out(rows.size(), x.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) out(i, j) = x.at(rows[i], j);
  }
  return out;
}

// ridged covariance: lambda = factor * trace(cov) / d added to diagonals;
// retries with 10x lambda if the factorization still fails
MatrixXd ridged_inverse(const MatrixXd& cov, double factor, double* out_log_det) {
  const auto d = cov.rows();
  double lambda = factor * cov.trace() / static_cast<double>(d);
  if (!(lambda > 0.0)) lambda = factor;
  for (int attempt = 0; attempt < 40; ++attempt) {
    MatrixXd ridged = cov + lambda * MatrixXd::Identity(d, d);
    Eigen::LLT<MatrixXd> llt(ridged);
    if (llt.info() == Eigen::Success) {
      if (out_log_det != nullptr) {
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) {
          log_det += 2.0 * std::log(llt.matrixL()(i, i));
        }
        *out_log_det = log_det;
      }
      return llt.solve(MatrixXd::Identity(d, d));
    }
    lambda *= 10.0;
  }
  throw error("covariance ridge failed to stabilize");
}

RowMatrix from_eigen(const MatrixXd& m) {
  RowMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    }
  }
  return out;
}

Model fit_lda(const RowMatrix& x, const std::vector<int>& y, const Hyper& hyper) {
  const ClassSplit split = split_classes(y);
  const auto d = static_cast<Eigen::Index>(x.cols);
  MatrixXd x0 = class_rows(x, split.rows[0]);
  MatrixXd x1 = class_rows(x, split.rows[1]);
  VectorXd mu0 = x0.colwise().mean();
  VectorXd mu1 = x1.colwise().mean();
  MatrixXd c0 = x0.rowwise() - mu0.transpose();
  MatrixXd c1 = x1.rowwise() - mu1.transpose();
  MatrixXd pooled =
      (c0.transpose() * c0 + c1.transpose() * c1) / static_cast<double>(y.size() - 2);
  MatrixXd inv = ridged_inverse(pooled, hyper.ridge_factor, nullptr);

  VectorXd w = inv * (mu1 - mu0);
  const double bias = -0.5 * w.dot(mu0 + mu1) +
                      std::log(static_cast<double>(split.rows[1].size()) /
                               static_cast<double>(split.rows[0].size()));
  LinearModel lm;
  lm.weights.assign(w.data(), w.data() + d);
  lm.bias = bias;
  Model model;
  model.kind = ClassifierKind::Lda;
  model.dim = static_cast<int>(d);
  model.impl = std::move(lm);
  return model;
}

Model fit_qda(const RowMatrix& x, const std::vector<int>& y, const Hyper& hyper) {
  const ClassSplit split = split_classes(y);
  QdaModel qda;
  for (int c = 0; c < 2; ++c) {
    MatrixXd xc = class_rows(x, split.rows[c]);
    VectorXd mu = xc.colwise().mean();
    MatrixXd centered = xc.rowwise() - mu.transpose();
    MatrixXd cov = centered.transpose() * centered /
                   static_cast<double>(split.rows[c].size() - 1);
    double log_det = 0.0;
    MatrixXd inv = ridged_inverse(cov, hyper.ridge_factor, &log_det);
    qda.mean[c].assign(mu.data(), mu.data() + mu.size());
    qda.inv_cov[c] = from_eigen(inv);
    qda.log_det[c] = log_det;
    qda.log_prior[c] = std::log(static_cast<double>(split.rows[c].size()) /
                                static_cast<double>(y.size()));
  }
  Model model;
  model.kind = ClassifierKind::Qda;
  model.dim = static_cast<int>(x.cols);
  model.impl = std::move(qda);
  return model;
}

// L2-regularized logistic regression, penalty 1/(2n) * ||w||^2 on top of
// the mean log-loss, minimized with damped Newton to the gradient
// tolerance. Strictly convex, so non-convergence within the iteration cap
// is reported as an error with the count.
Model fit_logreg(const RowMatrix& x, const std::vector<int>& y, const Hyper& hyper) {
  split_classes(y);  // validates both classes present
  const auto n = static_cast<Eigen::Index>(x.rows);
  const auto d = static_cast<Eigen::Index>(x.cols);
  MatrixXd xm = to_eigen(x);
  VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) t(i) = y[i] == kHrw ? 1.0 : 0.0;

  const double lambda = 1.0 / (2.0 * static_cast<double>(n));
  VectorXd w = VectorXd::Zero(d);
  double b = 0.0;

  auto loss_and_grad = [&](const VectorXd& wv, double bv, VectorXd& grad_w,
                           double& grad_b, VectorXd& p) {
    VectorXd z = xm * wv;
    z.array() += bv;
    p = (1.0 / (1.0 + (-z.array()).exp())).matrix();
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double zi = z(i);
      // log(1+exp(-|z|)) formulation avoids overflow
      loss += std::log1p(std::exp(-std::abs(zi))) + (zi > 0 ? (1.0 - t(i)) * zi : -t(i) * zi);
    }
    loss = loss / static_cast<double>(n) + 0.5 * lambda * wv.squaredNorm();
    grad_w = xm.transpose() * (p - t) / static_cast<double>(n) + lambda * wv;
    grad_b = (p - t).sum() / static_cast<double>(n);
    return loss;
  };

  VectorXd grad_w(d), p(n);
  double grad_b = 0.0;
  double loss = loss_and_grad(w, b, grad_w, grad_b, p);
  int iter = 0;
  for (; iter < hyper.logreg_max_iter; ++iter) {
    const double gnorm = std::max(grad_w.cwiseAbs().maxCoeff(), std::abs(grad_b));
    if (gnorm <= hyper.logreg_tol) break;

    VectorXd s = (p.array() * (1.0 - p.array())).cwiseMax(1e-12).matrix();
    MatrixXd xs = xm.array().colwise() * s.array();
    MatrixXd h(d + 1, d + 1);
    h.topLeftCorner(d, d) =
        xm.transpose() * xs / static_cast<double>(n) +
        lambda * MatrixXd::Identity(d, d);
    VectorXd cross = xs.colwise().sum() / static_cast<double>(n);
    h.topRightCorner(d, 1) = cross;
    h.bottomLeftCorner(1, d) = cross.transpose();
    h(d, d) = s.sum() / static_cast<double>(n) + 1e-12;

    VectorXd g(d + 1);
    g.head(d) = grad_w;
    g(d) = grad_b;
    VectorXd step = h.ldlt().solve(g);

    double scale = 1.0;
    for (int halving = 0; halving < 60; ++halving) {
      VectorXd w_try = w - scale * step.head(d);
      double b_try = b - scale * step(d);
      VectorXd grad_try(d), p_try(n);
      double grad_b_try = 0.0;
      const double loss_try = loss_and_grad(w_try, b_try, grad_try, grad_b_try, p_try);
      if (loss_try <= loss + 1e-18) {
        w = std::move(w_try);
        b = b_try;
        grad_w = std::move(grad_try);
        grad_b = grad_b_try;
        p = std::move(p_try);
        loss = loss_try;
        break;
      }
      scale *= 0.5;
    }
  }
  const double gnorm = std::max(grad_w.cwiseAbs().maxCoeff(), std::abs(grad_b));
  if (gnorm > hyper.logreg_tol) {
    throw convergence_error("logistic regression did not converge", iter);
  }

  LinearModel lm;
  lm.weights.assign(w.data(), w.data() + d);
  lm.bias = b;
  Model model;
  model.kind = ClassifierKind::LogReg;
  model.dim = static_cast<int>(d);
  model.impl = std::move(lm);
  return model;
}

Model fit_gauss_nb(const RowMatrix& x, const std::vector<int>& y, const Hyper& hyper) {
  const ClassSplit split = split_classes(y);
  GaussNbModel nb;
  for (int c = 0; c < 2; ++c) {
    MatrixXd xc = class_rows(x, split.rows[c]);
    VectorXd mu = xc.colwise().mean();
    MatrixXd centered = xc.rowwise() - mu.transpose();
    VectorXd var = centered.array().square().colwise().sum() /
                   static_cast<double>(split.rows[c].size() - 1);
    nb.mean[c].assign(mu.data(), mu.data() + mu.size());
    nb.var[c].resize(var.size());
    for (Eigen::Index j = 0; j < var.size(); ++j) {
      nb.var[c][j] = std::max(var(j), hyper.nb_var_floor);
    }
    nb.log_prior[c] = std::log(static_cast<double>(split.rows[c].size()) /
                               static_cast<double>(y.size()));
  }
  Model model;
  model.kind = ClassifierKind::GaussNb;
  model.dim = static_cast<int>(x.cols);
  model.impl = std::move(nb);
  return model;
}

Model fit_kernel_nb(const RowMatrix& x, const std::vector<int>& y, const Hyper& hyper) {
  const ClassSplit split = split_classes(y);
  KernelNbModel nb;
  for (int c = 0; c < 2; ++c) {
    const auto& rows = split.rows[c];
    nb.train[c] = RowMatrix(rows.size(), x.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::copy(x.row(rows[i]).begin(), x.row(rows[i]).end(), nb.train[c].row(i).begin());
    }
    // Silverman's rule per feature: 1.06 sigma n^(-1/5)
    const double n_pow = std::pow(static_cast<double>(rows.size()), -0.2);
    nb.bandwidth[c].resize(x.cols);
    for (std::size_t j = 0; j < x.cols; ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) mean += nb.train[c].at(i, j);
      mean /= static_cast<double>(rows.size());
      double ss = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const double dv = nb.train[c].at(i, j) - mean;
        ss += dv * dv;
      }
      const double sd = std::sqrt(ss / static_cast<double>(rows.size() - 1));
      nb.bandwidth[c][j] = std::max(1.06 * sd * n_pow, std::sqrt(hyper.nb_var_floor));
    }
    nb.log_prior[c] = std::log(static_cast<double>(rows.size()) /
                               static_cast<double>(y.size()));
  }
  Model model;
  model.kind = ClassifierKind::KernelNb;
  model.dim = static_cast<int>(x.cols);
  model.impl = std::move(nb);
  return model;
}

KernelSpec kernel_for(ClassifierKind kind, int dim) {
  const double root_d = std::sqrt(static_cast<double>(dim));
  switch (kind) {
    case ClassifierKind::SvmLinear: return {KernelKind::Linear, 1.0, 1};
    case ClassifierKind::SvmQuad: return {KernelKind::Poly, root_d, 2};
    case ClassifierKind::SvmCubic: return {KernelKind::Poly, root_d, 3};
    case ClassifierKind::SvmGaussFine: return {KernelKind::Rbf, root_d / 4.0, 1};
    case ClassifierKind::SvmGaussMedium: return {KernelKind::Rbf, root_d, 1};
    case ClassifierKind::SvmGaussCoarse: return {KernelKind::Rbf, 4.0 * root_d, 1};
    default: throw error("kernel_for: not an SVM kind");
  }
}

Model fit_svm(ClassifierKind kind, const RowMatrix& x, const std::vector<int>& y,
              const Hyper& hyper, std::uint64_t seed) {
  split_classes(y);
  std::vector<int> y_signed(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) y_signed[i] = y[i] == kHrw ? 1 : -1;
  Model model;
  model.kind = kind;
  model.dim = static_cast<int>(x.cols);
  model.impl = smo_train(x, y_signed, kernel_for(kind, model.dim), hyper.svm_c,
                         hyper.svm_tol, hyper.svm_max_iter, seed);
  return model;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> a,
                   std::span<const double> b) {
  switch (spec.kind) {
    case KernelKind::Linear: {
      double dot = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
      return dot;
    }
    case KernelKind::Poly: {
      double dot = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
      double base = dot / spec.gamma + 1.0;
      double out = 1.0;
      for (int p = 0; p < spec.degree; ++p) out *= base;
      return out;
    }
    case KernelKind::Rbf: {
      double dist2 = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        dist2 += d * d;
      }
      return std::exp(-dist2 / (2.0 * spec.gamma * spec.gamma));
    }
  }
  return 0.0;
}

}  // namespace

double svm_kernel_eval(const KernelSpec& spec, std::span<const double> a,
                       std::span<const double> b) {
  return kernel_eval(spec, a, b);
}

std::string_view classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Lda: return "LDA";
    case ClassifierKind::Qda: return "QDA";
    case ClassifierKind::LogReg: return "Logistic Regression";
    case ClassifierKind::GaussNb: return "Gaussian Naive Bayes";
    case ClassifierKind::KernelNb: return "Kernel Naive Bayes";
    case ClassifierKind::SvmLinear: return "Linear SVM";
    case ClassifierKind::SvmQuad: return "Quadratic SVM";
    case ClassifierKind::SvmCubic: return "Cubic SVM";
    case ClassifierKind::SvmGaussFine: return "Fine Gaussian SVM";
    case ClassifierKind::SvmGaussMedium: return "Medium Gaussian SVM";
    case ClassifierKind::SvmGaussCoarse: return "Coarse Gaussian SVM";
  }
  return "";
}

std::string_view classifier_id(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Lda: return "LDA";
    case ClassifierKind::Qda: return "QDA";
    case ClassifierKind::LogReg: return "LOGREG";
    case ClassifierKind::GaussNb: return "GAUSS_NB";
    case ClassifierKind::KernelNb: return "KERNEL_NB";
    case ClassifierKind::SvmLinear: return "SVM_LINEAR";
    case ClassifierKind::SvmQuad: return "SVM_QUAD";
    case ClassifierKind::SvmCubic: return "SVM_CUBIC";
    case ClassifierKind::SvmGaussFine: return "SVM_GAUSS_FINE";
    case ClassifierKind::SvmGaussMedium: return "SVM_GAUSS_MED";
    case ClassifierKind::SvmGaussCoarse: return "SVM_GAUSS_COARSE";
  }
  return "";
}

ClassifierKind parse_classifier(std::string_view s) {
  for (ClassifierKind kind : kAllClassifiers) {
    if (s == classifier_id(kind) || s == classifier_name(kind)) return kind;
  }
  throw error("unknown classifier: '" + std::string{s} + "'");
}

Model train(ClassifierKind kind, const RowMatrix& x, const std::vector<int>& y,
            const Hyper& hyper, std::uint64_t seed) {
  if (x.rows != y.size()) {
    throw error("train: rows and labels disagree");
  }
  switch (kind) {
    case ClassifierKind::Lda: return fit_lda(x, y, hyper);
    case ClassifierKind::Qda: return fit_qda(x, y, hyper);
    case ClassifierKind::LogReg: return fit_logreg(x, y, hyper);
    case ClassifierKind::GaussNb: return fit_gauss_nb(x, y, hyper);
    case ClassifierKind::KernelNb: return fit_kernel_nb(x, y, hyper);
    default: return fit_svm(kind, x, y, hyper, seed);
  }
}

std::vector<double> decision_values(const Model& model, const RowMatrix& x) {
  if (static_cast<int>(x.cols) != model.dim) {
    throw error("predict: feature dimension " + std::to_string(x.cols) +
                " does not match model dimension " + std::to_string(model.dim));
  }
  std::vector<double> out(x.rows, 0.0);

  if (const auto* lm = std::get_if<LinearModel>(&model.impl)) {
    for (std::size_t i = 0; i < x.rows; ++i) {
      double acc = lm->bias;
      const auto row = x.row(i);
      for (std::size_t j = 0; j < x.cols; ++j) acc += lm->weights[j] * row[j];
      out[i] = acc;
    }
  } else if (const auto* qda = std::get_if<QdaModel>(&model.impl)) {
    const auto d = x.cols;
    std::vector<double> diff(d), tmp(d);
    for (std::size_t i = 0; i < x.rows; ++i) {
      double score[2];
      for (int c = 0; c < 2; ++c) {
        const auto row = x.row(i);
        for (std::size_t j = 0; j < d; ++j) diff[j] = row[j] - qda->mean[c][j];
        double quad = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
          double acc = 0.0;
          for (std::size_t s = 0; s < d; ++s) acc += qda->inv_cov[c].at(r, s) * diff[s];
          quad += diff[r] * acc;
        }
        score[c] = -0.5 * quad - 0.5 * qda->log_det[c] + qda->log_prior[c];
      }
      out[i] = score[1] - score[0];
    }
  } else if (const auto* nb = std::get_if<GaussNbModel>(&model.impl)) {
    for (std::size_t i = 0; i < x.rows; ++i) {
      const auto row = x.row(i);
      double score[2];
      for (int c = 0; c < 2; ++c) {
        double acc = nb->log_prior[c];
        for (std::size_t j = 0; j < x.cols; ++j) {
          const double var = nb->var[c][j];
          const double d = row[j] - nb->mean[c][j];
          acc += -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
        }
        score[c] = acc;
      }
      out[i] = score[1] - score[0];
    }
  } else if (const auto* knb = std::get_if<KernelNbModel>(&model.impl)) {
    for (std::size_t i = 0; i < x.rows; ++i) {
      const auto row = x.row(i);
      double score[2];
      for (int c = 0; c < 2; ++c) {
        double acc = knb->log_prior[c];
        const auto& train_rows = knb->train[c];
        for (std::size_t j = 0; j < x.cols; ++j) {
          const double h = knb->bandwidth[c][j];
          double density = 0.0;
          for (std::size_t r = 0; r < train_rows.rows; ++r) {
            const double u = (row[j] - train_rows.at(r, j)) / h;
            density += std::exp(-0.5 * u * u);
          }
          density /= static_cast<double>(train_rows.rows) * h *
                     std::sqrt(2.0 * std::numbers::pi);
          acc += std::log(std::max(density, 1e-300));
        }
        score[c] = acc;
      }
      out[i] = score[1] - score[0];
    }
  } else if (const auto* svm = std::get_if<SvmModel>(&model.impl)) {
    for (std::size_t i = 0; i < x.rows; ++i) {
      double acc = svm->bias;
      const auto row = x.row(i);
      for (std::size_t s = 0; s < svm->support_vectors.rows; ++s) {
        acc += svm->coef[s] * kernel_eval(svm->kernel, svm->support_vectors.row(s), row);
      }
      out[i] = acc;
    }
  }
  return out;
}

std::vector<int> predict(const Model& model, const RowMatrix& x) {
  const auto values = decision_values(model, x);
  std::vector<int> labels(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    labels[i] = values[i] > 0.0 ? kHrw : kLrw;  // ties go to LRW
  }
  return labels;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || predicted.empty()) {
    throw error("accuracy: size mismatch");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

Scaler Scaler::fit(const RowMatrix& x) {
  Scaler scaler;
  scaler.mean.assign(x.cols, 0.0);
  scaler.inv_sd.assign(x.cols, 0.0);
  if (x.rows < 2) {
    throw error("scaler: need at least 2 rows");
  }
  for (std::size_t j = 0; j < x.cols; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) mean += x.at(i, j);
    mean /= static_cast<double>(x.rows);
    double ss = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double d = x.at(i, j) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(x.rows - 1));
    scaler.mean[j] = mean;
    scaler.inv_sd[j] = sd > 0.0 ? 1.0 / sd : 0.0;  // zero-variance -> 0
  }
  return scaler;
}

RowMatrix Scaler::apply(const RowMatrix& x) const {
  if (x.cols != mean.size()) {
    throw error("scaler: dimension mismatch");
  }
  RowMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) {
      out.at(i, j) = (x.at(i, j) - mean[j]) * inv_sd[j];
    }
  }
  return out;
}

LabeledSet build_labeled_set(const SessionBundle& bundle,
                             const features::RawFeatureTable& raw,
                             const std::vector<WordGrouping>& groupings,
                             features::FeatureTag tag) {
  std::map<SentenceId, const WordGrouping*> by_sentence;
  for (const auto& g : groupings) {
    if (!g.degenerate()) by_sentence[g.sentence_id] = &g;
  }

  LabeledSet set;
  set.subject_id = bundle.subject_id;
  set.tag = tag;

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < bundle.epochs.size(); ++i) {
    const auto& epoch = bundle.epochs[i];
    auto it = by_sentence.find(epoch.sentence_id);
    if (it == by_sentence.end()) continue;
    const auto& g = *it->second;
    if (g.hrw.count(epoch.token_index)) {
      set.labels.push_back(kHrw);
    } else if (g.lrw.count(epoch.token_index)) {
      set.labels.push_back(kLrw);
    } else {
      continue;  // token unassigned in this grouping
    }
    set.epoch_ids.push_back(epoch.epoch_id);
    keep.push_back(i);
  }

  auto subset = [&](const RowMatrix& src) {
    RowMatrix out(keep.size(), src.cols);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      std::copy(src.row(keep[i]).begin(), src.row(keep[i]).end(), out.row(i).begin());
    }
    return out;
  };
  set.bp = subset(raw.bp);
  set.cond_en = subset(raw.cond_en);
  set.clustering = subset(raw.clustering);
  return set;
}

LabeledSet balance_classes(const LabeledSet& set, std::uint64_t seed) {
  std::vector<std::size_t> rows[2];
  for (std::size_t i = 0; i < set.labels.size(); ++i) {
    rows[set.labels[i]].push_back(i);
  }
  if (rows[0].empty() || rows[1].empty()) {
    throw error("balance_classes: a class is empty");
  }

  Rng rng(derive_seed(seed, "balance"));
  const std::size_t target = std::min(rows[0].size(), rows[1].size());
  std::vector<std::size_t> selected;
  for (auto& class_rows : rows) {
    if (class_rows.size() > target) {
      auto picks = rng.sample_indices(class_rows.size(), target);
      for (auto p : picks) selected.push_back(class_rows[p]);
    } else {
      selected.insert(selected.end(), class_rows.begin(), class_rows.end());
    }
  }
  std::sort(selected.begin(), selected.end());
  rng.shuffle(selected);

  LabeledSet out;
  out.subject_id = set.subject_id;
  out.tag = set.tag;
  out.bp = RowMatrix(selected.size(), set.bp.cols);
  out.cond_en = RowMatrix(selected.size(), set.cond_en.cols);
  out.clustering = RowMatrix(selected.size(), set.clustering.cols);
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const std::size_t src = selected[i];
    out.epoch_ids.push_back(set.epoch_ids[src]);
    out.labels.push_back(set.labels[src]);
    std::copy(set.bp.row(src).begin(), set.bp.row(src).end(), out.bp.row(i).begin());
    std::copy(set.cond_en.row(src).begin(), set.cond_en.row(src).end(),
              out.cond_en.row(i).begin());
    std::copy(set.clustering.row(src).begin(), set.clustering.row(src).end(),
              out.clustering.row(i).begin());
  }
  return out;
}

std::pair<ClassifierKind, double> best_of(const CvReport& report) {
  if (report.results.empty()) {
    throw error("best_of: empty report");
  }
  const ClassifierScore* best = &report.results.front();
  for (const auto& r : report.results) {
    if (r.mean > best->mean) best = &r;  // ties keep the earlier (enum order)
  }
  return {best->kind, best->mean};
}

}  // namespace fixread::classify
