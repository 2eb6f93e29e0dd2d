#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "json.hpp"

#include "fixread/errors.hpp"
#include "fixread/features.hpp"

namespace fixread::features {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

// eigenvectors are sign-ambiguous; make the largest-magnitude coordinate
// positive (first such coordinate on exact ties) for reproducibility
void fix_sign(std::span<double> row) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (std::abs(row[i]) > std::abs(row[best])) best = i;
  }
  if (row[best] < 0.0) {
    for (double& v : row) v = -v;
  }
}

}  // namespace

PcaModel fit_pca(const RowMatrix& x, int k, const std::string& source_tag) {
  const auto n = static_cast<Eigen::Index>(x.rows);
  const auto d = static_cast<Eigen::Index>(x.cols);
  if (n < 2) {
    throw error("fit_pca: need at least 2 rows");
  }
  if (k < 1 || k > std::min<Eigen::Index>(n - 1, d)) {
    throw error("fit_pca: k = " + std::to_string(k) + " out of range for " +
                std::to_string(n) + "x" + std::to_string(d) + " data");
  }

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      mapped(x.data.data(), n, d);
  VectorXd mean = mapped.colwise().mean();
  MatrixXd centered = mapped.rowwise() - mean.transpose();

  const double total_var = centered.squaredNorm() / static_cast<double>(n - 1);
  if (!(total_var > 0.0)) {
    throw error("fit_pca: zero-variance data");
  }

  MatrixXd components(k, d);
  VectorXd variances(k);

  if (d <= n) {
    MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
      throw error("fit_pca: eigendecomposition failed");
    }
    for (int j = 0; j < k; ++j) {
      const Eigen::Index src = d - 1 - j;  // eigenvalues ascend in Eigen
      components.row(j) = solver.eigenvectors().col(src).transpose();
      variances(j) = std::max(solver.eigenvalues()(src), 0.0);
    }
  } else {
    // Gram trick: eigenvectors of the n x n Gram matrix lift to covariance
    // eigenvectors via X^T v / ||X^T v||
    MatrixXd gram = centered * centered.transpose() / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) {
      throw error("fit_pca: eigendecomposition failed");
    }
    for (int j = 0; j < k; ++j) {
      const Eigen::Index src = n - 1 - j;
      const double lambda = std::max(solver.eigenvalues()(src), 0.0);
      VectorXd lifted = centered.transpose() * solver.eigenvectors().col(src);
      const double norm = lifted.norm();
      if (norm < 1e-12 * std::sqrt(total_var)) {
        throw error("fit_pca: k = " + std::to_string(k) + " exceeds data rank " +
                    std::to_string(j));
      }
      components.row(j) = (lifted / norm).transpose();
      variances(j) = lambda;
    }
  }

  PcaModel model;
  model.k = k;
  model.dim = static_cast<int>(d);
  model.source_tag = source_tag;
  model.mean.assign(mean.data(), mean.data() + d);
  model.components = RowMatrix(static_cast<std::size_t>(k), static_cast<std::size_t>(d));
  for (int j = 0; j < k; ++j) {
    for (Eigen::Index c = 0; c < d; ++c) {
      model.components.at(j, c) = components(j, c);
    }
    fix_sign(model.components.row(j));
  }
  model.explained_variance.assign(variances.data(), variances.data() + k);
  return model;
}

std::vector<double> PcaModel::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) {
    throw error("apply_pca: dimension mismatch: " + std::to_string(x.size()) +
                " vs model " + std::to_string(dim));
  }
  std::vector<double> out(static_cast<std::size_t>(k), 0.0);
  for (int j = 0; j < k; ++j) {
    double acc = 0.0;
    const auto row = components.row(j);
    for (int c = 0; c < dim; ++c) {
      acc += (x[c] - mean[c]) * row[c];
    }
    out[j] = acc;
  }
  return out;
}

std::vector<double> apply_pca(const PcaModel& model, std::span<const double> x) {
  return model.apply(x);
}

void save_pca(const PcaModel& model, const std::string& path) {
  json j;
  j["k"] = model.k;
  j["dim"] = model.dim;
  j["source_tag"] = model.source_tag;
  j["mean"] = model.mean;
  j["explained_variance"] = model.explained_variance;
  json rows = json::array();
  for (int r = 0; r < model.k; ++r) {
    const auto row = model.components.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["components"] = std::move(rows);
  std::ofstream out(path);
  if (!out) {
    throw error("cannot open for writing: " + path);
  }
  out << j.dump(2) << "\n";
}

PcaModel load_pca(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw error("cannot open: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw malformed_record_error(path + ": " + e.what());
  }
  PcaModel model;
  model.k = j.at("k").get<int>();
  model.dim = j.at("dim").get<int>();
  model.source_tag = j.at("source_tag").get<std::string>();
  model.mean = j.at("mean").get<std::vector<double>>();
  model.explained_variance = j.at("explained_variance").get<std::vector<double>>();
  model.components = RowMatrix(static_cast<std::size_t>(model.k),
                               static_cast<std::size_t>(model.dim));
  const auto& rows = j.at("components");
  for (int r = 0; r < model.k; ++r) {
    const auto row = rows.at(r).get<std::vector<double>>();
    std::copy(row.begin(), row.end(), model.components.row(r).begin());
  }
  return model;
}

std::vector<int> select_nodes(const RowMatrix& coefs, int k) {
  const auto n = coefs.rows;
  const auto c = static_cast<int>(coefs.cols);
  if (n < 2) {
    throw error("select_nodes: need at least 2 rows");
  }
  if (k < 1 || k > c) {
    throw error("select_nodes: k out of range");
  }

  std::vector<double> variance(c, 0.0);
  for (int j = 0; j < c; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += coefs.at(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = coefs.at(i, j) - mean;
      ss += d * d;
    }
    variance[j] = ss / static_cast<double>(n - 1);
  }

  std::vector<int> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (variance[a] != variance[b]) return variance[a] > variance[b];
    return a < b;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace fixread::features
