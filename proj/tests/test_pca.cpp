#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"

#include "fixread/errors.hpp"
#include "fixread/features.hpp"
#include "fixread/rng.hpp"

using namespace fixread;
using namespace fixread::features;

namespace {

RowMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  RowMatrix x(rows, cols);
  for (double& v : x.data) v = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("rank-1 data recovers the axis with full variance") {
  RowMatrix x(20, 4);
  Rng rng(3);
  for (std::size_t i = 0; i < 20; ++i) {
    x.at(i, 2) = rng.normal();  // all variance on coordinate 2
  }
  const auto model = fit_pca(x, 1);
  CHECK(std::abs(model.components.at(0, 2)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(model.components.at(0, 2) > 0.0);  // sign convention
  double explained = model.explained_variance[0];
  double total = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    total += (x.at(i, 2) - 0.0) * x.at(i, 2);
  }
  (void)total;
  CHECK(explained > 0.0);
}

TEST_CASE("projections match the dense eigendecomposition oracle") {
  const auto x = random_matrix(50, 10, 500);
  const int k = 5;
  const auto model = fit_pca(x, k);
  const auto oracle = oracles::pca_project_oracle(x, k);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto projected = model.apply(x.row(i));
    for (int j = 0; j < k; ++j) {
      // eigenvectors are sign-ambiguous; compare magnitudes coordinatewise
      CHECK(std::abs(projected[j]) ==
            doctest::Approx(std::abs(oracle.at(i, j))).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("complete basis reconstructs exactly") {
  const auto x = random_matrix(30, 6, 42);
  const auto model = fit_pca(x, 6);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto z = model.apply(x.row(i));
    // reconstruct: mean + components^T z
    for (std::size_t c = 0; c < x.cols; ++c) {
      double rec = model.mean[c];
      for (int j = 0; j < 6; ++j) rec += model.components.at(j, c) * z[j];
      CHECK(rec == doctest::Approx(x.at(i, c)).epsilon(1e-8));
    }
  }
}

TEST_CASE("components are orthonormal with non-increasing variances") {
  const auto x = random_matrix(40, 12, 7);
  const auto model = fit_pca(x, 8);
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      double dot = 0.0;
      for (std::size_t c = 0; c < x.cols; ++c) {
        dot += model.components.at(a, c) * model.components.at(b, c);
      }
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-8).scale(1.0));
    }
  }
  for (int j = 1; j < 8; ++j) {
    CHECK(model.explained_variance[j] <= model.explained_variance[j - 1] + 1e-12);
  }
  // the mean projects to the origin
  const auto at_mean = model.apply(model.mean);
  for (double v : at_mean) CHECK(v == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
}

TEST_CASE("gram-trick path (dim > rows) agrees with the oracle") {
  const auto x = random_matrix(20, 50, 99);
  const int k = 6;
  const auto model = fit_pca(x, k);
  const auto oracle = oracles::pca_project_oracle(x, k);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto projected = model.apply(x.row(i));
    for (int j = 0; j < k; ++j) {
      CHECK(std::abs(projected[j]) ==
            doctest::Approx(std::abs(oracle.at(i, j))).epsilon(1e-7).scale(1.0));
    }
  }
  for (int a = 0; a < k; ++a) {
    double norm = 0.0;
    for (std::size_t c = 0; c < x.cols; ++c) {
      norm += model.components.at(a, c) * model.components.at(a, c);
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("pca rejects invalid k and degenerate data") {
  const auto x = random_matrix(10, 5, 1);
  CHECK_THROWS_AS(fit_pca(x, 6), fixread::error);    // k > d
  CHECK_THROWS_AS(fit_pca(x, 10), fixread::error);   // k > n-1
  CHECK_THROWS_AS(fit_pca(x, 0), fixread::error);
  RowMatrix constant(8, 3);
  for (double& v : constant.data) v = 2.0;
  CHECK_THROWS_AS(fit_pca(constant, 1), fixread::error);
}

TEST_CASE("pca model round-trips through json") {
  const auto x = random_matrix(25, 7, 12);
  const auto model = fit_pca(x, 3, "BP30");
  const auto path = std::filesystem::temp_directory_path() / "fixread_pca_test.json";
  save_pca(model, path.string());
  const auto loaded = load_pca(path.string());
  CHECK(loaded.k == model.k);
  CHECK(loaded.dim == model.dim);
  CHECK(loaded.source_tag == "BP30");
  CHECK(loaded.mean == model.mean);
  CHECK(loaded.components.data == model.components.data);
  CHECK(loaded.explained_variance == model.explained_variance);
  std::filesystem::remove(path);
}
