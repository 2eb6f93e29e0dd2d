#include <algorithm>
#include <cmath>
#include <vector>

#include "fixread/errors.hpp"
#include "fixread/rng.hpp"
#include "svm_internal.hpp"

namespace fixread::classify {
namespace {

// Working state for one SMO run. The full Gram matrix is precomputed;
// training sets here are a few hundred rows at most.
struct SmoState {
  const RowMatrix& x;
  const std::vector<int>& y;
  const KernelSpec& kernel;
  double c;
  double tol;
  long max_iter;
  Rng rng;

  std::size_t n;
  std::vector<double> gram;
  std::vector<double> alpha;
  std::vector<double> err;  // f(i) - y(i)
  double bias = 0.0;
  long steps = 0;

  SmoState(const RowMatrix& x_, const std::vector<int>& y_, const KernelSpec& k_,
           double c_, double tol_, long max_iter_, std::uint64_t seed)
      : x(x_), y(y_), kernel(k_), c(c_), tol(tol_), max_iter(max_iter_),
        rng(derive_seed(seed, "smo")), n(x_.rows) {
    gram.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double k = svm_kernel_eval(kernel, x.row(i), x.row(j));
        gram[i * n + j] = k;
        gram[j * n + i] = k;
      }
    }
    alpha.assign(n, 0.0);
    err.resize(n);
    for (std::size_t i = 0; i < n; ++i) err[i] = -static_cast<double>(y[i]);
  }

  double k(std::size_t i, std::size_t j) const { return gram[i * n + j]; }

  bool non_bound(std::size_t i) const { return alpha[i] > 0.0 && alpha[i] < c; }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha[i1];
    const double a2 = alpha[i2];
    const double y1 = y[i1];
    const double y2 = y[i2];
    const double e1 = err[i1];
    const double e2 = err[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c, c + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c);
      hi = std::min(c, a1 + a2);
    }
    if (lo >= hi) return false;

    const double k11 = k(i1, i1);
    const double k12 = k(i1, i2);
    const double k22 = k(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2_new;
    if (eta > 1e-15) {
      a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // objective at the two clip ends (Platt's f1/f2 form)
      const double f1 = y1 * (e1 + bias) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 + bias) - a2 * k22 - s * a1 * k12;
      const double l1 = a1 + s * (a2 - lo);
      const double h1 = a1 + s * (a2 - hi);
      const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                            0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                            0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (obj_lo < obj_hi - 1e-12) {
        a2_new = lo;
      } else if (obj_lo > obj_hi + 1e-12) {
        a2_new = hi;
      } else {
        return false;
      }
    }
    if (std::abs(a2_new - a2) < 1e-10 * (a2_new + a2 + 1e-10)) return false;

    double a1_new = a1 + s * (a2 - a2_new);
    if (a1_new < 0.0) a1_new = 0.0;
    if (a1_new > c) a1_new = c;

    const double d1 = y1 * (a1_new - a1);
    const double d2 = y2 * (a2_new - a2);

    const double b1 = bias - e1 - d1 * k11 - d2 * k12;
    const double b2 = bias - e2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1_new > 0.0 && a1_new < c) {
      b_new = b1;
    } else if (a2_new > 0.0 && a2_new < c) {
      b_new = b2;
    } else {
      b_new = 0.5 * (b1 + b2);
    }

    const double db = b_new - bias;
    for (std::size_t i = 0; i < n; ++i) {
      err[i] += d1 * k(i1, i) + d2 * k(i2, i) + db;
    }
    alpha[i1] = a1_new;
    alpha[i2] = a2_new;
    bias = b_new;
    ++steps;
    return true;
  }

  bool examine(std::size_t i2) {
    const double y2 = y[i2];
    const double e2 = err[i2];
    const double r2 = e2 * y2;
    if (!((r2 < -tol && alpha[i2] < c) || (r2 > tol && alpha[i2] > 0.0))) {
      return false;
    }

    // second-choice heuristic: largest |E1 - E2| over non-bound alphas
    std::size_t best = n;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!non_bound(i)) continue;
      const double gap = std::abs(err[i] - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n && take_step(best, i2)) return true;

    // seeded start positions break ties deterministically
    const std::size_t start1 = rng.below(n);
    for (std::size_t offset = 0; offset < n; ++offset) {
      const std::size_t i = (start1 + offset) % n;
      if (non_bound(i) && take_step(i, i2)) return true;
    }
    const std::size_t start2 = rng.below(n);
    for (std::size_t offset = 0; offset < n; ++offset) {
      const std::size_t i = (start2 + offset) % n;
      if (take_step(i, i2)) return true;
    }
    return false;
  }

  void solve() {
    bool examine_all = true;
    int changed = 0;
    while (changed > 0 || examine_all) {
      changed = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (examine_all || non_bound(i)) {
          if (examine(i)) ++changed;
          if (steps > max_iter) {
            throw convergence_error("SMO exceeded the iteration budget", steps);
          }
        }
      }
      if (examine_all) {
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
        // one final full sweep decides convergence; loop exits when it
        // changes nothing
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (examine(i)) {
            any = true;
            if (steps > max_iter) {
              throw convergence_error("SMO exceeded the iteration budget", steps);
            }
          }
        }
        if (!any) break;
      }
    }
  }
};

}  // namespace

SvmModel smo_train(const RowMatrix& x, const std::vector<int>& y_signed,
                   const KernelSpec& kernel, double c, double tol, long max_iter,
                   std::uint64_t seed) {
  if (x.rows != y_signed.size() || x.rows < 2) {
    throw error("smo_train: bad training set");
  }
  SmoState state(x, y_signed, kernel, c, tol, max_iter, seed);
  state.solve();

  SvmModel model;
  model.kernel = kernel;
  model.bias = state.bias;
  std::vector<std::size_t> sv;
  for (std::size_t i = 0; i < x.rows; ++i) {
    if (state.alpha[i] > 1e-12) sv.push_back(i);
  }
  model.support_vectors = RowMatrix(sv.size(), x.cols);
  model.coef.resize(sv.size());
  for (std::size_t i = 0; i < sv.size(); ++i) {
    std::copy(x.row(sv[i]).begin(), x.row(sv[i]).end(),
              model.support_vectors.row(i).begin());
    model.coef[i] = state.alpha[sv[i]] * y_signed[sv[i]];
  }
  return model;
}

}  // namespace fixread::classify
