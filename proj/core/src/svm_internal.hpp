#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fixread/classify.hpp"

namespace fixread::classify {

double svm_kernel_eval(const KernelSpec& spec, std::span<const double> a,
                       std::span<const double> b);

// Platt-style sequential minimal optimization; y entries are +1/-1.
SvmModel smo_train(const RowMatrix& x, const std::vector<int>& y_signed,
                   const KernelSpec& kernel, double c, double tol, long max_iter,
                   std::uint64_t seed);

}  // namespace fixread::classify
