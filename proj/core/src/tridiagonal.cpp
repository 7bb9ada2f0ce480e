#include "rdlab/tridiagonal.hpp"

#include <string>

#include <lapacke.h>

#include "rdlab/errors.hpp"

namespace rdlab {

TridiagonalLU::TridiagonalLU(std::vector<double> lower, std::vector<double> diag,
                             std::vector<double> upper)
    : dl_(std::move(lower)), d_(std::move(diag)), du_(std::move(upper)) {
  const auto n = static_cast<lapack_int>(d_.size());
  if (n < 2 || dl_.size() + 1 != d_.size() || du_.size() + 1 != d_.size()) {
    throw ConfigError("tridiagonal: inconsistent band sizes");
  }
  du2_.assign(d_.size() - 2 + 1, 0.0);
  ipiv_.assign(d_.size(), 0);
  const lapack_int info =
      LAPACKE_dgttrf(n, dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data());
  if (info != 0) throw NumericalAbort("tridiagonal factorization failed, info=" + std::to_string(info));
}

void TridiagonalLU::solve(std::span<double> rhs) const {
  if (rhs.size() != d_.size()) throw ConfigError("tridiagonal: rhs size mismatch");
  const auto n = static_cast<lapack_int>(d_.size());
  const lapack_int info =
      LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'N', n, 1, dl_.data(), d_.data(), du_.data(), du2_.data(),
                     ipiv_.data(), rhs.data(), n);
  if (info != 0) throw NumericalAbort("tridiagonal solve failed, info=" + std::to_string(info));
}

std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs) {
  const auto n = static_cast<lapack_int>(diag.size());
  if (rhs.size() != diag.size() || lower.size() + 1 != diag.size() ||
      upper.size() + 1 != diag.size()) {
    throw ConfigError("tridiagonal: inconsistent band sizes");
  }
  const lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, lower.data(), diag.data(),
                                        upper.data(), rhs.data(), n);
  if (info != 0) throw NumericalAbort("tridiagonal system singular, info=" + std::to_string(info));
  return rhs;
}

}  // namespace rdlab
