#pragma once

// Thin wrapper over LAPACK's general tridiagonal LU (dgttrf/dgttrs).

#include <span>
#include <vector>

namespace rdlab {

/// LU factors of a tridiagonal matrix with sub-diagonal `lower`, diagonal
/// `diag` and super-diagonal `upper` (sizes n-1, n, n-1). Factor once,
/// solve many times.
class TridiagonalLU {
 public:
  TridiagonalLU() = default;
  TridiagonalLU(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper);

  std::size_t size() const { return d_.size(); }
  /// Overwrites rhs with the solution.
  void solve(std::span<double> rhs) const;

 private:
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<int> ipiv_;
};

/// One-shot solve; the inputs are copied. Throws NumericalAbort on a
/// singular matrix.
std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs);

}  // namespace rdlab
