#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "faultsim/errors.hpp"

namespace faultsim::ctrl {

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps. Small dense
// problems only (the gain check is 2n x 2n). Converged when every
// off-diagonal magnitude is <= tol * max diagonal magnitude.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> jacobi_eigenvalues(
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A, Scalar tol = Scalar(1e-10),
    int max_sweeps = 100) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw ContractError("jacobi_eigenvalues: matrix must be square");
  if ((A - A.transpose().eval()).cwiseAbs().maxCoeff() > Scalar(1e-9) * (Scalar(1) + A.cwiseAbs().maxCoeff()))
    throw ContractError("jacobi_eigenvalues: matrix must be symmetric");
  A = ((A + A.transpose().eval()) / Scalar(2)).eval();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Scalar off = Scalar(0);
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off = std::max(off, std::abs(A(p, q)));
    const Scalar scale = std::max(Scalar(1), A.diagonal().cwiseAbs().maxCoeff());
    if (off <= tol * scale) return A.diagonal();

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) <= tol * scale / Scalar(n)) continue;
        const Scalar theta = (A(q, q) - A(p, p)) / (Scalar(2) * A(p, q));
        const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  throw NumericalError("jacobi_eigenvalues: no convergence in max sweeps");
}

template <typename Scalar>
Scalar jacobi_max_eigenvalue(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                             Scalar tol = Scalar(1e-10), int max_sweeps = 100) {
  return jacobi_eigenvalues<Scalar>(A, tol, max_sweeps).maxCoeff();
}

}  // namespace faultsim::ctrl
