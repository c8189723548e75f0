#pragma once

#include "contraflow/types.hpp"

#include <Eigen/Dense>

namespace contraflow {

/// Off-diagonal sign of the condition-number metric that certifies the
/// accelerated flow on quadratics. +1 does not certify (it fails to bound
/// even the sign of the measure); resolved empirically and unit-tested.
inline constexpr int kCertifyingOffDiagonalSign = -1;

/// Weight matrix P = block (x) I_n defining the norm ||v||_P = sqrt(v' P v),
/// with a 2x2 symmetric positive-definite block.
class Metric {
  public:
    /// Arbitrary SPD block replicated over n coordinates.
    Metric(const Eigen::Matrix2d& block, Index dim_n);

    /// The condition-number family
    ///   [[gamma sqrt(k)/(sqrt(k)+1), s], [s, (sqrt(k)+1)/sqrt(k)]],
    /// s in {-1, +1}, admissible for 1 < gamma <= 1 + 1/k. Its determinant is
    /// gamma - 1 for either sign.
    static Metric from_condition(double kappa, double gamma, Index dim_n,
                                 int sign = kCertifyingOffDiagonalSign);

    static Metric identity(Index dim_n);

    [[nodiscard]] const Eigen::Matrix2d& block() const noexcept { return block_; }
    [[nodiscard]] const Eigen::Matrix2d& sqrt_block() const noexcept { return sqrt_block_; }
    [[nodiscard]] const Eigen::Matrix2d& inv_sqrt_block() const noexcept { return inv_sqrt_block_; }
    [[nodiscard]] Index dim_n() const noexcept { return dim_n_; }
    [[nodiscard]] Index state_dim() const noexcept { return 2 * dim_n_; }

    /// Extreme eigenvalues of P, in closed form from the 2x2 block.
    [[nodiscard]] double lambda_min() const noexcept { return lambda_min_; }
    [[nodiscard]] double lambda_max() const noexcept { return lambda_max_; }

    /// sqrt(v' P v), computed blockwise without assembling P.
    [[nodiscard]] double norm(const Vector& v) const;

    /// u' P v.
    [[nodiscard]] double inner(const Vector& u, const Vector& v) const;

    /// Dense P, for eigensolver paths and tests.
    [[nodiscard]] Matrix full() const;

    [[nodiscard]] Metric with_dim(Index dim_n) const { return Metric(block_, dim_n); }

  private:
    Eigen::Matrix2d block_;
    Eigen::Matrix2d sqrt_block_;
    Eigen::Matrix2d inv_sqrt_block_;
    Index dim_n_;
    double lambda_min_;
    double lambda_max_;
};

/// sqrt(v' P v); v must have dimension 2 * dim_n.
[[nodiscard]] double weighted_norm(const Metric& metric, const Vector& v);

/// Matrix measure of A induced by ||.||_P: the largest eigenvalue of the
/// symmetric part of P^{1/2} A P^{-1/2}.
[[nodiscard]] double matrix_measure(const Metric& metric, const Matrix& A);

/// Same measure for a 2x2-block-structured operator given by its per-mode
/// 2x2 matrices (simultaneously diagonalizable blocks, e.g. quadratic
/// objectives in the Hessian eigenbasis). Closed-form 2x2 eigenvalues.
[[nodiscard]] double matrix_measure_modes(const Metric& metric,
                                          const std::vector<Eigen::Matrix2d>& modes);

/// Largest eigenvalue of sym(M) restricted to the P inner product,
/// i.e. max over v of v'Mv / v'Pv for 2x2 M and the metric block.
[[nodiscard]] double pencil_max_2x2(const Eigen::Matrix2d& M, const Eigen::Matrix2d& P);

}  // namespace contraflow
