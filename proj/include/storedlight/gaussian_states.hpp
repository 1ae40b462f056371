#pragma once

#include <array>

#include <Eigen/Dense>

#include "storedlight/mode_transform.hpp"

namespace storedlight {

// Quadratures follow q = (X + X^dag)/sqrt(2), p = -i (X - X^dag)/sqrt(2);
// the vacuum variance of either is 1/2.

/// Two stored squeezed-coherent pulses with identical packets (s = 1).
/// Channel j is the eigenstate of A_j = cosh(r_j) X_j + sinh(r_j) X_j^dag with
/// eigenvalue alpha_j; r_j = 0 gives a coherent state.
struct SqueezedInput {
    SqueezedInput(cplx alpha1, double r1, cplx alpha2, double r2);

    cplx alpha1;
    double r1;
    cplx alpha2;
    double r2;
};

/// First release channel quadrature statistics.
struct QuadratureStats {
    double mean_q;
    double mean_p;
    double var_q;
    double var_p;
};

/// Closed-form means and variances of q and p of the first release channel.
QuadratureStats released_quadratures(const SqueezedInput& input, const TransferMatrix& s);

/// var_q * var_p.
double uncertainty_product(const QuadratureStats& stats);

/// Two-mode Gaussian state in the quadrature ordering (q1, p1, q2, p2).
struct GaussianState {
    Eigen::Vector4d mean;
    Eigen::Matrix4d covariance;
};

/// Input state as a Gaussian. Complex squeezing r = |r| exp(i theta) means
/// A = cosh|r| X + exp(i theta) sinh|r| X^dag; for real r this is SqueezedInput.
GaussianState input_gaussian_state(cplx alpha1, cplx r1, cplx alpha2, cplx r2);

/// Real orthogonal symplectic image of S acting on (q1, p1, q2, p2).
Eigen::Matrix4d mode_mixing_symplectic(const TransferMatrix& s);

/// Applies S to a two-mode Gaussian state.
GaussianState transform(const GaussianState& state, const TransferMatrix& s);

/// Williamson symplectic eigenvalues (ascending) of a two-mode covariance.
std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& covariance);

/// Covariance-matrix route to the first-channel statistics, independent of
/// the closed form.
QuadratureStats gaussian_oracle(const SqueezedInput& input, const TransferMatrix& s);

/// Same as above with complex squeezing parameters.
QuadratureStats gaussian_oracle(cplx alpha1, cplx r1, cplx alpha2, cplx r2, const TransferMatrix& s);

} // namespace storedlight
