#include "storedlight/gaussian_states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "storedlight/errors.hpp"

namespace storedlight {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

/// <q> and <q^2> of the first release channel given its coefficients u_j
/// in q = sum_j (u_j A_j + h.c.)/sqrt(2) and the A_j eigenvalues alpha_j.
std::pair<double, double> quadrature_moments(cplx u1, cplx u2, cplx a1, cplx a2) {
    const cplx z = u1 * a1 + u2 * a2;
    const double mean = (z + std::conj(z)).real() / kSqrt2;
    const cplx cross = u1 * u1 * a1 * a1 + u2 * u2 * a2 * a2 + 2.0 * u1 * u2 * a1 * a2 +
                       2.0 * u1 * std::conj(u2) * a1 * std::conj(a2);
    const double second = 0.5 * (std::norm(u1) * (1.0 + 2.0 * std::norm(a1)) +
                                 std::norm(u2) * (1.0 + 2.0 * std::norm(a2))) +
                          0.5 * (cross + std::conj(cross)).real();
    return {mean, second};
}

cplx bogoliubov_coefficient(cplx s, double r) {
    return s * std::cosh(r) - std::conj(s) * std::sinh(r);
}

QuadratureStats checked(const QuadratureStats& stats) {
    if (!(stats.var_q > 0.0 && stats.var_p > 0.0) || stats.var_q * stats.var_p < 0.25 - 1e-12) {
        std::ostringstream os;
        os << "quadrature variances (" << stats.var_q << ", " << stats.var_p << ") violate the uncertainty bound";
        throw BasisError(os.str());
    }
    return stats;
}

/// Quadrature map x_A = T x for A = cosh|r| X + exp(i arg r) sinh|r| X^dag.
Eigen::Matrix2d squeezing_map(cplx r) {
    const double mu = std::cosh(std::abs(r));
    const cplx nu = std::polar(std::sinh(std::abs(r)), std::arg(r));
    Eigen::Matrix2d t;
    t << mu + nu.real(), nu.imag(), nu.imag(), mu - nu.real();
    return t;
}

} // namespace

SqueezedInput::SqueezedInput(cplx alpha1_, double r1_, cplx alpha2_, double r2_)
    : alpha1(alpha1_), r1(r1_), alpha2(alpha2_), r2(r2_) {
    for (double v : {alpha1.real(), alpha1.imag(), alpha2.real(), alpha2.imag(), r1, r2}) {
        if (!std::isfinite(v)) {
            throw DomainError("squeezed input parameters must be finite");
        }
    }
}

QuadratureStats released_quadratures(const SqueezedInput& in, const TransferMatrix& s) {
    const cplx minus_i{0.0, -1.0};

    const auto [mean_q, q2] = quadrature_moments(bogoliubov_coefficient(s.s11(), in.r1),
                                                 bogoliubov_coefficient(s.s12(), in.r2), in.alpha1, in.alpha2);
    // p follows from q with S_1j -> -i S_1j.
    const auto [mean_p, p2] =
        quadrature_moments(bogoliubov_coefficient(minus_i * s.s11(), in.r1),
                           bogoliubov_coefficient(minus_i * s.s12(), in.r2), in.alpha1, in.alpha2);

    return checked({mean_q, mean_p, q2 - mean_q * mean_q, p2 - mean_p * mean_p});
}

double uncertainty_product(const QuadratureStats& stats) {
    return stats.var_q * stats.var_p;
}

GaussianState input_gaussian_state(cplx alpha1, cplx r1, cplx alpha2, cplx r2) {
    GaussianState state;
    state.mean.setZero();
    state.covariance.setZero();
    const std::array<cplx, 2> alpha{alpha1, alpha2};
    const std::array<cplx, 2> r{r1, r2};
    for (int j = 0; j < 2; ++j) {
        const Eigen::Matrix2d t_inv = squeezing_map(r[static_cast<std::size_t>(j)]).inverse();
        const cplx a = alpha[static_cast<std::size_t>(j)];
        // In A's own quadratures the state is coherent: mean sqrt(2)(Re a, Im a), covariance I/2.
        const Eigen::Vector2d mean_a(kSqrt2 * a.real(), kSqrt2 * a.imag());
        state.mean.segment<2>(2 * j) = t_inv * mean_a;
        state.covariance.block<2, 2>(2 * j, 2 * j) = 0.5 * t_inv * t_inv.transpose();
    }
    return state;
}

Eigen::Matrix4d mode_mixing_symplectic(const TransferMatrix& s) {
    Eigen::Matrix4d o;
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            const cplx e = s.matrix()(j, k);
            o.block<2, 2>(2 * j, 2 * k) << e.real(), -e.imag(), e.imag(), e.real();
        }
    }
    return o;
}

GaussianState transform(const GaussianState& state, const TransferMatrix& s) {
    const Eigen::Matrix4d o = mode_mixing_symplectic(s);
    return {o * state.mean, o * state.covariance * o.transpose()};
}

std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& covariance) {
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = omega(2, 3) = 1.0;
    omega(1, 0) = omega(3, 2) = -1.0;
    Eigen::EigenSolver<Eigen::Matrix4d> eig(omega * covariance, false);
    std::array<double, 4> magnitudes{};
    for (int i = 0; i < 4; ++i) {
        magnitudes[static_cast<std::size_t>(i)] = std::abs(eig.eigenvalues()[i].imag());
    }
    std::sort(magnitudes.begin(), magnitudes.end());
    // Eigenvalues come in pairs +-i nu.
    return {0.5 * (magnitudes[0] + magnitudes[1]), 0.5 * (magnitudes[2] + magnitudes[3])};
}

QuadratureStats gaussian_oracle(cplx alpha1, cplx r1, cplx alpha2, cplx r2, const TransferMatrix& s) {
    const GaussianState out = transform(input_gaussian_state(alpha1, r1, alpha2, r2), s);
    return checked({out.mean[0], out.mean[1], out.covariance(0, 0), out.covariance(1, 1)});
}

QuadratureStats gaussian_oracle(const SqueezedInput& in, const TransferMatrix& s) {
    return gaussian_oracle(in.alpha1, cplx{in.r1, 0.0}, in.alpha2, cplx{in.r2, 0.0}, s);
}

} // namespace storedlight
