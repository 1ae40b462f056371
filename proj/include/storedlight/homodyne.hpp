#pragma once

#include <Eigen/Dense>

#include "storedlight/mode_transform.hpp"

namespace storedlight {

enum class ProbeTreatment { quantum, classical };

/// Squeezed vacuum (real squeezing r1) stored at the first stage, coherent
/// probe alpha2 = alpha2_mod * exp(i gamma) at the second. The observable is
/// K = N_1 - N_2, the difference of released photon numbers.
struct HomodyneConfig {
    HomodyneConfig(double r1, double alpha2_mod, double gamma, StageAngles storage, StageAngles release,
                   ProbeTreatment probe = ProbeTreatment::quantum);

    cplx alpha2() const { return std::polar(alpha2_mod, gamma); }

    double r1;
    double alpha2_mod;
    double gamma;
    StageAngles storage;
    StageAngles release;
    ProbeTreatment probe;
};

/// Balanced homodyne variance of K for a classical probe (phi^0 = 0,
/// phi^1 = pi/4, chi_2^0 = chi_3^0 = chi_3^1 = 0):
///   |alpha2|^2 [cosh 2r1 - sinh 2r1 cos 2(gamma - chi21)].
double balanced_variance(double r1, double alpha2_mod, double gamma, double chi21);

/// Variance of K for arbitrary mixing angles with real mixing
/// (chi_2^1 - chi_2^0 == chi_3^1 - chi_3^0; throws DomainError otherwise):
///   cos^2 2D (sinh^2(2r1)/2 + |a2|^2)
///   + sin^2 2D [|a2|^2 (cosh 2r1 - sinh 2r1 cos 2 gamma) + sinh^2 r1],
/// D = phi^1 - phi^0. A classical probe drops the trailing sinh^2 r1.
double general_variance(const HomodyneConfig& config);

/// Fock amplitudes 0..cutoff of the eigenstate of cosh(r) a + sinh(r) a^dag
/// with eigenvalue alpha, normalized over the untruncated state, and the
/// probability mass beyond the cutoff.
struct SingleModeFock {
    Eigen::VectorXcd amplitudes;
    double tail_mass;
};
SingleModeFock squeezed_coherent_fock(cplx alpha, double r, int cutoff);

/// Smallest cutoff whose truncation tail is at most `tail_tolerance`.
int required_cutoff(cplx alpha, double r, double tail_tolerance = 1e-10);

/// Var(K) on a truncated two-mode Fock space, applying S through the
/// operator K = sum_kl (S^dag diag(1,-1) S)_kl X_k^dag X_l. With a classical
/// probe the interference terms use the c-number alpha2 in place of X_2.
/// Throws CapacityError (with the required cutoff) when either input state
/// has more than 1e-10 probability beyond `cutoff`.
double homodyne_oracle(const HomodyneConfig& config, int cutoff);

} // namespace storedlight
