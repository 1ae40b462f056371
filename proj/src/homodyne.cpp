#include "storedlight/homodyne.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "storedlight/errors.hpp"

namespace storedlight {

namespace {

constexpr double kTailTolerance = 1e-10;
constexpr std::size_t kMaxTerms = 1u << 20;

/// Untruncated amplitudes of the A-eigenstate from the eigenvalue recurrence
///   cosh(r) sqrt(n+1) psi_{n+1} = alpha psi_n - sinh(r) sqrt(n) psi_{n-1},
/// continued until the remaining terms are negligible; normalized.
std::vector<cplx> eigenstate_sequence(cplx alpha, double r, std::size_t min_terms) {
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    std::vector<cplx> psi{cplx{1.0, 0.0}};
    double norm2 = 1.0;
    double peak = 1.0;
    std::size_t quiet = 0;
    while (psi.size() < kMaxTerms) {
        const std::size_t n = psi.size() - 1;
        const cplx prev = n > 0 ? psi[n - 1] : cplx{0.0, 0.0};
        const cplx next = (alpha * psi[n] - sh * std::sqrt(static_cast<double>(n)) * prev) /
                          (ch * std::sqrt(static_cast<double>(n + 1)));
        psi.push_back(next);
        const double w = std::norm(next);
        norm2 += w;
        peak = std::max(peak, w);
        if (peak > 1e200) {
            for (auto& v : psi) {
                v *= 1e-100;
            }
            norm2 *= 1e-200;
            peak *= 1e-200;
        }
        quiet = (w < 1e-40 * peak) ? quiet + 1 : 0;
        if (psi.size() > min_terms && quiet >= 8) {
            break;
        }
    }
    if (psi.size() >= kMaxTerms) {
        throw CapacityError("single-mode state does not converge within the term limit", kMaxTerms);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : psi) {
        v *= inv;
    }
    return psi;
}

/// Tail probabilities: tail[c] = sum_{n > c} |psi_n|^2.
std::vector<double> tail_masses(const std::vector<cplx>& psi) {
    std::vector<double> tail(psi.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = psi.size(); i-- > 0;) {
        tail[i] = acc;
        acc += std::norm(psi[i]);
    }
    return tail;
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be finite");
    }
}

double wrap_angle(double x) {
    return std::remainder(x, 2.0 * std::numbers::pi);
}

Eigen::MatrixXcd lowering(Eigen::Index dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

} // namespace

HomodyneConfig::HomodyneConfig(double r1_, double alpha2_mod_, double gamma_, StageAngles storage_,
                               StageAngles release_, ProbeTreatment probe_)
    : r1(r1_), alpha2_mod(alpha2_mod_), gamma(gamma_), storage(storage_), release(release_), probe(probe_) {
    require_finite(r1, "r1");
    require_finite(gamma, "gamma");
    if (!(alpha2_mod >= 0.0) || !std::isfinite(alpha2_mod)) {
        throw DomainError("|alpha2| must be finite and non-negative");
    }
}

double balanced_variance(double r1, double alpha2_mod, double gamma, double chi21) {
    require_finite(r1, "r1");
    require_finite(gamma, "gamma");
    require_finite(chi21, "chi21");
    if (!(alpha2_mod >= 0.0) || !std::isfinite(alpha2_mod)) {
        throw DomainError("|alpha2| must be finite and non-negative");
    }
    const double a2 = alpha2_mod * alpha2_mod;
    return a2 * (std::cosh(2.0 * r1) - std::sinh(2.0 * r1) * std::cos(2.0 * (gamma - chi21)));
}

double general_variance(const HomodyneConfig& c) {
    const double d2 = c.release.chi2() - c.storage.chi2();
    const double d3 = c.release.chi3() - c.storage.chi3();
    if (std::abs(wrap_angle(d2 - d3)) > 1e-12) {
        throw DomainError("general homodyne variance requires equal control-phase shifts on both fields");
    }
    const double two_delta = 2.0 * (c.release.phi() - c.storage.phi());
    const double cos2 = std::pow(std::cos(two_delta), 2);
    const double sin2 = std::pow(std::sin(two_delta), 2);
    const double a2 = c.alpha2_mod * c.alpha2_mod;
    const double r = c.r1;

    const double unmixed = 0.5 * std::pow(std::sinh(2.0 * r), 2) + a2;
    double mixed = a2 * (std::cosh(2.0 * r) - std::sinh(2.0 * r) * std::cos(2.0 * c.gamma));
    if (c.probe == ProbeTreatment::quantum) {
        mixed += std::pow(std::sinh(r), 2);
    }
    return cos2 * unmixed + sin2 * mixed;
}

SingleModeFock squeezed_coherent_fock(cplx alpha, double r, int cutoff) {
    if (cutoff < 0) {
        throw DomainError("cutoff must be non-negative");
    }
    const auto psi = eigenstate_sequence(alpha, r, static_cast<std::size_t>(cutoff) + 1);
    const auto tail = tail_masses(psi);
    SingleModeFock out;
    out.amplitudes.resize(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) {
        out.amplitudes[n] = psi[static_cast<std::size_t>(n)];
    }
    out.tail_mass = tail[static_cast<std::size_t>(cutoff)];
    return out;
}

int required_cutoff(cplx alpha, double r, double tail_tolerance) {
    const auto psi = eigenstate_sequence(alpha, r, 1);
    const auto tail = tail_masses(psi);
    for (std::size_t c = 0; c < tail.size(); ++c) {
        if (tail[c] <= tail_tolerance) {
            return static_cast<int>(c);
        }
    }
    return static_cast<int>(tail.size());
}

double homodyne_oracle(const HomodyneConfig& config, int cutoff) {
    const cplx beta = config.alpha2();
    const SingleModeFock squeezed = squeezed_coherent_fock(cplx{0.0, 0.0}, config.r1, cutoff);
    const SingleModeFock probe = squeezed_coherent_fock(beta, 0.0, cutoff);
    if (squeezed.tail_mass > kTailTolerance || probe.tail_mass > kTailTolerance) {
        const int need = std::max(required_cutoff(cplx{0.0, 0.0}, config.r1, kTailTolerance),
                                  required_cutoff(beta, 0.0, kTailTolerance));
        std::ostringstream os;
        os << "truncation tail above " << kTailTolerance << " at cutoff " << cutoff << "; suggested cutoff "
           << need;
        throw CapacityError(os.str(), static_cast<std::size_t>(need));
    }

    // Psi(n1, n2) with one spare level so that a^dag never leaves the space.
    const Eigen::Index dim = cutoff + 2;
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(dim, dim);
    psi.topLeftCorner(cutoff + 1, cutoff + 1) = squeezed.amplitudes * probe.amplitudes.transpose();
    psi /= psi.norm();

    const Eigen::MatrixXcd a = lowering(dim);
    const Eigen::MatrixXcd ad = a.adjoint();
    const Eigen::MatrixXcd n_op = ad * a;

    Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    const TransferMatrix s = build_transfer_matrix(config.storage, config.release);
    const Eigen::Matrix2cd k = s.matrix().adjoint() * z * s.matrix();

    // Mode 1 acts on rows, mode 2 on columns: (O1 x O2) Psi = O1 Psi O2^T.
    Eigen::MatrixXcd k_psi = k(0, 0) * (n_op * psi) + k(1, 1) * (psi * n_op.transpose());
    if (config.probe == ProbeTreatment::quantum) {
        k_psi += k(0, 1) * (ad * psi * a.transpose()) + k(1, 0) * (a * psi * ad.transpose());
    } else {
        k_psi += k(0, 1) * beta * (ad * psi) + k(1, 0) * std::conj(beta) * (a * psi);
    }

    const double mean = psi.cwiseProduct(k_psi.conjugate()).sum().real();
    return k_psi.squaredNorm() - mean * mean;
}

} // namespace storedlight
