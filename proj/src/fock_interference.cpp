#include "storedlight/fock_interference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "storedlight/errors.hpp"

namespace storedlight {

namespace {

/// Applies (u X_1^dag + v X_2^dag) / sqrt(k) to a two-mode state with fixed
/// total photon number, indexed by the occupation of mode 1.
void create(std::vector<cplx>& psi, cplx u, cplx v, int k) {
    const std::size_t total = psi.size() - 1;
    std::vector<cplx> out(psi.size() + 1, cplx{0.0, 0.0});
    const double inv = 1.0 / std::sqrt(static_cast<double>(k));
    for (std::size_t i = 0; i <= total; ++i) {
        out[i + 1] += u * std::sqrt(static_cast<double>(i + 1)) * inv * psi[i];
        out[i] += v * std::sqrt(static_cast<double>(total - i + 1)) * inv * psi[i];
    }
    psi = std::move(out);
}

/// Amplitudes for releasing i photons in the channel whose row of the
/// transfer matrix is (a, b), the other row being (c, d):
///   sqrt(i!(N-i)!/(n!m!)) sum_k C(n,k) C(m,i-k) a^k c^(n-k) b^(i-k) d^(m-i+k),
/// evaluated by applying the normalized creation operators one photon at a
/// time. Every intermediate is a unit vector, so no cancellation between
/// large binomial terms occurs.
std::vector<cplx> release_amplitudes(int n, int m, cplx a, cplx b, cplx c, cplx d) {
    std::vector<cplx> psi{cplx{1.0, 0.0}};
    for (int k = 1; k <= n; ++k) {
        create(psi, a, c, k);
    }
    for (int k = 1; k <= m; ++k) {
        create(psi, b, d, k);
    }
    return psi;
}

} // namespace

FockInput::FockInput(int n, int m, GramMatrix overlap, int max_total)
    : n_(n), m_(m), overlap_(overlap), max_total_(max_total) {
    if (n < 0 || m < 0) {
        throw DomainError("photon numbers must be non-negative");
    }
    if (max_total < 0) {
        throw DomainError("photon limit must be non-negative");
    }
    if (n + m > max_total) {
        std::ostringstream os;
        os << "n + m = " << n + m << " exceeds the photon limit " << max_total;
        throw CapacityError(os.str(), static_cast<std::size_t>(n + m));
    }
}

ReleaseDistribution::ReleaseDistribution(std::vector<double> probs, double sum_tolerance)
    : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw BasisError("release distribution must have at least one entry");
    }
    constexpr double kClampTolerance = 1e-9;
    for (double& p : probs_) {
        if (!(p >= -kClampTolerance && p <= 1.0 + kClampTolerance)) {
            std::ostringstream os;
            os << "probability " << p << " outside [0, 1]";
            throw BasisError(os.str());
        }
        p = std::clamp(p, 0.0, 1.0);
    }
    const double sum = std::accumulate(probs_.begin(), probs_.end(), 0.0);
    if (!(std::abs(sum - 1.0) <= sum_tolerance)) {
        std::ostringstream os;
        os << "probabilities sum to " << sum;
        throw BasisError(os.str());
    }
}

double ReleaseDistribution::mean() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        acc += static_cast<double>(i) * probs_[i];
    }
    return acc;
}

double ReleaseDistribution::variance() const {
    const double mu = mean();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double d = static_cast<double>(i) - mu;
        acc += d * d * probs_[i];
    }
    return acc;
}

ReleaseDistribution ReleaseDistribution::reversed() const {
    return ReleaseDistribution(std::vector<double>(probs_.rbegin(), probs_.rend()));
}

ReleaseDistribution release_distribution_s1(const FockInput& input, const TransferMatrix& s, Channel channel) {
    if (!input.overlap().is_unit_overlap()) {
        std::ostringstream os;
        os << "closed-form release distribution requires |s| = 1 (got " << input.overlap().overlap_modulus()
           << "); use the Fock-space oracle for partial overlap";
        throw DomainError(os.str());
    }

    // Channel 2 is channel 1 of the row-swapped transfer matrix.
    const int row = channel == Channel::first ? 1 : 2;
    const int other = 3 - row;
    const cplx a = s(row, 1), b = s(row, 2), c = s(other, 1), d = s(other, 2);

    const int n = input.n();
    const int m = input.m();
    const std::vector<cplx> amplitudes = release_amplitudes(n, m, a, b, c, d);
    std::vector<double> probs(amplitudes.size());
    std::transform(amplitudes.begin(), amplitudes.end(), probs.begin(), [](cplx z) { return std::norm(z); });
    return ReleaseDistribution(std::move(probs));
}

double mean_release_count(const FockInput& input, const TransferMatrix& s, Channel channel) {
    const int row = channel == Channel::first ? 1 : 2;
    return s.weight(row, 1) * input.n() + s.weight(row, 2) * input.m();
}

double release_variance(const FockInput& input, const TransferMatrix& s) {
    const double n = input.n();
    const double m = input.m();
    const double s2 = std::norm(input.overlap().overlap());
    return s.weight(1, 1) * s.weight(1, 2) * (2.0 * n * m * s2 + n + m);
}

double fano_factor(const FockInput& input, const TransferMatrix& s) {
    const double mean = mean_release_count(input, s, Channel::first);
    if (!(mean > 0.0)) {
        throw UndefinedRatioError("Fano factor undefined: mean release count is zero");
    }
    return release_variance(input, s) / mean;
}

} // namespace storedlight
