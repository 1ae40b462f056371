#pragma once

#include <span>
#include <vector>

#include "storedlight/mode_transform.hpp"

namespace storedlight {

inline constexpr int kDefaultMaxPhotons = 64;

/// n photons stored at the first storage stage, m at the second, in packets
/// with overlap matrix `overlap`.
class FockInput {
public:
    FockInput(int n, int m, GramMatrix overlap = GramMatrix{}, int max_total = kDefaultMaxPhotons);

    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    int total() const noexcept { return n_ + m_; }
    const GramMatrix& overlap() const noexcept { return overlap_; }
    int max_total() const noexcept { return max_total_; }

private:
    int n_;
    int m_;
    GramMatrix overlap_;
    int max_total_;
};

/// Probabilities P(i), i = 0..n+m, of releasing i photons in one channel.
class ReleaseDistribution {
public:
    /// Entries within 1e-9 outside [0, 1] are clamped; larger excursions, or a
    /// total deviating from 1 by more than `sum_tolerance`, throw BasisError.
    explicit ReleaseDistribution(std::vector<double> probs, double sum_tolerance = 1e-9);

    std::span<const double> probs() const noexcept { return probs_; }
    double operator[](std::size_t i) const { return probs_.at(i); }
    std::size_t size() const noexcept { return probs_.size(); }
    int max_count() const noexcept { return static_cast<int>(probs_.size()) - 1; }

    double mean() const;
    double variance() const;

    /// Distribution of the complementary channel, P'(i) = P(N - i).
    ReleaseDistribution reversed() const;

private:
    std::vector<double> probs_;
};

/// Closed-form release distribution for identical packets (|s| = 1). The
/// phase of s is absorbed into the second packet mode and does not enter.
/// Throws DomainError for |s| != 1 (use the Fock-space oracle instead) and
/// CapacityError when n + m exceeds the input's photon limit.
ReleaseDistribution release_distribution_s1(const FockInput& input, const TransferMatrix& s,
                                            Channel channel = Channel::first);

/// Mean number of photons released in `channel`, valid for any overlap.
double mean_release_count(const FockInput& input, const TransferMatrix& s, Channel channel = Channel::first);

/// Variance of the first-channel count,
/// |S11|^2 |S12|^2 (2 n m |s|^2 + n + m).
double release_variance(const FockInput& input, const TransferMatrix& s);

/// Variance over mean of the first-channel count. Throws UndefinedRatioError
/// when the mean vanishes.
double fano_factor(const FockInput& input, const TransferMatrix& s);

} // namespace storedlight
