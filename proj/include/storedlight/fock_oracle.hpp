#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "storedlight/fock_interference.hpp"
#include "storedlight/mode_transform.hpp"

namespace storedlight {

/// Orthonormal modes behind the two (possibly overlapping) packets. Packet 1
/// is Schmidt mode e1; packet 2 is s e1 + sqrt(1 - |s|^2) e2. Each polariton
/// flavor j has both, giving four physical modes a_{j,k}.
struct ModeBasis {
    static constexpr int kDefaultCutoff = 8;
    static constexpr std::size_t kDefaultDimensionBudget = std::size_t{1} << 20;

    /// Validates cutoff >= 1 and (cutoff + 1)^4 <= dimension_budget.
    explicit ModeBasis(GramMatrix overlap = GramMatrix{}, int cutoff = kDefaultCutoff,
                       std::size_t dimension_budget = kDefaultDimensionBudget);

    GramMatrix overlap;
    int cutoff;
};

/// Physical mode a_{flavor, schmidt}, flattened as 2 * (flavor - 1) + (schmidt - 1).
constexpr int physical_mode(int flavor, int schmidt) { return 2 * (flavor - 1) + (schmidt - 1); }

/// Expansion coefficients c with X_flavor(packet) = sum_p c_p a_p.
Eigen::Vector4cd packet_mode_coefficients(const ModeBasis& basis, int flavor, int packet);

using Occupation = std::array<int, 4>;

/// Truncated four-mode Fock space: all occupations with total photon number
/// in [min_total, max_total] and every mode at most the basis cutoff.
class FockSpace {
public:
    FockSpace(ModeBasis basis, int min_total, int max_total);

    /// Single fixed-total sector.
    static std::shared_ptr<const FockSpace> sector(const ModeBasis& basis, int total);

    const ModeBasis& basis() const noexcept { return basis_; }
    int min_total() const noexcept { return min_total_; }
    int max_total() const noexcept { return max_total_; }
    std::size_t dimension() const noexcept { return states_.size(); }
    const Occupation& state(std::size_t index) const { return states_.at(index); }

    /// Index of an occupation, or -1 if it lies outside the space.
    std::ptrdiff_t index_of(const Occupation& occ) const;

private:
    static std::uint64_t key(const Occupation& occ);

    ModeBasis basis_;
    int min_total_;
    int max_total_;
    std::vector<Occupation> states_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const FockSpace>;

/// Annihilation operator of one physical mode, compressed to the space
/// (transitions leaving the space are dropped).
Eigen::MatrixXcd annihilation_operator(const FockSpace& space, int mode);

/// sum_pq coeffs(p, q) a_p^dagger a_q. Exact whenever max_total <= cutoff.
Eigen::MatrixXcd bilinear_operator(const FockSpace& space, const Eigen::Matrix4cd& coeffs);

/// Unit-norm state vector on a truncated space.
class TruncatedState {
public:
    /// Throws BasisError unless |amplitudes| = 1 within 1e-10.
    TruncatedState(SpacePtr space, Eigen::VectorXcd amplitudes);

    const FockSpace& space() const noexcept { return *space_; }
    const SpacePtr& space_ptr() const noexcept { return space_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }

    /// Amplitude on a given occupation (zero outside the space).
    cplx amplitude(const Occupation& occ) const;

private:
    SpacePtr space_;
    Eigen::VectorXcd amplitudes_;
};

/// Hermitian operator acting within one truncated space.
struct SpaceOperator {
    SpacePtr space;
    Eigen::MatrixXcd matrix;
};

/// Normalized (X_1(1)^dagger)^n (X_2(2)^dagger)^m |0> on the fixed n+m sector,
/// built by explicitly applying the creation operators. Requires
/// n + m <= cutoff so that the number operators are exact on the sector.
TruncatedState build_fock_input(int n, int m, const ModeBasis& basis);

/// Number of polaritons released in `channel` summed over both packets,
///   N = 1/(1-|s|^2) sum_jk (-1)^(j+k) X^dag(j) X(k) gamma_jk,
/// with X(k) = sum_l S_{channel,l} X^0_l(k). For |s| = 1 this reduces to
/// X^dag(1) X(1). Throws CapacityError if the space is not exact.
SpaceOperator released_number_operator(const TransferMatrix& s, const SpacePtr& space, Channel channel);

/// The same observable assembled directly as the sum of occupations of the
/// two Schmidt-orthogonalized release modes.
SpaceOperator schmidt_number_operator(const TransferMatrix& s, const SpacePtr& space, Channel channel);

/// Total photon number operator.
SpaceOperator total_number_operator(const SpacePtr& space);

/// P(i) = |Pi_i psi|^2 with Pi_i the eigenprojector of `op` for eigenvalue i,
/// support i = 0..max_total. Eigenvalues further than 1e-6 from an integer
/// raise BasisError.
ReleaseDistribution oracle_distribution(const TruncatedState& state, const SpaceOperator& op);

struct Moments {
    double mean;
    double variance;
};

/// <N> and <N^2> - <N>^2 by direct matrix expectation.
Moments oracle_moments(const TruncatedState& state, const SpaceOperator& op);

} // namespace storedlight
