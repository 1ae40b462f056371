#include "storedlight/fock_oracle.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "storedlight/errors.hpp"

namespace storedlight {

namespace {

constexpr double kIntegerTolerance = 1e-6;

using SparseState = std::map<Occupation, cplx>;

SparseState apply_creation(const SparseState& in, const Eigen::Vector4cd& coeffs) {
    SparseState out;
    for (const auto& [occ, amp] : in) {
        for (int p = 0; p < 4; ++p) {
            if (coeffs[p] == cplx{0.0, 0.0}) {
                continue;
            }
            Occupation next = occ;
            ++next[static_cast<std::size_t>(p)];
            out[next] += amp * coeffs[p] * std::sqrt(static_cast<double>(next[static_cast<std::size_t>(p)]));
        }
    }
    return out;
}

/// Coefficients (over physical modes) of the release polariton of `channel`
/// in packet `packet`: sum_l S_{channel,l} X^0_l(packet).
Eigen::Vector4cd release_mode(const TransferMatrix& s, const ModeBasis& basis, Channel channel, int packet) {
    const int row = channel == Channel::first ? 1 : 2;
    return s(row, 1) * packet_mode_coefficients(basis, 1, packet) +
           s(row, 2) * packet_mode_coefficients(basis, 2, packet);
}

void require_exact(const FockSpace& space) {
    if (space.max_total() > space.basis().cutoff) {
        std::ostringstream os;
        os << "number operators are exact only for total photon number <= cutoff (" << space.basis().cutoff
           << "), space reaches " << space.max_total();
        throw CapacityError(os.str(), static_cast<std::size_t>(space.max_total()));
    }
}

} // namespace

ModeBasis::ModeBasis(GramMatrix overlap_, int cutoff_, std::size_t dimension_budget)
    : overlap(overlap_), cutoff(cutoff_) {
    if (cutoff < 1) {
        throw DomainError("cutoff must be at least 1");
    }
    const double full = std::pow(static_cast<double>(cutoff) + 1.0, 4);
    if (full > static_cast<double>(dimension_budget)) {
        std::ostringstream os;
        os << "(cutoff + 1)^4 = " << full << " exceeds the dimension budget " << dimension_budget;
        throw CapacityError(os.str(), static_cast<std::size_t>(full));
    }
}

Eigen::Vector4cd packet_mode_coefficients(const ModeBasis& basis, int flavor, int packet) {
    if ((flavor != 1 && flavor != 2) || (packet != 1 && packet != 2)) {
        throw DomainError("flavor and packet indices must be 1 or 2");
    }
    Eigen::Vector4cd c = Eigen::Vector4cd::Zero();
    if (packet == 1) {
        c[physical_mode(flavor, 1)] = 1.0;
    } else {
        // X(f2) = int f2*(z) a(z) dz with f2 = s e1 + sqrt(1 - |s|^2) e2.
        const cplx s = basis.overlap.overlap();
        c[physical_mode(flavor, 1)] = std::conj(s);
        c[physical_mode(flavor, 2)] = std::sqrt(std::max(0.0, 1.0 - std::norm(s)));
    }
    return c;
}

FockSpace::FockSpace(ModeBasis basis, int min_total, int max_total)
    : basis_(basis), min_total_(min_total), max_total_(max_total) {
    if (min_total < 0 || max_total < min_total) {
        throw DomainError("invalid photon-number range for Fock space");
    }
    const int c = basis_.cutoff;
    for (int n0 = 0; n0 <= c; ++n0) {
        for (int n1 = 0; n1 <= c; ++n1) {
            for (int n2 = 0; n2 <= c; ++n2) {
                for (int n3 = 0; n3 <= c; ++n3) {
                    const int total = n0 + n1 + n2 + n3;
                    if (total < min_total || total > max_total) {
                        continue;
                    }
                    const Occupation occ{n0, n1, n2, n3};
                    index_.emplace(key(occ), states_.size());
                    states_.push_back(occ);
                }
            }
        }
    }
}

std::shared_ptr<const FockSpace> FockSpace::sector(const ModeBasis& basis, int total) {
    return std::make_shared<const FockSpace>(basis, total, total);
}

std::uint64_t FockSpace::key(const Occupation& occ) {
    std::uint64_t k = 0;
    for (int n : occ) {
        k = (k << 16) | static_cast<std::uint64_t>(n);
    }
    return k;
}

std::ptrdiff_t FockSpace::index_of(const Occupation& occ) const {
    for (int n : occ) {
        if (n < 0 || n > basis_.cutoff) {
            return -1;
        }
    }
    const auto it = index_.find(key(occ));
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

Eigen::MatrixXcd annihilation_operator(const FockSpace& space, int mode) {
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    const auto m = static_cast<std::size_t>(mode);
    for (Eigen::Index col = 0; col < dim; ++col) {
        Occupation occ = space.state(static_cast<std::size_t>(col));
        if (occ[m] == 0) {
            continue;
        }
        const double amp = std::sqrt(static_cast<double>(occ[m]));
        --occ[m];
        if (const auto row = space.index_of(occ); row >= 0) {
            a(row, col) = amp;
        }
    }
    return a;
}

Eigen::MatrixXcd bilinear_operator(const FockSpace& space, const Eigen::Matrix4cd& coeffs) {
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const Occupation& occ = space.state(static_cast<std::size_t>(col));
        for (std::size_t q = 0; q < 4; ++q) {
            if (occ[q] == 0) {
                continue;
            }
            for (std::size_t p = 0; p < 4; ++p) {
                const cplx c = coeffs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
                if (c == cplx{0.0, 0.0}) {
                    continue;
                }
                Occupation next = occ;
                double amp = std::sqrt(static_cast<double>(next[q]));
                --next[q];
                ++next[p];
                amp *= std::sqrt(static_cast<double>(next[p]));
                if (const auto row = space.index_of(next); row >= 0) {
                    op(row, col) += c * amp;
                }
            }
        }
    }
    return op;
}

TruncatedState::TruncatedState(SpacePtr space, Eigen::VectorXcd amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
    if (!space_ || amplitudes_.size() != static_cast<Eigen::Index>(space_->dimension())) {
        throw BasisError("state vector does not match its space");
    }
    const double norm = amplitudes_.norm();
    if (!(std::abs(norm - 1.0) <= 1e-10)) {
        std::ostringstream os;
        os << "state norm " << norm << " differs from 1";
        throw BasisError(os.str());
    }
}

cplx TruncatedState::amplitude(const Occupation& occ) const {
    const auto idx = space_->index_of(occ);
    return idx < 0 ? cplx{0.0, 0.0} : amplitudes_[idx];
}

TruncatedState build_fock_input(int n, int m, const ModeBasis& basis) {
    if (n < 0 || m < 0) {
        throw DomainError("photon numbers must be non-negative");
    }
    if (n + m > basis.cutoff) {
        std::ostringstream os;
        os << "n + m = " << n + m << " exceeds cutoff " << basis.cutoff << "; required cutoff " << n + m;
        throw CapacityError(os.str(), static_cast<std::size_t>(n + m));
    }

    const Eigen::Vector4cd create1 = packet_mode_coefficients(basis, 1, 1).conjugate();
    const Eigen::Vector4cd create2 = packet_mode_coefficients(basis, 2, 2).conjugate();
    SparseState psi{{Occupation{0, 0, 0, 0}, cplx{1.0, 0.0}}};
    for (int i = 0; i < n; ++i) {
        psi = apply_creation(psi, create1);
    }
    for (int i = 0; i < m; ++i) {
        psi = apply_creation(psi, create2);
    }

    auto space = FockSpace::sector(basis, n + m);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space->dimension()));
    for (const auto& [occ, amp] : psi) {
        const auto idx = space->index_of(occ);
        if (idx < 0) {
            throw BasisError("creation chain left the truncated space");
        }
        amps[idx] = amp;
    }
    amps /= amps.norm();
    return TruncatedState(std::move(space), std::move(amps));
}

SpaceOperator released_number_operator(const TransferMatrix& s, const SpacePtr& space, Channel channel) {
    require_exact(*space);
    const ModeBasis& basis = space->basis();
    const std::array<Eigen::Vector4cd, 2> x{release_mode(s, basis, channel, 1),
                                            release_mode(s, basis, channel, 2)};

    Eigen::Matrix4cd coeffs = Eigen::Matrix4cd::Zero();
    if (basis.overlap.is_unit_overlap()) {
        coeffs = x[0].conjugate() * x[0].transpose();
    } else {
        const Eigen::Matrix2cd gamma = basis.overlap.matrix();
        const double scale = 1.0 / (1.0 - std::norm(basis.overlap.overlap()));
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                const double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
                coeffs += (scale * sign * gamma(j, k)) * x[static_cast<std::size_t>(j)].conjugate() *
                          x[static_cast<std::size_t>(k)].transpose();
            }
        }
    }
    return {space, bilinear_operator(*space, coeffs)};
}

SpaceOperator schmidt_number_operator(const TransferMatrix& s, const SpacePtr& space, Channel channel) {
    require_exact(*space);
    const int row = channel == Channel::first ? 1 : 2;
    Eigen::Matrix4cd coeffs = Eigen::Matrix4cd::Zero();
    for (int k = 1; k <= 2; ++k) {
        Eigen::Vector4cd b = Eigen::Vector4cd::Zero();
        b[physical_mode(1, k)] = s(row, 1);
        b[physical_mode(2, k)] = s(row, 2);
        coeffs += b.conjugate() * b.transpose();
    }
    return {space, bilinear_operator(*space, coeffs)};
}

SpaceOperator total_number_operator(const SpacePtr& space) {
    return {space, bilinear_operator(*space, Eigen::Matrix4cd::Identity())};
}

ReleaseDistribution oracle_distribution(const TruncatedState& state, const SpaceOperator& op) {
    if (op.space != state.space_ptr()) {
        throw DomainError("operator and state live on different spaces");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(op.matrix);
    if (eig.info() != Eigen::Success) {
        throw BasisError("eigendecomposition of the number operator failed");
    }
    const int max_count = state.space().max_total();
    std::vector<double> probs(static_cast<std::size_t>(max_count + 1), 0.0);
    const Eigen::VectorXcd overlaps = eig.eigenvectors().adjoint() * state.amplitudes();
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const double lambda = eig.eigenvalues()[k];
        const double rounded = std::round(lambda);
        if (std::abs(lambda - rounded) > kIntegerTolerance || rounded < 0 || rounded > max_count) {
            std::ostringstream os;
            os << "number operator eigenvalue " << lambda << " is not an integer in [0, " << max_count << "]";
            throw BasisError(os.str());
        }
        probs[static_cast<std::size_t>(rounded)] += std::norm(overlaps[k]);
    }
    return ReleaseDistribution(std::move(probs));
}

Moments oracle_moments(const TruncatedState& state, const SpaceOperator& op) {
    if (op.space != state.space_ptr()) {
        throw DomainError("operator and state live on different spaces");
    }
    const Eigen::VectorXcd applied = op.matrix * state.amplitudes();
    const double mean = state.amplitudes().dot(applied).real();
    const double second = applied.squaredNorm();
    return {mean, second - mean * mean};
}

} // namespace storedlight
