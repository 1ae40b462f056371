#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace storedlight {

using cplx = std::complex<double>;

/// Release channel (or, equivalently, release stage) index.
enum class Channel { first = 1, second = 2 };

/// Control-field parameters of one storage or release stage: mixing angle
/// phi = arctan(Omega_3 / Omega_2) and the phases of control fields 2 and 3.
/// The second stage of each pair uses (pi/2 - phi, chi2 + pi, chi3) and is
/// implied. All values in radians; any finite value is accepted.
class StageAngles {
public:
    StageAngles(double phi, double chi2, double chi3);

    double phi() const noexcept { return phi_; }
    double chi2() const noexcept { return chi2_; }
    double chi3() const noexcept { return chi3_; }

private:
    double phi_;
    double chi2_;
    double chi3_;
};

/// 2x2 unitary mapping storage polaritons onto release polaritons,
/// X^1_j = sum_k S_jk X^0_k.
class TransferMatrix {
public:
    static constexpr double kUnitarityTolerance = 1e-12;

    /// Identity transfer (no mixing).
    TransferMatrix();

    /// Wraps an arbitrary matrix after checking max|S^dagger S - I| against
    /// `tolerance`; throws DomainError otherwise.
    static TransferMatrix from_matrix(const Eigen::Matrix2cd& m,
                                      double tolerance = kUnitarityTolerance);

    cplx s11() const noexcept { return m_(0, 0); }
    cplx s12() const noexcept { return m_(0, 1); }
    cplx s21() const noexcept { return m_(1, 0); }
    cplx s22() const noexcept { return m_(1, 1); }

    /// Element with 1-based indices, as written in the formulas.
    cplx operator()(int row, int col) const { return m_(row - 1, col - 1); }

    /// |S_row,col|^2
    double weight(int row, int col) const { return std::norm(m_(row - 1, col - 1)); }

    const Eigen::Matrix2cd& matrix() const noexcept { return m_; }

    /// max |S^dagger S - I| over all entries.
    double unitarity_defect() const;

private:
    explicit TransferMatrix(const Eigen::Matrix2cd& m) : m_(m) {}
    friend TransferMatrix build_transfer_matrix(const StageAngles&, const StageAngles&);
    friend TransferMatrix magnetic_phase_matrix(double);

    Eigen::Matrix2cd m_;
};

/// Transfer matrix for the given storage and release control-field settings.
/// Depends on the phases only through chi^1 - chi^0.
TransferMatrix build_transfer_matrix(const StageAngles& storage, const StageAngles& release);

/// Balanced stages (phi^0 = phi^1 = pi/4, zero control phases) with an extra
/// phase delta imprinted on the sigma_bc coherence at the storage stage:
///   S11 = S22 = exp(-i delta/2) cos(delta/2),
///   S12 = S21 = i exp(-i delta/2) sin(delta/2).
/// Equal to build_transfer_matrix({pi/4, delta, 0}, {pi/4, 0, 0}), i.e. delta
/// acts as an additive shift of chi_2^0.
TransferMatrix magnetic_phase_matrix(double delta);

/// True when a = exp(i theta) b for some theta, checked as
/// max|a b^dagger - exp(i theta) I| < tolerance.
bool equal_up_to_global_phase(const TransferMatrix& a, const TransferMatrix& b,
                              double tolerance = 1e-12);

/// Overlap matrix gamma = [[1, s], [s*, 1]] of the two stored wave packets.
class GramMatrix {
public:
    /// Accepts |s| <= 1 + 1e-10; marginal excess is clamped onto the unit
    /// circle. Larger values throw DomainError.
    explicit GramMatrix(cplx overlap = cplx{1.0, 0.0});

    cplx overlap() const noexcept { return s_; }
    double overlap_modulus() const noexcept { return std::abs(s_); }
    bool is_unit_overlap(double tolerance = 1e-12) const noexcept;

    Eigen::Matrix2cd matrix() const;

private:
    cplx s_;
};

/// Receives warnings raised by library code (e.g. overlap clamping).
/// The default handler writes to std::cerr.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

/// Overlap s = int f1*(z) f2(z) dz of two uniformly sampled packet profiles
/// by trapezoidal quadrature. Each profile must satisfy int |f|^2 dz = 1 to
/// 1e-8 on the same grid, otherwise NormalizationError reports the measured
/// norm.
GramMatrix gram_from_packets(std::span<const cplx> f1, std::span<const cplx> f2, double spacing);

} // namespace storedlight
