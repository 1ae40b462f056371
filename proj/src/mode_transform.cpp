#include "storedlight/mode_transform.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

#include "storedlight/errors.hpp"

namespace storedlight {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be finite");
    }
}

std::mutex& warning_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& warning_handler() {
    static WarningHandler handler = [](std::string_view msg) {
        std::cerr << "warning: " << msg << '\n';
    };
    return handler;
}

double trapezoid_norm(std::span<const cplx> f, double spacing) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = (i == 0 || i + 1 == f.size()) ? 0.5 : 1.0;
        acc += w * std::norm(f[i]);
    }
    return acc * spacing;
}

} // namespace

StageAngles::StageAngles(double phi, double chi2, double chi3) : phi_(phi), chi2_(chi2), chi3_(chi3) {
    require_finite(phi, "phi");
    require_finite(chi2, "chi2");
    require_finite(chi3, "chi3");
}

TransferMatrix::TransferMatrix() : m_(Eigen::Matrix2cd::Identity()) {}

TransferMatrix TransferMatrix::from_matrix(const Eigen::Matrix2cd& m, double tolerance) {
    if (!m.allFinite()) {
        throw DomainError("transfer matrix has non-finite entries");
    }
    TransferMatrix t(m);
    const double defect = t.unitarity_defect();
    if (!(defect < tolerance)) {
        std::ostringstream os;
        os << "transfer matrix is not unitary: max|S^dag S - I| = " << defect;
        throw DomainError(os.str());
    }
    return t;
}

double TransferMatrix::unitarity_defect() const {
    return (m_.adjoint() * m_ - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

TransferMatrix build_transfer_matrix(const StageAngles& storage, const StageAngles& release) {
    const double c0 = std::cos(storage.phi());
    const double s0 = std::sin(storage.phi());
    const double c1 = std::cos(release.phi());
    const double s1 = std::sin(release.phi());
    const cplx e2 = std::polar(1.0, release.chi2() - storage.chi2());
    const cplx e3 = std::polar(1.0, release.chi3() - storage.chi3());

    Eigen::Matrix2cd m;
    m(0, 0) = c1 * c0 * e2 + s1 * s0 * e3;
    m(0, 1) = -c1 * s0 * e2 + s1 * c0 * e3;
    m(1, 0) = -s1 * c0 * e2 + c1 * s0 * e3;
    m(1, 1) = s1 * s0 * e2 + c1 * c0 * e3;
    return TransferMatrix(m);
}

TransferMatrix magnetic_phase_matrix(double delta) {
    require_finite(delta, "delta");
    const cplx phase = std::polar(1.0, -0.5 * delta);
    const cplx diag = phase * std::cos(0.5 * delta);
    const cplx off = cplx{0.0, 1.0} * phase * std::sin(0.5 * delta);
    Eigen::Matrix2cd m;
    m << diag, off, off, diag;
    return TransferMatrix(m);
}

bool equal_up_to_global_phase(const TransferMatrix& a, const TransferMatrix& b, double tolerance) {
    const Eigen::Matrix2cd p = a.matrix() * b.matrix().adjoint();
    // For unitary a, b the product is exp(i theta) I exactly when they agree up to phase.
    const cplx trace = p.trace();
    if (std::abs(trace) < 1e-300) {
        return false;
    }
    const cplx phase = trace / std::abs(trace);
    return (p - phase * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < tolerance;
}

GramMatrix::GramMatrix(cplx overlap) : s_(overlap) {
    if (!std::isfinite(overlap.real()) || !std::isfinite(overlap.imag())) {
        throw DomainError("overlap must be finite");
    }
    const double mod = std::abs(overlap);
    if (mod > 1.0 + 1e-10) {
        std::ostringstream os;
        os << "overlap modulus " << mod << " exceeds 1";
        throw DomainError(os.str());
    }
    if (mod > 1.0) {
        s_ = overlap / mod;
    }
}

bool GramMatrix::is_unit_overlap(double tolerance) const noexcept {
    return std::abs(std::abs(s_) - 1.0) <= tolerance;
}

Eigen::Matrix2cd GramMatrix::matrix() const {
    Eigen::Matrix2cd g;
    g << 1.0, s_, std::conj(s_), 1.0;
    return g;
}

void set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(warning_mutex());
    warning_handler() = std::move(handler);
}

void warn(std::string_view message) {
    std::lock_guard lock(warning_mutex());
    if (warning_handler()) {
        warning_handler()(message);
    }
}

GramMatrix gram_from_packets(std::span<const cplx> f1, std::span<const cplx> f2, double spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw DomainError("sample spacing must be positive and finite");
    }
    if (f1.size() != f2.size() || f1.size() < 2) {
        throw DomainError("packet profiles must have equal length of at least 2 samples");
    }
    for (auto f : {f1, f2}) {
        const double norm = trapezoid_norm(f, spacing);
        if (!(std::abs(norm - 1.0) <= 1e-8)) {
            std::ostringstream os;
            os << "packet profile is not normalized: int |f|^2 dz = " << norm;
            throw NormalizationError(os.str(), norm);
        }
    }

    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < f1.size(); ++i) {
        const double w = (i == 0 || i + 1 == f1.size()) ? 0.5 : 1.0;
        s += w * std::conj(f1[i]) * f2[i];
    }
    s *= spacing;

    // Cauchy-Schwarz bounds |s| by the product of the (nearly unit) norms.
    if (const double mod = std::abs(s); mod > 1.0) {
        std::ostringstream os;
        os << "packet overlap modulus " << mod << " clamped to 1";
        warn(os.str());
        s /= mod;
    }
    return GramMatrix(s);
}

} // namespace storedlight
