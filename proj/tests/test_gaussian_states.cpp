#include <doctest.h>

#include <cmath>
#include <numbers>

#include "random_support.hpp"
#include "storedlight/errors.hpp"
#include "storedlight/gaussian_states.hpp"

using namespace storedlight;
using storedlight::testing::Rng;
using std::numbers::pi;

namespace {

cplx random_alpha(Rng& rng) {
    return {storedlight::testing::uniform(rng, -2, 2), storedlight::testing::uniform(rng, -2, 2)};
}

} // namespace

TEST_CASE("coherent inputs give vacuum noise in both quadratures") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const QuadratureStats q = released_quadratures(SqueezedInput(random_alpha(rng), 0.0, random_alpha(rng), 0.0),
                                                       storedlight::testing::random_unitary(rng));
        CHECK(q.var_q == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(q.var_p == doctest::Approx(0.5).epsilon(1e-13));
    }
}

TEST_CASE("without mixing the first input's squeezing is released unchanged") {
    for (double r : {-1.0, -0.2, 0.0, 0.4, 1.3}) {
        const QuadratureStats q = released_quadratures(SqueezedInput(0.0, r, 0.0, 0.7), TransferMatrix{});
        CHECK(q.var_q == doctest::Approx(std::exp(-2 * r) / 2).epsilon(1e-13));
        CHECK(q.var_p == doctest::Approx(std::exp(2 * r) / 2).epsilon(1e-13));
        CHECK(uncertainty_product(q) == doctest::Approx(0.25).epsilon(1e-13));
    }
}

TEST_CASE("coherent amplitudes move the means but not the variances") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const TransferMatrix s = storedlight::testing::random_unitary(rng);
        const double r1 = storedlight::testing::uniform(rng, -1, 1);
        const double r2 = storedlight::testing::uniform(rng, -1, 1);
        const QuadratureStats vac = released_quadratures(SqueezedInput(0.0, r1, 0.0, r2), s);
        const QuadratureStats lit = released_quadratures(SqueezedInput(random_alpha(rng), r1, random_alpha(rng), r2), s);
        CHECK(vac.mean_q == 0.0);
        CHECK(vac.mean_p == 0.0);
        CHECK(lit.var_q == doctest::Approx(vac.var_q).epsilon(1e-11));
        CHECK(lit.var_p == doctest::Approx(vac.var_p).epsilon(1e-11));
    }
}

TEST_CASE("balanced real mixing of opposite squeezing gives cosh(2r)/2") {
    const TransferMatrix s = build_transfer_matrix(StageAngles(0, 0, 0), StageAngles(pi / 4, 0, 0));
    for (double r : {0.1, 0.5, 1.0, 2.0}) {
        const QuadratureStats q = released_quadratures(SqueezedInput(0.0, r, 0.0, -r), s);
        CHECK(q.var_q == doctest::Approx(std::cosh(2 * r) / 2).epsilon(1e-12));
        CHECK(q.var_p == doctest::Approx(std::cosh(2 * r) / 2).epsilon(1e-12));
    }
}

TEST_CASE("property: released variances stay within the input extremes") {
    Rng rng(43);
    for (int trial = 0; trial < 500; ++trial) {
        const double r1 = storedlight::testing::uniform(rng, -1.5, 1.5);
        const double r2 = storedlight::testing::uniform(rng, -1.5, 1.5);
        const QuadratureStats q = released_quadratures(SqueezedInput(random_alpha(rng), r1, random_alpha(rng), r2),
                                                       storedlight::testing::random_unitary(rng));
        const double lo = std::exp(-2 * std::max(std::abs(r1), std::abs(r2))) / 2;
        const double hi = std::exp(2 * std::max(std::abs(r1), std::abs(r2))) / 2;
        for (double v : {q.var_q, q.var_p}) {
            CHECK(v >= lo * (1 - 1e-12));
            CHECK(v <= hi * (1 + 1e-12));
        }
        CHECK(uncertainty_product(q) >= 0.25 - 1e-12);
    }
}

TEST_CASE("property: closed form matches the covariance-matrix oracle") {
    Rng rng(44);
    for (int trial = 0; trial < 300; ++trial) {
        const SqueezedInput in(random_alpha(rng), storedlight::testing::uniform(rng, -1.2, 1.2), random_alpha(rng),
                               storedlight::testing::uniform(rng, -1.2, 1.2));
        const TransferMatrix s = build_transfer_matrix(storedlight::testing::random_angles(rng),
                                                       storedlight::testing::random_angles(rng));
        const QuadratureStats a = released_quadratures(in, s);
        const QuadratureStats b = gaussian_oracle(in, s);
        CHECK(a.mean_q == doctest::Approx(b.mean_q).epsilon(1e-10));
        CHECK(a.mean_p == doctest::Approx(b.mean_p).epsilon(1e-10));
        CHECK(a.var_q == doctest::Approx(b.var_q).epsilon(1e-10));
        CHECK(a.var_p == doctest::Approx(b.var_p).epsilon(1e-10));
    }
}

TEST_CASE("gaussian states: vacuum, purity and symplectic invariance") {
    const GaussianState vac = input_gaussian_state(0.0, 0.0, 0.0, 0.0);
    CHECK((vac.covariance - 0.5 * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-16);
    CHECK(vac.mean.isZero());

    Rng rng(45);
    const Eigen::Matrix4d omega = [] {
        Eigen::Matrix4d o = Eigen::Matrix4d::Zero();
        o(0, 1) = o(2, 3) = 1.0;
        o(1, 0) = o(3, 2) = -1.0;
        return o;
    }();
    for (int trial = 0; trial < 100; ++trial) {
        const cplx r1 = storedlight::testing::random_phase(rng, storedlight::testing::uniform(rng, 0, 1.5));
        const cplx r2 = storedlight::testing::random_phase(rng, storedlight::testing::uniform(rng, 0, 1.5));
        const TransferMatrix s = storedlight::testing::random_unitary(rng);
        const Eigen::Matrix4d m = mode_mixing_symplectic(s);
        CHECK((m * omega * m.transpose() - omega).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((m * m.transpose() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-13);

        const GaussianState out = transform(input_gaussian_state(random_alpha(rng), r1, random_alpha(rng), r2), s);
        for (double nu : symplectic_eigenvalues(out.covariance)) {
            CHECK(nu == doctest::Approx(0.5).epsilon(1e-10));
        }
        const double product = out.covariance(0, 0) * out.covariance(1, 1);
        CHECK(product >= 0.25 - 1e-12);
    }
}

TEST_CASE("squeezing phase rotates the noise ellipse") {
    // exp(i pi) sinh|r| X^dag is real squeezing with r -> -r.
    const QuadratureStats a = gaussian_oracle(0.0, std::polar(0.8, pi), 0.0, 0.0, TransferMatrix{});
    const QuadratureStats b = released_quadratures(SqueezedInput(0.0, -0.8, 0.0, 0.0), TransferMatrix{});
    CHECK(a.var_q == doctest::Approx(b.var_q).epsilon(1e-12));
    CHECK(a.var_p == doctest::Approx(b.var_p).epsilon(1e-12));
}

TEST_CASE("non-finite squeezing parameters are rejected") {
    CHECK_THROWS_AS(SqueezedInput(0.0, std::nan(""), 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(SqueezedInput(cplx{0.0, INFINITY}, 0.0, 0.0, 0.0), DomainError);
}
