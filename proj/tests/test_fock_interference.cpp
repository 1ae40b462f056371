#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "random_support.hpp"
#include "storedlight/errors.hpp"
#include "storedlight/fock_interference.hpp"

using namespace storedlight;
using storedlight::testing::Rng;
using std::numbers::pi;

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// Permanent by brute force over permutations; fine for N <= 8.
cplx permanent(const std::vector<std::vector<cplx>>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    cplx total = 0.0;
    do {
        cplx term = 1.0;
        for (int i = 0; i < n; ++i) term *= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Boson-sampling distribution of the first output for n, m identical photons.
std::vector<double> permanent_distribution(int n, int m, const TransferMatrix& s) {
    const int total = n + m;
    std::vector<int> inputs;
    for (int k = 0; k < n; ++k) inputs.push_back(1);
    for (int k = 0; k < m; ++k) inputs.push_back(2);
    std::vector<double> p(static_cast<std::size_t>(total + 1));
    for (int i = 0; i <= total; ++i) {
        std::vector<int> outputs;
        for (int k = 0; k < i; ++k) outputs.push_back(1);
        for (int k = i; k < total; ++k) outputs.push_back(2);
        std::vector<std::vector<cplx>> sub(static_cast<std::size_t>(total), std::vector<cplx>(static_cast<std::size_t>(total)));
        for (int r = 0; r < total; ++r) {
            for (int c = 0; c < total; ++c) {
                sub[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                    s(outputs[static_cast<std::size_t>(r)], inputs[static_cast<std::size_t>(c)]);
            }
        }
        p[static_cast<std::size_t>(i)] = total == 0 ? 1.0
                                                    : std::norm(permanent(sub)) /
                                                          (factorial(n) * factorial(m) * factorial(i) * factorial(total - i));
    }
    return p;
}

} // namespace

TEST_CASE("single photons behind the magnetic phase: P(1) = cos^2 delta") {
    const FockInput in(1, 1);
    for (int k = 0; k <= 40; ++k) {
        const double delta = -pi + k * (2 * pi / 40);
        const ReleaseDistribution d = release_distribution_s1(in, magnetic_phase_matrix(delta));
        CHECK(d[1] == doctest::Approx(std::cos(delta) * std::cos(delta)).epsilon(1e-12));
        CHECK(d[0] == doctest::Approx(d[2]).epsilon(1e-12));
    }
    const ReleaseDistribution hom = release_distribution_s1(in, magnetic_phase_matrix(pi / 2));
    CHECK(hom[1] < 1e-15);
    CHECK(hom[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("identity transfer leaves all n photons in the first channel") {
    for (int n = 0; n <= 6; ++n) {
        for (int m = 0; m <= 6; ++m) {
            const ReleaseDistribution d = release_distribution_s1(FockInput(n, m), TransferMatrix{});
            for (int i = 0; i <= n + m; ++i) {
                CHECK(d[static_cast<std::size_t>(i)] == doctest::Approx(i == n ? 1.0 : 0.0).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("real mixing: one photon each gives P(1) = cos^2(2 (phi1 - phi0))") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const double phi0 = storedlight::testing::uniform(rng, -pi, pi);
        const double phi1 = storedlight::testing::uniform(rng, -pi, pi);
        const TransferMatrix s = build_transfer_matrix(StageAngles(phi0, 0, 0), StageAngles(phi1, 0, 0));
        const double expected = std::pow(std::cos(2 * (phi1 - phi0)), 2);
        CHECK(release_distribution_s1(FockInput(1, 1), s)[1] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("property: closed form matches the permanent formula") {
    Rng rng(22);
    for (int trial = 0; trial < 60; ++trial) {
        const TransferMatrix s = storedlight::testing::random_unitary(rng);
        const int n = static_cast<int>(rng() % 5);
        const int m = static_cast<int>(rng() % 5);
        const ReleaseDistribution d = release_distribution_s1(FockInput(n, m), s);
        const std::vector<double> expected = permanent_distribution(n, m, s);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(std::abs(d[i] - expected[i]) < 1e-12);
        }
    }
}

TEST_CASE("six plus six photons: full release into channel one at the analytic peaks") {
    const FockInput in(6, 6);
    const StageAngles storage(pi / 8, 0, 0);
    for (auto [phi1, chi21] : {std::pair{pi / 8, 0.0}, std::pair{3 * pi / 8, pi}, std::pair{pi / 8, 2 * pi}}) {
        const ReleaseDistribution d = release_distribution_s1(in, build_transfer_matrix(storage, StageAngles(phi1, chi21, 0)));
        CHECK(d[12] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(d[6] == doctest::Approx(1.0).epsilon(1e-12));
    }
    // The balanced point suppresses odd counts.
    const ReleaseDistribution balanced = release_distribution_s1(in, build_transfer_matrix(storage, StageAngles(3 * pi / 8, 0, 0)));
    for (int i = 1; i <= 12; i += 2) CHECK(balanced[static_cast<std::size_t>(i)] < 1e-14);
}

TEST_CASE("property: distributions are normalized with moments matching the closed forms") {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const TransferMatrix s = storedlight::testing::random_unitary(rng);
        const int n = static_cast<int>(rng() % 9);
        const int m = static_cast<int>(rng() % 9);
        const FockInput in(n, m);
        const ReleaseDistribution d = release_distribution_s1(in, s);
        double sum = 0.0;
        for (double p : d.probs()) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.mean() == doctest::Approx(mean_release_count(in, s)).epsilon(1e-10));
        CHECK(d.variance() == doctest::Approx(release_variance(in, s)).epsilon(1e-9));
    }
}

TEST_CASE("property: the second channel sees the reversed distribution") {
    Rng rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        const TransferMatrix s = storedlight::testing::random_unitary(rng);
        const FockInput in(static_cast<int>(rng() % 6), static_cast<int>(rng() % 6));
        const ReleaseDistribution d1 = release_distribution_s1(in, s, Channel::first);
        const ReleaseDistribution d2 = release_distribution_s1(in, s, Channel::second);
        const ReleaseDistribution r = d1.reversed();
        for (std::size_t i = 0; i < d2.size(); ++i) CHECK(std::abs(d2[i] - r[i]) < 1e-12);
        CHECK(mean_release_count(in, s, Channel::first) + mean_release_count(in, s, Channel::second) ==
              doctest::Approx(in.total()).epsilon(1e-12));
    }
}

TEST_CASE("moment special values") {
    const TransferMatrix rot = build_transfer_matrix(StageAngles(pi / 8, 0, 0), StageAngles(3 * pi / 8, 0, 0));
    CHECK(mean_release_count(FockInput(4, 2), rot) == doctest::Approx(3.0).epsilon(1e-14));

    const TransferMatrix balanced = magnetic_phase_matrix(pi / 2);
    CHECK(release_variance(FockInput(2, 2, GramMatrix(0.0)), balanced) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(release_variance(FockInput(2, 2, GramMatrix(1.0)), balanced) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(fano_factor(FockInput(1, 1), balanced) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(fano_factor(FockInput(0, 0), balanced), UndefinedRatioError);
    CHECK_THROWS_AS(fano_factor(FockInput(0, 3), TransferMatrix{}), UndefinedRatioError);
}

TEST_CASE("property: Fano factor grows with the packet overlap") {
    Rng rng(25);
    for (int trial = 0; trial < 100; ++trial) {
        const TransferMatrix s = storedlight::testing::random_unitary(rng);
        const int n = 1 + static_cast<int>(rng() % 6);
        const int m = 1 + static_cast<int>(rng() % 6);
        double previous = -1.0;
        for (int k = 0; k <= 10; ++k) {
            const double f = fano_factor(FockInput(n, m, GramMatrix(storedlight::testing::random_phase(rng, k / 10.0))), s);
            const double w11 = s.weight(1, 1);
            const double w12 = s.weight(1, 2);
            const double law = w11 * w12 * (2.0 * n * m * (k / 10.0) * (k / 10.0) + n + m) / (w11 * n + w12 * m);
            CHECK(f == doctest::Approx(law).epsilon(1e-10));
            CHECK(f >= previous - 1e-12);
            previous = f;
        }
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(FockInput(-1, 0), DomainError);
    CHECK_THROWS_AS(FockInput(0, -2), DomainError);
    try {
        FockInput(40, 30);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(e.required() == 70);
    }
    CHECK_NOTHROW(FockInput(40, 30, GramMatrix{}, 80));
    CHECK_THROWS_AS(release_distribution_s1(FockInput(1, 1, GramMatrix(0.5)), TransferMatrix{}), DomainError);
    CHECK_NOTHROW(release_distribution_s1(FockInput(1, 1, GramMatrix(cplx{0.0, -1.0})), TransferMatrix{}));
}

TEST_CASE("large photon numbers stay normalized") {
    const TransferMatrix s = build_transfer_matrix(StageAngles(0.3, 0.1, 0.0), StageAngles(1.1, 0.7, -0.4));
    const ReleaseDistribution d = release_distribution_s1(FockInput(32, 32), s);
    CHECK(std::accumulate(d.probs().begin(), d.probs().end(), 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(d.mean() == doctest::Approx(mean_release_count(FockInput(32, 32), s)).epsilon(1e-8));
}

TEST_CASE("ReleaseDistribution rejects invalid probability vectors") {
    CHECK_THROWS_AS(ReleaseDistribution({0.5, 0.6}), BasisError);
    CHECK_THROWS_AS(ReleaseDistribution({1.1, -0.1}), BasisError);
    const ReleaseDistribution clamped({1.0 + 5e-10, -5e-10});
    CHECK(clamped[0] == 1.0);
    CHECK(clamped[1] == 0.0);
}
