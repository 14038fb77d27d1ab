#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "wgnls/random_fields.hpp"
#include "wgnls/transverse.hpp"

using namespace wgnls;

TEST_SUITE("transverse") {

TEST_CASE("eigenvalues and first modes") {
    const TransverseBasis basis(16);
    CHECK(basis.mu(1) == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-15));
    CHECK(basis.mu(2) == doctest::Approx(kPi * kPi).epsilon(1e-15));
    for (int j = 0; j < 16; ++j) {
        const double x2 = basis.node(j);
        CHECK(TransverseBasis::mode(1, x2) == doctest::Approx(std::cos(0.5 * kPi * x2)).epsilon(1e-14));
    }
    CHECK(TransverseBasis::mode(1, -1.0) == doctest::Approx(0.0));
    CHECK(TransverseBasis::mode(3, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("sampled eigenmodes map to unit coefficient vectors") {
    const int n2 = 12;
    const TransverseBasis basis(n2);
    for (int mode : {1, 2, 5}) {
        std::vector<cdouble> slice(n2);
        for (int j = 0; j < n2; ++j) slice[j] = TransverseBasis::mode(mode, basis.node(j));
        basis.modal_forward(slice);
        for (int k = 0; k < n2; ++k) {
            const double expected = (k == mode - 1) ? 1.0 : 0.0;
            CHECK(std::abs(slice[k] - expected) < 1e-13);
        }
    }
}

TEST_CASE("round trip is the identity and matches the dense transform") {
    const int n2 = 20;
    const TransverseBasis basis(n2);
    Rng rng(3);
    std::vector<cdouble> v(n2);
    for (auto& z : v) z = rng.cgaussian();

    // Dense oracle: c_k = h * sum_j v_j sin(k pi j / (n2+1)).
    std::vector<cdouble> dense(n2, cdouble{0.0, 0.0});
    for (int k = 1; k <= n2; ++k)
        for (int j = 1; j <= n2; ++j)
            dense[k - 1] += basis.quad_weight() * v[j - 1] * std::sin(kPi * k * j / (n2 + 1));

    std::vector<cdouble> modal = v;
    basis.modal_forward(modal);
    CHECK(testutil::max_abs_diff(modal, dense) < 1e-13);

    basis.modal_backward(modal);
    CHECK(testutil::max_abs_diff(modal, v) < 1e-13);
}

TEST_CASE("Parseval under the interior-node quadrature weight") {
    const int n2 = 17;
    const TransverseBasis basis(n2);
    Rng rng(4);
    std::vector<cdouble> v(n2);
    for (auto& z : v) z = rng.cgaussian();
    double nodal = 0.0;
    for (const auto& z : v) nodal += std::norm(z);
    nodal *= basis.quad_weight();

    basis.modal_forward(v);
    double modal = 0.0;
    for (const auto& z : v) modal += std::norm(z);
    CHECK(nodal == doctest::Approx(modal).epsilon(1e-12));
}

TEST_CASE("size mismatch is rejected") {
    const TransverseBasis basis(8);
    std::vector<cdouble> wrong(7);
    CHECK_THROWS_AS(basis.modal_forward(wrong), SizeMismatch);
}

TEST_CASE("projection onto the first mode") {
    const int n2 = 16;
    const TransverseBasis basis(n2);

    std::vector<cdouble> e2(n2), mix(n2), expect(n2);
    for (int j = 0; j < n2; ++j) {
        const double x2 = basis.node(j);
        e2[j] = TransverseBasis::mode(2, x2);
        mix[j] = TransverseBasis::mode(1, x2) + 0.5 * TransverseBasis::mode(3, x2);
        expect[j] = TransverseBasis::mode(1, x2);
    }
    basis.project_pi1_slice(e2);
    for (const auto& z : e2) CHECK(std::abs(z) < 1e-13);

    basis.project_pi1_slice(mix);
    CHECK(testutil::max_abs_diff(mix, expect) < 1e-13);

    // Idempotence.
    std::vector<cdouble> again = mix;
    basis.project_pi1_slice(again);
    CHECK(testutil::max_abs_diff(again, mix) < 1e-13);
}

TEST_CASE("gamma coefficient and quadrature self-check") {
    CHECK(gamma_coefficient() == 0.75);
    CHECK(std::abs(gamma_quadrature(64) - 0.75) < 1e-12);

    // Normalization: integral of e_1^2 is 1.
    const GaussRule rule = gauss_legendre(64);
    const double norm2 = gauss_integrate(
        [](double x) {
            const double e = std::cos(0.5 * kPi * x);
            return e * e;
        },
        -1.0, 1.0, rule);
    CHECK(std::abs(norm2 - 1.0) < 1e-12);
}

TEST_CASE("spectral gap holds modally with equality on e_2") {
    const int n2 = 24;
    const TransverseBasis basis(n2);
    const double mu1 = basis.mu(1);
    const double factor = 1.0 - mu1 / basis.mu(2);
    CHECK(factor == doctest::Approx(0.75).epsilon(1e-15));

    // Equality case: both sides are mu_2 - mu_1 = 3 pi^2 / 4 per unit mass.
    const double lhs_e2 = basis.mu(2) - mu1;
    const double rhs_e2 = factor * basis.mu(2);
    CHECK(lhs_e2 == doctest::Approx(7.402203300817019).epsilon(1e-12));
    CHECK(std::abs(lhs_e2 - rhs_e2) < 1e-12);

    Rng rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        double lhs = 0.0, rhs = 0.0;
        for (int k = 1; k <= n2; ++k) {
            const double p = std::norm(rng.cgaussian() / (1.0 + k));
            lhs += (basis.mu(k) - mu1) * p;
            if (k >= 2) rhs += factor * basis.mu(k) * p;
        }
        CHECK(lhs >= rhs - 1e-12 * std::max(1.0, rhs));
    }
}

} // TEST_SUITE
