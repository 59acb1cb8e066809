#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qclone/cloning.hpp"

using namespace qclone;

namespace {

Matrix adapted_diag(const CloningOutcome& o) {
    return in_basis(o.clone_state, adapted_basis(o.input));
}

Matrix expected_diag(int d) {
    Matrix m = Matrix::Zero(d, d);
    m(0, 0) = 0.5 + 1.0 / (d + 1.0);
    for (int k = 1; k < d; ++k) m(k, k) = 1.0 / (2.0 * (d + 1.0));
    return m;
}

}  // namespace

TEST_CASE("f_est") {
    CHECK(f_est(1, 4) == 0.4);
    CHECK(f_est(1, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    double prev = 0.0;
    for (int n = 1; n <= 1000000; n *= 10) {
        const double f = f_est(n, 4);
        CHECK(f > prev);
        prev = f;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-5));
    CHECK_THROWS_AS(f_est(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(f_est(1, 1), std::invalid_argument);
}

TEST_CASE("f_clon") {
    CHECK(f_clon(1, 2, 4) == 0.7);
    CHECK(f_clon(1, 2, 2) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(f_clon(2, 3, 2) == doctest::Approx(11.0 / 12.0).epsilon(1e-15));
    CHECK(f_clon(1, 3, 4) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(std::abs(f_clon(1, 10000000, 4) - f_est(1, 4)) < 1e-6);
    CHECK_THROWS_AS(f_clon(2, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(f_clon(1, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(f_clon(1, 2, 1), std::invalid_argument);
}

TEST_CASE("cloning beats estimation on the whole grid") {
    for (int d = 2; d <= 10; ++d)
        for (int m = 2; m <= 100; ++m)
            for (int n = 1; n < m; ++n) CHECK_MESSAGE(f_clon(n, m, d) > f_est(n, d), n << " " << m << " " << d);
}

TEST_CASE("cloning advantage grows with dimension") {
    double prev = -1.0;
    for (int d = 2; d <= 100; ++d) {
        const double gap = f_clon(1, 2, d) - f_est(1, d);
        CHECK(gap > prev);
        prev = gap;
    }
}

TEST_CASE("analytic 1->2 outcome") {
    const auto o = clone_analytic(basis_logical()[0], basis_logical());
    Matrix expect = Matrix::Zero(4, 4);
    expect.diagonal() << 0.7, 0.1, 0.1, 0.1;
    CHECK((o.clone_state.mat() - expect).norm() < 1e-15);
    CHECK(o.fidelity == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(o.success_prob == doctest::Approx(5.0 / 8.0).epsilon(1e-15));

    const auto q = clone_analytic(PureState::basis_vector(2, 0), computational_basis(2));
    CHECK(q.fidelity == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(q.clone_state(1, 1).real() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    // Element other than the first: F sits on that element's diagonal slot.
    const auto iv = clone_analytic(basis_four()[2], basis_four());
    CHECK(in_basis(iv.clone_state, basis_four())(2, 2).real() == doctest::Approx(0.7).epsilon(1e-15));

    std::mt19937_64 gen(1);
    CHECK_THROWS_AS(clone_analytic(haar_random_state(4, gen), basis_logical()), std::invalid_argument);
}

TEST_CASE("oracle reproduces the 7/10 clone for basis I and IV") {
    for (const auto& basis : {basis_logical(), basis_four()}) {
        for (const auto& phi : basis.states()) {
            const auto o = clone_oracle(phi, 4);
            CHECK(o.fidelity == doctest::Approx(0.7).epsilon(1e-12));
            CHECK((adapted_diag(o) - expected_diag(4)).cwiseAbs().maxCoeff() < 1e-12);
            const auto a = clone_analytic(phi, basis);
            CHECK((o.clone_state.mat() - a.clone_state.mat()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(o.success_prob == doctest::Approx(a.success_prob).epsilon(1e-12));
        }
    }
}

TEST_CASE("oracle equals analytic for Haar-random inputs, d = 2..5") {
    std::mt19937_64 gen(2024);
    for (int d = 2; d <= 5; ++d) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto phi = haar_random_state(d, gen);
            const auto o = clone_oracle(phi, d);
            const auto a = clone_analytic(phi, adapted_basis(phi));
            CHECK((o.clone_state.mat() - a.clone_state.mat()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(o.fidelity - (0.5 + 1.0 / (d + 1.0))) < 1e-12);
            CHECK(std::abs(o.success_prob - (d + 1.0) / (2.0 * d)) < 1e-12);
        }
    }
}

TEST_CASE("oracle outcome does not depend on the ancilla decomposition basis") {
    std::mt19937_64 gen(77);
    for (int trial = 0; trial < 5; ++trial) {
        const auto phi = haar_random_state(4, gen);
        const auto ref = clone_oracle(phi, computational_basis(4));
        const auto other = clone_oracle(phi, adapted_basis(haar_random_state(4, gen)));
        const auto four = clone_oracle(phi, basis_four());
        CHECK((ref.clone_state.mat() - other.clone_state.mat()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((ref.clone_state.mat() - four.clone_state.mat()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(ref.success_prob == doctest::Approx(other.success_prob).epsilon(1e-12));
    }
}

TEST_CASE("ancilla branch weights after coalescence") {
    for (int d = 2; d <= 5; ++d) {
        const auto w = ancilla_branch_weights(PureState::basis_vector(d, 0), computational_basis(d));
        CHECK(std::abs(w[0] - 2.0 / (d + 1.0)) < 1e-12);
        double rest = 0.0;
        for (int k = 1; k < d; ++k) rest += w[k];
        CHECK(std::abs(rest - (d - 1.0) / (d + 1.0)) < 1e-12);
    }
}

TEST_CASE("both clones carry the same reduced state") {
    // Label the two output photons by splitting the coalesced pair deterministically:
    // in the symmetric two-photon state each reduced marginal is the same operator.
    std::mt19937_64 gen(5);
    const int d = 3;
    const auto phi = haar_random_state(d, gen);
    const auto anc = haar_random_state(d, gen);
    const auto out = beam_splitter(product_state(2, d, {{0, phi}, {1, anc}}), 0, 1);
    const auto cond = postselect_same_port(out, 0);
    // Move one photon per port with a splitter and keep the one-per-port component;
    // the marginal in each port must agree.
    const auto split = project_port_counts(beam_splitter(cond.conditional, 0, 1), std::vector<int>{1, 1});
    const auto left = reduced_single_photon(split.conditional, 0);
    const auto right = reduced_single_photon(split.conditional, 1);
    CHECK((left.mat() - right.mat()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((left.mat() - reduced_single_photon(cond.conditional, 0).mat()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("cascade base case equals the 1->2 oracle exactly") {
    std::mt19937_64 gen(6);
    const auto phi = haar_random_state(4, gen);
    const auto c = cascade_clone(phi, CloningSpec{4, 1, 2});
    const auto o = clone_oracle(phi, 4);
    CHECK(c.fidelity == o.fidelity);
    CHECK(c.success_prob == o.success_prob);
    CHECK(c.clone_state.mat() == o.clone_state.mat());
}

TEST_CASE("cascade fidelities match the optimal formula") {
    const std::vector<std::array<int, 3>> cases{{1, 2, 2}, {1, 2, 4}, {1, 3, 2}, {1, 3, 4},
                                                {2, 3, 2}, {1, 4, 2}, {2, 4, 3}, {1, 5, 2}};
    std::mt19937_64 gen(31);
    for (auto [n, m, d] : cases) {
        const auto phi = haar_random_state(d, gen);
        const auto c = cascade_clone(phi, CloningSpec{d, n, m});
        CHECK_MESSAGE(std::abs(c.fidelity - f_clon(n, m, d)) < 1e-9, n << "->" << m << " d=" << d);
        CHECK(c.success_prob > 0.0);
        CHECK(c.success_prob <= 1.0);
    }
    CHECK(cascade_clone(basis_logical()[0], CloningSpec{4, 1, 3}).fidelity == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(cascade_clone(PureState::basis_vector(2, 0), CloningSpec{2, 2, 3}).fidelity ==
          doctest::Approx(11.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("cascade clone state equals the symmetric-projector oracle") {
    std::mt19937_64 gen(99);
    const std::vector<std::array<int, 3>> cases{{1, 3, 2}, {2, 3, 2}, {1, 4, 2}, {1, 3, 3}};
    for (auto [n, m, d] : cases) {
        const auto phi = haar_random_state(d, gen);
        const auto c = cascade_clone(phi, CloningSpec{d, n, m});
        const Matrix ref = oracle::werner_clone(phi.amps(), n, m);
        CHECK_MESSAGE((c.clone_state.mat() - ref).cwiseAbs().maxCoeff() < 1e-12, n << "->" << m << " d=" << d);
    }
}

TEST_CASE("cascade universality and the size cap") {
    std::mt19937_64 gen(3);
    const double f0 = cascade_clone(haar_random_state(3, gen), CloningSpec{3, 1, 3}).fidelity;
    for (int trial = 0; trial < 5; ++trial) {
        CHECK(std::abs(cascade_clone(haar_random_state(3, gen), CloningSpec{3, 1, 3}).fidelity - f0) < 1e-12);
    }
    const auto phi = PureState::basis_vector(2, 0);
    CHECK_THROWS_AS(cascade_clone(phi, CloningSpec{2, 1, 7}), std::length_error);
    CHECK_NOTHROW(cascade_clone(phi, CloningSpec{2, 1, 7}, 7));
    CHECK_THROWS_AS(cascade_clone(phi, CloningSpec{2, 3, 2}), std::invalid_argument);
    CHECK_THROWS_AS(cascade_clone(phi, CloningSpec{3, 1, 2}), std::invalid_argument);
}
