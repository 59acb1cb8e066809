#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qclone/bosonic.hpp"

using namespace qclone;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Occupation vector for a two-port state with photons at the listed (port, level) pairs.
Occupation occ_of(int d, std::initializer_list<std::pair<int, int>> photons) {
    Occupation o(static_cast<std::size_t>(2 * d), 0);
    for (auto [p, l] : photons) o[p * d + l] += 1;
    return o;
}

cplx amp_of(const FockState& s, const Occupation& o) {
    auto it = s.terms().find(o);
    return it == s.terms().end() ? cplx(0.0) : it->second;
}

double port_probability(const FockState& s, std::vector<int> counts) {
    return project_port_counts(s, counts).prob;
}

// Every occupation vector with n photons over `modes` modes.
void for_each_occupation(int modes, int n, const std::function<void(const Occupation&)>& f) {
    Occupation o(static_cast<std::size_t>(modes), 0);
    std::function<void(int, int)> rec = [&](int m, int left) {
        if (m == modes - 1) {
            o[m] = static_cast<std::uint8_t>(left);
            f(o);
            return;
        }
        for (int k = left; k >= 0; --k) {
            o[m] = static_cast<std::uint8_t>(k);
            rec(m + 1, left - k);
        }
    };
    rec(0, n);
}

}  // namespace

TEST_CASE("single photon states") {
    const auto s = single_photon(2, 0, PureState::basis_vector(4, 0));
    REQUIRE(s.terms().size() == 1);
    CHECK(amp_of(s, occ_of(4, {{0, 0}})) == cplx(1.0));

    Vector v = Vector::Zero(4);
    v(0) = kInvSqrt2;
    v(1) = kInvSqrt2;
    const auto t = single_photon(2, 0, PureState(v));
    CHECK(t.terms().size() == 2);
    CHECK(std::abs(amp_of(t, occ_of(4, {{0, 1}})) - kInvSqrt2) < 1e-15);
    CHECK(t.norm_squared() == doctest::Approx(1.0));
    CHECK_THROWS_AS(single_photon(2, 2, PureState::basis_vector(4, 0)), std::invalid_argument);
}

TEST_CASE("beam splitter on one photon") {
    const auto out = beam_splitter(single_photon(2, 0, PureState::basis_vector(2, 0)), 0, 1);
    CHECK(std::abs(amp_of(out, occ_of(2, {{0, 0}})) - kInvSqrt2) < 1e-15);
    CHECK(std::abs(amp_of(out, occ_of(2, {{1, 0}})) - cplx(0.0, kInvSqrt2)) < 1e-15);
    CHECK_THROWS_AS(beam_splitter(out, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(beam_splitter(out, 0, 3), std::invalid_argument);
}

TEST_CASE("Hong-Ou-Mandel: identical photons never leave in coincidence") {
    const int d = 3;
    const auto e0 = PureState::basis_vector(d, 0);
    const auto out = beam_splitter(product_state(2, d, {{0, e0}, {1, e0}}), 0, 1);
    CHECK(std::abs(amp_of(out, occ_of(d, {{0, 0}, {1, 0}}))) < 1e-15);
    CHECK(port_probability(out, {1, 1}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(postselect_same_port(out, 0).prob == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(postselect_same_port(out, 1).prob == doctest::Approx(0.5).epsilon(1e-14));

    // Oracle: first-quantized expansion of (a+ib)(ia+b)/2.
    const auto u = oracle::splitter(d);
    const auto psi = oracle::apply_each(
        oracle::symmetrized_product({oracle::on_port(e0.amps(), 0), oracle::on_port(e0.amps(), 1)}), u, 2);
    const auto probs = oracle::occupation_probabilities(psi, 2 * d, 2);
    double coinc = 0.0;
    for (const auto& [occ, p] : probs) {
        const int left = occ[0] + occ[1] + occ[2];
        if (left == 1) coinc += p;
    }
    CHECK(coinc == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("orthogonal photons: coincidence 1/2, same port 1/4 each") {
    const int d = 4;
    const auto out = beam_splitter(
        product_state(2, d, {{0, PureState::basis_vector(d, 0)}, {1, PureState::basis_vector(d, 2)}}), 0, 1);
    CHECK(port_probability(out, {1, 1}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(postselect_same_port(out, 0).prob == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(postselect_same_port(out, 1).prob == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("engine matches the first-quantized oracle on random few-photon inputs") {
    std::mt19937_64 gen(21);
    for (int d = 2; d <= 3; ++d) {
        for (int n = 2; n <= 3; ++n) {
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<std::pair<int, PureState>> photons;
                std::vector<oracle::Vec> single;
                for (int k = 0; k < n; ++k) {
                    const int port = k % 2;
                    auto psi = haar_random_state(d, gen);
                    single.push_back(oracle::on_port(psi.amps(), port));
                    photons.emplace_back(port, std::move(psi));
                }
                const auto engine = beam_splitter(product_state(2, d, photons), 0, 1);
                const auto ref = oracle::occupation_probabilities(
                    oracle::apply_each(oracle::symmetrized_product(single), oracle::splitter(d), n), 2 * d, n);
                double total = 0.0;
                for (const auto& [occ, p] : ref) {
                    Occupation o(occ.begin(), occ.end());
                    CHECK(std::norm(amp_of(engine, o)) == doctest::Approx(p).epsilon(1e-12));
                    total += p;
                }
                CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("beam splitter preserves norm and photon number, n <= 6, d <= 4 (exhaustive)") {
    for (int d = 1; d <= 4; ++d) {
        for (int n = 1; n <= 6; ++n) {
            int kets = 0;
            for_each_occupation(2 * d, n, [&](const Occupation& o) {
                FockState s(2, d);
                s.add(o, 1.0);
                const auto out = beam_splitter(s, 0, 1);
                CHECK(out.photon_number() == n);
                CHECK(std::abs(out.norm_squared() - 1.0) < 1e-12);
                ++kets;
            });
            CHECK(kets > 0);
        }
    }
}

TEST_CASE("beam splitter preserves inner products between kets (n <= 3, d <= 2)") {
    for (int d = 1; d <= 2; ++d) {
        for (int n = 1; n <= 3; ++n) {
            std::vector<FockState> outs;
            for_each_occupation(2 * d, n, [&](const Occupation& o) {
                FockState s(2, d);
                s.add(o, 1.0);
                outs.push_back(beam_splitter(s, 0, 1));
            });
            for (std::size_t a = 0; a < outs.size(); ++a) {
                for (std::size_t b = a + 1; b < outs.size(); ++b) {
                    cplx ov = 0.0;
                    for (const auto& [occ, amp] : outs[a].terms()) ov += std::conj(amp) * amp_of(outs[b], occ);
                    CHECK(std::abs(ov) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("two passes through the splitter swap the ports with phase i^n") {
    std::mt19937_64 gen(8);
    const int d = 3;
    for (int n = 1; n <= 4; ++n) {
        std::vector<std::pair<int, PureState>> photons;
        for (int k = 0; k < n; ++k) photons.emplace_back(k % 2, haar_random_state(d, gen));
        const auto in = product_state(2, d, photons);
        const auto twice = beam_splitter(beam_splitter(in, 0, 1), 0, 1);
        cplx phase = 1.0;
        for (int k = 0; k < n; ++k) phase *= cplx(0.0, 1.0);
        for (const auto& [occ, amp] : in.terms()) {
            Occupation swapped(occ.size());
            for (int l = 0; l < d; ++l) {
                swapped[l] = occ[d + l];
                swapped[d + l] = occ[l];
            }
            CHECK(std::abs(amp_of(twice, swapped) - phase * amp) < 1e-12);
        }
        CHECK(twice.terms().size() == in.terms().size());
    }
}

TEST_CASE("postselection probabilities depend on the ancilla overlap") {
    std::mt19937_64 gen(4);
    for (int d = 2; d <= 5; ++d) {
        const auto phi = haar_random_state(d, gen);
        const auto same = beam_splitter(product_state(2, d, {{0, phi}, {1, phi}}), 0, 1);
        CHECK(postselect_same_port(same, 0).prob == doctest::Approx(0.5).epsilon(1e-12));
        const auto perp = haar_orthogonal_state(phi, gen);
        const auto other = beam_splitter(product_state(2, d, {{0, phi}, {1, perp}}), 0, 1);
        CHECK(postselect_same_port(other, 0).prob == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("postselection before any splitter is 0 or 1") {
    const auto e = PureState::basis_vector(2, 0);
    const auto s = product_state(2, 2, {{0, e}, {0, PureState::basis_vector(2, 1)}});
    CHECK(postselect_same_port(s, 0).prob == doctest::Approx(1.0));
    const auto none = postselect_same_port(s, 1);
    CHECK(none.prob == 0.0);
    CHECK(none.empty());
}

TEST_CASE("reduced single-photon states") {
    const int d = 4;
    const auto e0 = PureState::basis_vector(d, 0);
    const auto e1 = PureState::basis_vector(d, 1);
    const auto both = product_state(2, d, {{0, e0}, {0, e0}});
    CHECK(reduced_single_photon(both, 0).mat().isApprox(DensityMatrix::from_pure(e0).mat()));

    const auto sym = product_state(2, d, {{0, e0}, {0, e1}});
    Matrix expect = Matrix::Zero(d, d);
    expect(0, 0) = 0.5;
    expect(1, 1) = 0.5;
    CHECK((reduced_single_photon(sym, 0).mat() - expect).norm() < 1e-14);

    CHECK_THROWS_AS(reduced_single_photon(FockState(2, d), 0), std::invalid_argument);
    CHECK_THROWS_AS(reduced_single_photon(both, 1), std::invalid_argument);
}

TEST_CASE("reduced state is valid for random coalesced states") {
    std::mt19937_64 gen(12);
    for (int n = 2; n <= 4; ++n) {
        std::vector<std::pair<int, PureState>> photons;
        for (int k = 0; k < n; ++k) photons.emplace_back(k % 2, haar_random_state(3, gen));
        const auto out = beam_splitter(product_state(2, 3, photons), 0, 1);
        const auto cond = postselect_same_port(out, 0);
        REQUIRE_FALSE(cond.empty());
        CHECK_NOTHROW(reduced_single_photon(cond.conditional, 0));
    }
}

TEST_CASE("linear_transform with a random internal unitary preserves the norm") {
    std::mt19937_64 gen(2);
    const int d = 3;
    Matrix z(d, d);
    std::normal_distribution<double> g;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) z(r, c) = cplx(g(gen), g(gen));
    Eigen::HouseholderQR<Matrix> qr(z);
    const Matrix u = qr.householderQ();
    const auto s = product_state(2, d, {{0, haar_random_state(d, gen)}, {0, haar_random_state(d, gen)},
                                        {1, haar_random_state(d, gen)}});
    const auto out = apply_internal(s, 0, u);
    CHECK(out.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(project_port_counts(out, std::vector<int>{2, 1}).prob == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coalescence enhancement") {
    const auto l_m2 = PureState::basis_vector(4, 3);
    DistinguishabilityModel ideal;
    CHECK(coalescence_enhancement(l_m2, l_m2, ideal) == doctest::Approx(2.0).epsilon(1e-12));

    DistinguishabilityModel partial;
    partial.v = 0.9165;
    CHECK(coalescence_enhancement(l_m2, l_m2, partial) ==
          doctest::Approx(1.0 + 0.9165 * 0.9165).epsilon(1e-12));
    CHECK(std::abs(coalescence_enhancement(l_m2, l_m2, partial) - 1.84) < 0.005);

    CHECK(coalescence_enhancement(l_m2, PureState::basis_vector(4, 0), ideal) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enhancement depends only on the whole-state overlap") {
    // Entangled inputs behave like separable ones with the same |<a|s>|^2.
    std::mt19937_64 gen(17);
    DistinguishabilityModel model;
    model.v = 0.8;
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = haar_random_state(4, gen);
        const auto a = haar_random_state(4, gen);
        const double ov = std::norm(inner(a, s));
        CHECK(coalescence_enhancement(s, a, model) == doctest::Approx(1.0 + 0.64 * ov).epsilon(1e-12));
    }
    const auto iv = PureState(Vector(Vector::Unit(4, 0) + Vector::Unit(4, 3)) * kInvSqrt2);
    CHECK(coalescence_enhancement(iv, iv, DistinguishabilityModel{}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("HOM curve shape") {
    const auto iv = PureState(Vector(Vector::Unit(4, 0) + Vector::Unit(4, 3)) * kInvSqrt2);
    DistinguishabilityModel model;
    CHECK(model.coherence_time_fs() == doctest::Approx(248.3).epsilon(1e-3));
    std::vector<double> delays{-2000, -300, -100, 0, 100, 300, 2000};
    const auto curve = hom_curve(iv, iv, delays, model);
    CHECK(curve[3].enhancement == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(curve[0].enhancement == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 0; k < delays.size(); ++k) {
        CHECK(curve[k].enhancement == doctest::Approx(curve[delays.size() - 1 - k].enhancement).epsilon(1e-14));
    }
    CHECK(curve[2].enhancement > curve[1].enhancement);
    CHECK(curve[3].enhancement > curve[2].enhancement);

    model.delay_fs = 0.0;
    CHECK(model.overlap() == 1.0);
    model.v = 1.5;
    CHECK_THROWS_AS(model.validate(), std::invalid_argument);
}

TEST_CASE("FockState rejects mixed photon numbers") {
    FockState s(2, 2);
    s.add(Occupation{1, 0, 0, 0}, 1.0);
    CHECK_THROWS_AS(s.add(Occupation{1, 1, 0, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(s.add(Occupation{1, 0, 0}, 1.0), std::invalid_argument);
}
