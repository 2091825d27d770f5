#include <catch_amalgamated.hpp>

#include "sgl/states.hpp"

using namespace sgl;
using Catch::Approx;

namespace {
const SchubertState& std_state() {
    static const SchubertState s(default_psi(0.5), 1.0, 1.0);
    return s;
}
}  // namespace

TEST_CASE("state construction") {
    CHECK(std_state().psi_h1_psi() == Approx(0.297151155851).epsilon(1e-9));
    CHECK_THROWS_AS(SchubertState(lightcone_bump({0, 0}, 0.5, 0.5, 2.0)), PsiNotNormalized);
    CHECK_THROWS_AS(SchubertState(default_psi(), -1.0), ConfigInvalid);
    CHECK_THROWS_AS(SchubertState(product_bump({0, 0}, 0.5, 0.5)), ConfigInvalid);
}

TEST_CASE("tabulated potentials agree with direct quadrature") {
    const SchubertState& s = std_state();
    const Density1D a(s.a()), b(s.b());
    Rng rng(1);
    for (int i = 0; i < 30; ++i) {
        const Point p{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        const double direct = -(a.log_potential(lc_u(p)) + b.log_potential(lc_v(p))) / (4 * kPi);
        CHECK(s.h1psi(p) == Approx(direct).margin(1e-8));
        CHECK(s.delta_psi(p) == Approx(smeared_solution(s.psi(), p)).margin(1e-9));
    }
}

TEST_CASE("schubert two-point function is symmetric and smooth across the cone") {
    const SchubertState& s = std_state();
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        const Point p{rng.uniform(-2, 2), rng.uniform(-2, 2)}, q{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(s.schubert_h(p, q) == Approx(s.schubert_h(q, p)).margin(1e-13));
    }
    // far spacelike-left of supp ψ: Δψ = 0 there
    const Point p{0, -3}, q{0.5, -4};
    CHECK(s.delta_psi(p) == 0.0);
    CHECK(s.schubert_h(p, q) ==
          Approx(hadamard_value(p, q) - s.h1psi(p) - s.h1psi(q) + s.psi_h1_psi() + 0.5).margin(1e-13));
    // second differences of K stay bounded approaching the null line
    const Point x{0.2, 0.1};
    for (double d : {1e-1, 1e-2, 1e-3}) {
        const Point y = x + Point{0.6 + d, 0.6};
        const double h = 1e-3;
        const double dd = (s.K(x, y + Point{h, 0}) - 2 * s.K(x, y) + s.K(x, y - Point{h, 0})) / (h * h);
        CHECK(std::abs(dd) < 10.0);
    }
}

TEST_CASE("bisolution in the smooth part") {
    const SchubertState& s = std_state();
    const Point q{0.3, -0.1};
    for (Point p : {Point{1.7, 0.2}, Point{-0.2, 1.9}}) {
        auto f = [&](Point x) { return s.schubert_h(x, q); };
        CHECK(std::abs(wave_operator_fd(f, p, 1e-2)) <= 1e-4);
    }
}

TEST_CASE("vertex expectations") {
    const SchubertState& s = std_state();
    CHECK(s.vertex_expectation(VertexMonomial{{0.0, {0.1, 0.2}}}) == 1.0);
    const Point x{0.3, 0.2};
    const double a = 1.3, Kxx = -2 * s.h1psi(x) + s.psi_h1_psi() + s.delta_psi(x) * s.delta_psi(x) / 2 + 0.5;
    CHECK(s.vertex_expectation(VertexMonomial{{a, x}}) == Approx(std::exp(-0.5 * a * a * Kxx)).epsilon(1e-13));
    CHECK(dm_vertex_bound(s, {{a, x}, {-a, x}}) == Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(dm_vertex_bound(s, {{a, x}}), NotNeutral);

    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        VertexMonomial m;
        for (int k = 0; k < 3; ++k) {
            const double c = rng.uniform(-3, 3);
            m.push_back({c, {rng.uniform(-2, 2), rng.uniform(-2, 2)}});
            m.push_back({-c, {rng.uniform(-2, 2), rng.uniform(-2, 2)}});
        }
        const double v = dm_vertex_bound(s, m);
        CHECK(v > 0.0);
        CHECK(v <= 1.0 + 1e-6);
    }
    // a pair far in the future of ψ has Δψ = ½ at both points and decouples
    const VertexMonomial p1{{1.0, {0.2, 0.1}}, {-1.0, {-0.3, 0.4}}};
    const VertexMonomial p2{{2.0, {5.0, 0.1}}, {-2.0, {6.0, -0.5}}};
    VertexMonomial both = p1;
    both.insert(both.end(), p2.begin(), p2.end());
    CHECK(s.vertex_expectation(both) ==
          Approx(s.vertex_expectation(p1) * s.vertex_expectation(p2)).epsilon(1e-12));
}

TEST_CASE("charged monomials carry the zero-mode suppression") {
    for (double r : {0.5, 1.0, 2.0}) {
        const SchubertState s(default_psi(0.5), r);
        const VertexMonomial m{{1.5, {0.1, 0.2}}, {0.7, {-0.4, 0.3}}};
        std::vector<double> c{1.5, 0.7};
        std::vector<PointData> pd{s.point_data({0.1, 0.2}), s.point_data({-0.4, 0.3})};
        const ExponentParts e = s.exponent_parts(c, pd);
        const double Q = 2.2;
        CHECK(e.zero_mode == Approx(Q * Q * r * r / 2));
        const double rest = e.linear + e.constant + e.momentum;
        CHECK(s.vertex_expectation(m) == Approx(std::exp(-Q * Q * r * r / 4) * std::exp(-0.5 * rest)).epsilon(1e-13));
    }
}

TEST_CASE("oscillator moments") {
    for (double r : {0.5, 1.0, 3.0}) {
        const OscillatorMoments m = oscillator_moments(r);
        CHECK(m.q2 == Approx(r * r / 2).epsilon(1e-10));
        CHECK(m.p2 == Approx(1 / (2 * r * r)).epsilon(1e-10));
        CHECK(std::abs(m.qp - m.pq - cplx(0, 1)) < 1e-10);
        CHECK(m.qp.imag() == Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("two-point function of the representation") {
    const SchubertState& s = std_state();
    const Point p{1.2, 0.3}, q{0.1, -0.4};
    double prev = 1e300;
    for (double w : {0.2, 0.1, 0.05}) {
        const TwoPointCheck c = dm_two_point_check(s, p, q, w);
        CHECK(c.defect < prev);
        prev = c.defect;
        CHECK(c.lhs.imag() == Approx(0.5 * pauli_jordan(p, q)).margin(0.02));
    }
    CHECK(prev < 0.01);
}

TEST_CASE("dominance matrix") {
    const SchubertState& s = std_state();
    const Density2D f = lightcone_bump({0.4, 0.2}, 0.3, 0.5), g = product_bump({-0.5, 0.6}, 0.4, 0.3, -0.8);
    const DominanceResult d = dominance_matrix(s, f, g, 20000, 5);
    CHECK(d.min_eigenvalue >= -3 * d.sigma);
    CHECK(d.A(0, 1) == d.A(1, 0));
    const DominanceResult same = dominance_matrix(s, f, f, 20000, 6, true);
    CHECK(std::abs(same.A(0, 1)) <= 3 * same.err(0, 1) + 1e-12);
    CHECK(std::abs(same.A(0, 0) - same.A(1, 1)) <= 3 * (same.err(0, 0) + same.err(1, 1)));
    CHECK(same.A(0, 1) == 0.0);
    const DominanceResult again = dominance_matrix(s, f, g, 20000, 5);
    CHECK(again.A == d.A);

    // zero-mass f: ⟨f,Hf⟩ = ⟨f,H₁f⟩ + (∫fΔψ)²/2r²
    const Profile1D da{Shape::BumpDerivative, 0.3, 0.4, 0.5, 0.0}, b = normalized_bump(-0.1, 0.5);
    const Density2D z = Term2D{1.0, Coords::Lightcone, da, b};
    const DominanceResult dz = dominance_matrix(s, z, Density2D{}, 40000, 7);
    const double dpsi = single_integrals(s, z).dpsi;
    const double oracle = -log_pair(da, da) / (4 * kPi) + dpsi * dpsi / 2;
    CHECK(std::abs(dz.A(0, 0) - oracle) <= 3 * dz.err(0, 0) + 1e-9);
    CHECK(dz.A(1, 1) == 0.0);
}

TEST_CASE("charge lemma") {
    const SchubertState& s = std_state();
    double prev_def = 1e300, prev_norm = 1e300;
    for (double l : {0.2, 0.1, 0.05}) {
        const ChargeLemmaResult c = charge_lemma_integral(s, ChargeProbe{l});
        CHECK(c.hypothesis_holds);
        CHECK(c.value == Approx(-1.0).margin(1e-3));
        CHECK(std::abs(c.value + 1) <= prev_def + 1e-12);
        prev_def = std::abs(c.value + 1);
        const double n = charge_fock_norm(ChargeProbe{l});
        CHECK(n < prev_norm);
        if (prev_norm < 1e300) CHECK(prev_norm / n == Approx(4.0).epsilon(0.25));
        prev_norm = n;
    }
    CHECK(charge_fock_norm(ChargeProbe{0.1}) == Approx(0.00317166).epsilon(1e-5));
    CHECK(charge_fock_norm(ChargeProbe{0.0}) == 0.0);
    CHECK(charge_fock_norm(ChargeProbe{0.4}) > charge_fock_norm(ChargeProbe{0.2}));
    CHECK_FALSE(charge_lemma_integral(s, ChargeProbe{1.0}).hypothesis_holds);
}

TEST_CASE("intertwiner overlap") {
    const Density2D psi = default_psi(0.5);
    CHECK(intertwiner_overlap(psi, psi) == Approx(0.0).margin(1e-10));
    CHECK(intertwiner_overlap(lightcone_bump({0, 4}, 0.3, 0.3), psi) == 0.0);
    CHECK(intertwiner_overlap(lightcone_bump({4, 0}, 0.3, 0.3), psi) == Approx(-0.5).epsilon(1e-10));
    CHECK_THROWS_AS(intertwiner_overlap(lightcone_bump({4, 0}, 0.3, 0.3, 2.0), psi), PsiNotNormalized);
}
