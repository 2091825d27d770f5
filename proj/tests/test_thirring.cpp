#include <catch_amalgamated.hpp>

#include "sgl/rng.hpp"
#include "sgl/thirring.hpp"

using namespace sgl;
using Catch::Approx;

namespace {
template <class F>
void spacelike_pairs(int n, std::uint64_t seed, F&& f) {
    Rng rng(seed, 7);
    for (int i = 0; i < n;) {
        const Point x{rng.uniform(-2, 2), rng.uniform(-2, 2)}, y{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (causal_relation(x, y) != CausalRelation::SpacelikeSeparated) continue;
        f(x, y, rng);
        ++i;
    }
}
}  // namespace

TEST_CASE("fermions anticommute at spacelike separation") {
    double worst = 0.0, worst_ratio = 0.0;
    spacelike_pairs(300, 1, [&](Point x, Point y, Rng& rng) {
        const double alpha = rng.uniform(0.3, 3.0);
        for (auto k1 : kAllKinds)
            for (auto k2 : kAllKinds) {
                const FermionField f1{k1, alpha}, f2{k2, alpha};
                const cplx ph = exchange_phase(f1.a(), f1.b(), f2.a(), f2.b(), x, y);
                worst = std::max(worst, std::abs(ph + 1.0));
                worst_ratio = std::max(worst_ratio,
                                       std::abs(exchange_ratio_from_kernels(f1.a(), f1.b(), f2.a(), f2.b(), x, y) - ph));
            }
    });
    CHECK(worst <= 1e-12);
    CHECK(worst_ratio <= 1e-12);
}

TEST_CASE("bosonic exchange") {
    spacelike_pairs(200, 2, [](Point x, Point y, Rng& rng) {
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        CHECK(std::abs(exchange_phase(a, 0.0, b, 0.0, x, y) - 1.0) <= 1e-14);
        CHECK(std::abs(exchange_ratio_from_kernels(a, 0.0, b, 0.0, x, y) - 1.0) <= 1e-12);
    });
    // timelike: the commutator phase of the scalar
    const Point x{1.0, 0.2}, y{-0.5, 0.1};
    const double a = 0.7;
    CHECK(std::abs(exchange_phase(a, 0.0, a, 0.0, x, y) - std::polar(1.0, -a * a * pauli_jordan(x, y))) <= 1e-14);
    CHECK(std::abs(exchange_phase(a, 0.0, a, 0.0, x, y) - std::polar(1.0, 0.5 * a * a)) <= 1e-14);
}

TEST_CASE("dual kernels reduce to scalar kernels") {
    double worst = 0.0;
    spacelike_pairs(300, 3, [&](Point x, Point y, Rng& rng) {
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        const VertexWord w1{{{a, x}}, 1.0}, w2{{{b, y}}, 1.0};
        const cplx s = star_kernel(w1, w2).kernel, d = dual_star_kernel(from_scalar(w1), from_scalar(w2)).kernel;
        worst = std::max(worst, std::abs(s - d) / std::max(1.0, std::abs(s)));
        // a pure dual charge sees u and v alike
        const cplx pd = dual_pair_kernel({0.0, a, x}, {0.0, b, y}), ps = dual_pair_kernel({a, 0.0, x}, {b, 0.0, y});
        CHECK(std::abs(pd - ps) <= 1e-12 * std::max(1.0, std::abs(ps)));
    });
    CHECK(worst <= 1e-12);
    const DualCharge c{1.0, 0.5, {0, 0}}, d{-0.4, 2.0, {0, 1}};
    CHECK(exponent_u(c, d) == Approx(1.5 * 1.6 / (4 * kPi)));
    CHECK(exponent_v(c, d) == Approx(0.5 * -2.4 / (4 * kPi)));
    CHECK_THROWS_AS(i_power(0.0, 0.3), SingularConfiguration);
    CHECK(i_power(0.0, 0.0) == cplx(1.0, 0.0));
    CHECK(std::abs(i_power(2.0, 0.5) - std::sqrt(2.0) * std::polar(1.0, kPi / 4)) < 1e-15);
    CHECK(std::abs(i_power(-2.0, 0.5, 1e-9) - std::sqrt(2.0) * std::polar(1.0, -kPi / 4)) < 1e-9);
}

TEST_CASE("coupling constants") {
    const double sq = std::sqrt(kPi);
    CHECK(std::abs(anomalous_dimension(sq)) <= 1e-15);
    CHECK(std::abs(coupling_constant(sq)) <= 1e-12);
    CHECK(std::abs(mass_exponent(sq)) <= 1e-15);
    CHECK(std::abs(eom_coefficient(sq)) <= 1e-15);
    CHECK(anomalous_dimension(1.0) == Approx((1 - kPi) * (1 - kPi) / (4 * kPi)).epsilon(1e-14));
    CHECK(coupling_constant(std::sqrt(kPi / 2)) == Approx(kPi).epsilon(1e-14));
    for (double a : {0.3, 0.8, 1.2, 2.5}) {
        CHECK(anomalous_dimension(a) == Approx(anomalous_dimension(kPi / a)).epsilon(1e-13));
        CHECK(current_coefficient(a) == Approx(current_coefficient(kPi / a)).epsilon(1e-14));
        CHECK(anomalous_dimension(a) >= 0.0);
        CHECK((coupling_constant(a) > 0.0) == (a < sq));
        CHECK(mass_exponent(a) == Approx(-mass_exponent(kPi / a)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(coupling_constant(0.0), ConfigInvalid);
    CHECK_THROWS_AS(eom_coefficient(-1.0), ConfigInvalid);
    CHECK_THROWS_AS((FermionField{FermionKind::PsiPlus, -1.0}.validate()), ConfigInvalid);
}

TEST_CASE("Lorentz weights and gamma matrices") {
    const Point x{0.2, 0.4};
    for (double th : {-1.0, 0.3, 2.0}) {
        for (auto k : {FermionKind::PsiPlus, FermionKind::PsiPlusStar})
            CHECK(std::abs(lorentz_weight(FermionField{k, 1.3}.word(x), th) - std::exp(th / 2)) <= 1e-14);
        for (auto k : {FermionKind::PsiMinus, FermionKind::PsiMinusStar})
            CHECK(std::abs(lorentz_weight(FermionField{k, 1.3}.word(x), th) - std::exp(-th / 2)) <= 1e-14);
    }
    const GammaMatrices g = gamma_matrices();
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    CHECK((g.g0 * g.g0 - I).norm() == 0.0);
    CHECK((g.g1 * g.g1 + I).norm() == 0.0);
    CHECK((g.g0 * g.g1 + g.g1 * g.g0).norm() == 0.0);
    for (auto k : kAllKinds) CHECK(std::abs(FermionField{k, 1.0}.prefactor()) == Approx(1 / std::sqrt(2 * kPi)));
    CHECK(std::string(to_string(FermionKind::PsiMinusStar)) == "psi-*");
}

TEST_CASE("richardson extrapolation") {
    const RichardsonTrace t = richardson([](double s) { return cplx(1.0 + 2.0 * s + 3.0 * s * s, -s); }, 0.4, 4);
    CHECK(std::abs(t.limit - cplx(1.0, 0.0)) <= 1e-13);
    CHECK(t.steps.size() == 4);
    CHECK(t.steps[3] == Approx(0.05));
    CHECK(t.residual <= 1e-13);
}

TEST_CASE("operator product coefficients") {
    for (double a : {1.0, std::sqrt(kPi), 1.4}) {
        const OpeResult u = ope_coefficient_current(a, OpeDirection::U);
        const OpeResult v = ope_coefficient_current(a, OpeDirection::V);
        CHECK(u.expected == Approx(-current_coefficient(a)));
        CHECK(v.expected == Approx(current_coefficient(a)));
        CHECK(u.rel_err() <= 0.03);
        CHECK(v.rel_err() <= 0.03);
        const OpeResult m = ope_coefficient_mass(a);
        CHECK(m.expected == Approx(1 / (2 * kPi)));
        CHECK(m.rel_err() <= 0.03);
        CHECK(ope_coefficient_mass(a, false).rel_err() <= 0.03);
        const MassTermCheck mt = mass_term_identity(a);
        CHECK(std::abs(mt.assembled - mt.expected) <= 0.03 * (1 / kPi));
    }
    CHECK(current_coefficient(1.0) == Approx(0.659155).epsilon(1e-6));
    OpeSetup bad;
    bad.ray = {1.0, 0.5};
    CHECK_THROWS_AS(ope_coefficient_current(1.0, OpeDirection::U, bad), ConfigInvalid);
    OpeSetup one;
    one.steps = 1;
    CHECK_THROWS_AS(ope_coefficient_mass(1.0, true, one), ConfigInvalid);
}

TEST_CASE("equation of motion on configurations") {
    const LightconeConfig cfg = both_movers();
    for (double a : {0.7, 1.0, 2.2}) {
        for (Point x : {Point{0.3, -0.2}, Point{-1.0, 0.5}}) {
            const cplx r = eom_ratio_numeric(a, x, cfg);
            const cplx expect = cplx(0.0, eom_coefficient(a) * cfg.dv_phi(x));
            CHECK(std::abs(r - expect) <= 1e-7 * std::max(1.0, std::abs(expect)));
        }
    }
    // left movers are annihilated by ∂_v
    CHECK(std::abs(eom_ratio_numeric(1.0, {0.3, 0.1}, left_mover())) <= 1e-9);
}

TEST_CASE("anticommutator on the lightray") {
    const Profile1D off = bump(1.0, 0.5, 1.0);
    CHECK(std::abs(smeared_anticommutator(off, 0.0)) <= 1e-15);
    CHECK(std::abs(smeared_anticommutator(off, 1e-5)) <= 1e-4);
    const Profile1D across = bump(0.1, 0.6, 1.0);
    CHECK_THROWS_AS(smeared_anticommutator(across, 0.0), SingularConfiguration);
    const double f0 = across(0.0);
    double prev = 1e300;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const double d = std::abs(smeared_anticommutator(across, eps) - f0);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev <= 1e-3);
    CHECK(anticommutator_kernel(0.7, 0.0) == cplx(0.0, 0.0));
}
