#include <catch_amalgamated.hpp>

#include "sgl/vertex.hpp"

using namespace sgl;
using Catch::Approx;

namespace {
Point rp(Rng& r) { return {r.uniform(-2, 2), r.uniform(-2, 2)}; }
VertexWord single(double a, Point x) { return VertexWord{{{a, x}}, 1.0}; }
}  // namespace

TEST_CASE("star kernel closed forms") {
    const Point x{0.1, 1.2}, y{-0.3, 0.0};
    const StarResult z = star_kernel(single(1.0, x), single(0.0, y));
    CHECK(z.kernel == cplx(1.0, 0.0));
    REQUIRE(z.merged.terms.size() == 1);
    CHECK(z.merged.terms[0].x == x);

    const double a = 1.4, Q = minkowski_square(x, y);
    REQUIRE(Q < 0);
    const cplx k = star_kernel(single(a, x), single(a, y)).kernel;
    CHECK(k.imag() == 0.0);
    CHECK(k.real() == Approx(std::pow(-Q, a * a / (4 * kPi))).epsilon(1e-14));

    const Point f{2.0, 0.5}, o{0, 0};
    const double rho = vertex_rho(1.0, 1.1, -0.6), Qf = minkowski_square(f, o);
    const cplx kf = star_kernel(single(1.1, f), single(-0.6, o)).kernel;
    CHECK(std::abs(kf - std::polar(std::pow(Qf, rho), kPi * rho)) < 1e-14);
    const cplx kp = star_kernel(single(1.1, o), single(-0.6, f)).kernel;
    CHECK(std::abs(kp - std::conj(kf)) < 1e-14);
    CHECK_THROWS_AS(star_kernel(single(1, {1, 1}), single(1, o)), SingularConfiguration);
}

TEST_CASE("star kernel against the complex-log oracle") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const Point x = rp(rng), y = rp(rng);
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        const double rho = vertex_rho(1.0, a, b), Q = minkowski_square(x, y);
        const cplx ref = Q < 0 ? cplx(std::pow(-Q, rho), 0.0)
                               : std::exp(rho * cplx(std::log(Q), x.t > y.t ? kPi : -kPi));
        CHECK(std::abs(star_kernel(single(a, x), single(b, y)).kernel - ref) <= 1e-12 * std::abs(ref));
    }
}

TEST_CASE("hermiticity and spacelike modulus law") {
    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        VertexWord w1, w2;
        for (int k = 0; k < 2; ++k) {
            w1.terms.push_back({rng.uniform(-2, 2), rp(rng)});
            w2.terms.push_back({rng.uniform(-2, 2), rp(rng)});
        }
        w1.prefactor = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const StarResult s = star_kernel(w1, w2), h = star_kernel(adjoint(w2), adjoint(w1));
        CHECK(std::abs(h.kernel - std::conj(s.kernel)) <= 1e-12 * std::abs(s.kernel));
        bool spacelike = true;
        double mod = 1.0;
        for (auto& c1 : w1.terms)
            for (auto& c2 : w2.terms) {
                const double Q = minkowski_square(c1.x, c2.x);
                spacelike = spacelike && Q < 0;
                mod *= std::pow(std::abs(Q), vertex_rho(1.0, c1.a, c2.a));
            }
        CHECK(std::abs(s.kernel) == Approx(mod).epsilon(1e-12));
        if (spacelike) CHECK(s.kernel.imag() == 0.0);
    }
}

TEST_CASE("canonical words merge coincident charges") {
    const Point x{0.1, 0.2};
    const VertexWord w{{{1.0, x}, {0.5, {1, 1}}, {-1.0, x}}, 2.0};
    const VertexWord c = canonical(w);
    REQUIRE(c.terms.size() == 1);
    CHECK(c.terms[0].a == 0.5);
    CHECK(w.total_charge() == 0.5);
    CHECK(is_neutral(VertexMonomial{{1.0, x}, {-1.0, {0, 0}}}));
}

TEST_CASE("exponential series of the log kernel") {
    const Point o{0, 0};
    const SeriesResult s0 = series_vs_closed_form({1.0, {0.3, 2.0}}, {1.0, o}, 0);
    CHECK(s0.partial[0] == cplx(1.0, 0.0));
    CHECK(s0.defect[0] == Approx(std::abs(s0.closed - 1.0)));
    const SeriesResult unit = series_vs_closed_form({2.0, {0.0, 1.0}}, {1.5, o}, 10);
    for (auto p : unit.partial) CHECK(p == cplx(1.0, 0.0));

    Rng rng(3);
    int tested = 0;
    while (tested < 100) {
        const double du = rng.uniform(0.05, 4.0), dv = -rng.uniform(0.05, 4.0);
        const double a = rng.uniform(-6, 6), b = rng.uniform(-6, 6);
        const double rho = vertex_rho(1.0, a, b);
        if (std::abs(rho * std::log(std::abs(du * dv))) > 3.0) continue;
        const SeriesResult s = series_vs_closed_form({a, from_lightcone(du, dv)}, {b, o}, 30);
        CHECK(s.defect.back() <= 1e-10);
        for (int n = 6; n < 30; ++n)
            if (s.defect[n] > 1e-13 * std::max(1.0, std::abs(s.closed))) CHECK(s.defect[n + 1] < s.defect[n]);
        ++tested;
    }
    // timelike: the series follows the iπ branch
    const SeriesResult t = series_vs_closed_form({1.0, {2, 0.5}}, {0.8, o}, 30);
    CHECK(t.defect.back() <= 1e-12);
}

TEST_CASE("time-ordered kernel") {
    const Point x{0.2, 1.5}, y{-0.1, 0.1}, z{1.9, 0.3};
    CHECK(tord_kernel({1.0}, {x}) == cplx(1.0, 0.0));
    const double rho = vertex_rho(1.0, 1.2, 0.9);
    CHECK(std::abs(tord_kernel({1.2, 0.9}, {x, y})) ==
          Approx(std::pow(std::abs(minkowski_square(x, y)), rho)).epsilon(1e-14));
    // exp(−ħ a b Δ_F) from the propagator module
    const cplx viaF = std::exp(-1.2 * 0.9 * feynman(z, y));
    CHECK(std::abs(tord_kernel({1.2, 0.9}, {z, y}) - viaF) < 1e-13);

    Rng rng(4);
    for (int i = 0; i < 300; ++i) {
        std::vector<Point> p{rp(rng), rp(rng), rp(rng)};
        std::vector<double> c{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const cplx t = tord_kernel(c, p);
        CHECK(std::abs(tord_kernel({c[2], c[0], c[1]}, {p[2], p[0], p[1]}) - t) <= 1e-12 * std::abs(t));
        CHECK(std::abs(tord_kernel({c[1], c[0], c[2]}, {p[1], p[0], p[2]}) - t) <= 1e-12 * std::abs(t));
        // later point on the left: time-ordered = star-ordered
        const Point a = p[0], b = p[1];
        const Point& late = a.t > b.t ? a : b;
        const Point& early = a.t > b.t ? b : a;
        const double ca = a.t > b.t ? c[0] : c[1], cb = a.t > b.t ? c[1] : c[0];
        const cplx tk = tord_kernel({ca, cb}, {late, early});
        const cplx sk = star_kernel(single(ca, late), single(cb, early)).kernel;
        CHECK(std::abs(tk - sk) <= 1e-12 * std::abs(sk));
    }
}

TEST_CASE("norm kernel") {
    const double a = 1.5, rho = vertex_rho(1.0, a, a);
    const Point x{0.1, 0.7}, y{-0.4, 0.2};
    CHECK(abs_square_kernel({a}, {x}, {y}) == Approx(std::pow(std::abs(minkowski_square(x, y)), -rho)));
    const std::vector<Point> xs{{0.1, 0.7}, {0.9, -0.3}}, ys{{-0.4, 0.2}, {0.5, 1.6}};
    const std::vector<double> c{a, -a};
    const double k = abs_square_kernel(c, xs, ys);
    CHECK(abs_square_kernel(c, ys, xs) == Approx(k).epsilon(1e-13));
    auto q = [](Point p, Point r) { return std::abs(minkowski_square(p, r)); };
    const double oracle = std::pow(q(xs[0], xs[1]), -rho) * std::pow(q(ys[0], ys[1]), -rho) *
                          std::pow(q(xs[0], ys[0]), -rho) * std::pow(q(xs[1], ys[1]), -rho) *
                          std::pow(q(xs[0], ys[1]), rho) * std::pow(q(xs[1], ys[0]), rho);
    CHECK(k == Approx(oracle).epsilon(1e-12));
    CHECK(k > 0.0);
}

TEST_CASE("dressing by a linear source") {
    const std::vector<Point> pts{{0.1, 3.0}, {-0.2, -3.5}};
    const DressedFactor none = dressed_tord_with_linear(Density2D{}, {1.0, -1.0}, pts);
    CHECK(none.factor == cplx(1.0, 0.0));
    const Density2D h = lightcone_bump({0, 0}, 0.4, 0.4, 0.8);
    const DressedFactor d = dressed_tord_with_linear(h, {1.0, -1.0}, pts);
    CHECK(d.dirac_h[0] == 0.0);
    CHECK(d.dirac_h[1] == 0.0);
    CHECK(std::abs(d.factor - std::polar(1.0, 0.5 * d.h_dirac_h)) < 1e-15);
    const DressedFactor t = dressed_tord_with_linear(h, {1.3, -0.4}, {{2.0, 0.1}, {0.05, 0.02}});
    CHECK(std::abs(t.factor) == Approx(1.0).epsilon(1e-15));
    CHECK(t.dirac_h[0] == Approx(-0.25 * 0.8).epsilon(1e-9));
}
