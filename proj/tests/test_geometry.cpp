#include <catch_amalgamated.hpp>

#include "sgl/geometry.hpp"
#include "sgl/rng.hpp"

using namespace sgl;
using Catch::Approx;

TEST_CASE("minkowski square, simple separations") {
    CHECK(minkowski_square({1, 0}, {0, 0}) == 1.0);
    CHECK(minkowski_square({0, 1}, {0, 0}) == -1.0);
    CHECK(minkowski_square({2, 1}, {0, 0}) == 3.0);
    auto [u, v] = lightcone({2, 1}, {0, 0});
    CHECK(u == 3.0);
    CHECK(v == 1.0);
}

TEST_CASE("lightcone round trip") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Point p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const Point q = from_lightcone(lc_u(p), lc_v(p));
        CHECK(q.t == Approx(p.t).margin(1e-14));
        CHECK(q.x == Approx(p.x).margin(1e-14));
    }
}

TEST_CASE("interval is symmetric and boost invariant") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const Point p{rng.uniform(-3, 3), rng.uniform(-3, 3)}, q{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const double th = rng.uniform(-2, 2);
        const double Q = minkowski_square(p, q);
        CHECK(minkowski_square(q, p) == Q);
        const double Qb = minkowski_square(boost(p, th), boost(q, th));
        CHECK(std::abs(Qb - Q) <= 1e-10 * std::max(1.0, std::cosh(2 * th)));
    }
}

TEST_CASE("causal relation reverses under exchange") {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const Point p{rng.uniform(-3, 3), rng.uniform(-3, 3)}, q{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        CHECK(causal_relation(p, q) == reverse(causal_relation(q, p)));
    }
}

TEST_CASE("causal relation cases") {
    CHECK(causal_relation({1, 0}, {0, 0}) == CausalRelation::TimelikeFuture);
    CHECK(causal_relation({-1, 0}, {0, 0}) == CausalRelation::TimelikePast);
    CHECK(causal_relation({0, 1}, {0, 0}) == CausalRelation::SpacelikeSeparated);
    CHECK(causal_relation({1, 1}, {0, 0}) == CausalRelation::LightlikeFuture);
    CHECK(causal_relation({-1, 1}, {0, 0}) == CausalRelation::LightlikePast);
    CHECK(causal_relation({0.5, 0.5}, {0.5, 0.5}) == CausalRelation::Coincident);
    CHECK(causal_sign({1, 1}, {0, 0}) == 1);
    CHECK(causal_sign({0, 1}, {0, 0}) == 0);
    CHECK(is_null_pair({1, -1}, {0, 0}));
}

TEST_CASE("box causality") {
    const SupportBox g{-0.5, 0.5, -0.5, 0.5};
    const SupportBox later{2.0, 3.0, -0.5, 0.5}, far{-0.5, 0.5, 3.0, 4.0};
    CHECK(boxes_causally_ordered(later, g));
    CHECK_FALSE(boxes_causally_ordered(g, later));
    CHECK(boxes_spacelike(g, far));
    CHECK(g.valid());
    CHECK(hull(g, later).tmax == 3.0);

    Rng rng(9);
    for (int i = 0; i < 2000; ++i) {
        auto box = [&] {
            const double t = rng.uniform(-3, 3), x = rng.uniform(-3, 3);
            return SupportBox{t, t + rng.uniform(0.1, 1), x, x + rng.uniform(0.1, 1)};
        };
        const SupportBox f = box(), h = box();
        if (boxes_causally_ordered(f, h) && boxes_causally_ordered(h, f)) CHECK(boxes_spacelike(f, h));
        // corners decide: sampled points agree with the box verdict
        if (boxes_causally_ordered(f, h)) {
            for (int k = 0; k < 20; ++k) {
                const Point pf{rng.uniform(f.tmin, f.tmax), rng.uniform(f.xmin, f.xmax)};
                const Point ph{rng.uniform(h.tmin, h.tmax), rng.uniform(h.xmin, h.xmax)};
                CHECK_FALSE(causal_sign(ph, pf) > 0);
            }
        }
    }
}
