#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

namespace sgl {

struct Point {
    double t = 0.0;
    double x = 0.0;
};

inline Point operator-(Point a, Point b) { return {a.t - b.t, a.x - b.x}; }
inline Point operator+(Point a, Point b) { return {a.t + b.t, a.x + b.x}; }
inline Point operator*(double s, Point a) { return {s * a.t, s * a.x}; }
inline bool operator==(Point a, Point b) { return a.t == b.t && a.x == b.x; }

inline double lc_u(Point p) { return p.t + p.x; }
inline double lc_v(Point p) { return p.t - p.x; }
inline Point from_lightcone(double u, double v) { return {0.5 * (u + v), 0.5 * (u - v)}; }

// (u, v) of the difference p - q.
inline std::pair<double, double> lightcone(Point p, Point q) {
    const Point d = p - q;
    return {d.t + d.x, d.t - d.x};
}

// (Δt)² − (Δx)², evaluated as u·v so that null pairs give an exact zero.
inline double minkowski_square(Point p, Point q) {
    auto [u, v] = lightcone(p, q);
    return u * v;
}

enum class CausalRelation {
    SpacelikeSeparated,
    TimelikeFuture,
    TimelikePast,
    LightlikeFuture,
    LightlikePast,
    Coincident
};

inline CausalRelation reverse(CausalRelation r) {
    switch (r) {
        case CausalRelation::TimelikeFuture: return CausalRelation::TimelikePast;
        case CausalRelation::TimelikePast: return CausalRelation::TimelikeFuture;
        case CausalRelation::LightlikeFuture: return CausalRelation::LightlikePast;
        case CausalRelation::LightlikePast: return CausalRelation::LightlikeFuture;
        default: return r;
    }
}

inline const char* to_string(CausalRelation r) {
    switch (r) {
        case CausalRelation::SpacelikeSeparated: return "spacelike";
        case CausalRelation::TimelikeFuture: return "timelike-future";
        case CausalRelation::TimelikePast: return "timelike-past";
        case CausalRelation::LightlikeFuture: return "lightlike-future";
        case CausalRelation::LightlikePast: return "lightlike-past";
        case CausalRelation::Coincident: return "coincident";
    }
    return "?";
}

// Relation of p to q: TimelikeFuture means p lies in the open future cone of q.
inline CausalRelation causal_relation(Point p, Point q) {
    auto [u, v] = lightcone(p, q);
    if (u == 0.0 && v == 0.0) return CausalRelation::Coincident;
    const double dt = p.t - q.t;
    const double Q = u * v;
    if (Q > 0.0) return dt > 0.0 ? CausalRelation::TimelikeFuture : CausalRelation::TimelikePast;
    if (Q < 0.0) return CausalRelation::SpacelikeSeparated;
    return dt > 0.0 ? CausalRelation::LightlikeFuture : CausalRelation::LightlikePast;
}

// +1 if p is in the closed future cone of q, -1 for the closed past, 0 if spacelike or equal.
inline int causal_sign(Point p, Point q) {
    auto [u, v] = lightcone(p, q);
    if (u >= 0.0 && v >= 0.0 && (u > 0.0 || v > 0.0)) return 1;
    if (u <= 0.0 && v <= 0.0 && (u < 0.0 || v < 0.0)) return -1;
    return 0;
}

inline bool is_null_pair(Point p, Point q) { return minkowski_square(p, q) == 0.0; }

// Lorentz boost with rapidity θ.
inline Point boost(Point p, double theta) {
    const double c = std::cosh(theta), s = std::sinh(theta);
    return {c * p.t + s * p.x, s * p.t + c * p.x};
}

struct SupportBox {
    double tmin = 0.0, tmax = 0.0, xmin = 0.0, xmax = 0.0;

    bool contains(Point p) const {
        return p.t >= tmin && p.t <= tmax && p.x >= xmin && p.x <= xmax;
    }
    bool valid() const { return tmin <= tmax && xmin <= xmax; }
};

inline SupportBox hull(const SupportBox& a, const SupportBox& b) {
    return {std::min(a.tmin, b.tmin), std::max(a.tmax, b.tmax), std::min(a.xmin, b.xmin),
            std::max(a.xmax, b.xmax)};
}

inline double interval_gap(double a0, double a1, double b0, double b1) {
    return std::max({0.0, b0 - a1, a0 - b1});
}

// True iff no point of f lies in the closed causal past of a point of h.
// The extremal pair is the latest point of h against the earliest point of f
// at the smallest spatial distance, so corners decide exactly.
inline bool boxes_causally_ordered(const SupportBox& f, const SupportBox& h) {
    const double gap = interval_gap(f.xmin, f.xmax, h.xmin, h.xmax);
    return h.tmax - f.tmin - gap < 0.0;
}

inline bool boxes_spacelike(const SupportBox& a, const SupportBox& b) {
    return boxes_causally_ordered(a, b) && boxes_causally_ordered(b, a);
}

}  // namespace sgl
