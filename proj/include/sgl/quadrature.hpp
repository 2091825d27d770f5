#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "errors.hpp"

namespace sgl {

struct Estimate {
    double value = 0.0;
    double err = 0.0;
};

struct QuadTol {
    double abs = 1e-10;
    double rel = 1e-10;
    unsigned max_depth = 18;
};

// Adaptive Gauss–Kronrod (15/31) on [a,b].
template <class F>
Estimate integrate(F&& f, double a, double b, QuadTol tol = {}) {
    if (a == b) return {0.0, 0.0};
    double err = 0.0, l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, tol.max_depth, tol.rel, &err, &l1);
    if (!std::isfinite(v)) throw BudgetExceeded("non-finite quadrature value");
    if (err > 100.0 * std::max(tol.abs, tol.rel * std::abs(v)) && err > 1e-7 * l1)
        throw BudgetExceeded("quadrature tolerance not met (err=" + std::to_string(err) + ")");
    return {v, err};
}

// Split at interior break points (kinks or integrable endpoint singularities).
template <class F>
Estimate integrate_split(F&& f, double a, double b, std::vector<double> breaks, QuadTol tol = {}) {
    std::vector<double> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double c : breaks)
        if (c > pts.back() && c < b) pts.push_back(c);
    pts.push_back(b);
    Estimate s;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Estimate e = integrate(f, pts[i], pts[i + 1], tol);
        s.value += e.value;
        s.err += e.err;
    }
    return s;
}

// Double-exponential rule; handles integrable endpoint singularities (log, power).
template <class F>
Estimate integrate_singular(F&& f, double a, double b, double tol = 1e-11) {
    if (a == b) return {0.0, 0.0};
    static thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
    double err = 0.0, l1 = 0.0;
    const double v = ts.integrate(f, a, b, tol, &err, &l1);
    if (!std::isfinite(v)) throw BudgetExceeded("non-finite singular quadrature");
    return {v, err};
}

template <class F>
Estimate integrate_singular_split(F&& f, double a, double b, std::vector<double> breaks,
                                  double tol = 1e-11) {
    std::vector<double> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double c : breaks)
        if (c > pts.back() && c < b) pts.push_back(c);
    pts.push_back(b);
    Estimate s;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Estimate e = integrate_singular(f, pts[i], pts[i + 1], tol);
        s.value += e.value;
        s.err += e.err;
    }
    return s;
}

// Composite Gauss–Legendre node set on a list of panel edges.
struct NodeSet {
    std::vector<double> x, w;
};

inline NodeSet gauss_panels(const std::vector<double>& edges) {
    using G = boost::math::quadrature::gauss<double, 20>;
    NodeSet ns;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double h = 0.5 * (b - a), m = 0.5 * (a + b);
        for (std::size_t i = 0; i < ab.size(); ++i) {
            if (ab[i] == 0.0) {
                ns.x.push_back(m);
                ns.w.push_back(h * wt[i]);
            } else {
                ns.x.push_back(m - h * ab[i]);
                ns.w.push_back(h * wt[i]);
                ns.x.push_back(m + h * ab[i]);
                ns.w.push_back(h * wt[i]);
            }
        }
    }
    return ns;
}

// Panels of width h on [a,b].
inline NodeSet gauss_uniform(double a, double b, double h) {
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
    std::vector<double> e(n + 1);
    for (int i = 0; i <= n; ++i) e[i] = a + (b - a) * i / n;
    return gauss_panels(e);
}

}  // namespace sgl
