#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "propagators.hpp"
#include "states.hpp"

namespace sgl {

// Normal-ordered exponential  prefactor · :exp(i Σ a_j Φ(x_j)):
struct VertexWord {
    std::vector<Charge> terms;
    cplx prefactor{1.0, 0.0};

    double total_charge() const { return sgl::total_charge(terms); }
};

// Merge coincident points, drop zero charges.
inline VertexWord canonical(const VertexWord& w) {
    VertexWord out;
    out.prefactor = w.prefactor;
    for (const auto& c : w.terms) {
        bool merged = false;
        for (auto& o : out.terms)
            if (o.x == c.x) {
                o.a += c.a;
                merged = true;
                break;
            }
        if (!merged) out.terms.push_back(c);
    }
    std::erase_if(out.terms, [](const Charge& c) { return c.a == 0.0; });
    return out;
}

// Adjoint: conjugate prefactor, negate charges.
inline VertexWord adjoint(const VertexWord& w) {
    VertexWord out = w;
    out.prefactor = std::conj(w.prefactor);
    for (auto& c : out.terms) c.a = -c.a;
    return out;
}

// (−Q + i0·Δt)^ρ with Δt = t_x − t_y: |Q|^ρ, times e^{±iπρ} on the future/past timelike branch.
inline cplx branch_power(Point x, Point y, double rho) {
    const double Q = minkowski_square(x, y);
    if (Q == 0.0) throw SingularConfiguration("null-separated cross pair");
    const double mod = std::pow(std::abs(Q), rho);
    if (Q < 0.0) return mod;
    const double s = (x.t > y.t) ? 1.0 : -1.0;
    return std::polar(mod, kPi * rho * s);
}

// Log(−Q + i0·Δt)
inline cplx branch_log(Point x, Point y) {
    const double Q = minkowski_square(x, y);
    if (Q == 0.0) throw SingularConfiguration("null-separated pair");
    if (Q < 0.0) return std::log(-Q);
    return {std::log(Q), x.t > y.t ? kPi : -kPi};
}

inline double vertex_rho(double hbar, double a, double b) { return hbar * a * b / (4.0 * kPi); }

struct StarResult {
    VertexWord merged;
    cplx kernel{1.0, 0.0};
};

// w1 ⋆ w2 = merged word · Π_{cross pairs} exp(−ħ a_i b_j W₁(x_i, y_j))
inline StarResult star_kernel(const VertexWord& w1, const VertexWord& w2, double hbar = 1.0) {
    StarResult r;
    for (const auto& c1 : w1.terms) {
        if (c1.a == 0.0) continue;
        for (const auto& c2 : w2.terms) {
            if (c2.a == 0.0) continue;
            r.kernel *= branch_power(c1.x, c2.x, vertex_rho(hbar, c1.a, c2.a));
        }
    }
    VertexWord m;
    m.prefactor = w1.prefactor * w2.prefactor;
    m.terms = w1.terms;
    m.terms.insert(m.terms.end(), w2.terms.begin(), w2.terms.end());
    r.merged = canonical(m);
    return r;
}

struct SeriesResult {
    std::vector<cplx> partial;  // partial[N] = Σ_{n≤N}
    cplx closed;
    std::vector<double> defect;
};

// Σ_n (ρL)^n/n! against the closed-form power, L = Log(−Q + i0Δt).
inline SeriesResult series_vs_closed_form(Charge c1, Charge c2, int N, double hbar = 1.0) {
    const double rho = vertex_rho(hbar, c1.a, c2.a);
    const cplx z = rho * branch_log(c1.x, c2.x);
    SeriesResult r;
    r.closed = branch_power(c1.x, c2.x, rho);
    cplx term = 1.0, sum = 0.0;
    for (int n = 0; n <= N; ++n) {
        if (n > 0) term *= z / static_cast<double>(n);
        sum += term;
        r.partial.push_back(sum);
        r.defect.push_back(std::abs(sum - r.closed));
    }
    return r;
}

// t_n = Π_{i<j} exp(−ħ a_i a_j Δ_F(x_i, x_j))
inline cplx tord_kernel(const std::vector<double>& charges, const std::vector<Point>& pts, double hbar = 1.0) {
    cplx t = 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (charges[i] == 0.0 || charges[j] == 0.0) continue;
            const double Q = minkowski_square(pts[i], pts[j]);
            if (Q == 0.0) throw SingularConfiguration("null-separated pair in time-ordered kernel");
            const double rho = vertex_rho(hbar, charges[i], charges[j]);
            const double mod = std::pow(std::abs(Q), rho);
            t *= Q > 0.0 ? std::polar(mod, kPi * rho) : cplx(mod, 0.0);
        }
    return t;
}

// Π_{i<j}|Q(x_i,x_j)|^ρ_ij |Q(y_i,y_j)|^ρ_ij Π_{i,j}|Q(x_i,y_j)|^{−ρ_ij}
inline double abs_square_kernel(const std::vector<double>& charges, const std::vector<Point>& xs,
                                const std::vector<Point>& ys, double hbar = 1.0) {
    const std::size_t n = charges.size();
    double lg = 0.0;
    auto lq = [](Point p, Point q) {
        const double Q = minkowski_square(p, q);
        if (Q == 0.0) throw SingularConfiguration("null pair in norm kernel");
        return std::log(std::abs(Q));
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double rho = vertex_rho(hbar, charges[i], charges[j]);
            if (i < j) lg += rho * (lq(xs[i], xs[j]) + lq(ys[i], ys[j]));
            lg -= rho * lq(xs[i], ys[j]);
        }
    return std::exp(lg);
}

// Extra c-number of :e^{iΣa_iΦ(x_i)}: ·_T e^{iΦ(h)}:  e^{(i/2)⟨h,Δ_D h⟩} Π e^{i a_i Δ_D h(x_i)}
struct DressedFactor {
    cplx factor{1.0, 0.0};
    double h_dirac_h = 0.0;
    std::vector<double> dirac_h;
};

inline DressedFactor dressed_tord_with_linear(const Density2D& h, const std::vector<double>& charges,
                                              const std::vector<Point>& pts) {
    DressedFactor d;
    if (h.empty()) {
        d.dirac_h.assign(pts.size(), 0.0);
        return d;
    }
    d.h_dirac_h = integrate_against(h, [&](Point p) { return smeared_dirac(h, p); }, 10);
    double phase = 0.5 * d.h_dirac_h;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v = smeared_dirac(h, pts[i]);
        d.dirac_h.push_back(v);
        phase += charges[i] * v;
    }
    d.factor = std::polar(1.0, phase);
    return d;
}

}  // namespace sgl
