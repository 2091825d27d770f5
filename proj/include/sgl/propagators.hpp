#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "densities.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"

namespace sgl {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInv4Pi = 1.0 / (4.0 * std::numbers::pi);

struct KernelValue {
    cplx value{0.0, 0.0};
    bool regular = true;
};

enum class EpsMode { SpacelikeRealBranch, TimelikeForwardPhase, TimelikeBackwardPhase };

inline EpsMode eps_mode(Point p, Point q) {
    const int s = causal_sign(p, q);
    if (s > 0) return EpsMode::TimelikeForwardPhase;
    if (s < 0) return EpsMode::TimelikeBackwardPhase;
    return EpsMode::SpacelikeRealBranch;
}

// Δ(p,q): −½ on the closed future cone of q, +½ on the closed past.
inline double pauli_jordan(Point p, Point q) { return -0.5 * causal_sign(p, q); }

inline double retarded(Point p, Point q) { return causal_sign(p, q) > 0 ? -0.5 : 0.0; }
inline double advanced(Point p, Point q) { return causal_sign(p, q) < 0 ? -0.5 : 0.0; }
inline double dirac_propagator(Point p, Point q) { return 0.5 * (retarded(p, q) + advanced(p, q)); }

// H_μ = −(1/4π) ln(μ²|Q|)
inline KernelValue hadamard_h(Point p, Point q, double mu = 1.0) {
    const double Q = minkowski_square(p, q);
    if (Q == 0.0) return {cplx(std::numeric_limits<double>::infinity(), 0.0), false};
    return {-kInv4Pi * (2.0 * std::log(mu) + std::log(std::abs(Q))), true};
}

inline double hadamard_value(Point p, Point q, double mu = 1.0) {
    const double Q = minkowski_square(p, q);
    if (Q == 0.0) throw SingularPoint("Hadamard kernel on the lightcone");
    return -kInv4Pi * (2.0 * std::log(mu) + std::log(std::abs(Q)));
}

// H_μ' − H_μ
inline double hadamard_scale_shift(double mu, double mu_prime) {
    return -std::log(mu_prime / mu) / (2.0 * kPi);
}

// W_μ = −(1/4π) ln(−μ²Q + iμεΔt); ε = 0 is the boundary value H_μ + iΔ/2.
inline cplx wightman_w(Point p, Point q, double mu = 1.0, double eps = 0.0) {
    const double Q = minkowski_square(p, q);
    const double dt = p.t - q.t;
    if (eps > 0.0) {
        const cplx z(-mu * mu * Q, mu * eps * dt);
        if (z == cplx(0.0, 0.0)) throw SingularPoint("Wightman function at coincident points");
        return -kInv4Pi * std::log(z);
    }
    if (Q == 0.0) throw SingularPoint("Wightman function on the lightcone");
    const double h = -kInv4Pi * (2.0 * std::log(mu) + std::log(std::abs(Q)));
    return {h, 0.5 * pauli_jordan(p, q)};
}

// Δ_F = −(1/4π) ln(−μ²Q + i0), i.e. H_μ − (i/4)·1_timelike.
// This sign makes the time-ordered product agree with the ⋆-product for the later point on the left.
inline cplx feynman(Point p, Point q, double mu = 1.0, double eps = 0.0) {
    const double Q = minkowski_square(p, q);
    if (eps > 0.0) return -kInv4Pi * std::log(cplx(-mu * mu * Q, eps));
    if (Q == 0.0) throw SingularPoint("Feynman propagator on the lightcone");
    const double h = -kInv4Pi * (2.0 * std::log(mu) + std::log(std::abs(Q)));
    return {h, Q > 0.0 ? -0.25 : 0.0};
}

// Literal −iε branch, −(1/4π) ln(−μ²Q − i0); kept for comparison only.
inline cplx feynman_minus_branch(Point p, Point q, double mu = 1.0) { return std::conj(feynman(p, q, mu)); }

// Δ̃ = ½(Θ(−u) + Θ(v)): 0 / 1 on the right / left spacelike wedge, ½ on the cones
inline double dual_pauli_jordan(Point p, Point q) {
    auto [u, v] = lightcone(p, q);
    const double a = (-u >= 0.0) ? 1.0 : 0.0;
    const double b = (v >= 0.0) ? 1.0 : 0.0;
    return 0.5 * (a + b);
}

// printed form ½(Θ(−u) − Θ(v)); vanishes on both spacelike wedges
inline double dual_pauli_jordan_printed(Point p, Point q) {
    auto [u, v] = lightcone(p, q);
    return 0.5 * ((-u >= 0.0 ? 1.0 : 0.0) - (v >= 0.0 ? 1.0 : 0.0));
}

// H̃ = −(1/4π) ln|u/v|
inline KernelValue dual_hadamard(Point p, Point q) {
    auto [u, v] = lightcone(p, q);
    if (u == 0.0 || v == 0.0) throw SingularPoint("dual Hadamard kernel on a lightray");
    return {-kInv4Pi * std::log(std::abs(u / v)), true};
}

// Mass of d in the closed past / closed future cone of p.
struct CausalMasses {
    double past = 0.0;
    double future = 0.0;
};

inline CausalMasses causal_masses(const Density2D& d, Point p) {
    CausalMasses m;
    for (const auto& t : d.terms) {
        if (t.coords == Coords::Lightcone) {
            const double A = t.f1.cdf(lc_u(p)), B = t.f2.cdf(lc_v(p));
            const double IA = t.f1.exact_integral(), IB = t.f2.exact_integral();
            m.past += t.coeff * A * B;
            m.future += t.coeff * (IA - A) * (IB - B);
            continue;
        }
        const Profile1D& ft = t.f1;
        const Profile1D& fx = t.f2;
        auto slab = [&](double s) {
            const double r = std::abs(p.t - s);
            return ft(s) * (fx.cdf(p.x + r) - fx.cdf(p.x - r));
        };
        QuadTol tol{1e-12, 1e-10, 16};
        if (p.t > ft.lo())
            m.past += t.coeff * integrate_split(slab, ft.lo(),
                                                std::min(p.t, ft.hi()), {ft.center}, tol)
                                    .value;
        if (p.t < ft.hi())
            m.future += t.coeff * integrate_split(slab,
                                                  std::max(p.t, ft.lo()), ft.hi(), {ft.center}, tol)
                                      .value;
    }
    return m;
}

// (Δψ)(p) = ∫Δ(p,y)ψ(y)dy
inline double smeared_solution(const Density2D& psi, Point p) {
    const CausalMasses m = causal_masses(psi, p);
    return -0.5 * m.past + 0.5 * m.future;
}

inline double smeared_retarded(const Density2D& h, Point p) { return -0.5 * causal_masses(h, p).past; }
inline double smeared_advanced(const Density2D& h, Point p) { return -0.5 * causal_masses(h, p).future; }
inline double smeared_dirac(const Density2D& h, Point p) {
    const CausalMasses m = causal_masses(h, p);
    return -0.25 * (m.past + m.future);
}

// □ = ∂_t² − ∂_x² by a 5-point cross stencil.
template <class F>
double wave_operator_fd(F&& f, Point p, double h) {
    const double c = f(p);
    const double tt = f(Point{p.t + h, p.x}) - 2.0 * c + f(Point{p.t - h, p.x});
    const double xx = f(Point{p.t, p.x + h}) - 2.0 * c + f(Point{p.t, p.x - h});
    return (tt - xx) / (h * h);
}

// Tensor Gauss rule for ∫ d(y) F(y) dy over the support of d.
template <class F>
double integrate_against(const Density2D& d, F&& fn, int panels = 8) {
    double total = 0.0;
    for (const auto& t : d.terms) {
        auto edges = [panels](const Profile1D& f) {
            std::vector<double> e(panels + 1);
            for (int i = 0; i <= panels; ++i) e[i] = f.lo() + (f.hi() - f.lo()) * i / panels;
            return gauss_panels(e);
        };
        const NodeSet a = edges(t.f1), b = edges(t.f2);
        std::vector<double> fa(a.x.size()), fb(b.x.size());
        for (std::size_t i = 0; i < a.x.size(); ++i) fa[i] = t.f1(a.x[i]);
        for (std::size_t j = 0; j < b.x.size(); ++j) fb[j] = t.f2(b.x[j]);
        double s = 0.0;
        for (std::size_t i = 0; i < a.x.size(); ++i) {
            if (fa[i] == 0.0) continue;
            double inner = 0.0;
            for (std::size_t j = 0; j < b.x.size(); ++j) {
                if (fb[j] == 0.0) continue;
                const Point y = t.coords == Coords::Cartesian ? Point{a.x[i], b.x[j]}
                                                              : from_lightcone(a.x[i], b.x[j]);
                inner += b.w[j] * fb[j] * fn(y);
            }
            s += a.w[i] * fa[i] * inner;
        }
        total += t.coeff * s;  // lightcone: 2·f1·f2 with dt dx = ½ du dv
    }
    return total;
}

}  // namespace sgl
