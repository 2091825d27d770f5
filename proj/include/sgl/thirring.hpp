#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "geometry.hpp"
#include "propagators.hpp"
#include "quadrature.hpp"
#include "vertex.hpp"

namespace sgl {

struct DualCharge {
    double alpha = 0.0;
    double beta = 0.0;
    Point x{};
};

// prefactor · :exp(i Σ (α_j Φ(x_j) + β_j Φ̃(x_j))):
struct DualVertexWord {
    std::vector<DualCharge> terms;
    cplx prefactor{1.0, 0.0};

    std::vector<double> weights() const {
        std::vector<double> w;
        for (const auto& t : terms) w.push_back(t.alpha * t.beta / (2.0 * kPi));
        return w;
    }
};

inline DualVertexWord dual_word(double alpha, double beta, Point x, cplx pref = 1.0) {
    return {{{alpha, beta, x}}, pref};
}

inline DualVertexWord from_scalar(const VertexWord& w) {
    DualVertexWord d;
    d.prefactor = w.prefactor;
    for (const auto& c : w.terms) d.terms.push_back({c.a, 0.0, c.x});
    return d;
}

// (iu + ε)^γ;  ε = 0 means the boundary value |u|^γ e^{iπγ sgn(u)/2}
inline cplx i_power(double u, double gamma, double eps = 0.0) {
    if (gamma == 0.0) return 1.0;
    if (eps > 0.0) return std::pow(cplx(eps, u), gamma);
    if (u == 0.0) throw SingularConfiguration("cross pair on a lightray");
    return std::polar(std::pow(std::abs(u), gamma), 0.5 * kPi * gamma * (u > 0.0 ? 1.0 : -1.0));
}

inline double exponent_u(const DualCharge& a, const DualCharge& b) {
    return (a.alpha + a.beta) * (b.alpha + b.beta) / (4.0 * kPi);
}
inline double exponent_v(const DualCharge& a, const DualCharge& b) {
    return (a.alpha - a.beta) * (b.alpha - b.beta) / (4.0 * kPi);
}

// c-number of one cross pair (first factor at a.x, second at b.x)
inline cplx dual_pair_kernel(const DualCharge& a, const DualCharge& b, double eps = 0.0) {
    auto [u, v] = lightcone(a.x, b.x);
    return i_power(u, exponent_u(a, b), eps) * i_power(v, exponent_v(a, b), eps) *
           std::polar(1.0, 0.25 * (a.alpha * b.beta - b.alpha * a.beta));
}

struct DualStarResult {
    DualVertexWord merged;
    cplx kernel{1.0, 0.0};
};

inline DualStarResult dual_star_kernel(const DualVertexWord& w1, const DualVertexWord& w2, double eps = 0.0) {
    DualStarResult r;
    for (const auto& a : w1.terms)
        for (const auto& b : w2.terms) r.kernel *= dual_pair_kernel(a, b, eps);
    r.merged.prefactor = w1.prefactor * w2.prefactor;
    r.merged.terms = w1.terms;
    r.merged.terms.insert(r.merged.terms.end(), w2.terms.begin(), w2.terms.end());
    return r;
}

// A(x)⋆B(y) = B(y)⋆A(x) · exchange_phase
inline cplx exchange_phase(double alpha, double beta, double alpha2, double beta2, Point x, Point y) {
    const double D = pauli_jordan(x, y);
    const double Dt = dual_pauli_jordan(x, y);
    return std::polar(1.0, -(alpha * alpha2 + beta * beta2) * D - (alpha * beta2 + alpha2 * beta) * Dt +
                               alpha * beta2);
}

// ratio of the two orderings computed from the product kernels
inline cplx exchange_ratio_from_kernels(double alpha, double beta, double alpha2, double beta2, Point x, Point y) {
    const DualCharge a{alpha, beta, x}, b{alpha2, beta2, y};
    return dual_pair_kernel(a, b) / dual_pair_kernel(b, a);
}

// ---------------------------------------------------------------------------
// Fermions

enum class FermionKind { PsiPlus, PsiMinus, PsiPlusStar, PsiMinusStar };

inline const char* to_string(FermionKind k) {
    switch (k) {
        case FermionKind::PsiPlus: return "psi+";
        case FermionKind::PsiMinus: return "psi-";
        case FermionKind::PsiPlusStar: return "psi+*";
        case FermionKind::PsiMinusStar: return "psi-*";
    }
    return "?";
}

inline constexpr std::array<FermionKind, 4> kAllKinds{FermionKind::PsiPlus, FermionKind::PsiMinus,
                                                      FermionKind::PsiPlusStar, FermionKind::PsiMinusStar};

struct FermionField {
    FermionKind kind;
    double alpha;

    void validate() const {
        if (!(alpha > 0.0)) throw ConfigInvalid("fermion charge alpha must be positive");
    }
    double a() const {
        switch (kind) {
            case FermionKind::PsiPlus: return alpha;
            case FermionKind::PsiMinus: return -alpha;
            case FermionKind::PsiPlusStar: return -alpha;
            case FermionKind::PsiMinusStar: return alpha;
        }
        return 0.0;
    }
    double b() const {
        const double p = kPi / alpha;
        return (kind == FermionKind::PsiPlus || kind == FermionKind::PsiMinus) ? p : -p;
    }
    cplx prefactor() const {
        const double n = 1.0 / std::sqrt(2.0 * kPi);
        switch (kind) {
            case FermionKind::PsiPlus: return {0.0, -n};
            case FermionKind::PsiMinus: return n;
            case FermionKind::PsiPlusStar: return {0.0, n};
            case FermionKind::PsiMinusStar: return n;
        }
        return 0.0;
    }
    DualVertexWord word(Point x) const { return dual_word(a(), b(), x, prefactor()); }
};

// prefactors times the product kernel of kind1(x) ⋆ kind2(y)
inline cplx fermion_pair_kernel(FermionKind k1, FermionKind k2, double alpha, Point x, Point y, double eps = 0.0) {
    const FermionField f1{k1, alpha}, f2{k2, alpha};
    f1.validate();
    const DualStarResult r = dual_star_kernel(f1.word(x), f2.word(y), eps);
    return r.merged.prefactor * r.kernel;
}

// (α − π/α)²/4π
inline double anomalous_dimension(double alpha) { return std::pow(alpha - kPi / alpha, 2) / (4.0 * kPi); }

// α²/4π − π/4α²: the modulus of the mixed kernel is |Q|^{this}
inline double mass_exponent(double alpha) { return alpha * alpha / (4.0 * kPi) - kPi / (4.0 * alpha * alpha); }

inline double coupling_constant(double alpha) {
    if (!(alpha > 0.0)) throw ConfigInvalid("alpha must be positive");
    return kPi * kPi / (alpha * alpha) - kPi;
}

inline double eom_coefficient(double alpha) {
    if (!(alpha > 0.0)) throw ConfigInvalid("alpha must be positive");
    return alpha - kPi / alpha;
}

inline double current_coefficient(double alpha) { return alpha / (2.0 * kPi) + 1.0 / (2.0 * alpha); }

inline cplx lorentz_weight(const DualVertexWord& w, double theta) {
    double s = 0.0;
    for (const auto& t : w.terms) s += t.alpha * t.beta * theta / (2.0 * kPi);
    return std::exp(s);
}

struct GammaMatrices {
    Eigen::Matrix2d g0, g1;
};

inline GammaMatrices gamma_matrices() {
    GammaMatrices g;
    g.g0 << 0, 1, 1, 0;
    g.g1 << 0, -1, 1, 0;
    return g;
}

// ---------------------------------------------------------------------------
// Classical configurations on the constraint surface: φ = φ_L(u) + φ_R(v), φ̃ = φ_L(u) − φ_R(v)

struct LightconeConfig {
    std::function<double(double)> phiL, phiR, dphiL, dphiR;

    double phi(Point x) const { return phiL(x.t + x.x) + phiR(x.t - x.x); }
    double phi_dual(Point x) const { return phiL(x.t + x.x) - phiR(x.t - x.x); }
    double du_phi(Point x) const { return dphiL(x.t + x.x); }
    double dv_phi(Point x) const { return dphiR(x.t - x.x); }
};

// φ_L(u) = sin u + 0.3u², φ_R ≡ c  (or the mirror image)
inline LightconeConfig left_mover(double c = 0.4) {
    return {[](double u) { return std::sin(u) + 0.3 * u * u; }, [c](double) { return c; },
            [](double u) { return std::cos(u) + 0.6 * u; }, [](double) { return 0.0; }};
}
inline LightconeConfig right_mover(double c = 0.4) {
    return {[c](double) { return c; }, [](double v) { return std::sin(v) + 0.3 * v * v; },
            [](double) { return 0.0; }, [](double v) { return std::cos(v) + 0.6 * v; }};
}
inline LightconeConfig both_movers() {
    return {[](double u) { return std::sin(u) + 0.3 * u * u; }, [](double v) { return 0.5 * std::cos(1.3 * v); },
            [](double u) { return std::cos(u) + 0.6 * u; }, [](double v) { return -0.65 * std::sin(1.3 * v); }};
}

inline cplx evaluate_word(const DualVertexWord& w, const LightconeConfig& c) {
    double ph = 0.0;
    for (const auto& t : w.terms) ph += t.alpha * c.phi(t.x) + t.beta * c.phi_dual(t.x);
    return w.prefactor * std::polar(1.0, ph);
}

// kind1(x) ⋆ kind2(y) evaluated on a configuration
inline cplx fermion_product(FermionKind k1, FermionKind k2, double alpha, Point x, Point y, const LightconeConfig& c) {
    const FermionField f1{k1, alpha}, f2{k2, alpha};
    const DualStarResult r = dual_star_kernel(f1.word(x), f2.word(y));
    return r.kernel * evaluate_word(r.merged, c);
}

// ---------------------------------------------------------------------------
// Richardson extrapolation along a spacelike ray

struct RichardsonTrace {
    std::vector<double> steps;
    std::vector<cplx> samples;
    cplx limit{0.0, 0.0};
    double residual = 0.0;  // |best − previous-level|
};

// polynomial extrapolation to s = 0 from s_k = s0/2^k, k = 0..n−1
inline RichardsonTrace richardson(const std::function<cplx(double)>& f, double s0, int n = 4) {
    RichardsonTrace tr;
    std::vector<std::vector<cplx>> T(n);
    for (int k = 0; k < n; ++k) {
        const double s = s0 / std::pow(2.0, k);
        tr.steps.push_back(s);
        tr.samples.push_back(f(s));
        T[k].push_back(tr.samples.back());
        for (int j = 1; j <= k; ++j) {
            const double p = std::pow(2.0, j);
            T[k].push_back((p * T[k][j - 1] - T[k - 1][j - 1]) / (p - 1.0));
        }
    }
    tr.limit = T[n - 1][n - 1];
    tr.residual = n > 1 ? std::abs(T[n - 1][n - 1] - T[n - 1][n - 2]) : 0.0;
    return tr;
}

struct OpeSetup {
    Point x{0.3, -0.2};
    Point ray{0.25, 1.0};  // y = x − s·ray, must be spacelike
    double s0 = 0.2;
    int steps = 4;
};

enum class OpeDirection { U, V };

struct OpeResult {
    double coefficient = 0.0;    // extracted multiple of ∂Φ (or prefactor)
    double imag_residual = 0.0;  // imaginary part of the extrapolated normalised value
    double expected = 0.0;
    RichardsonTrace trace;
    double rel_err() const { return std::abs(coefficient - expected) / std::abs(expected); }
};

inline void check_ray(const OpeSetup& s) {
    if (!(std::abs(s.ray.x) > std::abs(s.ray.t))) throw ConfigInvalid("OPE ray must be spacelike");
    if (s.steps < 2 || !(s.s0 > 0.0)) throw ConfigInvalid("OPE needs at least two steps and s0 > 0");
}

inline void check_stable(const OpeResult& r) {
    if (r.trace.residual > 0.05 * std::abs(r.expected))
        throw ExtrapolationUnstable("Richardson residual " + std::to_string(r.trace.residual));
}

// U: ψ₊*(x)⋆ψ₊(y) on a left mover; V: ψ₋*(x)⋆ψ₋(y) on a right mover.
// |Q|^{d} · product − (2π)⁻¹(i·Δ)⁻¹, divided by ∂Φ(x).  Extracted values are −c (U) and +c (V),
// c = α/2π + 1/2α.
inline OpeResult ope_coefficient_current(double alpha, OpeDirection dir, const OpeSetup& setup = {}) {
    check_ray(setup);
    const LightconeConfig cfg = dir == OpeDirection::U ? left_mover() : right_mover();
    const FermionKind k1 = dir == OpeDirection::U ? FermionKind::PsiPlusStar : FermionKind::PsiMinusStar;
    const FermionKind k2 = dir == OpeDirection::U ? FermionKind::PsiPlus : FermionKind::PsiMinus;
    const double d = anomalous_dimension(alpha);
    const double dphi = dir == OpeDirection::U ? cfg.du_phi(setup.x) : cfg.dv_phi(setup.x);
    auto f = [&](double s) {
        const Point y = setup.x - s * setup.ray;
        auto [u, v] = lightcone(setup.x, y);
        const double sing = dir == OpeDirection::U ? u : v;
        const cplx prod = fermion_product(k1, k2, alpha, setup.x, y, cfg);
        return (std::pow(std::abs(u * v), d) * prod - 1.0 / (2.0 * kPi) / cplx(0.0, sing)) / dphi;
    };
    OpeResult r;
    r.trace = richardson(f, setup.s0, setup.steps);
    r.coefficient = r.trace.limit.real();
    r.imag_residual = r.trace.limit.imag();
    r.expected = (dir == OpeDirection::U ? -1.0 : 1.0) * current_coefficient(alpha);
    check_stable(r);
    return r;
}

// |Q|^{−e}·ψ₊*(x)⋆ψ₋(y)·e^{2iαΦ(x)} → 1/2π  (mirror: ψ₋*⋆ψ₊ with e^{−2iαΦ})
inline OpeResult ope_coefficient_mass(double alpha, bool plus_star_minus = true, const OpeSetup& setup = {}) {
    check_ray(setup);
    const LightconeConfig cfg = both_movers();
    const FermionKind k1 = plus_star_minus ? FermionKind::PsiPlusStar : FermionKind::PsiMinusStar;
    const FermionKind k2 = plus_star_minus ? FermionKind::PsiMinus : FermionKind::PsiPlus;
    const double e = mass_exponent(alpha);
    const double sgn = plus_star_minus ? 1.0 : -1.0;
    auto f = [&](double s) {
        const Point y = setup.x - s * setup.ray;
        auto [u, v] = lightcone(setup.x, y);
        const cplx prod = fermion_product(k1, k2, alpha, setup.x, y, cfg);
        return std::pow(std::abs(u * v), -e) * prod * std::polar(1.0, sgn * 2.0 * alpha * cfg.phi(setup.x));
    };
    OpeResult r;
    r.trace = richardson(f, setup.s0, setup.steps);
    r.coefficient = r.trace.limit.real();
    r.imag_residual = r.trace.limit.imag();
    r.expected = 1.0 / (2.0 * kPi);
    check_stable(r);
    return r;
}

// N(ψ̄ψ) = N(ψ₋*ψ₊) + N(ψ₊*ψ₋) against (1/π) cos(2αΦ(x))
struct MassTermCheck {
    cplx assembled;
    double expected;
};

inline MassTermCheck mass_term_identity(double alpha, const OpeSetup& setup = {}) {
    const LightconeConfig cfg = both_movers();
    const double ph = cfg.phi(setup.x);
    const OpeResult a = ope_coefficient_mass(alpha, true, setup);
    const OpeResult b = ope_coefficient_mass(alpha, false, setup);
    MassTermCheck m;
    m.assembled = a.trace.limit * std::polar(1.0, -2.0 * alpha * ph) + b.trace.limit * std::polar(1.0, 2.0 * alpha * ph);
    m.expected = std::cos(2.0 * alpha * ph) / kPi;
    return m;
}

// ∂_vψ₊/ψ₊ on a configuration, by central difference; equals i(α − π/α)∂_vΦ
inline cplx eom_ratio_numeric(double alpha, Point x, const LightconeConfig& c, double h = 1e-5) {
    const FermionField f{FermionKind::PsiPlus, alpha};
    const Point dv = from_lightcone(0.0, h);
    const cplx p = evaluate_word(f.word(x + dv), c), m = evaluate_word(f.word(x - dv), c);
    return (p - m) / (2.0 * h) / evaluate_word(f.word(x), c);
}

// (2π)⁻¹[(iu+ε)⁻¹ + (−iu+ε)⁻¹] = (1/2π)·2ε/(u²+ε²)
inline cplx anticommutator_kernel(double u, double eps) {
    return (1.0 / (2.0 * kPi)) * (1.0 / cplx(eps, u) + 1.0 / cplx(eps, -u));
}

inline double smeared_anticommutator(const Profile1D& f, double eps) {
    auto g = [&](double u) { return f(u) * anticommutator_kernel(u, eps).real(); };
    std::vector<double> br{f.center};
    if (f.lo() < 0.0 && f.hi() > 0.0) br.push_back(0.0);
    if (eps == 0.0) {
        const double a = f.lo(), b = f.hi();
        if (a <= 0.0 && b >= 0.0) throw SingularConfiguration("unsmeared anticommutator across u = 0");
        return integrate_split(g, a, b, br, {1e-15, 1e-12, 18}).value;
    }
    // u = εt; the Lorentzian becomes dt/π(1+t²), split on decades of t
    auto h = [&](double t) { return f(eps * t) / (kPi * (1.0 + t * t)); };
    const double lo = f.lo() / eps, hi = f.hi() / eps;
    std::vector<double> bt{f.center / eps, 0.0};
    for (double b = 1.0; b < std::max(-lo, hi); b *= 10.0) {
        bt.push_back(-b);
        bt.push_back(b);
    }
    return integrate_split(h, lo, hi, bt, {1e-14, 1e-12, 20}).value;
}

}  // namespace sgl
