#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numeric>
#include <vector>

#include "densities.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "montecarlo.hpp"
#include "propagators.hpp"
#include "states.hpp"
#include "vertex.hpp"

namespace sgl {

struct InteractionSpec {
    double a = std::sqrt(kPi);  // ħa²/4π = 0.25
    double hbar = 1.0;
    double lambda = 1.0;
    double p_exponent = 2.0;

    double rho() const { return hbar * a * a / (4.0 * kPi); }
    void validate() const {
        if (!(a > 0.0) || !(hbar > 0.0)) throw ConfigInvalid("need a > 0 and hbar > 0");
        if (hbar * a * a >= 4.0 * kPi) throw RegimeViolation("hbar a^2 >= 4 pi");
        if (!(p_exponent > 1.0) || !(p_exponent < 4.0 * kPi / (hbar * a * a)))
            throw ConfigInvalid("p exponent outside (1, 4 pi / (hbar a^2))");
    }
};

inline InteractionSpec spec_with_rho(double rho, double hbar = 1.0) {
    InteractionSpec s;
    s.hbar = hbar;
    s.a = std::sqrt(4.0 * kPi * rho / hbar);
    return s;
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

// Coefficient of order n: (λ^n/n!)(i/ħ)^n(½)^n
inline cplx order_coefficient(int n, const InteractionSpec& s) {
    return std::pow(cplx(0.0, s.lambda / s.hbar), n) * std::pow(0.5, n) / factorial(n);
}

// ---------------------------------------------------------------------------
// Products of S-matrix factors, evaluated in the Schubert state at fixed points.

enum class FactorKind { T, Tbar, Fixed };

struct Factor {
    FactorKind kind = FactorKind::T;
    std::vector<int> slots;       // indices into the configuration
    std::vector<double> charges;  // Fixed only
    cplx prefactor{1.0, 0.0};     // Fixed only
};

struct Configuration {
    std::vector<Point> z;
    std::vector<PointData> pd;
    std::vector<double> logq;  // ln|Q(z_i,z_j)|
    std::vector<signed char> timelike;
    std::vector<signed char> later;  // z_i.t > z_j.t
    std::size_t n = 0;

    Configuration(const SchubertState& s, std::vector<Point> pts) : z(std::move(pts)), n(z.size()) {
        for (const auto& p : z) pd.push_back(s.point_data(p));
        logq.assign(n * n, 0.0);
        timelike.assign(n * n, 0);
        later.assign(n * n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double Q = minkowski_square(z[i], z[j]);
                if (Q == 0.0) throw SingularConfiguration("null pair in configuration");
                logq[i * n + j] = std::log(std::abs(Q));
                timelike[i * n + j] = Q > 0.0;
                later[i * n + j] = z[i].t > z[j].t;
            }
    }
    double lq(int i, int j) const { return logq[i * n + j]; }
    bool tl(int i, int j) const { return timelike[i * n + j]; }
    bool lt(int i, int j) const { return later[i * n + j]; }
};

// ω_S(F₁ ⋆ F₂ ⋆ ... ) summed over all ± charge assignments of the T / T̄ slots.
inline cplx evaluate_product(const std::vector<Factor>& factors, const Configuration& c,
                             const SchubertState& st, const InteractionSpec& s) {
    struct Slot {
        int factor, point;
        bool variable;
        double fixed;
    };
    std::vector<Slot> slots;
    cplx coef = 1.0;
    for (int f = 0; f < static_cast<int>(factors.size()); ++f) {
        const Factor& F = factors[f];
        const int n = static_cast<int>(F.slots.size());
        if (F.kind == FactorKind::T) coef *= order_coefficient(n, s);
        if (F.kind == FactorKind::Tbar) coef *= std::conj(order_coefficient(n, s));
        if (F.kind == FactorKind::Fixed) coef *= F.prefactor;
        for (int k = 0; k < n; ++k)
            slots.push_back({f, F.slots[k], F.kind != FactorKind::Fixed,
                             F.kind == FactorKind::Fixed ? F.charges[k] : 0.0});
    }
    std::vector<int> var;
    for (int i = 0; i < static_cast<int>(slots.size()); ++i)
        if (slots[i].variable) var.push_back(i);
    const int nv = static_cast<int>(var.size());
    const double h = s.hbar;
    const double fourpi = 4.0 * kPi;

    std::vector<double> sigma(slots.size(), 1.0), b(slots.size());
    std::vector<PointData> pd(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) pd[i] = c.pd[slots[i].point];

    cplx total = 0.0;
    for (unsigned mask = 0; mask < (1u << nv); ++mask) {
        for (int k = 0; k < nv; ++k) sigma[var[k]] = (mask >> k) & 1u ? -1.0 : 1.0;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const Factor& F = factors[slots[i].factor];
            if (F.kind == FactorKind::T)
                b[i] = sigma[i] * s.a;
            else if (F.kind == FactorKind::Tbar)
                b[i] = -sigma[i] * s.a;
            else
                b[i] = slots[i].fixed;
        }
        double logmod = 0.0, phase = 0.0;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const int pi = slots[i].point;
            for (std::size_t j = i + 1; j < slots.size(); ++j) {
                if (b[i] == 0.0 || b[j] == 0.0) continue;
                const int pj = slots[j].point;
                const double rho = h * b[i] * b[j] / fourpi;
                const int fi = slots[i].factor, fj = slots[j].factor;
                if (fi == fj) {
                    const FactorKind kind = factors[fi].kind;
                    if (kind == FactorKind::Fixed) continue;
                    logmod += rho * c.lq(pi, pj);
                    if (c.tl(pi, pj)) phase += (kind == FactorKind::T ? 1.0 : -1.0) * kPi * rho;
                } else {
                    // slot i sits in the left factor
                    logmod += rho * c.lq(pi, pj);
                    if (c.tl(pi, pj)) phase += (c.lt(pi, pj) ? 1.0 : -1.0) * kPi * rho;
                }
            }
        }
        const double ve = st.vertex_expectation(b, pd);
        total += std::polar(std::exp(logmod) * ve, phase);
    }
    return coef * total;
}

// ---------------------------------------------------------------------------
// Norm bound  (1/n!)² ∫|g|^{⊗2n} abs_square_kernel

inline OrderEstimate norm_bound_integral(const InteractionSpec& spec, const Density2D& g, int n,
                                         const QuadratureSpec& q) {
    spec.validate();
    if (n < 0 || n > 4) throw ConfigInvalid("norm bound order must lie in [0,4]");
    if (n == 0) {
        OrderEstimate e;
        e.value = 1.0;
        return e;
    }
    const Density2D ag = g.abs_version();
    const double scale = 1.0 / (factorial(n) * factorial(n));
    const std::vector<double> charges(n, spec.a);
    if (q.stratification == Stratification::PairImportance && n == 1) {
        OrderEstimate e = mc_integrate(
            [&](const std::vector<Point>& z) {
                return cplx(abs_square_kernel(charges, {z[0]}, {z[1]}, spec.hbar), 0.0);
            },
            {ag, ag}, q, spec.rho());
        e.value *= scale;
        e.err *= scale;
        e.err_re *= scale;
        e.order = 1;
        return e;
    }
    std::vector<Density2D> dens(2 * n, ag);
    OrderEstimate e = mc_integrate(
        [&](const std::vector<Point>& z) {
            std::vector<Point> xs(z.begin(), z.begin() + n), ys(z.begin() + n, z.end());
            return cplx(abs_square_kernel(charges, xs, ys, spec.hbar), 0.0);
        },
        dens, q);
    e.value *= scale;
    e.err *= scale;
    e.err_re *= scale;
    e.order = n;
    return e;
}

// ∫∫ a(s) a(s') |s − s'|^{−ρ}
inline double riesz_pair(const Profile1D& a, double rho) {
    auto inner = [&](double s) {
        auto f = [&](double y) {
            const double d = std::abs(s - y);
            return d == 0.0 ? 0.0 : a(y) * std::pow(d, -rho);
        };
        return integrate_singular_split(f, a.lo(), a.hi(), {s}, 1e-10).value;
    };
    return integrate([&](double s) { return std::abs(a(s)) * inner(s); }, a.lo(), a.hi(), {1e-12, 1e-10, 14})
        .value;
}

// n = 1 norm bound for a single lightcone term, as a product of 1D integrals.
inline double norm_bound_n1_oracle(const InteractionSpec& spec, const Density2D& g) {
    if (!g.single_lightcone()) throw ConfigInvalid("oracle needs a single lightcone term");
    const Term2D& t = g.terms[0];
    Profile1D a = t.f1, b = t.f2;
    a.amp = std::abs(a.amp);
    b.amp = std::abs(b.amp);
    return t.coeff * t.coeff * riesz_pair(a, spec.rho()) * riesz_pair(b, spec.rho());
}

struct GrowthCheck {
    double C = 0.0;
    std::vector<OrderEstimate> norms;  // N_n
    std::vector<double> b;             // sqrt(N_n)
    std::vector<double> bound;         // C^n (n!)^{(1−p)/p}
    std::vector<double> slack;         // bound − b
    std::vector<double> ratio;         // b_{n+1}/b_n
    bool pass = false;
};

inline GrowthCheck factorial_growth_check(const InteractionSpec& spec, const Density2D& g, int n_max,
                                          const QuadratureSpec& q) {
    spec.validate();
    if (n_max < 2 || n_max > 4) throw ConfigInvalid("n_max must lie in [2,4]");
    GrowthCheck r;
    const double ex = (1.0 - spec.p_exponent) / spec.p_exponent;
    for (int n = 0; n <= n_max; ++n) {
        QuadratureSpec qn = q;
        qn.seed = q.seed + 1000003ull * n;
        r.norms.push_back(norm_bound_integral(spec, g, n, qn));
        r.b.push_back(std::sqrt(std::max(0.0, r.norms.back().value.real())));
    }
    for (int n = 1; n <= 2; ++n) r.C = std::max(r.C, std::pow(r.b[n] / std::pow(factorial(n), ex), 1.0 / n));
    r.pass = true;
    for (int n = 0; n <= n_max; ++n) {
        const double bd = std::pow(r.C, n) * std::pow(factorial(n), ex);
        r.bound.push_back(bd);
        r.slack.push_back(bd - r.b[n]);
        if (n + 1 <= n_max) r.ratio.push_back(r.b[n + 1] / r.b[n]);
        if (n >= 3) {
            const double sb = r.b[n] > 0.0 ? r.norms[n].err / (2.0 * r.b[n]) : 0.0;
            if (r.b[n] > bd + 3.0 * sb) r.pass = false;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Identity checks with common random numbers

struct IdentityTerm {
    std::vector<Factor> factors;
    double sign = 1.0;
    std::vector<int> density;  // per sampled slot: index into the density list
};

inline VertexWord to_word(const VertexMonomial& m) { return VertexWord{m, 1.0}; }

// Σ_terms sign · weight · ω(product), configurations drawn from a mixture of |densities|.
inline OrderEstimate run_identity(const std::vector<IdentityTerm>& terms, const std::vector<Density2D>& densities,
                                  int k, const std::vector<Point>& extra_points, const SchubertState& st,
                                  const InteractionSpec& spec, const QuadratureSpec& q) {
    Density2D mix;
    for (const auto& d : densities) mix = mix + d;
    const Sampler2D sampler(mix);
    return run_blocks(q, [&](Rng& rng, cplx& out) {
        std::vector<Point> z(k);
        for (int i = 0; i < k; ++i) z[i] = sampler.sample(rng);
        std::vector<Point> all = z;
        all.insert(all.end(), extra_points.begin(), extra_points.end());
        if (near_null(all)) return false;
        std::vector<std::vector<double>> w(densities.size(), std::vector<double>(k));
        for (std::size_t d = 0; d < densities.size(); ++d)
            for (int i = 0; i < k; ++i) w[d][i] = densities[d](z[i]) / sampler.pdf(z[i]);
        try {
            const Configuration c(st, all);
            cplx v = 0.0;
            for (const auto& t : terms) {
                double weight = t.sign;
                for (int i = 0; i < k; ++i) weight *= w[t.density[i]][i];
                if (weight == 0.0) continue;
                v += weight * evaluate_product(t.factors, c, st, spec);
            }
            out = v;
        } catch (const SingularConfiguration&) {
            return false;
        }
        return true;
    });
}

inline Factor fixed_factor(const VertexWord& w, int first_slot) {
    Factor f;
    f.kind = FactorKind::Fixed;
    f.prefactor = w.prefactor;
    for (std::size_t i = 0; i < w.terms.size(); ++i) {
        f.slots.push_back(first_slot + static_cast<int>(i));
        f.charges.push_back(w.terms[i].a);
    }
    return f;
}

inline Factor tfactor(FactorKind kind, std::vector<int> slots) {
    Factor f;
    f.kind = kind;
    f.slots = std::move(slots);
    return f;
}

inline std::vector<int> iota_slots(int from, int to) {
    std::vector<int> v;
    for (int i = from; i < to; ++i) v.push_back(i);
    return v;
}

// ω(F* ⋆ Σ_{n+m=k} S_n* ⋆ S_m ⋆ G) − δ_{k0} ω(F* ⋆ G), points of S drawn from g.
inline OrderEstimate unitarity_defect(const InteractionSpec& spec, const SchubertState& st, const Density2D& g,
                                      int k, const VertexWord& F, const VertexWord& G, const QuadratureSpec& q) {
    spec.validate();
    if (k < 0 || k > 2) throw ConfigInvalid("unitarity order must lie in [0,2]");
    OrderEstimate zero;
    zero.order = k;
    if (k == 0) return zero;
    const VertexWord Fs = adjoint(F);
    std::vector<Point> extra;
    for (const auto& c : Fs.terms) extra.push_back(c.x);
    for (const auto& c : G.terms) extra.push_back(c.x);
    const int fslot = k, gslot = k + static_cast<int>(Fs.terms.size());
    std::vector<IdentityTerm> terms;
    for (int n = 0; n <= k; ++n) {
        IdentityTerm t;
        if (!Fs.terms.empty()) t.factors.push_back(fixed_factor(Fs, fslot));
        if (n > 0) t.factors.push_back(tfactor(FactorKind::Tbar, iota_slots(0, n)));
        if (k - n > 0) t.factors.push_back(tfactor(FactorKind::T, iota_slots(n, k)));
        if (!G.terms.empty()) t.factors.push_back(fixed_factor(G, gslot));
        t.density.assign(k, 0);
        terms.push_back(t);
    }
    OrderEstimate e = run_identity(terms, {g}, k, extra, st, spec, q);
    e.order = k;
    return e;
}

struct BogoliubovInput {
    Density2D f, g, h;
};

// S(f+g+h) − S(f+g) S(g)* S(g+h), coefficient of total order k.
inline OrderEstimate bogoliubov_defect(const InteractionSpec& spec, const SchubertState& st,
                                       const BogoliubovInput& in, int k, const QuadratureSpec& q,
                                       bool require_causal = true) {
    spec.validate();
    if (k < 1 || k > 2) throw ConfigInvalid("Bogoliubov order must lie in [1,2]");
    if (require_causal && !boxes_causally_ordered(in.f.support(), in.h.support()))
        throw CausalPreconditionViolated("supp f meets the causal past of supp h");
    // density list: 0 = f+g+h, 1 = f+g, 2 = g, 3 = g+h
    const std::vector<Density2D> dens{in.f + in.g + in.h, in.f + in.g, in.g, in.g + in.h};
    std::vector<IdentityTerm> terms;
    auto T = [](std::vector<int> s) { return tfactor(FactorKind::T, std::move(s)); };
    auto Tb = [](std::vector<int> s) { return tfactor(FactorKind::Tbar, std::move(s)); };
    if (k == 1) {
        terms.push_back({{T({0})}, 1.0, {0}});
        terms.push_back({{T({0})}, -1.0, {1}});
        terms.push_back({{Tb({0})}, -1.0, {2}});
        terms.push_back({{T({0})}, -1.0, {3}});
    } else {
        terms.push_back({{T({0, 1})}, 1.0, {0, 0}});
        terms.push_back({{T({0, 1})}, -1.0, {1, 1}});
        terms.push_back({{Tb({0, 1})}, -1.0, {2, 2}});
        terms.push_back({{T({0, 1})}, -1.0, {3, 3}});
        terms.push_back({{T({0}), Tb({1})}, -1.0, {1, 2}});
        terms.push_back({{T({0}), T({1})}, -1.0, {1, 3}});
        terms.push_back({{Tb({0}), T({1})}, -1.0, {2, 3}});
    }
    const Sampler2D sampler(dens[0]);
    OrderEstimate e = run_blocks(q, [&](Rng& rng, cplx& out) {
        std::vector<Point> z(k);
        for (int i = 0; i < k; ++i) z[i] = sampler.sample(rng);
        if (near_null(z)) return false;
        double w[4][2] = {};
        for (int d = 0; d < 4; ++d)
            for (int i = 0; i < k; ++i) w[d][i] = dens[d](z[i]) / sampler.pdf(z[i]);
        try {
            const Configuration c(st, z);
            cplx v = 0.0;
            for (const auto& t : terms) {
                double weight = t.sign;
                for (int i = 0; i < k; ++i) weight *= w[t.density[i]][i];
                if (weight == 0.0) continue;
                v += weight * evaluate_product(t.factors, c, st, spec);
            }
            out = v;
        } catch (const SingularConfiguration&) {
            return false;
        }
        return true;
    });
    e.order = k;
    return e;
}

// Coefficients of S_g(f) = S(g)* S(g+f) at total orders 1..k.
inline std::vector<OrderEstimate> relative_smatrix_coeffs(const InteractionSpec& spec, const SchubertState& st,
                                                          const Density2D& g, const Density2D& f, int k,
                                                          const QuadratureSpec& q) {
    spec.validate();
    if (k < 1 || k > 2) throw ConfigInvalid("relative S-matrix order must lie in [1,2]");
    std::vector<OrderEstimate> out;
    if (f.empty()) {
        for (int n = 1; n <= k; ++n) {
            OrderEstimate e;
            e.order = n;
            out.push_back(e);
        }
        return out;
    }
    // density list: 0 = g, 1 = g+f
    const std::vector<Density2D> dens = g.empty() ? std::vector<Density2D>{Density2D{}, f}
                                                  : std::vector<Density2D>{g, g + f};
    auto T = [](std::vector<int> s) { return tfactor(FactorKind::T, std::move(s)); };
    auto Tb = [](std::vector<int> s) { return tfactor(FactorKind::Tbar, std::move(s)); };
    Density2D proposal = g.empty() ? f : g + f;
    const Sampler2D sampler(proposal);
    for (int n = 1; n <= k; ++n) {
        std::vector<IdentityTerm> terms;
        if (n == 1) {
            terms.push_back({{Tb({0})}, 1.0, {0}});
            terms.push_back({{T({0})}, 1.0, {1}});
        } else {
            terms.push_back({{Tb({0, 1})}, 1.0, {0, 0}});
            terms.push_back({{T({0, 1})}, 1.0, {1, 1}});
            terms.push_back({{Tb({0}), T({1})}, 1.0, {0, 1}});
        }
        QuadratureSpec qn = q;
        qn.seed = q.seed + 7919ull * n;
        OrderEstimate e = run_blocks(qn, [&](Rng& rng, cplx& o) {
            std::vector<Point> z(n);
            for (int i = 0; i < n; ++i) z[i] = sampler.sample(rng);
            if (near_null(z)) return false;
            double w[2][2] = {};
            for (int d = 0; d < 2; ++d)
                for (int i = 0; i < n; ++i) w[d][i] = dens[d].empty() ? 0.0 : dens[d](z[i]) / sampler.pdf(z[i]);
            try {
                const Configuration c(st, z);
                cplx v = 0.0;
                for (const auto& t : terms) {
                    double weight = t.sign;
                    for (int i = 0; i < n; ++i) weight *= w[t.density[i]][i];
                    if (weight == 0.0) continue;
                    v += weight * evaluate_product(t.factors, c, st, spec);
                }
                o = v;
            } catch (const SingularConfiguration&) {
                return false;
            }
            return true;
        });
        e.order = n;
        out.push_back(e);
    }
    return out;
}

// First order in g of S(V(g) + Φ(h)): the vertex-sector c-number dressed by the linear source,
//   c₁ Σ_σ ∫ g(x) e^{iσaΔ_D h(x)} e^{(i/2)⟨h,Δ_D h⟩} ω(:e^{iσaΦ(x)}:)
// `dirac_h` supplies Δ_D h; the two callers pass independent evaluations of it.
template <class DiracH>
OrderEstimate linear_source_first_order(const InteractionSpec& spec, const SchubertState& st, const Density2D& g,
                                        double h_dirac_h, DiracH&& dirac_h, const QuadratureSpec& q) {
    spec.validate();
    const Sampler2D sampler(g);
    const cplx c1 = order_coefficient(1, spec);
    const cplx global = std::polar(1.0, 0.5 * h_dirac_h);
    OrderEstimate e = run_blocks(q, [&](Rng& rng, cplx& out) {
        const Point x = sampler.sample(rng);
        const PointData pd = st.point_data(x);
        const double dh = dirac_h(x);
        cplx v = 0.0;
        for (double sg : {1.0, -1.0}) {
            const std::vector<double> ch{sg * spec.a};
            v += std::polar(st.vertex_expectation(ch, {pd}), sg * spec.a * dh);
        }
        out = sampler.weight(x) * c1 * global * v;
        return true;
    });
    e.order = 1;
    return e;
}

}  // namespace sgl
