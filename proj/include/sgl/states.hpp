#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "densities.hpp"
#include "errors.hpp"
#include "propagators.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace sgl {

struct Charge {
    double a = 0.0;
    Point x;
};

using VertexMonomial = std::vector<Charge>;

inline double total_charge(const VertexMonomial& m) {
    double s = 0.0;
    for (const auto& c : m) s += c.a;
    return s;
}

inline bool is_neutral(const VertexMonomial& m, double tol = 1e-12) {
    double scale = 0.0;
    for (const auto& c : m) scale += std::abs(c.a);
    return std::abs(total_charge(m)) <= tol * std::max(1.0, scale);
}

// Smooth 1D function tabulated on [lo, hi]; falls back to `direct` outside.
class Tabulated {
public:
    Tabulated() = default;
    template <class F>
    Tabulated(F f, double lo, double hi, int n) : lo_(lo), hi_(hi), direct_(f) {
        std::vector<double> y(n);
        const double h = (hi - lo) / (n - 1);
        for (int i = 0; i < n; ++i) y[i] = f(lo + i * h);
        spline_ = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
            y.begin(), y.end(), lo, h);
    }
    double operator()(double s) const {
        if (s >= lo_ && s <= hi_) return (*spline_)(s);
        return direct_(s);
    }

private:
    double lo_ = 0.0, hi_ = 0.0;
    std::function<double(double)> direct_;
    std::shared_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

// Per-point data the vertex exponent needs.
struct PointData {
    double h1psi = 0.0;  // (H₁ψ)(x)
    double dpsi = 0.0;   // (Δψ)(x)
};

struct ExponentParts {
    double linear = 0.0;     // −2Q Σ a_i H₁ψ(x_i)
    double constant = 0.0;   // Q² ∫ψH₁ψ
    double zero_mode = 0.0;  // Q² r²/2
    double momentum = 0.0;   // (1/2r²)(Σ a_i Δψ(x_i))²
    double total() const { return linear + constant + zero_mode + momentum; }
};

// Quasifree state with two-point function
//   H = H₁ − H₁ψ(x) − H₁ψ(y) + ∫ψH₁ψ + (1/2r²)Δψ(x)Δψ(y) + r²/2
// for ψ(t,x) = 2a(u)b(v), ∫a = ∫b = 1.
class SchubertState {
public:
    explicit SchubertState(Density2D psi, double r = 1.0, double hbar = 1.0, int table = 1201)
        : psi_(std::move(psi)), r_(r), hbar_(hbar) {
        if (!(r > 0.0) || !(hbar > 0.0)) throw ConfigInvalid("state needs r > 0 and hbar > 0");
        if (!psi_.single_lightcone())
            throw ConfigInvalid("state density must be a single lightcone-product term");
        const double I = psi_.exact_integral();
        if (std::abs(I - 1.0) > 1e-6) throw PsiNotNormalized("integral of psi is " + std::to_string(I));
        const Term2D& t = psi_.terms[0];
        a_ = t.f1;
        b_ = t.f2;
        a_.amp /= a_.exact_integral();
        b_.amp /= b_.exact_integral();
        build(table);
    }

    const Density2D& psi() const { return psi_; }
    const Profile1D& a() const { return a_; }
    const Profile1D& b() const { return b_; }
    double r() const { return r_; }
    double hbar() const { return hbar_; }
    double psi_h1_psi() const { return C_; }

    double h1psi(Point p) const { return -kInv4Pi * (LA_(lc_u(p)) + LB_(lc_v(p))); }
    double cdf_a(double u) const { return u <= a_.lo() ? 0.0 : u >= a_.hi() ? 1.0 : CA_(u); }
    double cdf_b(double v) const { return v <= b_.lo() ? 0.0 : v >= b_.hi() ? 1.0 : CB_(v); }
    double log_pot_a(double s) const { return LA_(s); }
    double log_pot_b(double s) const { return LB_(s); }

    double delta_psi(Point p) const {
        const double A = cdf_a(lc_u(p)), B = cdf_b(lc_v(p));
        return -0.5 * A * B + 0.5 * (1.0 - A) * (1.0 - B);
    }

    PointData point_data(Point p) const { return {h1psi(p), delta_psi(p)}; }

    // H − H₁, smooth including the diagonal.
    double K(Point p, Point q) const {
        return -h1psi(p) - h1psi(q) + C_ + delta_psi(p) * delta_psi(q) / (2.0 * r_ * r_) + 0.5 * r_ * r_;
    }

    double schubert_h(Point p, Point q) const { return hadamard_value(p, q) + K(p, q); }

    ExponentParts exponent_parts(const std::vector<double>& charges, const std::vector<PointData>& pd) const {
        double Q = 0.0, sh = 0.0, sd = 0.0;
        for (std::size_t i = 0; i < charges.size(); ++i) {
            Q += charges[i];
            sh += charges[i] * pd[i].h1psi;
            sd += charges[i] * pd[i].dpsi;
        }
        ExponentParts e;
        e.linear = -2.0 * Q * sh;
        e.constant = Q * Q * C_;
        e.zero_mode = Q * Q * 0.5 * r_ * r_;
        e.momentum = sd * sd / (2.0 * r_ * r_);
        return e;
    }

    // exp(−(ħ/2) Σ_ij a_i a_j K(x_i, x_j))
    double vertex_expectation(const std::vector<double>& charges, const std::vector<PointData>& pd) const {
        return std::exp(-0.5 * hbar_ * exponent_parts(charges, pd).total());
    }

    double vertex_expectation(const VertexMonomial& m) const {
        std::vector<double> c;
        std::vector<PointData> pd;
        for (const auto& t : m) {
            c.push_back(t.a);
            pd.push_back(point_data(t.x));
        }
        return vertex_expectation(c, pd);
    }

private:
    void build(int n) {
        const Density1D da(a_), db(b_);
        const double pa = 1.0 + (a_.hi() - a_.lo()), pb = 1.0 + (b_.hi() - b_.lo());
        LA_ = Tabulated([da](double s) { return da.log_potential(s); }, a_.lo() - pa, a_.hi() + pa, n);
        LB_ = Tabulated([db](double s) { return db.log_potential(s); }, b_.lo() - pb, b_.hi() + pb, n);
        const Profile1D a = a_, b = b_;
        CA_ = Tabulated([a](double s) { return a.cdf(s); }, a_.lo(), a_.hi(), n);
        CB_ = Tabulated([b](double s) { return b.cdf(s); }, b_.lo(), b_.hi(), n);
        const QuadTol tol{1e-13, 1e-12, 18};
        const double ia = integrate([&](double s) { return a_(s) * LA_(s); }, a_.lo(), a_.hi(), tol).value;
        const double ib = integrate([&](double s) { return b_(s) * LB_(s); }, b_.lo(), b_.hi(), tol).value;
        C_ = -kInv4Pi * (ia + ib);
    }

    Density2D psi_;
    double r_, hbar_;
    Profile1D a_, b_;
    Tabulated LA_, LB_, CA_, CB_;
    double C_ = 0.0;
};

inline Density2D default_psi(double width = 0.5) { return lightcone_bump({0.0, 0.0}, width, width); }

// ---------------------------------------------------------------------------
// Dominance matrix
//   [ ⟨f,Hf⟩      ½⟨f,Δg⟩ ]
//   [ ½⟨f,Δg⟩     ⟨g,Hg⟩  ]

struct DominanceResult {
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d err = Eigen::Matrix2d::Zero();
    Eigen::Vector2d eigenvalues = Eigen::Vector2d::Zero();
    double min_eigenvalue = 0.0;
    double sigma = 0.0;  // MC error of the smallest eigenvalue
    std::size_t samples = 0;
};

struct SingleIntegrals {
    double mass = 0.0;   // ∫f
    double h1psi = 0.0;  // ⟨f, H₁ψ⟩
    double dpsi = 0.0;   // ⟨f, Δψ⟩
};

inline SingleIntegrals single_integrals(const SchubertState& s, const Density2D& f) {
    SingleIntegrals r;
    if (f.empty()) return r;
    r.mass = f.exact_integral();
    r.h1psi = integrate_against(f, [&](Point p) { return s.h1psi(p); }, 12);
    r.dpsi = integrate_against(f, [&](Point p) { return s.delta_psi(p); }, 12);
    return r;
}

// ⟨f, Kf⟩ where K = H − H₁
inline double smooth_diagonal(const SchubertState& s, const SingleIntegrals& f) {
    const double r2 = s.r() * s.r();
    return -2.0 * f.mass * f.h1psi + f.mass * f.mass * (s.psi_h1_psi() + 0.5 * r2) + f.dpsi * f.dpsi / (2.0 * r2);
}

inline DominanceResult dominance_matrix(const SchubertState& s, const Density2D& f, const Density2D& g,
                                        std::size_t samples = 100000, std::uint64_t seed = 1,
                                        bool same = false) {
    DominanceResult res;
    res.samples = samples;
    const SingleIntegrals F = single_integrals(s, f), G = single_integrals(s, g);
    Rng rng(seed, 0xD0);
    std::vector<double> hff(samples, 0.0), hgg(samples, 0.0), dfg(samples, 0.0);
    const bool hf = !f.empty(), hg = !g.empty();
    std::unique_ptr<Sampler2D> sf, sg;
    if (hf) sf = std::make_unique<Sampler2D>(f);
    if (hg) sg = std::make_unique<Sampler2D>(g);
    auto h1 = [](Point x, Point y) {
        const double Q = minkowski_square(x, y);
        return Q == 0.0 ? 0.0 : -kInv4Pi * std::log(std::abs(Q));
    };
    for (std::size_t k = 0; k < samples; ++k) {
        if (hf) {
            const Point x1 = sf->sample(rng), x2 = sf->sample(rng);
            hff[k] = sf->weight(x1) * sf->weight(x2) * h1(x1, x2);
        }
        if (hg) {
            const Point y1 = sg->sample(rng), y2 = sg->sample(rng);
            hgg[k] = sg->weight(y1) * sg->weight(y2) * h1(y1, y2);
        }
        if (hf && hg && !same) {
            const Point x = sf->sample(rng), y = sg->sample(rng);
            dfg[k] = sf->weight(x) * sg->weight(y) * pauli_jordan(x, y);
        }
    }
    auto mean_err = [samples](const std::vector<double>& v) {
        double m = 0.0, m2 = 0.0;
        for (double z : v) m += z;
        m /= samples;
        for (double z : v) m2 += (z - m) * (z - m);
        return std::pair<double, double>{m, std::sqrt(m2 / (samples - 1) / samples)};
    };
    auto [mff, eff] = mean_err(hff);
    auto [mgg, egg] = mean_err(hgg);
    auto [mfg, efg] = mean_err(dfg);
    res.A(0, 0) = hf ? mff + smooth_diagonal(s, F) : 0.0;
    res.A(1, 1) = hg ? mgg + smooth_diagonal(s, G) : 0.0;
    res.A(0, 1) = res.A(1, 0) = 0.5 * mfg;
    res.err(0, 0) = eff;
    res.err(1, 1) = egg;
    res.err(0, 1) = res.err(1, 0) = 0.5 * efg;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(res.A);
    res.eigenvalues = es.eigenvalues();
    res.min_eigenvalue = es.eigenvalues()(0);
    const Eigen::Vector2d v = es.eigenvectors().col(0);
    std::vector<double> z(samples);
    for (std::size_t k = 0; k < samples; ++k)
        z[k] = v(0) * v(0) * hff[k] + v(1) * v(1) * hgg[k] + v(0) * v(1) * dfg[k];
    res.sigma = mean_err(z).second;
    return res;
}

// ---------------------------------------------------------------------------
// Vertex expectations in the Schubert vector state

inline double dm_vertex_bound(const SchubertState& s, const VertexMonomial& m) {
    if (!is_neutral(m)) throw NotNeutral("vertex monomial has total charge " + std::to_string(total_charge(m)));
    return std::abs(s.vertex_expectation(m));
}

// Oscillator ground state ξ(k) ∝ exp(−r²k²/2), p = k, q = iħ d/dk.
struct OscillatorMoments {
    double q2 = 0.0;
    double p2 = 0.0;
    cplx qp{0.0, 0.0};
    cplx pq{0.0, 0.0};
};

inline OscillatorMoments oscillator_moments(double r, double hbar = 1.0) {
    const double L = 12.0 / r;
    auto xi = [r](double k) { return std::exp(-0.5 * r * r * k * k); };
    auto dxi = [r, xi](double k) { return -r * r * k * xi(k); };
    const QuadTol tol{1e-15, 1e-13, 18};
    const double norm = integrate([&](double k) { return xi(k) * xi(k); }, -L, L, tol).value;
    OscillatorMoments m;
    m.p2 = integrate([&](double k) { return k * k * xi(k) * xi(k); }, -L, L, tol).value / norm;
    m.q2 = hbar * hbar * integrate([&](double k) { return dxi(k) * dxi(k); }, -L, L, tol).value / norm;
    // ⟨ξ, q p ξ⟩ = iħ ∫ ξ (kξ)'
    const double a = integrate([&](double k) { return xi(k) * (xi(k) + k * dxi(k)); }, -L, L, tol).value / norm;
    const double b = integrate([&](double k) { return k * xi(k) * dxi(k); }, -L, L, tol).value / norm;
    m.qp = cplx(0.0, hbar * a);
    m.pq = cplx(0.0, hbar * b);
    return m;
}

// ∫∫ a(s) b(s') ln|s − s'|
inline double log_pair(const Profile1D& a, const Profile1D& b) {
    const Density1D db(b);
    return integrate_split([&](double s) { return a(s) * db.log_potential(s); }, a.lo(), a.hi(),
                           {b.lo(), b.hi()}, {1e-12, 1e-10, 16})
        .value;
}

// P(X < Y) for X ~ a, Y ~ b (normalized)
inline double prob_less(const Profile1D& a, const Profile1D& b) {
    return integrate_split([&](double s) { return b(s) * a.cdf(s); }, b.lo(), b.hi(), {a.lo(), a.hi()},
                           {1e-13, 1e-11, 16})
        .value;
}

struct TwoPointCheck {
    cplx lhs, rhs;
    double defect = 0.0;
};

// Two-point function of the DM representation on narrow lightcone bumps of width w at p and q.
inline TwoPointCheck dm_two_point_check(const SchubertState& s, Point p, Point q, double w) {
    const Density2D f = lightcone_bump(p, w, w), g = lightcone_bump(q, w, w);
    const Profile1D af = f.terms[0].f1, bf = f.terms[0].f2, ag = g.terms[0].f1, bg = g.terms[0].f2;

    const double fg_h1 = -kInv4Pi * (log_pair(af, ag) + log_pair(bf, bg));
    const SingleIntegrals F = single_integrals(s, f), G = single_integrals(s, g);
    const double pf_h1_pg = fg_h1 - F.h1psi - G.h1psi + s.psi_h1_psi();

    // ⟨f,Δg⟩ = −½ P(y ≤ x) + ½ P(y ≥ x), componentwise in (u,v)
    const double pu = prob_less(ag, af), pv = prob_less(bg, bf);
    const double f_delta_g = -0.5 * pu * pv + 0.5 * (1.0 - pu) * (1.0 - pv);
    const double pf_delta_pg = f_delta_g - F.dpsi * G.mass + F.mass * G.dpsi;

    const OscillatorMoments m = oscillator_moments(s.r(), 1.0);
    const cplx w0(pf_h1_pg, 0.5 * pf_delta_pg);
    const cplx osc = m.q2 * F.mass * G.mass - m.qp * F.mass * G.dpsi - m.pq * F.dpsi * G.mass +
                     m.p2 * F.dpsi * G.dpsi;
    TwoPointCheck r;
    r.lhs = w0 + osc;
    r.rhs = cplx(s.schubert_h(p, q), 0.5 * pauli_jordan(p, q));
    r.defect = std::abs(r.lhs - r.rhs);
    return r;
}

// ---------------------------------------------------------------------------
// Charge lemma

struct ChargeLemmaResult {
    double value = 0.0;
    bool hypothesis_holds = true;
};

// ∫χ_λ Δψ, after integrating by parts in t (∂_tΔψ = −½(a(u) + b(v))).
inline ChargeLemmaResult charge_lemma_integral(const SchubertState& s, const ChargeProbe& probe) {
    const double l = probe.lambda;
    const Profile1D chi0 = probe.chi0(), chi1 = probe.chi1();
    const Profile1D &a = s.a(), &b = s.b();
    const double umax = std::max({std::abs(a.lo()), std::abs(a.hi()), std::abs(b.lo()), std::abs(b.hi())});
    ChargeLemmaResult res;
    res.hypothesis_holds = umax + probe.T / l <= 1.0 / (l * l);
    const QuadTol tol{1e-13, 1e-11, 16};
    auto inner = [&](double t) {
        const double ia = integrate([&](double u) { return a(u) * chi1(l * l * (u - t)); }, a.lo(), a.hi(), tol).value;
        const double ib = integrate([&](double v) { return b(v) * chi1(l * l * (t - v)); }, b.lo(), b.hi(), tol).value;
        return ia + ib;
    };
    const double T = probe.T / l;
    res.value = -0.5 * integrate_split([&](double t) { return l * chi0(l * t) * inner(t); }, -T, T, {0.0}, tol).value;
    return res;
}

// λ² ∫ |p| |χ̂⁰(λp)|² |χ̂¹(p)|² dp; |χ̂¹|² is below 1e-40 past p = 400
inline double charge_fock_norm(const ChargeProbe& probe) {
    const double l = probe.lambda;
    if (l == 0.0) return 0.0;
    const Profile1D chi0 = probe.chi0(), chi1 = probe.chi1();
    auto f = [&](double p) { return p * std::norm(chi0.fourier(l * p)) * std::norm(chi1.fourier(p)); };
    const double pmax = 400.0 * std::max(1.0, 2.0 / chi1.width);
    const int panels = static_cast<int>(std::ceil(pmax / std::min(1.0, kPi / chi1.width)));
    return 2.0 * l * l * fixed_gauss(f, 0.0, pmax, panels);
}

// ∫ψ̃ Δψ
inline double intertwiner_overlap(const Density2D& psi_tilde, const Density2D& psi) {
    for (const Density2D* d : {&psi_tilde, &psi}) {
        const double I = d->exact_integral();
        if (std::abs(I - 1.0) > 1e-6) throw PsiNotNormalized("integral is " + std::to_string(I));
    }
    return integrate_against(psi_tilde, [&](Point p) { return smeared_solution(psi, p); }, 10);
}

}  // namespace sgl
