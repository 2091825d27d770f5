#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/tools/roots.hpp>

#include "densities.hpp"
#include "errors.hpp"
#include "montecarlo.hpp"
#include "propagators.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace sgl {

inline const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

// Fixed-node cosine transform of an even profile: 2∫_0^R cos(κs) f(s) ds.
class CosineTransform {
public:
    template <class F>
    CosineTransform(F f, double R, int panels) {
        std::vector<double> e(panels + 1);
        for (int i = 0; i <= panels; ++i) e[i] = R * i / panels;
        ns_ = gauss_panels(e);
        fw_.resize(ns_.x.size());
        for (std::size_t i = 0; i < ns_.x.size(); ++i) fw_[i] = 2.0 * ns_.w[i] * f(ns_.x[i]);
    }
    double operator()(double kappa) const {
        double s = 0.0;
        for (std::size_t i = 0; i < fw_.size(); ++i) s += fw_[i] * std::cos(kappa * ns_.x[i]);
        return s;
    }

private:
    NodeSet ns_;
    std::vector<double> fw_;
};

// U(κ) = 2∫_0^1 cos(κs) b(s) ds on |κ| ≤ 500, splined from the fixed-node sum (abs. error ~1e-11)
class UnitBumpTable {
public:
    UnitBumpTable() {
        const CosineTransform ct([](double s) { return unit_bump(s); }, 1.0, 48);
        const double dq = 0.01;
        std::vector<double> y(50001);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = ct(i * dq);
        spline_ = std::make_unique<boost::math::interpolators::cardinal_cubic_b_spline<double>>(y.begin(), y.end(),
                                                                                                0.0, dq);
    }
    double operator()(double kappa) const {
        kappa = std::abs(kappa);
        return kappa > 500.0 ? 0.0 : (*spline_)(kappa);
    }

private:
    std::unique_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

inline const UnitBumpTable& unit_bump_transform() {
    static const UnitBumpTable U;
    return U;
}

// Transform of an even profile, tabulated for |q| ≤ qmax and set to zero beyond.
class EvenTransformTable {
public:
    EvenTransformTable() = default;
    EvenTransformTable(const Profile1D& p, double qmax, double dq) : qmax_(qmax) {
        const double R = p.width;
        const Profile1D pc = p;
        const CosineTransform ct([pc](double s) { return pc(pc.center + s); }, R,
                                 std::max(16, static_cast<int>(qmax * R / 4.0)));
        const int n = static_cast<int>(qmax / dq) + 1;
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = kInvSqrt2Pi * ct(i * dq);
        spline_ = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
            y.begin(), y.end(), 0.0, dq);
        center_ = p.center;
    }
    // centred transform (phase e^{−ikc} omitted)
    double centred(double q) const {
        q = std::abs(q);
        return q > qmax_ ? 0.0 : (*spline_)(q);
    }
    cplx operator()(double q) const { return std::polar(1.0, -q * center_) * centred(q); }

private:
    double qmax_ = 0.0, center_ = 0.0;
    std::shared_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

// f̂ for a bump profile via the tabulated transform; beyond |κ| = 500 the true value is below 1e-13
inline cplx bump_fourier_fast(const Profile1D& p, double k) {
    return std::polar(1.0, -k * p.center) * (kInvSqrt2Pi * p.amp * p.width * unit_bump_transform()(k * p.width));
}

inline cplx fourier_fast(const Density1D& d, double k) {
    cplx s = 0.0;
    for (const auto& p : d.terms) s += p.shape == Shape::Bump ? bump_fourier_fast(p, k) : p.fourier(k);
    return s;
}

// ---------------------------------------------------------------------------

struct IntervalModel {
    double ell = 2.0;
    double m = 1.0;
    double r = 1.0;
    Profile1D psi = normalized_bump(0.0, 0.5);
    Profile1D chi = plateau(0.0, 1.0, 2.0);
    double rank_one_scale = 1.0;  // 2 reproduces the oscillator weights of the symmetrised product

    double omega(double k) const { return std::sqrt(k * k + m * m); }
    void validate() const {
        if (!(m > 0.0) || !(ell > 0.0) || !(r > 0.0)) throw ConfigInvalid("interval model needs m, l, r > 0");
        if (psi.lo() < -0.5 * ell - 1e-12 || psi.hi() > 0.5 * ell + 1e-12)
            throw ConfigInvalid("psi must be supported in the interval");
        if (chi.inner < 0.5 * ell - 1e-12) throw ConfigInvalid("chi must equal 1 on the interval");
        if (std::abs(psi.exact_integral() - 1.0) > 1e-6) throw PsiNotNormalized("psi integral");
    }
};

inline IntervalModel default_interval_model(double ell = 2.0, double m = 1.0, double r = 1.0) {
    IntervalModel md;
    md.ell = ell;
    md.m = m;
    md.r = r;
    md.psi = normalized_bump(0.0, 0.25 * ell);
    md.chi = plateau(0.0, 0.5 * ell, 0.5 * ell + 1.0);
    return md;
}

// Pair of test functions (f₁, f₂) on ℝ.
struct TestPair {
    Density1D f1, f2;
};

inline double overlap(const Density1D& a, const Profile1D& b) {
    if (a.terms.empty()) return 0.0;
    const double lo = std::max(a.lo(), b.lo()), hi = std::min(a.hi(), b.hi());
    if (lo >= hi) return 0.0;
    return integrate_split([&](double x) { return a(x) * b(x); }, lo, hi, a.breaks(), {1e-14, 1e-12, 18}).value;
}

// Integrate an even-in-k integrand over ℝ as 2∫_0^∞: fixed Gauss panels on dyadic shells until negligible.
template <class F>
double integrate_even_k(F&& f, double k0 = 1.0, double rel = 1e-11, double panel = 0.25) {
    auto shell = [&](double a, double b) {
        const NodeSet ns = gauss_uniform(a, b, panel);
        KahanSum s;
        for (std::size_t i = 0; i < ns.x.size(); ++i) s.add(ns.w[i] * f(ns.x[i]));
        return s.value();
    };
    double total = shell(0.0, k0);
    double a = k0, b = 2.0 * k0;
    for (int i = 0; i < 40 && a < 1e5; ++i) {
        const double piece = shell(a, b);
        total += piece;
        if (std::abs(piece) <= rel * std::abs(total) && i > 3) break;
        a = b;
        b *= 2.0;
    }
    return 2.0 * total;
}

// ½∫(ω⁻¹ f̂₁* ĝ₁ + ω f̂₂* ĝ₂)
inline double sym_product_m(const TestPair& f, const TestPair& g, double m) {
    auto integrand = [&](double k) {
        const double w = std::sqrt(k * k + m * m);
        double s = 0.0;
        if (!f.f1.terms.empty() && !g.f1.terms.empty())
            s += std::real(std::conj(fourier_fast(f.f1, k)) * fourier_fast(g.f1, k)) / w;
        if (!f.f2.terms.empty() && !g.f2.terms.empty())
            s += std::real(std::conj(fourier_fast(f.f2, k)) * fourier_fast(g.f2, k)) * w;
        return s;
    };
    return 0.5 * integrate_even_k(integrand, 1.0);
}

inline cplx p_psi_fourier(const Density1D& h, const IntervalModel& md, double k) {
    if (h.terms.empty()) return 0.0;
    return fourier_fast(h, k) - h.exact_integral() * bump_fourier_fast(md.psi, k);
}

// ½∫(|k|⁻¹ (P̂f₁)* P̂g₁ + |k| f̂₂* ĝ₂) + (r²/2)∫f₁∫g₁ + (1/2r²)∫ψf₂∫ψg₂
inline double sym_product_s(const TestPair& f, const TestPair& g, const IntervalModel& md) {
    auto integrand = [&](double k) {
        const double ak = std::abs(k);
        double s = 0.0;
        if (!f.f1.terms.empty() && !g.f1.terms.empty() && ak > 0.0)
            s += std::real(std::conj(p_psi_fourier(f.f1, md, k)) * p_psi_fourier(g.f1, md, k)) / ak;
        if (!f.f2.terms.empty() && !g.f2.terms.empty())
            s += std::real(std::conj(fourier_fast(f.f2, k)) * fourier_fast(g.f2, k)) * ak;
        return s;
    };
    const double r2 = md.r * md.r;
    double v = 0.5 * integrate_even_k(integrand, 1.0);
    v += 0.5 * r2 * f.f1.exact_integral() * g.f1.exact_integral();
    v += 0.5 / r2 * overlap(f.f2, md.psi) * overlap(g.f2, md.psi);
    return v;
}

// ω_s(B(f̄) B(g)) assembled from the Fock and oscillator pieces.
inline cplx appendix_product_s(const TestPair& f, const TestPair& g, const IntervalModel& md) {
    auto piece = [&](const TestPair& h, double k) {
        const double ak = std::abs(k);
        cplx v = 0.0;
        if (!h.f1.terms.empty()) v += p_psi_fourier(h.f1, md, k) / std::sqrt(ak);
        if (!h.f2.terms.empty()) v += cplx(0.0, 1.0) * std::sqrt(ak) * fourier_fast(h.f2, k);
        return v;
    };
    auto re = [&](double k) { return k == 0.0 ? 0.0 : std::real(std::conj(piece(f, k)) * piece(g, k)); };
    auto im = [&](double k) { return k == 0.0 ? 0.0 : std::imag(std::conj(piece(f, k)) * piece(g, k)); };
    // integrate over ℝ directly: the imaginary part is odd in k for real data
    auto whole = [&](auto&& fn) {
        return 0.5 * (integrate_even_k([&](double k) { return fn(k) + fn(-k); }, 1.0) * 0.5);
    };
    const double r = md.r;
    const cplx a(r * f.f1.exact_integral(), overlap(f.f2, md.psi) / r);
    const cplx b(r * g.f1.exact_integral(), overlap(g.f2, md.psi) / r);
    return cplx(whole(re), whole(im)) + 0.5 * std::conj(a) * b;
}

// ---------------------------------------------------------------------------
// Bump basis on I and the operators A, B

struct BumpBasis {
    std::vector<Profile1D> b;
    double width = 0.0;
};

inline BumpBasis make_basis(const IntervalModel& md, int N) {
    if (N < 1) throw ConfigInvalid("basis size must be positive");
    BumpBasis B;
    B.width = md.ell / (N + 1);
    for (int i = 0; i < N; ++i) B.b.push_back(bump(-0.5 * md.ell + B.width * (i + 1), B.width, 1.0));
    return B;
}

struct OperatorSpectrum {
    Eigen::MatrixXd M, G;
    Eigen::VectorXd eig;  // generalised eigenvalues of (M, G), ascending
    double gram_condition = 0.0;
    double min() const { return eig(0); }
    double max() const { return eig(eig.size() - 1); }
};

struct BasisMatrices {
    Eigen::MatrixXd G1, G2, Akin, Bkin;  // kinetic (momentum-space) parts
    Eigen::VectorXd mass;                // ∫b_i
    Eigen::VectorXd psi_overlap;         // ∫b_i ψ
};

inline BasisMatrices assemble_basis(const IntervalModel& md, const BumpBasis& B, double kappa_max = 300.0) {
    const int N = static_cast<int>(B.b.size());
    const double w = B.width;
    const double K = kappa_max / w;
    const NodeSet ns = gauss_uniform(0.0, K, 2.0);
    BasisMatrices bm;
    bm.G1 = bm.G2 = bm.Akin = bm.Bkin = Eigen::MatrixXd::Zero(N, N);
    bm.mass.resize(N);
    bm.psi_overlap.resize(N);
    for (int i = 0; i < N; ++i) {
        bm.mass(i) = B.b[i].exact_integral();
        bm.psi_overlap(i) = overlap(Density1D(B.b[i]), md.psi);
    }
    const UnitBumpTable& U = unit_bump_transform();
    Eigen::VectorXcd bh(N), pb(N);
    for (std::size_t n = 0; n < ns.x.size(); ++n) {
        const double k = ns.x[n], wt = 2.0 * ns.w[n];  // even integrands
        const double om = md.omega(k);
        const double common = kInvSqrt2Pi * w * U(k * w);
        const cplx ps = bump_fourier_fast(md.psi, k);
        for (int i = 0; i < N; ++i) {
            bh(i) = std::polar(common, -k * B.b[i].center);
            pb(i) = bh(i) - bm.mass(i) * ps;
        }
        for (int i = 0; i < N; ++i)
            for (int j = i; j < N; ++j) {
                const double bb = std::real(std::conj(bh(i)) * bh(j));
                const double pp = std::real(std::conj(pb(i)) * pb(j));
                bm.G1(i, j) += 0.5 * wt * bb / om;
                bm.G2(i, j) += 0.5 * wt * bb * om;
                if (k > 0.0) bm.Akin(i, j) += 0.5 * wt * pp / k;
                bm.Bkin(i, j) += 0.5 * wt * bb * k;
            }
    }
    for (Eigen::MatrixXd* m : {&bm.G1, &bm.G2, &bm.Akin, &bm.Bkin})
        (*m).triangularView<Eigen::StrictlyLower>() = (*m).transpose().triangularView<Eigen::StrictlyLower>();
    return bm;
}

inline OperatorSpectrum generalized_spectrum(const Eigen::MatrixXd& M, const Eigen::MatrixXd& G) {
    OperatorSpectrum s;
    s.M = M;
    s.G = G;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(G);
    const double gmin = eg.eigenvalues()(0), gmax = eg.eigenvalues()(G.rows() - 1);
    s.gram_condition = gmax / gmin;
    if (!(gmin > 0.0) || s.gram_condition > 1e13)
        throw IllConditionedBasis("Gram condition number " + std::to_string(s.gram_condition));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(M, G);
    s.eig = ges.eigenvalues();
    return s;
}

// ⟨b_i, A b_j⟩₁ = ½∫|k|⁻¹ (P̂b_i)* P̂b_j + s·(r²/4)∫b_i∫b_j,  against the Gram matrix of ⟨·,·⟩₁
inline OperatorSpectrum operator_matrix_A(const IntervalModel& md, const BasisMatrices& bm) {
    const double r2 = md.r * md.r;
    Eigen::MatrixXd A = bm.Akin + md.rank_one_scale * 0.25 * r2 * bm.mass * bm.mass.transpose();
    return generalized_spectrum(A, bm.G1);
}

// ⟨b_i, B b_j⟩₂ = ½∫|k| b̂_i* b̂_j + s·(1/4r²)∫b_iψ∫b_jψ,  against the Gram matrix of ⟨·,·⟩₂
inline OperatorSpectrum operator_matrix_B(const IntervalModel& md, const BasisMatrices& bm) {
    const double r2 = md.r * md.r;
    Eigen::MatrixXd Bm = bm.Bkin + md.rank_one_scale * 0.25 / r2 * bm.psi_overlap * bm.psi_overlap.transpose();
    return generalized_spectrum(Bm, bm.G2);
}

// Pure multiplication part of B (|k|/ω) against ⟨·,·⟩₂.
inline OperatorSpectrum operator_matrix_B_kinetic(const BasisMatrices& bm) { return generalized_spectrum(bm.Bkin, bm.G2); }

// (1/r²)‖M_{1/ω}ψ‖₂² = (1/r²)·½∫ω⁻¹|ψ̂|²
inline double rank_one_trace_B(const IntervalModel& md) {
    return integrate_even_k([&](double k) { return std::norm(bump_fourier_fast(md.psi, k)) / md.omega(k); }, 1.0) *
           0.5 / (md.r * md.r);
}

// ---------------------------------------------------------------------------
// Hilbert–Schmidt integrals of A′ and B′ under cutoff doubling

struct HSSequence {
    std::vector<double> cutoffs, values, increments;
    double last_ratio() const {
        const std::size_t n = increments.size();
        return n < 2 ? 0.0 : increments[n - 1] / increments[n - 2];
    }
};

struct HSKernels {
    IntervalModel md;
    EvenTransformTable chi;
    explicit HSKernels(const IntervalModel& m) : md(m), chi(m.chi, 200.0, 0.01) {}

    // ψ̂ normalised to ψ̂(0) = 1; the HS grids sweep p at fixed k, so one value is cached
    double psi_hat(double k) const {
        if (k != cached_k_) {
            cached_k_ = k;
            cached_psi_ = std::real(bump_fourier_fast(md.psi, k)) / kInvSqrt2Pi;
        }
        return cached_psi_;
    }

    double a_prime_sq(double k, double p) const {
        const double ak = std::abs(k);
        if (ak == 0.0) return 0.0;
        const double wk = md.omega(k), wp = md.omega(p);
        const double g = 1.0 / ak - 1.0 / wk;
        const double br = chi.centred(k - p) - psi_hat(k) * chi.centred(p);
        return g * br * br * wp;
    }
    double b_prime_sq(double k, double p) const {
        const double wk = md.omega(k), ak = std::abs(k);
        const double c = chi.centred(k - p);
        return (md.m * md.m / (wk + ak)) * c * c / md.omega(p);
    }

private:
    mutable double cached_k_ = std::numeric_limits<double>::quiet_NaN();
    mutable double cached_psi_ = 0.0;
};

template <class F>
double square_integral(F&& f, double K, double panel) {
    // ∫∫_{[−K,K]²} using f(k,p) = f(−k,−p)
    const NodeSet nk = gauss_uniform(0.0, K, panel);
    const NodeSet np = gauss_uniform(-K, K, panel);
    KahanSum s;
    for (std::size_t i = 0; i < nk.x.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < np.x.size(); ++j) row += np.w[j] * f(nk.x[i], np.x[j]);
        s.add(nk.w[i] * row);
    }
    return 2.0 * s.value();
}

// value[i] = ∫∫_{|k|,|p| ≤ K_i} |kernel|², K_i = k0·2^i
template <class F>
HSSequence hs_sequence(F&& f, double k0, int doublings, double panel = 0.5) {
    HSSequence seq;
    double K = k0;
    for (int i = 0; i <= doublings; ++i, K *= 2.0) {
        seq.cutoffs.push_back(K);
        seq.values.push_back(square_integral(f, K, panel));
        if (i > 0) seq.increments.push_back(seq.values[i] - seq.values[i - 1]);
    }
    return seq;
}

inline HSSequence hs_norm_A_prime(const IntervalModel& md, double k0 = 4.0, int doublings = 4) {
    const HSKernels hk(md);
    return hs_sequence([&](double k, double p) { return hk.a_prime_sq(k, p); }, k0, doublings);
}

inline HSSequence hs_norm_B_prime(const IntervalModel& md, double k0 = 4.0, int doublings = 4) {
    const HSKernels hk(md);
    return hs_sequence([&](double k, double p) { return hk.b_prime_sq(k, p); }, k0, doublings);
}

// ∫ (ω(k) − |k|) / ω(k − q) dk
inline double b_prime_log_integral(const IntervalModel& md, double q) {
    auto f = [&](double k) { return (md.m * md.m / (md.omega(k) + std::abs(k))) / md.omega(k - q); };
    const double A = 4.0 * (std::abs(q) + 10.0);
    double core = integrate_split(f, -A, A, {0.0, q}, {1e-14, 1e-11, 18}).value;
    boost::math::quadrature::exp_sinh<double> es;
    core += es.integrate([&](double k) { return f(k); }, A, std::numeric_limits<double>::infinity());
    core += es.integrate([&](double k) { return f(-k); }, A, std::numeric_limits<double>::infinity());
    return core;
}

// ---------------------------------------------------------------------------
// Lower bound of ⟨h, M_|k| h⟩ / ‖h‖² on L²(I)

// |a′₁|: first zero of Ai′ in absolute value.
inline double airy_prime_first_zero() {
    auto f = [](double x) { return boost::math::airy_ai_prime(x); };
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(f, -1.5, -0.5, tol, it);
    return -0.5 * (r.first + r.second);
}

struct RandomFunction {
    std::vector<Profile1D> bumps;
};

// Parameters drawn relative to |I|, from a stream that depends on |I|, so each length gets its own sample.
inline std::vector<RandomFunction> random_family(double len, int trials, std::uint64_t seed, int terms = 3) {
    std::vector<RandomFunction> out;
    Rng rng(seed, 0xA1 ^ std::bit_cast<std::uint64_t>(len));
    for (int t = 0; t < trials; ++t) {
        RandomFunction f;
        for (int j = 0; j < terms; ++j) {
            const double w = rng.uniform(0.08, 0.5) * 0.5 * len;
            const double c = rng.uniform(-0.5 * len + w, 0.5 * len - w);
            f.bumps.push_back(bump(c, w, rng.uniform(-1.0, 1.0)));
        }
        out.push_back(f);
    }
    return out;
}

inline double kinetic_ratio(const RandomFunction& f) {
    Density1D h;
    h.terms = f.bumps;
    double wmin = 1e300;
    for (const auto& b : f.bumps) wmin = std::min(wmin, b.width);
    const double K = 150.0 / wmin;
    const NodeSet ns = gauss_uniform(0.0, K, std::min(2.0, kPi / (h.hi() - h.lo())));
    double num = 0.0;
    for (std::size_t i = 0; i < ns.x.size(); ++i) num += 2.0 * ns.w[i] * ns.x[i] * std::norm(fourier_fast(h, ns.x[i]));
    std::vector<double> br = h.breaks(), edges;
    std::sort(br.begin(), br.end());
    for (std::size_t i = 0; i + 1 < br.size(); ++i)
        for (int j = 0; j < 8; ++j) edges.push_back(br[i] + (br[i + 1] - br[i]) * j / 8.0);
    edges.push_back(br.back());
    const NodeSet xs = gauss_panels(edges);
    double den = 0.0;
    for (std::size_t i = 0; i < xs.x.size(); ++i) den += xs.w[i] * h(xs.x[i]) * h(xs.x[i]);
    return num / den;
}

struct AiryCheck {
    std::vector<double> lengths, minima;
    double slope = 0.0;
    double airy_zero = 0.0;
    std::vector<double> reference;  // |a′₁|/|I|
};

inline AiryCheck airy_lower_bound_check(const std::vector<double>& lengths, int trials, std::uint64_t seed) {
    if (trials < 1) throw ConfigInvalid("trials must be positive");
    AiryCheck a;
    a.airy_zero = airy_prime_first_zero();
    for (double L : lengths) {
        double mn = 1e300;
        for (const auto& f : random_family(L, trials, seed)) mn = std::min(mn, kinetic_ratio(f));
        a.lengths.push_back(L);
        a.minima.push_back(mn);
        a.reference.push_back(a.airy_zero / L);
    }
    // least-squares slope in log-log
    const std::size_t n = a.lengths.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(a.lengths[i]), y = std::log(a.minima[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    a.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return a;
}

// max over the grid of |P̂_ψh(k)| / (C|k|‖h‖₁), C = sup_{supp}|x|·(1 + ‖ψ‖₁)
inline double k0_estimate_ratio(const Density1D& h, const Density1D& psi, const std::vector<double>& ks) {
    const Density1D p = p_psi_project(h, psi);
    const double sup = std::max({std::abs(h.lo()), std::abs(h.hi()), std::abs(psi.lo()), std::abs(psi.hi())});
    const double C = sup * (1.0 + psi.l1_norm().value);
    const double l1 = h.l1_norm().value;
    double worst = 0.0;
    for (double k : ks) {
        if (k == 0.0) continue;
        worst = std::max(worst, std::abs(p.fourier(k)) / (C * std::abs(k) * l1));
    }
    return worst;
}

}  // namespace sgl
