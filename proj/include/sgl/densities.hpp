#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace sgl {

using cplx = std::complex<double>;

// b(s) = exp(-1/(1-s^2)) on (-1,1)
inline double unit_bump(double s) {
    if (!(std::abs(s) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

inline double unit_bump_deriv(double s) {
    if (!(std::abs(s) < 1.0)) return 0.0;
    const double d = 1.0 - s * s;
    return unit_bump(s) * (-2.0 * s / (d * d));
}

inline double unit_bump_integral() {
    static const double I0 = [] {
        return integrate([](double s) { return unit_bump(s); }, -1.0, 1.0, {1e-15, 1e-14, 12}).value;
    }();
    return I0;
}

// fixed 8×20 Gauss on the shorter side; the integrand is flat at ±1
inline double unit_bump_cdf(double s) {
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return unit_bump_integral();
    const bool left = s <= 0.0;
    const double a = left ? -1.0 : s, b = left ? s : 1.0;
    std::vector<double> e(9);
    for (int i = 0; i <= 8; ++i) e[i] = a + (b - a) * i / 8.0;
    const NodeSet ns = gauss_panels(e);
    double v = 0.0;
    for (std::size_t i = 0; i < ns.x.size(); ++i) v += ns.w[i] * unit_bump(ns.x[i]);
    return left ? v : unit_bump_integral() - v;
}

template <class F>
double fixed_gauss(F&& f, double a, double b, int panels) {
    if (a == b) return 0.0;
    std::vector<double> e(panels + 1);
    for (int i = 0; i <= panels; ++i) e[i] = a + (b - a) * i / panels;
    const NodeSet ns = gauss_panels(e);
    double v = 0.0;
    for (std::size_t i = 0; i < ns.x.size(); ++i) v += ns.w[i] * f(ns.x[i]);
    return v;
}

// ∫ cos(κ s) b(s) ds over [-1,1]
inline double unit_bump_cosine(double kappa) {
    kappa = std::abs(kappa);
    if (kappa == 0.0) return unit_bump_integral();
    const int panels = std::max(24, static_cast<int>(std::ceil(kappa / 6.0)));
    return 2.0 * fixed_gauss([kappa](double s) { return std::cos(kappa * s) * unit_bump(s); }, 0.0, 1.0, panels);
}

// smooth step: 0 at τ<=0, 1 at τ>=1
inline double smooth_step(double tau) {
    if (tau <= 0.0) return 0.0;
    if (tau >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / tau), b = std::exp(-1.0 / (1.0 - tau));
    return a / (a + b);
}

enum class Shape { Bump, BumpDerivative, Plateau };

inline const char* to_string(Shape s) {
    switch (s) {
        case Shape::Bump: return "bump";
        case Shape::BumpDerivative: return "bump-derivative";
        case Shape::Plateau: return "plateau";
    }
    return "?";
}

// One closed-form profile on ℝ.
//   Bump:            amp·b((x-c)/w)
//   BumpDerivative:  amp·d/dx b((x-c)/w)
//   Plateau:         amp on |x-c|<=inner, smooth decay to 0 at |x-c|=w
struct Profile1D {
    Shape shape = Shape::Bump;
    double center = 0.0;
    double width = 1.0;
    double amp = 1.0;
    double inner = 0.0;

    double lo() const { return center - width; }
    double hi() const { return center + width; }

    double operator()(double x) const {
        const double y = x - center;
        switch (shape) {
            case Shape::Bump: return amp * unit_bump(y / width);
            case Shape::BumpDerivative: return amp * unit_bump_deriv(y / width) / width;
            case Shape::Plateau: {
                const double a = std::abs(y);
                if (a >= width) return 0.0;
                return amp * smooth_step((width - a) / (width - inner));
            }
        }
        return 0.0;
    }

    double exact_integral() const {
        switch (shape) {
            case Shape::Bump: return amp * width * unit_bump_integral();
            case Shape::BumpDerivative: return 0.0;
            case Shape::Plateau: return amp * (inner + width);
        }
        return 0.0;
    }

    double abs_mass() const {
        switch (shape) {
            case Shape::Bump: return std::abs(amp) * width * unit_bump_integral();
            case Shape::BumpDerivative: return std::abs(amp) * 2.0 * std::exp(-1.0);
            case Shape::Plateau: return std::abs(amp) * (inner + width);
        }
        return 0.0;
    }

    double sup_abs() const {
        switch (shape) {
            case Shape::Bump: return std::abs(amp) * std::exp(-1.0);
            case Shape::BumpDerivative: {
                static const double m = [] {
                    double best = 0.0;
                    for (int i = 1; i < 20000; ++i)
                        best = std::max(best, std::abs(unit_bump_deriv(-1.0 + i * 1e-4)));
                    return best * 1.001;
                }();
                return std::abs(amp) * m / width;
            }
            case Shape::Plateau: return std::abs(amp);
        }
        return 0.0;
    }

    double cdf(double x) const {
        if (x <= lo()) return 0.0;
        if (x >= hi()) return exact_integral();
        switch (shape) {
            case Shape::Bump: return amp * width * unit_bump_cdf((x - center) / width);
            case Shape::BumpDerivative: return amp * unit_bump((x - center) / width);
            case Shape::Plateau: {
                auto f = [this](double y) { return (*this)(y); };
                const double l1 = center - inner, r1 = center + inner;
                double v = fixed_gauss(f, lo(), std::min(x, l1), 8);
                if (x > l1) v += amp * (std::min(x, r1) - l1);
                if (x > r1) v += fixed_gauss(f, r1, x, 8);
                return v;
            }
        }
        return 0.0;
    }

    // (2π)^{-1/2} ∫ e^{-ikx} f(x) dx
    cplx fourier(double k) const {
        static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
        const cplx phase = std::polar(1.0, -k * center);
        switch (shape) {
            case Shape::Bump:
                return phase * (inv_sqrt_2pi * amp * width * unit_bump_cosine(k * width));
            case Shape::BumpDerivative:
                return phase * cplx(0.0, k) * (inv_sqrt_2pi * amp * width * unit_bump_cosine(k * width));
            case Shape::Plateau: {
                const double T = width - inner;
                const double flat = k == 0.0 ? inner : std::sin(k * inner) / k;
                auto f = [this, k, T](double y) { return std::cos(k * y) * smooth_step((width - y) / T); };
                const int panels = std::max(8, static_cast<int>(std::ceil(std::abs(k) * T / 6.0)));
                return phase * (inv_sqrt_2pi * 2.0 * amp * (flat + fixed_gauss(f, inner, width, panels)));
            }
        }
        return 0.0;
    }
};

inline Profile1D bump(double center, double width, double amp = 1.0) {
    return {Shape::Bump, center, width, amp, 0.0};
}
inline Profile1D normalized_bump(double center, double width) {
    return bump(center, width, 1.0 / (width * unit_bump_integral()));
}
inline Profile1D plateau(double center, double inner, double outer, double amp = 1.0) {
    return {Shape::Plateau, center, outer, amp, inner};
}

// Finite sum of profiles on ℝ.
struct Density1D {
    std::vector<Profile1D> terms;

    Density1D() = default;
    Density1D(Profile1D p) : terms{p} {}

    double operator()(double x) const {
        double s = 0.0;
        for (const auto& p : terms) s += p(x);
        return s;
    }
    double lo() const {
        double v = terms.empty() ? 0.0 : terms[0].lo();
        for (const auto& p : terms) v = std::min(v, p.lo());
        return v;
    }
    double hi() const {
        double v = terms.empty() ? 0.0 : terms[0].hi();
        for (const auto& p : terms) v = std::max(v, p.hi());
        return v;
    }
    std::vector<double> breaks() const {
        std::vector<double> b;
        for (const auto& p : terms) {
            b.push_back(p.lo());
            b.push_back(p.hi());
            b.push_back(p.center);
        }
        return b;
    }
    double exact_integral() const {
        double s = 0.0;
        for (const auto& p : terms) s += p.exact_integral();
        return s;
    }
    Estimate integral(QuadTol tol = {1e-12, 1e-12, 18}) const {
        if (terms.empty()) return {};
        return integrate_split([this](double x) { return (*this)(x); }, lo(), hi(), breaks(), tol);
    }
    Estimate l1_norm() const {
        if (terms.empty()) return {};
        return integrate_split([this](double x) { return std::abs((*this)(x)); }, lo(), hi(), breaks(),
                               {1e-12, 1e-10, 18});
    }
    double cdf(double x) const {
        double s = 0.0;
        for (const auto& p : terms) s += p.cdf(x);
        return s;
    }
    cplx fourier(double k) const {
        cplx s = 0.0;
        for (const auto& p : terms) s += p.fourier(k);
        return s;
    }
    // ∫ f(y) ln|x - y| dy
    double log_potential(double x) const {
        if (terms.empty()) return 0.0;
        auto f = [this, x](double y) {
            const double d = std::abs(x - y);
            return d == 0.0 ? 0.0 : (*this)(y) * std::log(d);
        };
        return integrate_singular_split(f, lo(), hi(), {x}).value;
    }
    Density1D scaled(double s) const {
        Density1D d = *this;
        for (auto& p : d.terms) p.amp *= s;
        return d;
    }
};

inline Density1D operator+(Density1D a, const Density1D& b) {
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    return a;
}

// P_ψ h = h − (∫h) ψ
inline Density1D p_psi_project(const Density1D& h, const Density1D& psi) {
    const double ipsi = psi.integral().value;
    if (std::abs(ipsi - 1.0) > 1e-6)
        throw PsiNotNormalized("integral of psi is " + std::to_string(ipsi));
    const double ih = h.exact_integral();
    if (ih == 0.0) return h;
    return h + psi.scaled(-ih);
}

enum class Coords { Cartesian, Lightcone };

// coeff·f1(t)·f2(x)        (Cartesian)
// coeff·2·f1(u)·f2(v)      (Lightcone; the 2 is the Jacobian so ∫ = coeff·∫f1·∫f2)
struct Term2D {
    double coeff = 1.0;
    Coords coords = Coords::Cartesian;
    Profile1D f1, f2;

    double operator()(Point p) const {
        if (coords == Coords::Cartesian) return coeff * f1(p.t) * f2(p.x);
        return 2.0 * coeff * f1(lc_u(p)) * f2(lc_v(p));
    }
    SupportBox box() const {
        if (coords == Coords::Cartesian) return {f1.lo(), f1.hi(), f2.lo(), f2.hi()};
        const double a0 = f1.lo(), a1 = f1.hi(), b0 = f2.lo(), b1 = f2.hi();
        return {0.5 * (a0 + b0), 0.5 * (a1 + b1), 0.5 * (a0 - b1), 0.5 * (a1 - b0)};
    }
    double exact_integral() const { return coeff * f1.exact_integral() * f2.exact_integral(); }
    double abs_mass() const { return std::abs(coeff) * f1.abs_mass() * f2.abs_mass(); }
};

struct Density2D {
    std::vector<Term2D> terms;

    Density2D() = default;
    Density2D(Term2D t) : terms{t} {}

    bool empty() const { return terms.empty(); }
    double operator()(Point p) const {
        double s = 0.0;
        for (const auto& t : terms) s += t(p);
        return s;
    }
    SupportBox support() const {
        SupportBox b = terms.empty() ? SupportBox{} : terms[0].box();
        for (const auto& t : terms) b = hull(b, t.box());
        return b;
    }
    double exact_integral() const {
        double s = 0.0;
        for (const auto& t : terms) s += t.exact_integral();
        return s;
    }
    Estimate integral(double tol = 1e-10) const {
        if (terms.empty()) return {};
        const SupportBox b = support();
        const QuadTol q{tol * 1e-2, tol * 1e-2, 14};
        auto outer = [&](double t) {
            return integrate([&](double x) { return (*this)(Point{t, x}); }, b.xmin, b.xmax, q).value;
        };
        return integrate(outer, b.tmin, b.tmax, q);
    }
    bool single_lightcone() const { return terms.size() == 1 && terms[0].coords == Coords::Lightcone; }
    Density2D scaled(double s) const {
        Density2D d = *this;
        for (auto& t : d.terms) t.coeff *= s;
        return d;
    }
    Density2D abs_version() const {
        Density2D d = *this;
        for (auto& t : d.terms) {
            t.coeff = std::abs(t.coeff);
            t.f1.amp = std::abs(t.f1.amp);
            t.f2.amp = std::abs(t.f2.amp);
        }
        return d;
    }
};

inline Density2D operator+(Density2D a, const Density2D& b) {
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    return a;
}

// Unit-mass bump in lightcone coordinates with half-widths (wu, wv) around `center`.
inline Density2D lightcone_bump(Point center, double wu, double wv, double mass = 1.0) {
    return Term2D{mass, Coords::Lightcone, normalized_bump(lc_u(center), wu),
                  normalized_bump(lc_v(center), wv)};
}

inline Density2D product_bump(Point center, double wt, double wx, double mass = 1.0) {
    return Term2D{mass, Coords::Cartesian, normalized_bump(center.t, wt), normalized_bump(center.x, wx)};
}

struct ChargeProbe {
    double lambda = 0.2;
    double T = 1.0;  // half-width of χ⁰
    double X = 2.0;  // outer half-width of χ¹ (χ¹ = 1 on [-1,1])

    Profile1D chi0() const { return normalized_bump(0.0, T); }
    Profile1D chi1() const { return plateau(0.0, 1.0, X); }
};

// χ_λ(t,x) = −λ² χ̇⁰(λt) χ¹(λ²x)
inline Density2D make_charge_probe(const ChargeProbe& c) {
    if (!(c.lambda > 0.0)) throw ConfigInvalid("charge probe needs lambda > 0");
    const double l = c.lambda;
    Profile1D time{Shape::BumpDerivative, 0.0, c.T / l, -l / (c.T * unit_bump_integral()), 0.0};
    Profile1D space = plateau(0.0, 1.0 / (l * l), c.X / (l * l));
    return Term2D{1.0, Coords::Cartesian, time, space};
}
inline Density2D make_charge_probe(double lambda) { return make_charge_probe(ChargeProbe{lambda}); }

// Draws points from |d| (normalized) and reports the proposal density.
class Sampler2D {
public:
    explicit Sampler2D(const Density2D& d) : d_(d) {
        for (const auto& t : d_.terms) {
            total_ += t.abs_mass();
            cum_.push_back(total_);
        }
        if (!(total_ > 0.0)) throw ConfigInvalid("cannot sample from a zero density");
    }

    double abs_mass() const { return total_; }
    const Density2D& density() const { return d_; }

    Point sample(Rng& rng) const {
        const double r = rng.uniform() * total_;
        std::size_t i = 0;
        while (i + 1 < cum_.size() && r >= cum_[i]) ++i;
        const Term2D& t = d_.terms[i];
        const double a = draw(t.f1, rng), b = draw(t.f2, rng);
        if (t.coords == Coords::Cartesian) return {a, b};
        return from_lightcone(a, b);
    }

    double pdf(Point p) const {
        double s = 0.0;
        for (const auto& t : d_.terms) {
            if (t.coords == Coords::Cartesian)
                s += std::abs(t.coeff * t.f1(p.t) * t.f2(p.x));
            else
                s += 2.0 * std::abs(t.coeff * t.f1(lc_u(p)) * t.f2(lc_v(p)));
        }
        return s / total_;
    }

    // d(p)/pdf(p); constant for single nonnegative terms.
    double weight(Point p) const {
        const double q = pdf(p);
        return q > 0.0 ? d_(p) / q : 0.0;
    }

    static double draw(const Profile1D& f, Rng& rng) {
        const double m = f.sup_abs();
        for (;;) {
            const double x = rng.uniform(f.lo(), f.hi());
            if (rng.uniform() * m < std::abs(f(x))) return x;
        }
    }

private:
    Density2D d_;
    std::vector<double> cum_;
    double total_ = 0.0;
};

}  // namespace sgl
