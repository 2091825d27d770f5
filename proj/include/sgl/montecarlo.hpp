#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "densities.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace sgl {

enum class Stratification { Uniform, PairImportance };

struct QuadratureSpec {
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    Stratification stratification = Stratification::Uniform;
    double target_rel_err = 0.05;
    std::size_t block = 4096;
};

struct OrderEstimate {
    int order = 0;
    cplx value{0.0, 0.0};
    double err = 0.0;  // combined standard error, sqrt(err_re² + err_im²)
    double err_re = 0.0, err_im = 0.0;
    std::size_t samples = 0;
    std::size_t rejected = 0;
    double wall_seconds = 0.0;
};

// Neumaier-compensated sum.
class KahanSum {
public:
    void add(double x) {
        const double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0, c_ = 0.0;
};

class ComplexAccumulator {
public:
    void add(cplx z) {
        re_.add(z.real());
        im_.add(z.imag());
        re2_.add(z.real() * z.real());
        im2_.add(z.imag() * z.imag());
        ++n_;
    }
    std::size_t count() const { return n_; }
    OrderEstimate estimate() const {
        OrderEstimate e;
        e.samples = n_;
        if (n_ == 0) return e;
        const double n = static_cast<double>(n_);
        const double mr = re_.value() / n, mi = im_.value() / n;
        e.value = {mr, mi};
        if (n_ > 1) {
            const double vr = std::max(0.0, (re2_.value() - n * mr * mr) / (n - 1));
            const double vi = std::max(0.0, (im2_.value() - n * mi * mi) / (n - 1));
            e.err_re = std::sqrt(vr / n);
            e.err_im = std::sqrt(vi / n);
            e.err = std::hypot(e.err_re, e.err_im);
        }
        return e;
    }

private:
    KahanSum re_, im_, re2_, im2_;
    std::size_t n_ = 0;
};

// Runs `draw(rng)` for q.samples samples in fixed-size blocks; block b uses substream b.
// `draw` returns false to reject a sample (it is counted, never included).
template <class Draw>
OrderEstimate run_blocks(const QuadratureSpec& q, Draw&& draw) {
    if (q.samples < 1) throw ConfigInvalid("samples must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    ComplexAccumulator acc;
    std::size_t rejected = 0, done = 0, block_id = 0;
    while (done < q.samples) {
        const std::size_t m = std::min(q.block, q.samples - done);
        Rng rng(q.seed, block_id++);
        for (std::size_t i = 0; i < m; ++i) {
            cplx v;
            if (draw(rng, v))
                acc.add(v);
            else
                ++rejected;
        }
        done += m;
    }
    OrderEstimate e = acc.estimate();
    e.rejected = rejected;
    e.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return e;
}

inline bool near_null(const std::vector<Point>& z, double tol = 1e-12) {
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            auto [u, v] = lightcone(z[i], z[j]);
            if (std::abs(u) < tol || std::abs(v) < tol) return true;
        }
    return false;
}

using CNumberKernel = std::function<cplx(const std::vector<Point>&)>;

// Symmetric lightcone-factorised proposal for a pair displacement:
// density q(s) ∝ |s|^{−κ} on [−L, L] in each of Δu, Δv.
struct PairProposal {
    double kappa = 0.0;
    double L = 1.0;

    double draw(Rng& rng) const {
        const double s = L * std::pow(rng.uniform_open(), 1.0 / (1.0 - kappa));
        return rng.uniform() < 0.5 ? -s : s;
    }
    double pdf1(double s) const {
        const double a = std::abs(s);
        if (a > L || a == 0.0) return 0.0;
        return (1.0 - kappa) / (2.0 * std::pow(L, 1.0 - kappa)) * std::pow(a, -kappa);
    }
    // density of y = x + Δ in (t,x) coordinates
    double pdf(double du, double dv) const { return 2.0 * pdf1(du) * pdf1(dv); }
};

// ∫ Π d_i(z_i) K(z) dz.  PairImportance applies to two-point integrals only:
// z₀ ~ |d₀|, z₁ = z₀ + Δ with Δ from a |Δu|^{−κ}|Δv|^{−κ} proposal, κ = `pair_kappa`.
inline OrderEstimate mc_integrate(const CNumberKernel& kernel, const std::vector<Density2D>& densities,
                                  const QuadratureSpec& q, double pair_kappa = 0.0) {
    std::vector<Sampler2D> samplers;
    for (const auto& d : densities) samplers.emplace_back(d);
    const std::size_t n = densities.size();
    if (q.stratification == Stratification::PairImportance) {
        if (n != 2) throw ConfigInvalid("pair importance sampling needs exactly two densities");
        if (!(pair_kappa >= 0.0 && pair_kappa < 1.0)) throw ConfigInvalid("pair exponent must lie in [0,1)");
        const SupportBox b0 = densities[0].support(), b1 = densities[1].support();
        const SupportBox hb = hull(b0, b1);
        const double L = (hb.tmax - hb.tmin) + (hb.xmax - hb.xmin);
        const PairProposal prop{pair_kappa, L};
        return run_blocks(q, [&](Rng& rng, cplx& out) {
            const Point z0 = samplers[0].sample(rng);
            const double du = prop.draw(rng), dv = prop.draw(rng);
            const Point z1 = z0 + from_lightcone(du, dv);
            const double d1 = densities[1](z1);
            if (d1 == 0.0) {
                out = 0.0;
                return true;
            }
            const std::vector<Point> z{z0, z1};
            if (near_null(z)) return false;
            try {
                out = samplers[0].weight(z0) * d1 / prop.pdf(du, dv) * kernel(z);
            } catch (const SingularConfiguration&) {
                return false;
            }
            return std::isfinite(out.real()) && std::isfinite(out.imag());
        });
    }
    return run_blocks(q, [&](Rng& rng, cplx& out) {
        std::vector<Point> z(n);
        double w = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = samplers[i].sample(rng);
            w *= samplers[i].weight(z[i]);
        }
        if (near_null(z)) return false;
        try {
            out = w * kernel(z);
        } catch (const SingularConfiguration&) {
            return false;
        }
        return std::isfinite(out.real()) && std::isfinite(out.imag());
    });
}

}  // namespace sgl
