#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgl/sgl.hpp"

namespace sglab {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitConfig = 2;

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"propagator", "state",     "smatrix", "bogoliubov",
                                            "quasiequiv", "thirring", "report"};
    return c;
}

inline json default_config() {
    const double sqpi = std::sqrt(sgl::kPi);
    return {
        {"model", {{"a", sqpi}, {"hbar", 1.0}, {"lambda", 1.0}, {"r", 1.0}, {"p_exponent", 2.0}}},
        {"psi", {{"width", 0.5}}},
        {"quadrature", {{"samples", 100000}, {"seed", 1}}},
        {"densities",
         {{"g", {{"type", "lightcone"}, {"center", {0.0, 0.0}}, {"wu", 0.5}, {"wv", 0.5}, {"mass", 1.0}}},
          {"f", {{"type", "lightcone"}, {"center", {3.0, 0.0}}, {"wu", 0.4}, {"wv", 0.4}, {"mass", 1.0}}},
          {"h", {{"type", "lightcone"}, {"center", {-3.0, 0.0}}, {"wu", 0.4}, {"wv", 0.4}, {"mass", 1.0}}}}},
        {"propagator",
         {{"action", "eval"}, {"kernel", "feynman"}, {"dt", 2.0}, {"dx", 1.0}, {"mu", 1.0}, {"eps", 0.0},
          {"pairs", 10000}, {"tol", 1e-12}}},
        {"state", {{"action", "dominance"}, {"pairs", 50}, {"lambdas", {0.2, 0.1, 0.05}}, {"lemma_tol", 1e-3}}},
        {"smatrix",
         {{"action", "unitarity"}, {"k", 2}, {"n_max", 3}, {"pairs", 100}, {"order", 30}, {"seeds", 3},
          {"series_tol", 1e-10}}},
        {"bogoliubov", {{"k", 2}}},
        {"quasiequiv",
         {{"action", "all"}, {"ell", 2.0}, {"m", 1.0}, {"N", {8, 16, 32}}, {"k0", 4.0}, {"doublings", 4},
          {"lengths", {1.0, 2.0, 4.0}}, {"trials", 200}, {"rank_one_scale", 1.0}, {"max_drift", 0.2},
          {"max_ratio", 0.6}}},
        {"thirring",
         {{"action", "all"}, {"alphas", {1.0, sqpi}}, {"configs", 1000}, {"rel_tol", 0.03}, {"s0", 0.2},
          {"steps", 4}}},
    };
}

// FNV-1a over the sorted-key dump
inline std::string config_hash(const json& cfg) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : cfg.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// "a.b.c=value"; value parsed as JSON, falling back to a string
inline void apply_override(json& cfg, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw sgl::ConfigInvalid("override must look like key.path=value: " + kv);
    const std::string key = kv.substr(0, eq), raw = kv.substr(eq + 1);
    json v;
    try {
        v = json::parse(raw);
    } catch (const json::parse_error&) {
        v = raw;
    }
    std::string ptr = "/";
    for (char c : key) ptr += c == '.' ? '/' : c;
    cfg[json::json_pointer(ptr)] = v;
}

inline json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sgl::ConfigInvalid("cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw sgl::ConfigInvalid(std::string("config parse error: ") + e.what());
    }
}

inline json merged_config(const json& file_cfg, const std::vector<std::string>& overrides) {
    json cfg = default_config();
    if (!file_cfg.is_null()) {
        if (!file_cfg.is_object()) throw sgl::ConfigInvalid("config root must be an object");
        cfg.merge_patch(file_cfg);
    }
    for (const auto& o : overrides) apply_override(cfg, o);
    return cfg;
}

template <class T>
T get(const json& j, const char* key) {
    if (!j.contains(key)) throw sgl::ConfigInvalid(std::string("missing config key ") + key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw sgl::ConfigInvalid(std::string("bad type for config key ") + key);
    }
}

// ---------------------------------------------------------------------------

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string text() const {
        std::ostringstream o;
        for (std::size_t i = 0; i < header.size(); ++i) o << (i ? "," : "") << header[i];
        o << "\n";
        char buf[40];
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", r[i]);
                o << (i ? "," : "") << buf;
            }
            o << "\n";
        }
        return o.str();
    }
};

struct Record {
    std::string command, action;
    json values = json::object();
    std::map<std::string, bool> verdicts;
    Csv csv;
    std::string error;
    double wall_seconds = 0.0;

    bool pass() const {
        if (!error.empty()) return false;
        for (const auto& [k, v] : verdicts)
            if (!v) return false;
        return true;
    }
};

inline json cplx_json(sgl::cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline json estimate_json(const sgl::OrderEstimate& e) {
    return {{"re", e.value.real()}, {"im", e.value.imag()}, {"err", e.err}, {"samples", e.samples},
            {"rejected", e.rejected}};
}

inline sgl::InteractionSpec interaction(const json& cfg) {
    const json& m = cfg.at("model");
    sgl::InteractionSpec s;
    s.a = get<double>(m, "a");
    s.hbar = get<double>(m, "hbar");
    s.lambda = get<double>(m, "lambda");
    s.p_exponent = get<double>(m, "p_exponent");
    s.validate();
    return s;
}

inline sgl::QuadratureSpec quadrature(const json& cfg) {
    const json& q = cfg.at("quadrature");
    sgl::QuadratureSpec s;
    const long long n = get<long long>(q, "samples");
    if (n < 1) throw sgl::ConfigInvalid("samples must be positive");
    s.samples = static_cast<std::size_t>(n);
    s.seed = get<std::uint64_t>(q, "seed");
    return s;
}

inline sgl::Density2D density(const json& cfg, const std::string& name) {
    const json& ds = cfg.at("densities");
    if (!ds.contains(name)) throw sgl::ConfigInvalid("unknown density " + name);
    const json& d = ds.at(name);
    const auto c = get<std::vector<double>>(d, "center");
    if (c.size() != 2) throw sgl::ConfigInvalid("density center must be [t, x]");
    const std::string type = get<std::string>(d, "type");
    if (type == "lightcone")
        return sgl::lightcone_bump({c[0], c[1]}, get<double>(d, "wu"), get<double>(d, "wv"), get<double>(d, "mass"));
    if (type == "product")
        return sgl::product_bump({c[0], c[1]}, get<double>(d, "wt"), get<double>(d, "wx"), get<double>(d, "mass"));
    throw sgl::ConfigInvalid("density type must be lightcone or product");
}

inline sgl::SchubertState state(const json& cfg) {
    return sgl::SchubertState(sgl::default_psi(get<double>(cfg.at("psi"), "width")),
                              get<double>(cfg.at("model"), "r"), get<double>(cfg.at("model"), "hbar"));
}

// ---------------------------------------------------------------------------
// propagator

inline sgl::cplx eval_kernel(const std::string& k, sgl::Point x, sgl::Point y, double mu, double eps) {
    using namespace sgl;
    if (k == "pauli_jordan") return pauli_jordan(x, y);
    if (k == "retarded") return retarded(x, y);
    if (k == "advanced") return advanced(x, y);
    if (k == "dirac") return dirac_propagator(x, y);
    if (k == "hadamard") return hadamard_value(x, y, mu);
    if (k == "wightman") return wightman_w(x, y, mu, eps);
    if (k == "feynman") return feynman(x, y, mu, eps);
    if (k == "feynman_minus") return feynman_minus_branch(x, y, mu);
    if (k == "dual_pauli_jordan") return dual_pauli_jordan(x, y);
    if (k == "dual_hadamard") return dual_hadamard(x, y).value;
    throw ConfigInvalid("unknown kernel " + k);
}

inline void kernel_identities(Record& r, std::size_t pairs, std::uint64_t seed, double tol) {
    using namespace sgl;
    Rng rng(seed, 0x11);
    double worst_w = 0.0, worst_f = 0.0;
    r.csv.header = {"dt", "dx", "w_defect", "feynman_imag_spacelike"};
    for (std::size_t i = 0; i < pairs;) {
        const Point x{rng.uniform(-3, 3), rng.uniform(-3, 3)}, y{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        if (is_null_pair(x, y)) continue;
        const cplx w = wightman_w(x, y);
        const double dw = std::abs(w - std::conj(w) - cplx(0.0, pauli_jordan(x, y)));
        double df = 0.0;
        if (causal_relation(x, y) == CausalRelation::SpacelikeSeparated) df = std::abs(feynman(x, y).imag());
        worst_w = std::max(worst_w, dw);
        worst_f = std::max(worst_f, df);
        const Point d = x - y;
        r.csv.rows.push_back({d.t, d.x, dw, df});
        ++i;
    }
    r.values["pairs"] = pairs;
    r.values["max_w_antisymmetry_defect"] = worst_w;
    r.values["max_feynman_spacelike_imag"] = worst_f;
    r.verdicts["w_minus_conj_w_equals_i_delta"] = worst_w <= tol;
    r.verdicts["feynman_real_spacelike"] = worst_f <= tol;
}

inline Record run_propagator(const json& cfg) {
    Record r;
    const json& p = cfg.at("propagator");
    r.action = get<std::string>(p, "action");
    if (r.action == "eval") {
        const std::string k = get<std::string>(p, "kernel");
        const sgl::Point x{get<double>(p, "dt"), get<double>(p, "dx")}, y{0.0, 0.0};
        const sgl::cplx v = eval_kernel(k, x, y, get<double>(p, "mu"), get<double>(p, "eps"));
        r.values["kernel"] = k;
        r.values["value"] = cplx_json(v);
        r.values["relation"] = sgl::to_string(sgl::causal_relation(x, y));
        r.csv.header = {"dt", "dx", "re", "im"};
        r.csv.rows.push_back({x.t, x.x, v.real(), v.imag()});
    } else if (r.action == "identities") {
        kernel_identities(r, get<std::size_t>(p, "pairs"), quadrature(cfg).seed, get<double>(p, "tol"));
    } else {
        throw sgl::ConfigInvalid("propagator action must be eval or identities");
    }
    return r;
}

// ---------------------------------------------------------------------------
// state

inline std::pair<sgl::Density2D, sgl::Density2D> random_pair(sgl::Rng& rng) {
    using namespace sgl;
    const Density2D f = lightcone_bump({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)}, rng.uniform(0.2, 0.7),
                                       rng.uniform(0.2, 0.7), rng.uniform(-1.0, 1.0));
    const Density2D g = product_bump({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)}, rng.uniform(0.2, 0.7),
                                     rng.uniform(0.2, 0.7), rng.uniform(-1.0, 1.0));
    return {f, g};
}

inline void dominance_run(Record& r, const sgl::SchubertState& st, int pairs, const sgl::QuadratureSpec& q) {
    sgl::Rng rng(q.seed, 0x22);
    bool ok = true;
    double worst = 1e300;
    r.csv.header = {"pair", "min_eigenvalue", "sigma", "max_eigenvalue"};
    for (int i = 0; i < pairs; ++i) {
        auto [f, g] = random_pair(rng);
        const auto d = sgl::dominance_matrix(st, f, g, q.samples, q.seed + i);
        ok = ok && d.min_eigenvalue >= -3.0 * d.sigma;
        worst = std::min(worst, d.sigma > 0 ? d.min_eigenvalue / d.sigma : d.min_eigenvalue);
        r.csv.rows.push_back({double(i), d.min_eigenvalue, d.sigma, d.eigenvalues(1)});
    }
    r.values["pairs"] = pairs;
    r.values["min_eigenvalue_over_sigma"] = worst;
    r.verdicts["dominance_positive_within_3sigma"] = ok;
}

inline void charge_run(Record& r, const sgl::SchubertState& st, const std::vector<double>& lambdas, double tol) {
    bool lemma_ok = true, ratio_ok = true;
    r.csv.header = {"lambda", "lemma", "fock_norm"};
    json vals = json::array();
    double prev = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const sgl::ChargeProbe p{lambdas[i]};
        const auto c = sgl::charge_lemma_integral(st, p);
        const double fn = sgl::charge_fock_norm(p);
        lemma_ok = lemma_ok && c.hypothesis_holds && std::abs(c.value + 1.0) <= tol;
        if (i > 0) {
            const double ratio = prev / fn, halvings = std::log2(lambdas[i - 1] / lambdas[i]);
            const double expect = std::pow(4.0, halvings);
            ratio_ok = ratio_ok && std::abs(ratio / expect - 1.0) <= 0.25;
        }
        prev = fn;
        vals.push_back({{"lambda", lambdas[i]}, {"lemma", c.value}, {"fock_norm", fn},
                        {"hypothesis", c.hypothesis_holds}});
        r.csv.rows.push_back({lambdas[i], c.value, fn});
    }
    r.values["charge"] = vals;
    r.verdicts["charge_lemma_minus_one"] = lemma_ok;
    r.verdicts["fock_norm_quarter_per_halving"] = ratio_ok;
}

inline Record run_state(const json& cfg) {
    Record r;
    const json& s = cfg.at("state");
    r.action = get<std::string>(s, "action");
    const sgl::SchubertState st = state(cfg);
    r.values["psi_h1_psi"] = st.psi_h1_psi();
    if (r.action == "dominance")
        dominance_run(r, st, get<int>(s, "pairs"), quadrature(cfg));
    else if (r.action == "charge")
        charge_run(r, st, get<std::vector<double>>(s, "lambdas"), get<double>(s, "lemma_tol"));
    else
        throw sgl::ConfigInvalid("state action must be dominance or charge");
    return r;
}

// ---------------------------------------------------------------------------
// smatrix

inline void series_run(Record& r, int pairs, int order, std::uint64_t seed, double tol) {
    using namespace sgl;
    Rng rng(seed, 0x33);
    double worst = 0.0;
    r.csv.header = {"du", "dv", "rho", "defect"};
    for (int i = 0; i < pairs;) {
        const double du = rng.uniform(0.05, 4.0), dv = -rng.uniform(0.05, 4.0);
        const double a = rng.uniform(-6.0, 6.0), b = rng.uniform(-6.0, 6.0);
        const Point x = from_lightcone(du, dv);
        const Charge c1{a, x}, c2{b, {0.0, 0.0}};
        const double rho = vertex_rho(1.0, a, b);
        if (std::abs(rho * std::log(std::abs(du * dv))) > 3.0) continue;
        const auto s = series_vs_closed_form(c1, c2, order);
        worst = std::max(worst, s.defect.back());
        r.csv.rows.push_back({du, dv, rho, s.defect.back()});
        ++i;
    }
    r.values["max_defect"] = worst;
    r.verdicts["series_matches_closed_form"] = worst <= tol;
}

inline Record run_smatrix(const json& cfg) {
    Record r;
    const json& s = cfg.at("smatrix");
    r.action = get<std::string>(s, "action");
    const sgl::QuadratureSpec q = quadrature(cfg);
    if (r.action == "series") {
        series_run(r, get<int>(s, "pairs"), get<int>(s, "order"), q.seed, get<double>(s, "series_tol"));
        return r;
    }
    const sgl::InteractionSpec spec = interaction(cfg);
    const sgl::Density2D g = density(cfg, "g");
    if (r.action == "growth") {
        const auto gc = sgl::factorial_growth_check(spec, g, get<int>(s, "n_max"), q);
        r.csv.header = {"n", "norm", "err", "b", "bound"};
        for (std::size_t n = 0; n < gc.b.size(); ++n)
            r.csv.rows.push_back({double(n), gc.norms[n].value.real(), gc.norms[n].err, gc.b[n], gc.bound[n]});
        r.values["C"] = gc.C;
        r.values["b"] = gc.b;
        r.values["bound"] = gc.bound;
        r.verdicts["factorial_growth_bound"] = gc.pass;
    } else if (r.action == "unitarity") {
        const sgl::SchubertState st = state(cfg);
        const int k = get<int>(s, "k"), seeds = get<int>(s, "seeds");
        r.csv.header = {"seed", "re", "im", "err"};
        bool ok = true;
        json arr = json::array();
        for (int i = 0; i < seeds; ++i) {
            sgl::QuadratureSpec qi = q;
            qi.seed = q.seed + i;
            const auto e = sgl::unitarity_defect(spec, st, g, k, {}, {}, qi);
            ok = ok && std::abs(e.value) <= 3.0 * e.err + 1e-14;
            arr.push_back(estimate_json(e));
            r.csv.rows.push_back({double(qi.seed), e.value.real(), e.value.imag(), e.err});
        }
        r.values["k"] = k;
        r.values["defects"] = arr;
        r.verdicts["unitarity_within_3sigma"] = ok;
    } else if (r.action == "relative") {
        const sgl::SchubertState st = state(cfg);
        const auto cs = sgl::relative_smatrix_coeffs(spec, st, g, density(cfg, "f"), get<int>(s, "k"), q);
        json arr = json::array();
        r.csv.header = {"order", "re", "im", "err"};
        for (const auto& e : cs) {
            arr.push_back(estimate_json(e));
            r.csv.rows.push_back({double(e.order), e.value.real(), e.value.imag(), e.err});
        }
        r.values["coefficients"] = arr;
    } else {
        throw sgl::ConfigInvalid("smatrix action must be series, growth, unitarity or relative");
    }
    return r;
}

// ---------------------------------------------------------------------------
// bogoliubov: a causal triple and the same triple with f and h exchanged

inline Record run_bogoliubov(const json& cfg) {
    Record r;
    r.action = "defect";
    const sgl::InteractionSpec spec = interaction(cfg);
    const sgl::QuadratureSpec q = quadrature(cfg);
    const sgl::SchubertState st = state(cfg);
    const int k = get<int>(cfg.at("bogoliubov"), "k");
    const sgl::BogoliubovInput causal{density(cfg, "f"), density(cfg, "g"), density(cfg, "h")};
    const sgl::BogoliubovInput control{causal.h, causal.g, causal.f};
    const auto a = sgl::bogoliubov_defect(spec, st, causal, k, q);
    const auto b = sgl::bogoliubov_defect(spec, st, control, k, q, false);
    r.values["k"] = k;
    r.values["causal"] = estimate_json(a);
    r.values["acausal"] = estimate_json(b);
    r.values["causal_sigmas"] = a.err > 0 ? std::abs(a.value) / a.err : 0.0;
    r.values["acausal_sigmas"] = b.err > 0 ? std::abs(b.value) / b.err : 0.0;
    r.csv.header = {"causal", "re", "im", "err"};
    r.csv.rows.push_back({1.0, a.value.real(), a.value.imag(), a.err});
    r.csv.rows.push_back({0.0, b.value.real(), b.value.imag(), b.err});
    r.verdicts["causal_within_3sigma"] = std::abs(a.value) <= 3.0 * a.err;
    r.verdicts["acausal_beyond_5sigma"] = std::abs(b.value) >= 5.0 * b.err;
    return r;
}

// ---------------------------------------------------------------------------
// quasiequiv

struct SpectraSummary {
    std::vector<int> N;
    std::vector<double> a_min, a_max, b_min, b_max, cond;
    bool ok = true;
};

inline SpectraSummary spectra_run(const sgl::IntervalModel& md, const std::vector<int>& Ns, double max_drift) {
    SpectraSummary s;
    for (int N : Ns) {
        const auto bm = sgl::assemble_basis(md, sgl::make_basis(md, N));
        const auto A = sgl::operator_matrix_A(md, bm);
        const auto B = sgl::operator_matrix_B(md, bm);
        s.N.push_back(N);
        s.a_min.push_back(A.min());
        s.a_max.push_back(A.max());
        s.b_min.push_back(B.min());
        s.b_max.push_back(B.max());
        s.cond.push_back(std::max(A.gram_condition, B.gram_condition));
        s.ok = s.ok && A.min() > 0.0 && B.min() > 0.0;
    }
    for (std::size_t i = 1; i < s.N.size(); ++i) {
        s.ok = s.ok && std::abs(s.a_min[i] / s.a_min[i - 1] - 1.0) < max_drift;
        s.ok = s.ok && std::abs(s.b_min[i] / s.b_min[i - 1] - 1.0) < max_drift;
    }
    return s;
}

inline Record run_quasiequiv(const json& cfg) {
    Record r;
    const json& c = cfg.at("quasiequiv");
    r.action = get<std::string>(c, "action");
    if (r.action != "all" && r.action != "spectra" && r.action != "hs" && r.action != "airy")
        throw sgl::ConfigInvalid("quasiequiv action must be all, spectra, hs or airy");
    sgl::IntervalModel md = sgl::default_interval_model(get<double>(c, "ell"), get<double>(c, "m"),
                                                        get<double>(cfg.at("model"), "r"));
    md.rank_one_scale = get<double>(c, "rank_one_scale");
    md.validate();
    const bool all = r.action == "all";
    r.csv.header = {"series", "x", "y1", "y2"};
    if (all || r.action == "spectra") {
        const auto s = spectra_run(md, get<std::vector<int>>(c, "N"), get<double>(c, "max_drift"));
        r.values["spectra"] = {{"N", s.N}, {"A_min", s.a_min}, {"A_max", s.a_max}, {"B_min", s.b_min},
                               {"B_max", s.b_max}, {"gram_condition", s.cond}};
        for (std::size_t i = 0; i < s.N.size(); ++i) {
            r.csv.rows.push_back({1.0, double(s.N[i]), s.a_min[i], s.a_max[i]});
            r.csv.rows.push_back({2.0, double(s.N[i]), s.b_min[i], s.b_max[i]});
        }
        r.verdicts["spectra_bounded_and_stable"] = s.ok;
    }
    if (all || r.action == "hs") {
        const double k0 = get<double>(c, "k0"), mr = get<double>(c, "max_ratio");
        const int d = get<int>(c, "doublings");
        const auto a = sgl::hs_norm_A_prime(md, k0, d), b = sgl::hs_norm_B_prime(md, k0, d);
        r.values["hs"] = {{"cutoffs", a.cutoffs}, {"A_prime", a.values}, {"B_prime", b.values},
                          {"A_ratio", a.last_ratio()}, {"B_ratio", b.last_ratio()}};
        for (std::size_t i = 0; i < a.cutoffs.size(); ++i)
            r.csv.rows.push_back({3.0, a.cutoffs[i], a.values[i], b.values[i]});
        json I = json::object();
        for (double qq : {1.0, 10.0, 100.0}) I[std::to_string(int(qq))] = sgl::b_prime_log_integral(md, qq);
        r.values["b_prime_log_integral"] = I;
        r.verdicts["hs_increments_converge"] = a.last_ratio() > 0.0 && a.last_ratio() <= mr &&
                                               b.last_ratio() > 0.0 && b.last_ratio() <= mr;
    }
    if (all || r.action == "airy") {
        const auto ac = sgl::airy_lower_bound_check(get<std::vector<double>>(c, "lengths"), get<int>(c, "trials"),
                                                    quadrature(cfg).seed);
        r.values["airy"] = {{"lengths", ac.lengths}, {"minima", ac.minima}, {"reference", ac.reference},
                            {"slope", ac.slope}, {"airy_prime_zero", ac.airy_zero}};
        for (std::size_t i = 0; i < ac.lengths.size(); ++i)
            r.csv.rows.push_back({4.0, ac.lengths[i], ac.minima[i], ac.reference[i]});
        r.verdicts["airy_slope_minus_one"] = std::abs(ac.slope + 1.0) <= 0.2;
    }
    return r;
}

// ---------------------------------------------------------------------------
// thirring

inline void thirring_identities(Record& r, int configs, std::uint64_t seed) {
    using namespace sgl;
    Rng rng(seed, 0x44);
    const double sq = std::sqrt(kPi);
    double worst_exchange = 0.0, worst_dual = 0.0, worst_ratio = 0.0;
    for (int i = 0; i < configs;) {
        const Point x{rng.uniform(-2, 2), rng.uniform(-2, 2)}, y{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (causal_relation(x, y) != CausalRelation::SpacelikeSeparated) continue;
        const double alpha = rng.uniform(0.3, 3.0);
        for (auto k1 : kAllKinds)
            for (auto k2 : kAllKinds) {
                const FermionField f1{k1, alpha}, f2{k2, alpha};
                const cplx ph = exchange_phase(f1.a(), f1.b(), f2.a(), f2.b(), x, y);
                worst_exchange = std::max(worst_exchange, std::abs(ph + 1.0));
                const cplx rk = exchange_ratio_from_kernels(f1.a(), f1.b(), f2.a(), f2.b(), x, y);
                worst_ratio = std::max(worst_ratio, std::abs(rk - ph));
            }
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        const VertexWord w1{{{a, x}}, 1.0}, w2{{{b, y}}, 1.0};
        const cplx s = star_kernel(w1, w2).kernel, d = dual_star_kernel(from_scalar(w1), from_scalar(w2)).kernel;
        worst_dual = std::max(worst_dual, std::abs(s - d) / std::max(1.0, std::abs(s)));
        ++i;
    }
    const GammaMatrices g = gamma_matrices();
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    const double gdef = std::max({(g.g0 * g.g0 - I).norm(), (g.g1 * g.g1 + I).norm(), (g.g0 * g.g1 + g.g1 * g.g0).norm()});
    r.values["max_exchange_defect"] = worst_exchange;
    r.values["max_exchange_vs_kernels"] = worst_ratio;
    r.values["max_dual_scalar_defect"] = worst_dual;
    r.values["g_sqrt_pi"] = coupling_constant(sq);
    r.values["d_sqrt_pi"] = anomalous_dimension(sq);
    r.values["gamma_defect"] = gdef;
    r.verdicts["fermions_anticommute"] = worst_exchange <= 1e-12;
    r.verdicts["exchange_matches_kernels"] = worst_ratio <= 1e-12;
    r.verdicts["dual_reduces_to_scalar"] = worst_dual <= 1e-12;
    r.verdicts["free_point_g_zero"] = std::abs(coupling_constant(sq)) <= 1e-12;
    r.verdicts["free_point_d_zero"] = std::abs(anomalous_dimension(sq)) <= 1e-12;
    r.verdicts["gamma_relations"] = gdef == 0.0;
}

inline void thirring_ope(Record& r, const std::vector<double>& alphas, double tol, const sgl::OpeSetup& setup) {
    using namespace sgl;
    bool ok = true;
    json arr = json::array();
    r.csv.header = {"alpha", "kind", "step", "re", "im"};
    for (double al : alphas) {
        const OpeResult u = ope_coefficient_current(al, OpeDirection::U, setup);
        const OpeResult v = ope_coefficient_current(al, OpeDirection::V, setup);
        const OpeResult m = ope_coefficient_mass(al, true, setup);
        ok = ok && u.rel_err() <= tol && v.rel_err() <= tol && m.rel_err() <= tol;
        arr.push_back({{"alpha", al}, {"current_u", u.coefficient}, {"current_v", v.coefficient},
                       {"current_expected", current_coefficient(al)}, {"mass_prefactor", m.coefficient},
                       {"mass_expected", m.expected}, {"current_rel_err", std::max(u.rel_err(), v.rel_err())},
                       {"mass_rel_err", m.rel_err()}});
        int kind = 0;
        for (const OpeResult* o : {&u, &v, &m}) {
            for (std::size_t i = 0; i < o->trace.steps.size(); ++i)
                r.csv.rows.push_back({al, double(kind), o->trace.steps[i], o->trace.samples[i].real(),
                                      o->trace.samples[i].imag()});
            ++kind;
        }
    }
    r.values["ope"] = arr;
    r.verdicts["ope_coefficients_within_tol"] = ok;
}

inline Record run_thirring(const json& cfg) {
    Record r;
    const json& c = cfg.at("thirring");
    r.action = get<std::string>(c, "action");
    const bool all = r.action == "all";
    if (!all && r.action != "identities" && r.action != "ope")
        throw sgl::ConfigInvalid("thirring action must be all, identities or ope");
    if (all || r.action == "identities") thirring_identities(r, get<int>(c, "configs"), quadrature(cfg).seed);
    if (all || r.action == "ope") {
        sgl::OpeSetup setup;
        setup.s0 = get<double>(c, "s0");
        setup.steps = get<int>(c, "steps");
        const auto alphas = get<std::vector<double>>(c, "alphas");
        for (double a : alphas)
            if (!(a > 0.0)) throw sgl::ConfigInvalid("alpha must be positive");
        thirring_ope(r, alphas, get<double>(c, "rel_tol"), setup);
    }
    return r;
}

// ---------------------------------------------------------------------------

inline std::string out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* e = std::getenv("SGLAB_OUT"); e && *e) return e;
    return "sglab_out";
}

inline json record_json(const Record& r, const json& cfg) {
    json j;
    j["command"] = r.command;
    j["action"] = r.action;
    j["artifact_version"] = SGLAB_VERSION;
    j["config_hash"] = config_hash(cfg);
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    j["timestamp"] = buf;
    j["wall_seconds"] = r.wall_seconds;
    j["values"] = r.values;
    j["verdicts"] = r.verdicts;
    j["pass"] = r.pass();
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline Record run_report(const std::string& dir) {
    Record r;
    r.action = "summary";
    json rows = json::array();
    r.csv.header = {"index", "pass"};
    std::vector<fs::path> files;
    if (fs::exists(dir))
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".json" && e.path().stem() != "report") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::ifstream in(files[i]);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error&) {
            continue;
        }
        const bool p = j.value("pass", false);
        rows.push_back({{"file", files[i].filename().string()}, {"command", j.value("command", "")},
                        {"action", j.value("action", "")}, {"pass", p}});
        r.csv.rows.push_back({double(i), p ? 1.0 : 0.0});
        r.verdicts[files[i].stem().string()] = p;
    }
    r.values["records"] = rows;
    return r;
}

// Runs one command; writes <out>/<command>.json and .csv; returns the exit code.
inline int run(const std::string& command, const json& cfg, const std::string& out, Record* result = nullptr) {
    Record r;
    int code = kExitPass;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (command == "propagator") r = run_propagator(cfg);
        else if (command == "state") r = run_state(cfg);
        else if (command == "smatrix") r = run_smatrix(cfg);
        else if (command == "bogoliubov") r = run_bogoliubov(cfg);
        else if (command == "quasiequiv") r = run_quasiequiv(cfg);
        else if (command == "thirring") r = run_thirring(cfg);
        else if (command == "report") r = run_report(out);
        else throw sgl::ConfigInvalid("unknown command " + command);
        code = r.pass() ? kExitPass : kExitVerdict;
    } catch (const sgl::ConfigInvalid& e) {
        r.error = e.what();
        code = kExitConfig;
    } catch (const sgl::RegimeViolation& e) {
        r.error = e.what();
        code = kExitConfig;
    } catch (const sgl::Error& e) {
        r.error = e.what();
        code = kExitVerdict;
    } catch (const json::exception& e) {
        r.error = std::string("ConfigInvalid: ") + e.what();
        code = kExitConfig;
    }
    r.command = command;
    if (r.action.empty() && cfg.contains(command) && cfg[command].contains("action") && cfg[command]["action"].is_string())
        r.action = cfg[command]["action"].get<std::string>();
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (code != kExitConfig || std::find(commands().begin(), commands().end(), command) != commands().end()) {
        std::error_code ec;
        fs::create_directories(out, ec);
        const std::string base = (fs::path(out) / command).string();
        std::ofstream(base + ".json") << record_json(r, cfg).dump(2) << "\n";
        if (!r.csv.header.empty()) std::ofstream(base + ".csv") << r.csv.text();
    }
    if (result) *result = r;
    return code;
}

}  // namespace sglab
