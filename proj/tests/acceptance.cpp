// Desk-scale acceptance run: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

#include "sglab_app.hpp"

using namespace sglab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<Outcome()> run;
};

std::string out_root() { return (std::filesystem::path(out_dir("")) / "acceptance").string(); }

json cfg(std::vector<std::string> sets) { return merged_config(json(), sets); }

Record exec(const std::string& cmd, const json& c, int* code = nullptr) {
    Record r;
    const int rc = run(cmd, c, out_root(), &r);
    if (code) *code = rc;
    return r;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Outcome verdicts_only(const Record& r) {
    std::string d;
    for (const auto& [k, v] : r.verdicts) d += (v ? "" : "!") + k + " ";
    if (!r.error.empty()) d += "error: " + r.error;
    return {r.pass(), d};
}

// tolerances pinned here, not taken from defaults
constexpr double kIdentityTol = 1e-12;
constexpr double kLemmaTol = 1e-3;
constexpr double kSeriesTol = 1e-10;
constexpr double kOpeTol = 0.03;
constexpr double kDrift = 0.2;
constexpr double kHsRatio = 0.6;

std::vector<Criterion> criteria() {
    return {
        {1, "kernel identities", 1.0,
         [] {
             const Record r = exec("propagator", cfg({"propagator.action=\"identities\"", "propagator.pairs=10000",
                                                      "propagator.tol=" + std::to_string(kIdentityTol)}));
             Outcome o = verdicts_only(r);
             o.detail = fmt("max |W-W*-iD| = %.3g, max |Im DF| spacelike = %.3g",
                            r.values["max_w_antisymmetry_defect"].get<double>(),
                            r.values["max_feynman_spacelike_imag"].get<double>());
             return o;
         }},
        {2, "Schubert positivity", 300.0,
         [] {
             const Record r =
                 exec("state", cfg({"state.action=\"dominance\"", "state.pairs=50", "quadrature.samples=100000"}));
             Outcome o = verdicts_only(r);
             o.detail = fmt("min over pairs of lambda_min/sigma = %.3g",
                            r.values["min_eigenvalue_over_sigma"].get<double>());
             return o;
         }},
        {3, "charge lemma", 60.0,
         [] {
             const Record r = exec("state", cfg({"state.action=\"charge\"", "state.lambdas=[0.2,0.1,0.05]",
                                                 "state.lemma_tol=" + std::to_string(kLemmaTol)}));
             Outcome o = verdicts_only(r);
             std::string d;
             for (const auto& c : r.values["charge"])
                 d += fmt("lambda=%.3g: %.6f, |chi|=%.4g; ", c["lambda"].get<double>(), c["lemma"].get<double>(),
                          c["fock_norm"].get<double>());
             o.detail = d;
             return o;
         }},
        {4, "vertex series", 1.0,
         [] {
             const Record r = exec("smatrix", cfg({"smatrix.action=\"series\"", "smatrix.pairs=100",
                                                   "smatrix.order=30", "smatrix.series_tol=1e-10"}));
             Outcome o = verdicts_only(r);
             o.pass = o.pass && r.values.value("max_defect", 1.0) <= kSeriesTol;
             o.detail = fmt("max defect = %.3g over 100 pairs", r.values.value("max_defect", -1.0));
             return o;
         }},
        {5, "factorial growth bound", 1800.0,
         [] {
             const Record r = exec("smatrix", cfg({"smatrix.action=\"growth\"", "smatrix.n_max=3",
                                                   "quadrature.samples=1000000"}));
             Outcome o = verdicts_only(r);
             const auto b = r.values["b"], bd = r.values["bound"];
             o.detail = fmt("C = %.4g; b3 = %.4g <= bound %.4g", r.values["C"].get<double>(), b[3].get<double>(),
                            bd[3].get<double>());
             return o;
         }},
        {6, "unitarity k=1,2", 1800.0,
         [] {
             bool ok = true;
             std::string d;
             for (int k : {1, 2}) {
                 const Record r = exec("smatrix", cfg({"smatrix.action=\"unitarity\"", "smatrix.k=" + std::to_string(k),
                                                       "smatrix.seeds=3", "quadrature.samples=100000"}));
                 ok = ok && r.pass();
                 for (const auto& e : r.values["defects"])
                     d += fmt("k=%.0f |d|/sigma=%.2f; ", k,
                              e["err"].get<double>() > 0
                                  ? std::hypot(e["re"].get<double>(), e["im"].get<double>()) / e["err"].get<double>()
                                  : 0.0);
             }
             return Outcome{ok, d};
         }},
        {7, "Bogoliubov factorisation", 2700.0,
         [] {
             const Record r = exec("bogoliubov", cfg({"bogoliubov.k=2", "quadrature.samples=100000"}));
             Outcome o = verdicts_only(r);
             o.detail = fmt("causal %.2f sigma (<= 3), acausal %.2f sigma (>= 5)",
                            r.values["causal_sigmas"].get<double>(), r.values["acausal_sigmas"].get<double>());
             return o;
         }},
        {8, "quasiequivalence spectra and HS", 600.0,
         [] {
             const std::vector<std::string> base{"quasiequiv.m=1", "quasiequiv.ell=2", "model.r=1",
                                                 "quasiequiv.N=[8,16,32]",
                                                 "quasiequiv.max_drift=" + std::to_string(kDrift),
                                                 "quasiequiv.max_ratio=" + std::to_string(kHsRatio)};
             auto with = [&](const std::string& action) {
                 auto v = base;
                 v.push_back("quasiequiv.action=\"" + action + "\"");
                 return cfg(v);
             };
             const Record sp = exec("quasiequiv", with("spectra")), hs = exec("quasiequiv", with("hs"));
             const auto& s = sp.values["spectra"];
             const Record& r = hs;
             const bool ok = sp.pass() && hs.pass();
             std::string d = fmt("A in [%.4g, %.4g], ", s["A_min"][2].get<double>(), s["A_max"][2].get<double>());
             d += fmt("B in [%.4g, %.4g] at N=32; ", s["B_min"][2].get<double>(), s["B_max"][2].get<double>());
             d += fmt("HS ratios A' %.3f B' %.3f", r.values["hs"]["A_ratio"].get<double>(),
                      r.values["hs"]["B_ratio"].get<double>());
             for (std::size_t i = 0; i + 1 < s["N"].size(); ++i)
                 d += fmt("; drift A %.3f B %.3f", s["A_min"][i + 1].get<double>() / s["A_min"][i].get<double>() - 1,
                          s["B_min"][i + 1].get<double>() / s["B_min"][i].get<double>() - 1);
             return Outcome{ok, d};
         }},
        {9, "Airy scaling", 120.0,
         [] {
             const Record r = exec("quasiequiv", cfg({"quasiequiv.action=\"airy\"", "quasiequiv.lengths=[1,2,4]",
                                                      "quasiequiv.trials=200"}));
             Outcome o = verdicts_only(r);
             const auto& a = r.values["airy"];
             o.detail = fmt("slope %.4f; minima %.4g, %.4g", a["slope"].get<double>(), a["minima"][0].get<double>(),
                            a["minima"][2].get<double>());
             return o;
         }},
        {10, "Thirring identities", 1.0,
         [] {
             const Record r = exec("thirring", cfg({"thirring.action=\"identities\"", "thirring.configs=1000"}));
             Outcome o = verdicts_only(r);
             o.pass = o.pass && r.values["max_exchange_defect"].get<double>() <= kIdentityTol &&
                      r.values["max_dual_scalar_defect"].get<double>() <= kIdentityTol;
             o.detail = fmt("exchange %.2g, dual/scalar %.2g, g(sqrt pi) %.2g", r.values["max_exchange_defect"].get<double>(),
                            r.values["max_dual_scalar_defect"].get<double>(), r.values["g_sqrt_pi"].get<double>());
             return o;
         }},
        {11, "Thirring OPE", 300.0,
         [] {
             json c = cfg({"thirring.action=\"ope\"", "thirring.rel_tol=" + std::to_string(kOpeTol)});
             c["thirring"]["alphas"] = {1.0, std::sqrt(sgl::kPi)};
             const Record r = exec("thirring", c);
             Outcome o = verdicts_only(r);
             std::string d;
             for (const auto& e : r.values["ope"])
                 d += fmt("alpha=%.4f: current %.2g, mass %.2g rel.err; ", e["alpha"].get<double>(),
                          e["current_rel_err"].get<double>(), e["mass_rel_err"].get<double>());
             o.detail = d;
             return o;
         }},
        {12, "determinism", 600.0,
         [] {
             const std::vector<std::pair<std::string, json>> runs{
                 {"propagator", cfg({"propagator.action=\"identities\"", "propagator.pairs=2000"})},
                 {"state", cfg({"state.action=\"dominance\"", "state.pairs=3", "quadrature.samples=20000"})},
                 {"smatrix", cfg({"smatrix.action=\"unitarity\"", "smatrix.seeds=1", "quadrature.samples=20000"})},
                 {"bogoliubov", cfg({"quadrature.samples=20000"})},
                 {"quasiequiv", cfg({"quasiequiv.action=\"airy\"", "quasiequiv.trials=3"})},
                 {"thirring", cfg({"thirring.configs=50"})},
             };
             bool ok = true;
             std::string d;
             for (const auto& [cmd, c] : runs) {
                 const std::string a = exec(cmd, c).values.dump(), b = exec(cmd, c).values.dump();
                 ok = ok && a == b;
                 d += cmd + (a == b ? " same; " : " DIFFERS; ");
             }
             return Outcome{ok, d};
         }},
    };
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = dt <= c.limit_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::printf("[%s] %2d %-34s %8.2f s (limit %g s%s)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), dt,
                    c.limit_s, in_time ? "" : ", EXCEEDED", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%s\n", failed ? "acceptance: FAILED" : "acceptance: all criteria passed");
    return failed ? 1 : 0;
}
