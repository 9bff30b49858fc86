#include "logconc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "logconc/errors.hpp"
#include "logconc/oracle.hpp"

namespace logconc {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kE = 2.718281828459045;

double want(const BoundInputs& in, const std::string& k) {
    auto it = in.scalars.find(k);
    if (it == in.scalars.end()) throw MissingInput("bounds: missing input '" + k + "'");
    return it->second;
}

double want_or(const BoundInputs& in, const std::string& k, double fallback) {
    auto it = in.scalars.find(k);
    return it == in.scalars.end() ? fallback : it->second;
}

const ProfileTable& want_profile(const BoundInputs& in, const std::string& k) {
    auto it = in.profiles.find(k);
    if (it == in.profiles.end() || it->second == nullptr)
        throw MissingInput("bounds: missing profile '" + k + "'");
    return *it->second;
}

BoundCertificate cert(const std::string& id, BoundTarget t,
                      std::map<std::string, double> used, bool ok, double value,
                      const std::string& diag = "") {
    BoundCertificate c;
    c.formula_id = id;
    c.target = t;
    c.inputs = std::move(used);
    c.preconditions_met = ok && std::isfinite(value) && value >= 0.0;
    c.value = c.preconditions_met ? value : kPosInf;
    c.diagnostics = c.preconditions_met ? "" : (diag.empty() ? "precondition failed" : diag);
    return c;
}

// coarse scan plus golden-section refinement of a scalar minimum
template <typename F>
double minimize_scalar(F f, double lo, double hi, int coarse = 200) {
    double best_x = lo, best = f(lo);
    for (int k = 1; k <= coarse; ++k) {
        const double x = lo + (hi - lo) * static_cast<double>(k) / coarse;
        const double v = f(x);
        if (v < best) {
            best = v;
            best_x = x;
        }
    }
    const double gr = 0.6180339887498949;
    double a = std::max(lo, best_x - (hi - lo) / coarse);
    double b = std::min(hi, best_x + (hi - lo) / coarse);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 > f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return f1 < f2 ? x1 : x2;
}

double fradelizi_w1_factor(double d) {
    // d (1 + 2d / ln(1/d)) for d in [0, 1)
    if (d <= 0.0) return 0.0;
    return d * (1.0 + 2.0 * d / std::log(1.0 / d));
}

struct Formula {
    FormulaInfo info;
    std::function<BoundCertificate(const BoundInputs&)> eval;
};

std::vector<Formula> build_catalog() {
    std::vector<Formula> fs;
    auto add = [&](FormulaInfo info, std::function<BoundCertificate(const BoundInputs&)> eval) {
        fs.push_back({std::move(info), std::move(eval)});
    };

    // --- comparisons between C_P and the Cheeger constants -----------------
    add({"cheeger_to_poincare", BoundTarget::C_P, {"cheeger"}, {}, "C_P <= 4 (C'_C)^2"},
        [](const BoundInputs& in) {
            const double ch = want(in, "cheeger");
            return cert("cheeger_to_poincare", BoundTarget::C_P, {{"cheeger", ch}}, ch >= 0.0,
                        4.0 * ch * ch);
        });
    add({"ledoux_reverse", BoundTarget::CheegerMedian, {"c_p"}, {},
         "C'_C <= 6 sqrt(C_P), log-concave"},
        [](const BoundInputs& in) {
            const double cp = want(in, "c_p");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("ledoux_reverse", BoundTarget::CheegerMedian, {{"c_p", cp}},
                        cp >= 0.0 && lc, 6.0 * std::sqrt(cp), "needs log-concavity");
        });
    add({"ledoux_improved", BoundTarget::CheegerMedian, {"c_p"}, {},
         "C'_C <= C_C <= (16/pi) sqrt(C_P), log-concave"},
        [](const BoundInputs& in) {
            const double cp = want(in, "c_p");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("ledoux_improved", BoundTarget::CheegerMedian, {{"c_p", cp}},
                        cp >= 0.0 && lc, (16.0 / kPi) * std::sqrt(cp), "needs log-concavity");
        });

    // --- weak (1,inf) machinery --------------------------------------------
    add({"weakmil_osc", BoundTarget::CheegerMedian, {"beta", "s"}, {},
         "C'_C <= 4 beta(s) / (pi (1/2 - s)^2), s < 1/2"},
        [](const BoundInputs& in) {
            const double beta = want(in, "beta"), s = want(in, "s");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("weakmil_osc", BoundTarget::CheegerMedian, {{"beta", beta}, {"s", s}},
                        beta >= 0.0 && s >= 0.0 && s < 0.5 && lc,
                        4.0 * beta / (kPi * (0.5 - s) * (0.5 - s)), "needs 0 <= s < 1/2");
        });
    add({"weakmil_var", BoundTarget::CheegerMedian, {"beta", "s"}, {},
         "C'_C <= 16 beta(s) / (pi (1 - s)^2), s < 1"},
        [](const BoundInputs& in) {
            const double beta = want(in, "beta"), s = want(in, "s");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("weakmil_var", BoundTarget::CheegerMedian, {{"beta", beta}, {"s", s}},
                        beta >= 0.0 && s >= 0.0 && s < 1.0 && lc,
                        16.0 * beta / (kPi * (1.0 - s) * (1.0 - s)), "needs 0 <= s < 1");
        });
    add({"weakmil_optimized", BoundTarget::CheegerMedian, {}, {"beta_profile"},
         "C'_C <= 4 / (pi (1/2 - s*)^4) at beta(s*) = (1/2 - s*)^-2"},
        [](const BoundInputs& in) {
            const ProfileTable& beta = want_profile(in, "beta_profile");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            auto excess = [&](double s) { return beta.value_at(s) - 1.0 / ((0.5 - s) * (0.5 - s)); };
            double lo = 1e-9, hi = 0.5 - 1e-9;
            double s_star = 0.0;
            if (excess(lo) > 0.0) {
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (excess(mid) > 0.0 ? lo : hi) = mid;
                }
                s_star = 0.5 * (lo + hi);
            }
            const double half = 0.5 - s_star;
            return cert("weakmil_optimized", BoundTarget::CheegerMedian, {{"s_star", s_star}}, lc,
                        4.0 / (kPi * half * half * half * half), "needs log-concavity");
        });
    add({"concentration_to_cheeger", BoundTarget::CheegerMedian, {}, {"alpha_profile"},
         "C'_C <= inf_s 16 alpha^{-1}(s) / (pi (1-4s)^2), 0 < s < 1/4"},
        [](const BoundInputs& in) {
            const ProfileTable& alpha = want_profile(in, "alpha_profile");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            auto f = [&](double s) {
                const double r = alpha.inverse(s);
                return 16.0 * r / (kPi * (1.0 - 4.0 * s) * (1.0 - 4.0 * s));
            };
            const double s = minimize_scalar(f, 1e-6, 0.25 - 1e-6);
            return cert("concentration_to_cheeger", BoundTarget::CheegerMedian, {{"s", s}}, lc,
                        f(s), "needs log-concavity");
        });
    add({"milman_profile", BoundTarget::CheegerMedian, {}, {"alpha_profile"},
         "C'_C <= alpha^{-1}(s) / (1 - 2s), s < 1/2 (s optimized when absent)"},
        [](const BoundInputs& in) {
            const ProfileTable& alpha = want_profile(in, "alpha_profile");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            auto f = [&](double s) { return alpha.inverse(s) / (1.0 - 2.0 * s); };
            double s;
            if (in.scalars.count("s")) {
                s = want(in, "s");
                if (!(s > 0.0 && s < 0.5))
                    return cert("milman_profile", BoundTarget::CheegerMedian, {{"s", s}}, false,
                                kPosInf, "needs 0 < s < 1/2");
            } else {
                s = minimize_scalar(f, 1e-6, 0.5 - 1e-6);
            }
            return cert("milman_profile", BoundTarget::CheegerMedian, {{"s", s}}, lc, f(s),
                        "needs log-concavity");
        });
    add({"first_moment", BoundTarget::CheegerMedian, {"first_abs_moment"}, {},
         "C'_C <= (16/pi) E|x - median|, log-concave"},
        [](const BoundInputs& in) {
            const double fam = want(in, "first_abs_moment");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("first_moment", BoundTarget::CheegerMedian,
                        {{"first_abs_moment", fam}}, fam >= 0.0 && lc, (16.0 / kPi) * fam,
                        "needs log-concavity");
        });
    add({"kls_variance", BoundTarget::C_P, {"variance"}, {},
         "C_P <= 4 Var(x), log-concave"},
        [](const BoundInputs& in) {
            const double var = want(in, "variance");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("kls_variance", BoundTarget::C_P, {{"variance", var}}, var >= 0.0 && lc,
                        4.0 * var, "needs log-concavity");
        });
    add({"kls_variance_companion", BoundTarget::C_P, {"variance"}, {},
         "C_P <= 484 Var(x), log-concave (recorded companion constant)"},
        [](const BoundInputs& in) {
            const double var = want(in, "variance");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("kls_variance_companion", BoundTarget::C_P, {{"variance", var}},
                        var >= 0.0 && lc, 484.0 * var, "needs log-concavity");
        });
    add({"radial_split", BoundTarget::CheegerMedian, {"radial_abs_dev", "dim_n"}, {},
         "C'_C <= (16/pi) * 2 (E||X|-sqrt(n)| + 1) via the s=0 oscillation bound"},
        [](const BoundInputs& in) {
            const double dev = want(in, "radial_abs_dev");
            const double n = want(in, "dim_n");
            if (!(n >= 2.0) || dev < 0.0)
                return cert("radial_split", BoundTarget::CheegerMedian,
                            {{"radial_abs_dev", dev}, {"dim_n", n}}, false, kPosInf,
                            "needs n >= 2 and a nonnegative deviation");
            const double beta0 = 2.0 * (dev + 1.0);  // sqrt(n) * sqrt(1/n) = 1
            BoundInputs sub;
            sub.set("beta", beta0).set("s", 0.0);
            BoundCertificate inner = evaluate("weakmil_osc", sub);
            BoundCertificate c = cert("radial_split", BoundTarget::CheegerMedian,
                                      {{"radial_abs_dev", dev}, {"dim_n", n}, {"beta0", beta0}},
                                      inner.preconditions_met, inner.value);
            c.chain.push_back(std::move(inner));
            return c;
        });
    add({"weak22_to_cheeger", BoundTarget::CheegerMedian, {"beta22", "s"}, {},
         "C'_C <= 4 sqrt(beta(s) ln 2) / (1 - 6s), s < 1/6"},
        [](const BoundInputs& in) {
            const double beta = want(in, "beta22"), s = want(in, "s");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("weak22_to_cheeger", BoundTarget::CheegerMedian,
                        {{"beta22", beta}, {"s", s}},
                        beta >= 0.0 && s >= 0.0 && s < 1.0 / 6.0 && lc,
                        4.0 * std::sqrt(beta * std::log(2.0)) / (1.0 - 6.0 * s),
                        "needs 0 <= s < 1/6");
        });

    // --- support reduction ---------------------------------------------------
    add({"restriction", BoundTarget::CheegerMedian, {"mass_a", "cheeger_restricted"}, {},
         "C'_C(nu) <= nu(A) C'_C(nu_A) / (2 nu(A) - 1), nu(A) > 1/2"},
        [](const BoundInputs& in) {
            const double ma = want(in, "mass_a"), ch = want(in, "cheeger_restricted");
            return cert("restriction", BoundTarget::CheegerMedian,
                        {{"mass_a", ma}, {"cheeger_restricted", ch}},
                        ma > 0.5 && ma <= 1.0 && ch >= 0.0, ma * ch / (2.0 * ma - 1.0),
                        "needs nu(A) > 1/2");
        });
    add({"restriction_weak", BoundTarget::CheegerMedian, {"mass_a", "beta_restricted", "u"}, {},
         "C'_C <= 4 nu(A) beta_{nu_A}(u) / (pi ((1-u) nu(A) - 1/2)^2)"},
        [](const BoundInputs& in) {
            const double ma = want(in, "mass_a"), beta = want(in, "beta_restricted");
            const double u = want(in, "u");
            const double margin = (1.0 - u) * ma - 0.5;
            return cert("restriction_weak", BoundTarget::CheegerMedian,
                        {{"mass_a", ma}, {"beta_restricted", beta}, {"u", u}},
                        ma > 0.5 && ma <= 1.0 && u >= 0.0 && beta >= 0.0 && margin > 0.0,
                        4.0 * ma * beta / (kPi * margin * margin),
                        "needs (1-u) nu(A) > 1/2");
        });
    add({"l2_truncation", BoundTarget::CheegerMedian, {"a_trunc", "cheeger_truncated"}, {},
         "C'_C(Z) <= a^2/(a^2-2) C'_C(Z(a)), a > sqrt(2)"},
        [](const BoundInputs& in) {
            const double a = want(in, "a_trunc"), ch = want(in, "cheeger_truncated");
            return cert("l2_truncation", BoundTarget::CheegerMedian,
                        {{"a_trunc", a}, {"cheeger_truncated", ch}},
                        a > std::sqrt(2.0) && ch >= 0.0, a * a / (a * a - 2.0) * ch,
                        "needs a > sqrt(2)");
        });
    add({"linf_truncation", BoundTarget::CheegerMedian,
         {"dim_n", "a_exp", "epsilon", "cheeger_truncated"}, {},
         "C'_C(nu) <= n^{a-1} / (n^{a-1} - (8-2eps)/eps) C'_C(nu_{K_a}), n >= 2"},
        [](const BoundInputs& in) {
            const double n = want(in, "dim_n"), a = want(in, "a_exp");
            const double eps = want(in, "epsilon"), ch = want(in, "cheeger_truncated");
            const double na = std::pow(n, a - 1.0);
            const double loss = (8.0 - 2.0 * eps) / eps;
            return cert("linf_truncation", BoundTarget::CheegerMedian,
                        {{"dim_n", n}, {"a_exp", a}, {"epsilon", eps},
                         {"cheeger_truncated", ch}},
                        n >= 2.0 && eps > 0.0 && eps <= 1.0 && na > loss && ch >= 0.0,
                        na / (na - loss) * ch, "needs n^{a-1} > (8-2eps)/eps");
        });
    add({"latala_tail", BoundTarget::tail, {"dim_n", "t", "epsilon"}, {},
         "P(max_i |Z_i| >= t ln n) <= ((8-2eps)/eps) n^{1 - (2-eps) t / (2 sqrt 3)}"},
        [](const BoundInputs& in) {
            const double n = want(in, "dim_n"), t = want(in, "t"), eps = want(in, "epsilon");
            const double tmin = 2.0 * std::sqrt(3.0) / (2.0 - eps);
            const double expo = (2.0 - eps) * t / (2.0 * std::sqrt(3.0)) - 1.0;
            return cert("latala_tail", BoundTarget::tail,
                        {{"dim_n", n}, {"t", t}, {"epsilon", eps}},
                        n >= 2.0 && eps > 0.0 && eps <= 1.0 && t >= tmin,
                        (8.0 - 2.0 * eps) / eps * std::pow(n, -expo),
                        "needs t >= 2 sqrt(3) / (2 - eps)");
        });
    add({"bobkov_1d", BoundTarget::C_P, {"variance"}, {},
         "C_P(nu_1) <= 12 Var(Z_1) for a log-concave 1D marginal"},
        [](const BoundInputs& in) {
            const double var = want(in, "variance");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("bobkov_1d", BoundTarget::C_P, {{"variance", var}}, var >= 0.0 && lc,
                        12.0 * var, "needs log-concavity");
        });

    // --- transference ---------------------------------------------------------
    add({"density_ratio_classic", BoundTarget::C_P,
         {"ratio_nu_over_mu", "ratio_mu_over_nu", "c_p_ref"}, {},
         "C_P(nu) <= ||dnu/dmu||_inf ||dmu/dnu||_inf C_P(mu)"},
        [](const BoundInputs& in) {
            const double r1 = want(in, "ratio_nu_over_mu"), r2 = want(in, "ratio_mu_over_nu");
            const double cp = want(in, "c_p_ref");
            return cert("density_ratio_classic", BoundTarget::C_P,
                        {{"ratio_nu_over_mu", r1}, {"ratio_mu_over_nu", r2}, {"c_p_ref", cp}},
                        std::isfinite(r1) && std::isfinite(r2) && r1 > 0.0 && r2 > 0.0 &&
                            cp >= 0.0,
                        r1 * r2 * cp, "needs bounded density ratios");
        });
    add({"transfer_lp", BoundTarget::CheegerMedian, {"m_p", "p", "c_ref"}, {},
         "C'_C(nu) <= D C(mu) M_p^{p/(p-1)}, D = 16 (p+1)^{1/(p-1)} / (pi (1/2 - 1/(p+1))^2)"},
        [](const BoundInputs& in) {
            const double mp = want(in, "m_p"), p = want(in, "p"), cr = want(in, "c_ref");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            if (!(p > 1.0) || !(mp >= 0.0) || !(cr >= 0.0) || !lc)
                return cert("transfer_lp", BoundTarget::CheegerMedian,
                            {{"m_p", mp}, {"p", p}, {"c_ref", cr}}, false, kPosInf,
                            "needs p > 1 and log-concavity");
            const double half_gap = 0.5 - 1.0 / (p + 1.0);
            const double d = 16.0 * std::pow(p + 1.0, 1.0 / (p - 1.0)) /
                             (kPi * half_gap * half_gap);
            return cert("transfer_lp", BoundTarget::CheegerMedian,
                        {{"m_p", mp}, {"p", p}, {"c_ref", cr}}, true,
                        d * cr * std::pow(mp, p / (p - 1.0)));
        });
    add({"transfer_entropy", BoundTarget::CheegerMedian, {"entropy", "u", "c_ref"}, {},
         "C'_C(nu) <= 4 (e^{2 max(1, D)/u} - 1) / (pi (1/2 - u)^2) C(mu), u < 1/2"},
        [](const BoundInputs& in) {
            const double ent = want(in, "entropy"), u = want(in, "u"), cr = want(in, "c_ref");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            const double expo = 2.0 * std::max(1.0, ent) / u;
            const bool ok = ent >= 0.0 && u > 0.0 && u < 0.5 && cr >= 0.0 && lc && expo < 700.0;
            return cert("transfer_entropy", BoundTarget::CheegerMedian,
                        {{"entropy", ent}, {"u", u}, {"c_ref", cr}}, ok,
                        ok ? 4.0 * std::expm1(expo) / (kPi * (0.5 - u) * (0.5 - u)) * cr
                           : kPosInf,
                        "needs 0 < u < 1/2 (and a representable exponent)");
        });
    add({"transfer_lp_bis", BoundTarget::CheegerMedian, {"m_p", "p", "c_p_ref"}, {},
         "C'_C(nu) <= (16 sqrt p / (pi sqrt(p-1))) 8^{p/(2(p-1))} sqrt(C_P(mu)) M_p, 1 < p <= 2"},
        [](const BoundInputs& in) {
            const double mp = want(in, "m_p"), p = want(in, "p"), cp = want(in, "c_p_ref");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            const double expo = std::log(8.0) * p / (2.0 * (p - 1.0));
            const bool ok = p > 1.0 && p <= 2.0 && mp >= 0.0 && cp >= 0.0 && lc && expo < 700.0;
            return cert("transfer_lp_bis", BoundTarget::CheegerMedian,
                        {{"m_p", mp}, {"p", p}, {"c_p_ref", cp}}, ok,
                        ok ? 16.0 * std::sqrt(p) / (kPi * std::sqrt(p - 1.0)) * std::exp(expo) *
                                 std::sqrt(cp) * mp
                           : kPosInf,
                        "needs 1 < p <= 2");
        });
    add({"transfer_entropy_bis", BoundTarget::CheegerMedian, {"entropy", "c_p_ref"}, {},
         "C'_C(nu) <= (32/pi) sqrt(C_P(mu)) max(1, 3 e^{sqrt(C_P(mu))}) max(1, D(nu||mu))"},
        [](const BoundInputs& in) {
            const double ent = want(in, "entropy"), cp = want(in, "c_p_ref");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            const bool ok = ent >= 0.0 && cp >= 0.0 && lc && std::sqrt(cp) < 700.0;
            return cert("transfer_entropy_bis", BoundTarget::CheegerMedian,
                        {{"entropy", ent}, {"c_p_ref", cp}}, ok,
                        ok ? 32.0 / kPi * std::sqrt(cp) *
                                 std::max(1.0, 3.0 * std::exp(std::sqrt(cp))) *
                                 std::max(1.0, ent)
                           : kPosInf,
                        "needs log-concavity");
        });
    add({"milman_density", BoundTarget::CheegerMedian, {"ratio_mu_over_nu", "cheeger_ref"}, {},
         "C'_C(nu) <= ||dmu/dnu||_inf^2 C'_C(mu), both log-concave"},
        [](const BoundInputs& in) {
            const double r = want(in, "ratio_mu_over_nu"), ch = want(in, "cheeger_ref");
            const bool lc = want_or(in, "both_log_concave", 1.0) > 0.5;
            return cert("milman_density", BoundTarget::CheegerMedian,
                        {{"ratio_mu_over_nu", r}, {"cheeger_ref", ch}},
                        std::isfinite(r) && r > 0.0 && ch >= 0.0 && lc, r * r * ch,
                        "needs both measures log-concave and a bounded ratio");
        });
    add({"barthe_milman_alpha", BoundTarget::alpha_profile, {"m_p", "p", "r"}, {"alpha_ref"},
         "alpha_nu(r) <= 2 M_p alpha_mu(r/2)^{1/q}, q = p/(p-1)"},
        [](const BoundInputs& in) {
            const double mp = want(in, "m_p"), p = want(in, "p"), r = want(in, "r");
            const ProfileTable& alpha = want_profile(in, "alpha_ref");
            const bool ok = p > 1.0 && mp >= 1.0 - 1e-9 && r >= 0.0;
            const double q = p / (p - 1.0);
            return cert("barthe_milman_alpha", BoundTarget::alpha_profile,
                        {{"m_p", mp}, {"p", p}, {"r", r}}, ok,
                        ok ? 2.0 * mp * std::pow(alpha.value_at(0.5 * r), 1.0 / q) : kPosInf,
                        "needs p > 1 and M_p >= 1");
        });
    add({"barthe_milman_cheeger", BoundTarget::CheegerMedian, {"m_p", "p"}, {"alpha_ref"},
         "C'_C(nu) <= inf_s 32 alpha_mu^{-1}((s/2M_p)^q) / (pi (1-4s)^2), 0 < s < 1/4"},
        [](const BoundInputs& in) {
            const double mp = want(in, "m_p"), p = want(in, "p");
            const ProfileTable& alpha = want_profile(in, "alpha_ref");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            if (!(p > 1.0) || !(mp >= 1.0 - 1e-9) || !lc)
                return cert("barthe_milman_cheeger", BoundTarget::CheegerMedian,
                            {{"m_p", mp}, {"p", p}}, false, kPosInf,
                            "needs p > 1, M_p >= 1, log-concavity");
            const double q = p / (p - 1.0);
            auto f = [&](double s) {
                const double y = std::pow(s / (2.0 * mp), q);
                const double r = alpha.inverse(y);
                return 32.0 * r / (kPi * (1.0 - 4.0 * s) * (1.0 - 4.0 * s));
            };
            const double s = minimize_scalar(f, 1e-6, 0.25 - 1e-6);
            return cert("barthe_milman_cheeger", BoundTarget::CheegerMedian,
                        {{"m_p", mp}, {"p", p}, {"s", s}}, true, f(s));
        });
    add({"tv_transference", BoundTarget::CheegerMedian, {"d_tv", "cheeger_ref"}, {},
         "C'_C(nu) <= (192 e / pi) eps^-2 max(1, ln(1/eps)) C'_C(mu), eps = 1 - d_TV"},
        [](const BoundInputs& in) {
            const double d = want(in, "d_tv"), ch = want(in, "cheeger_ref");
            const bool lc = want_or(in, "both_log_concave", 1.0) > 0.5;
            const double eps = 1.0 - d;
            return cert("tv_transference", BoundTarget::CheegerMedian,
                        {{"d_tv", d}, {"cheeger_ref", ch}},
                        d >= 0.0 && d < 1.0 && ch >= 0.0 && lc,
                        (192.0 * kE / kPi) / (eps * eps) * std::max(1.0, std::log(1.0 / eps)) *
                            ch,
                        "needs d_TV < 1 and both measures log-concave");
        });
    add({"w1_weak_beta", BoundTarget::beta_profile, {"w1", "s"}, {"beta_ref"},
         "beta_nu(s) <= beta_mu(s) + 2 W_1"},
        [](const BoundInputs& in) {
            const double w = want(in, "w1"), s = want(in, "s");
            const ProfileTable& beta = want_profile(in, "beta_ref");
            return cert("w1_weak_beta", BoundTarget::beta_profile, {{"w1", w}, {"s", s}},
                        w >= 0.0 && s >= 0.0, beta.value_at(s) + 2.0 * w);
        });
    add({"w1_weak", BoundTarget::CheegerMedian, {"w1", "c_c_ref"}, {},
         "C'_C(nu) <= (16/pi) (C_C(mu) + 2 W_1)"},
        [](const BoundInputs& in) {
            const double w = want(in, "w1"), cc = want(in, "c_c_ref");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("w1_weak", BoundTarget::CheegerMedian, {{"w1", w}, {"c_c_ref", cc}},
                        w >= 0.0 && cc >= 0.0 && lc, 16.0 / kPi * (cc + 2.0 * w),
                        "needs log-concavity");
        });
    add({"tv_weak_beta", BoundTarget::beta_profile, {"d_tv", "s_prime"}, {"beta_ref"},
         "beta_nu(s') <= beta_mu(s' - 2 d_TV), s' > 2 d_TV"},
        [](const BoundInputs& in) {
            const double d = want(in, "d_tv"), sp = want(in, "s_prime");
            const ProfileTable& beta = want_profile(in, "beta_ref");
            return cert("tv_weak_beta", BoundTarget::beta_profile,
                        {{"d_tv", d}, {"s_prime", sp}}, d >= 0.0 && sp > 2.0 * d,
                        beta.value_at(sp - 2.0 * d), "needs s' > 2 d_TV");
        });
    add({"tv_weak", BoundTarget::CheegerMedian, {"d_tv", "s", "beta_s"}, {},
         "C'_C(nu) <= 16 beta_mu(s) / (pi (1 - 2s - 4 d_TV)^2), d_TV <= 1/4"},
        [](const BoundInputs& in) {
            const double d = want(in, "d_tv"), s = want(in, "s"), beta = want(in, "beta_s");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            const double margin = 1.0 - 2.0 * s - 4.0 * d;
            return cert("tv_weak", BoundTarget::CheegerMedian,
                        {{"d_tv", d}, {"s", s}, {"beta_s", beta}},
                        d >= 0.0 && d <= 0.25 && s >= 0.0 && beta >= 0.0 && margin > 0.0 && lc,
                        16.0 * beta / (kPi * margin * margin),
                        "needs d_TV <= 1/4 and s < 1/2 - 2 d_TV");
        });
    add({"dud_weak_beta", BoundTarget::beta_profile, {"d_dud", "s_prime"}, {"beta_ref"},
         "beta_nu(s') <= beta_mu(s' - 2 d_Dud) + 2 d_Dud"},
        [](const BoundInputs& in) {
            const double d = want(in, "d_dud"), sp = want(in, "s_prime");
            const ProfileTable& beta = want_profile(in, "beta_ref");
            return cert("dud_weak_beta", BoundTarget::beta_profile,
                        {{"d_dud", d}, {"s_prime", sp}}, d >= 0.0 && sp > 2.0 * d,
                        beta.value_at(sp - 2.0 * d) + 2.0 * d, "needs s' > 2 d_Dud");
        });
    add({"dud_weak", BoundTarget::CheegerMedian, {"d_dud", "s", "beta_s"}, {},
         "C'_C(nu) <= 16 (beta_mu(s) + 2 d_Dud) / (pi (1 - 2s - 4 d_Dud)^2)"},
        [](const BoundInputs& in) {
            const double d = want(in, "d_dud"), s = want(in, "s"), beta = want(in, "beta_s");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            const double margin = 1.0 - 2.0 * s - 4.0 * d;
            return cert("dud_weak", BoundTarget::CheegerMedian,
                        {{"d_dud", d}, {"s", s}, {"beta_s", beta}},
                        d >= 0.0 && s >= 0.0 && beta >= 0.0 && margin > 0.0 && lc,
                        16.0 * (beta + 2.0 * d) / (kPi * margin * margin),
                        "needs s < 1/2 - 2 d_Dud");
        });

    // --- mollification family ---------------------------------------------------
    add({"mollify_interpolation", BoundTarget::C_P, {"lambda", "c_p_z", "c_p_x"}, {},
         "C_P(sqrt(l) Z + sqrt(1-l) X) <= l C_P(Z) + (1-l) C_P(X)"},
        [](const BoundInputs& in) {
            const double l = want(in, "lambda"), cz = want(in, "c_p_z"), cx = want(in, "c_p_x");
            return cert("mollify_interpolation", BoundTarget::C_P,
                        {{"lambda", l}, {"c_p_z", cz}, {"c_p_x", cx}},
                        l >= 0.0 && l <= 1.0 && cz >= 0.0 && cx >= 0.0,
                        l * cz + (1.0 - l) * cx, "needs lambda in [0, 1]");
        });
    add({"mollify_additive", BoundTarget::C_P, {"c_p_z", "c_p_x"}, {},
         "C_P(Z + X) <= C_P(Z) + C_P(X)"},
        [](const BoundInputs& in) {
            const double cz = want(in, "c_p_z"), cx = want(in, "c_p_x");
            return cert("mollify_additive", BoundTarget::C_P, {{"c_p_z", cz}, {"c_p_x", cx}},
                        cz >= 0.0 && cx >= 0.0, cz + cx);
        });
    add({"klartag_cube", BoundTarget::C_P, {"r_ratio", "theta"}, {},
         "C_P <= (20/9) R^2 theta^2 on the cube theta*Q, R >= 1"},
        [](const BoundInputs& in) {
            const double r = want(in, "r_ratio"), th = want(in, "theta");
            return cert("klartag_cube", BoundTarget::C_P, {{"r_ratio", r}, {"theta", th}},
                        r >= 1.0 && th > 0.0, 20.0 / 9.0 * r * r * th * th, "needs R >= 1");
        });
    add({"uniform_convolution", BoundTarget::C_P, {"theta"}, {},
         "C_P(nu_{theta,1}) <= (20/9) (theta - 1)^2, theta > 1"},
        [](const BoundInputs& in) {
            const double th = want(in, "theta");
            return cert("uniform_convolution", BoundTarget::C_P, {{"theta", th}}, th > 1.0,
                        20.0 / 9.0 * (th - 1.0) * (th - 1.0), "needs theta > 1");
        });
    add({"gaussian_convolution_restricted", BoundTarget::C_P, {"beta", "theta"}, {},
         "C_P(nu_{beta,theta}) <= (20/9) theta^2 e^{theta^2 / (8 beta^2)}"},
        [](const BoundInputs& in) {
            const double b = want(in, "beta"), th = want(in, "theta");
            const double expo = th * th / (8.0 * b * b);
            return cert("gaussian_convolution_restricted", BoundTarget::C_P,
                        {{"beta", b}, {"theta", th}}, b > 0.0 && th > 0.0 && expo < 700.0,
                        20.0 / 9.0 * th * th * std::exp(expo), "needs positive beta, theta");
        });
    add({"demollification", BoundTarget::C_P, {"lambda", "c_p_mix"}, {},
         "C_P(Z) <= (1/l) C_P(sqrt(l) Z + sqrt(1-l) G) + (1/l - 1), 0 < l <= 1"},
        [](const BoundInputs& in) {
            const double l = want(in, "lambda"), cm = want(in, "c_p_mix");
            return cert("demollification", BoundTarget::C_P, {{"lambda", l}, {"c_p_mix", cm}},
                        l > 0.0 && l <= 1.0 && cm >= 0.0, cm / l + (1.0 / l - 1.0),
                        "needs lambda in (0, 1]");
        });
    add({"demollification_affine", BoundTarget::C_P, {"alpha", "beta", "c_p_mix"}, {},
         "C_P(Z) <= (1/a^2) C_P(a Z + b G) + b^2/a^2"},
        [](const BoundInputs& in) {
            const double a = want(in, "alpha"), b = want(in, "beta"), cm = want(in, "c_p_mix");
            return cert("demollification_affine", BoundTarget::C_P,
                        {{"alpha", a}, {"beta", b}, {"c_p_mix", cm}}, a != 0.0 && cm >= 0.0,
                        cm / (a * a) + b * b / (a * a), "needs alpha != 0");
        });
    add({"demollification_cheeger", BoundTarget::CheegerMedian,
         {"alpha", "beta", "cheeger_mix"}, {},
         "C'_C(Z) <= (12/a) C'_C(a Z + b G) + 6 b / a"},
        [](const BoundInputs& in) {
            const double a = want(in, "alpha"), b = want(in, "beta"), ch = want(in, "cheeger_mix");
            return cert("demollification_cheeger", BoundTarget::CheegerMedian,
                        {{"alpha", a}, {"beta", b}, {"cheeger_mix", ch}},
                        a > 0.0 && b >= 0.0 && ch >= 0.0, 12.0 / a * ch + 6.0 * b / a,
                        "needs alpha > 0");
        });
    add({"beta_convolution", BoundTarget::beta_profile, {"s"}, {"beta_a", "beta_b"},
         "beta_{mu*nu}(s) <= beta_mu(s/2) + beta_nu(s/2) (mean centering)"},
        [](const BoundInputs& in) {
            const double s = want(in, "s");
            const ProfileTable& ba = want_profile(in, "beta_a");
            const ProfileTable& bb = want_profile(in, "beta_b");
            return cert("beta_convolution", BoundTarget::beta_profile, {{"s", s}}, s > 0.0,
                        ba.value_at(0.5 * s) + bb.value_at(0.5 * s));
        });

    // --- bounded-Lipschitz and Levy-Prokhorov comparisons -------------------------
    add({"bl_to_cheeger", BoundTarget::CheegerMedian, {"d_bl_gaussian"}, {},
         "C'_C(nu) <= (13824 e / pi) eps^-2 max(1, ln(1/eps)) + 6, eps = 1 - d_BL(nu, gamma)"},
        [](const BoundInputs& in) {
            const double d = want(in, "d_bl_gaussian");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            const double eps = 1.0 - d;
            return cert("bl_to_cheeger", BoundTarget::CheegerMedian, {{"d_bl_gaussian", d}},
                        d >= 0.0 && d < 1.0 && lc,
                        13824.0 * kE / kPi / (eps * eps) * std::max(1.0, std::log(1.0 / eps)) +
                            6.0,
                        "needs d_BL < 1 and log-concavity");
        });
    add({"bl_to_cheeger_pair", BoundTarget::CheegerMedian, {"d_bl", "cheeger_ref"}, {},
         "C'_C(nu) <= 6 (13824 e / pi) eps^-2 max(1, ln(1/eps)) (2 C'_C(mu) + 1) + 6"},
        [](const BoundInputs& in) {
            const double d = want(in, "d_bl"), ch = want(in, "cheeger_ref");
            const bool lc = want_or(in, "both_log_concave", 1.0) > 0.5;
            const double eps = 1.0 - d;
            return cert("bl_to_cheeger_pair", BoundTarget::CheegerMedian,
                        {{"d_bl", d}, {"cheeger_ref", ch}},
                        d >= 0.0 && d < 1.0 && ch >= 0.0 && lc,
                        6.0 * 13824.0 * kE / kPi / (eps * eps) *
                                std::max(1.0, std::log(1.0 / eps)) * (2.0 * ch + 1.0) +
                            6.0,
                        "needs d_BL < 1 and both measures log-concave");
        });
    add({"semigroup_tv_contraction", BoundTarget::distance, {"w1", "t_time"}, {},
         "d_TV(G_T nu, G_T mu) <= e^{-T/2} / sqrt(2 pi (1 - e^{-T})) W_1(nu, mu)"},
        [](const BoundInputs& in) {
            const double w = want(in, "w1"), t = want(in, "t_time");
            return cert("semigroup_tv_contraction", BoundTarget::distance,
                        {{"w1", w}, {"t_time", t}}, w >= 0.0 && t > 0.0,
                        std::exp(-0.5 * t) / std::sqrt(2.0 * kPi * (-std::expm1(-t))) * w,
                        "needs T > 0");
        });
    add({"semigroup_w1_contraction", BoundTarget::distance, {"w1", "t_time"}, {},
         "W_1(G_T nu, G_T mu) <= e^{-T/2} W_1(nu, mu)"},
        [](const BoundInputs& in) {
            const double w = want(in, "w1"), t = want(in, "t_time");
            return cert("semigroup_w1_contraction", BoundTarget::distance,
                        {{"w1", w}, {"t_time", t}}, w >= 0.0 && t >= 0.0,
                        std::exp(-0.5 * t) * w, "needs T >= 0");
        });
    add({"lp_to_w1", BoundTarget::distance, {"d_lp"}, {},
         "W_1 <= d_LP (1 + 2 d_LP / ln(1/d_LP)), both log-concave, d_LP < 1"},
        [](const BoundInputs& in) {
            const double d = want(in, "d_lp");
            const bool lc = want_or(in, "both_log_concave", 1.0) > 0.5;
            return cert("lp_to_w1", BoundTarget::distance, {{"d_lp", d}},
                        d >= 0.0 && d < 1.0 && lc, fradelizi_w1_factor(d),
                        "needs d_LP < 1 and log-concavity");
        });
    add({"lp_to_cheeger", BoundTarget::CheegerMedian, {"d_lp", "c_c_ref"}, {},
         "C'_C(nu) <= (16/pi) (C_C(mu) + 2 d_LP (1 + 2 d_LP / ln(1/d_LP)))"},
        [](const BoundInputs& in) {
            const double d = want(in, "d_lp"), cc = want(in, "c_c_ref");
            const bool lc = want_or(in, "both_log_concave", 1.0) > 0.5;
            return cert("lp_to_cheeger", BoundTarget::CheegerMedian,
                        {{"d_lp", d}, {"c_c_ref", cc}}, d >= 0.0 && d < 1.0 && cc >= 0.0 && lc,
                        16.0 / kPi * (cc + 2.0 * fradelizi_w1_factor(d)),
                        "needs d_LP < 1 and log-concavity");
        });
    add({"lp_semigroup", BoundTarget::distance, {"d_lp_initial", "t_time"}, {},
         "d_LP(G_T nu, gamma) <= e^{-T/4} sqrt(d (1 + 2 d / ln(1/d))), d = d_LP(gamma, nu)"},
        [](const BoundInputs& in) {
            const double d = want(in, "d_lp_initial"), t = want(in, "t_time");
            const bool lc = want_or(in, "log_concave", 1.0) > 0.5;
            return cert("lp_semigroup", BoundTarget::distance,
                        {{"d_lp_initial", d}, {"t_time", t}},
                        d >= 0.0 && d < 1.0 && t >= 0.0 && lc,
                        std::exp(-0.25 * t) * std::sqrt(fradelizi_w1_factor(d)),
                        "needs d_LP < 1 and log-concavity");
        });
    add({"kyfan_expectation", BoundTarget::distance, {"kyfan"}, {},
         "E|X - Y| <= K (1 + 2 K / ln(1/K)), K < 1"},
        [](const BoundInputs& in) {
            const double k = want(in, "kyfan");
            const bool lc = want_or(in, "both_log_concave", 1.0) > 0.5;
            return cert("kyfan_expectation", BoundTarget::distance, {{"kyfan", k}},
                        k >= 0.0 && k < 1.0 && lc, fradelizi_w1_factor(k),
                        "needs K < 1 and log-concavity");
        });

    return fs;
}

const std::vector<Formula>& catalog_impl() {
    static const std::vector<Formula> fs = build_catalog();
    return fs;
}

}  // namespace

std::string target_name(BoundTarget t) {
    switch (t) {
        case BoundTarget::C_P: return "C_P";
        case BoundTarget::CheegerMedian: return "C'_C";
        case BoundTarget::CheegerMean: return "C_C";
        case BoundTarget::beta_profile: return "beta_profile";
        case BoundTarget::alpha_profile: return "alpha_profile";
        case BoundTarget::tail: return "tail";
        case BoundTarget::distance: return "distance";
    }
    return "?";
}

const std::vector<FormulaInfo>& formula_catalog() {
    static const std::vector<FormulaInfo> infos = [] {
        std::vector<FormulaInfo> out;
        for (const Formula& f : catalog_impl()) out.push_back(f.info);
        return out;
    }();
    return infos;
}

BoundCertificate evaluate(const std::string& formula_id, const BoundInputs& in) {
    for (const Formula& f : catalog_impl()) {
        if (f.info.id != formula_id) continue;
        for (const std::string& k : f.info.scalar_inputs)
            if (!in.scalars.count(k))
                throw MissingInput("evaluate(" + formula_id + "): missing input '" + k + "'");
        for (const std::string& k : f.info.profile_inputs)
            if (!in.profiles.count(k) || in.profiles.at(k) == nullptr)
                throw MissingInput("evaluate(" + formula_id + "): missing profile '" + k + "'");
        return f.eval(in);
    }
    throw UnknownFormula("evaluate: unknown formula '" + formula_id + "'");
}

bool verify_against_oracle(const BoundCertificate& cert, double oracle_value, double slack,
                           double* tightness) {
    if (!cert.preconditions_met)
        throw InvalidParameter("verify_against_oracle: inert certificate (" + cert.formula_id +
                               ")");
    if (!(oracle_value > 0.0))
        throw InvalidParameter("verify_against_oracle: oracle value must be positive");
    if (tightness) *tightness = cert.value / oracle_value;
    return cert.value >= oracle_value * (1.0 - slack);
}

// ---------------------------------------------------------------------------
// Context helpers

double weak22_beta(const GridMeasure& m, double s) {
    if (!(s >= 0.0) || s >= 1.0) throw InvalidParameter("weak22_beta: s out of range");
    DensityModel model(m);
    const double total = model.total_mass();
    const double center = model.quantile(0.5);
    const double span = std::max(m.xmax() - center, center - m.xmin());
    auto two_sided_tail = [&](double radius) {
        const double inside =
            model.mass_between(center - radius, center + radius) / total;
        return 1.0 - inside;
    };
    double radius = span;
    if (2.0 * two_sided_tail(0.0) > s) {
        double lo = 0.0, hi = span;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (2.0 * two_sided_tail(mid) > s ? lo : hi) = mid;
        }
        radius = hi;
    } else {
        radius = 0.0;
    }
    // oscillation of the potential over [center - R, center + R]
    double vmin = kPosInf, vmax = -kPosInf;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double x = m.node(i);
        if (x < center - radius || x > center + radius) continue;
        const double ld = m.log_density[i];
        if (!(ld > kNegInf)) continue;
        vmin = std::min(vmin, -ld);
        vmax = std::max(vmax, -ld);
    }
    if (!(vmax >= vmin)) return 0.0;
    const double osc = vmax - vmin;
    if (osc > 690.0) return kPosInf;
    return 4.0 * radius * radius / (kPi * kPi) * std::exp(osc);
}

double sup_density_ratio(const GridMeasure& a, const GridMeasure& b) {
    DensityModel ma(a), mb(b);
    const double la_norm = std::log(ma.total_mass()), lb_norm = std::log(mb.total_mass());
    double sup = 0.0;
    auto visit = [&](double x) {
        const double la = ma.log_pdf(x) - la_norm;
        const double lb = mb.log_pdf(x) - lb_norm;
        if (!(la > kNegInf)) return;
        if (!(lb > kNegInf)) {
            sup = kPosInf;
            return;
        }
        sup = std::max(sup, std::exp(la - lb));
    };
    for (std::size_t i = 0; i < a.size(); ++i) visit(a.node(i));
    for (std::size_t i = 0; i < b.size(); ++i) visit(b.node(i));
    return sup;
}

double c_c_upper(double cheeger_median, double c_p) {
    return std::min(2.0 * cheeger_median, 16.0 / kPi * std::sqrt(c_p));
}

// ---------------------------------------------------------------------------
// best_bound

namespace {

void offer(std::vector<BoundCertificate>& cands, BoundCertificate c) {
    if (c.preconditions_met && std::isfinite(c.value)) cands.push_back(std::move(c));
}

std::optional<double> c_c_ref_bound(const ReferenceContext& ref) {
    if (ref.cheeger && ref.c_p) return c_c_upper(*ref.cheeger, *ref.c_p);
    if (ref.cheeger) return 2.0 * *ref.cheeger;
    if (ref.c_p) return 16.0 / kPi * std::sqrt(*ref.c_p);
    return std::nullopt;
}

std::optional<double> c_ref_choice(const ReferenceContext& ref) {
    // C(mu): minimum over the admissible choices available from oracles
    std::optional<double> best;
    if (ref.cheeger) best = *ref.cheeger;
    if (ref.c_p) {
        const double v = std::sqrt(*ref.c_p);
        if (!best || v < *best) best = v;
    }
    return best;
}

BoundCertificate best_cheeger_bound(const GridMeasure& m, const BoundContext& ctx) {
    std::vector<BoundCertificate> cands;
    const double lc = m.is_log_concave ? 1.0 : 0.0;

    DensityModel model(m);
    const double med = model.quantile(0.5);
    const double fam = grid_abs_moment_about(m, med);
    offer(cands, evaluate("first_moment", BoundInputs{}
                                              .set("first_abs_moment", fam)
                                              .set("log_concave", lc)));

    if (ctx.own_c_p) {
        offer(cands, evaluate("ledoux_improved",
                              BoundInputs{}.set("c_p", *ctx.own_c_p).set("log_concave", lc)));
        offer(cands, evaluate("ledoux_reverse",
                              BoundInputs{}.set("c_p", *ctx.own_c_p).set("log_concave", lc)));
    }

    std::optional<ProfileTable> beta_med;
    if (ctx.own_concentration) {
        beta_med = weak_beta_from_profile(*ctx.own_concentration, Centering::median);
        BoundInputs alpha_in;
        alpha_in.set("log_concave", lc).set_profile("alpha_profile", &*ctx.own_concentration);
        offer(cands, evaluate("concentration_to_cheeger", alpha_in));
        offer(cands, evaluate("milman_profile", alpha_in));
        BoundInputs beta_in;
        beta_in.set("log_concave", lc).set_profile("beta_profile", &*beta_med);
        offer(cands, evaluate("weakmil_optimized", beta_in));
        // entry 4 with the optimized s
        BoundCertificate best_osc;
        for (int k = 0; k < 200; ++k) {
            const double s = 0.5 * (static_cast<double>(k) + 0.5) / 200.0;
            BoundCertificate c = evaluate("weakmil_osc", BoundInputs{}
                                                             .set("beta", beta_med->value_at(s))
                                                             .set("s", s)
                                                             .set("log_concave", lc));
            if (c.preconditions_met && c.value < best_osc.value) best_osc = std::move(c);
        }
        offer(cands, std::move(best_osc));
    }

    {
        // weak (2,2) Holley-Stroock route, optimized over s
        BoundCertificate best22;
        for (int k = 1; k < 64; ++k) {
            const double s = (1.0 / 6.0) * static_cast<double>(k) / 64.0;
            const double beta = weak22_beta(m, s);
            if (!std::isfinite(beta)) continue;
            BoundCertificate c = evaluate("weak22_to_cheeger", BoundInputs{}
                                                                   .set("beta22", beta)
                                                                   .set("s", s)
                                                                   .set("log_concave", lc));
            if (c.preconditions_met && c.value < best22.value) best22 = std::move(c);
        }
        offer(cands, std::move(best22));
    }

    for (const ReferenceContext& ref : ctx.references) {
        const double both_lc =
            (m.is_log_concave && ref.measure && ref.measure->is_log_concave) ? 1.0 : 0.0;
        const std::optional<double> cc_ref = c_c_ref_bound(ref);
        const std::optional<double> c_ref = c_ref_choice(ref);

        if (ref.m_p && c_ref)
            offer(cands, evaluate("transfer_lp", BoundInputs{}
                                                     .set("m_p", *ref.m_p)
                                                     .set("p", ref.p)
                                                     .set("c_ref", *c_ref)
                                                     .set("log_concave", lc)));
        if (ref.m_p && ref.c_p && ref.p <= 2.0)
            offer(cands, evaluate("transfer_lp_bis", BoundInputs{}
                                                         .set("m_p", *ref.m_p)
                                                         .set("p", ref.p)
                                                         .set("c_p_ref", *ref.c_p)
                                                         .set("log_concave", lc)));
        if (ref.relative_entropy && c_ref) {
            BoundCertificate best_ent;
            for (int k = 1; k < 100; ++k) {
                const double u = 0.5 * static_cast<double>(k) / 100.0;
                BoundCertificate c =
                    evaluate("transfer_entropy", BoundInputs{}
                                                     .set("entropy", *ref.relative_entropy)
                                                     .set("u", u)
                                                     .set("c_ref", *c_ref)
                                                     .set("log_concave", lc));
                if (c.preconditions_met && c.value < best_ent.value) best_ent = std::move(c);
            }
            offer(cands, std::move(best_ent));
        }
        if (ref.relative_entropy && ref.c_p)
            offer(cands,
                  evaluate("transfer_entropy_bis", BoundInputs{}
                                                       .set("entropy", *ref.relative_entropy)
                                                       .set("c_p_ref", *ref.c_p)
                                                       .set("log_concave", lc)));
        if (ref.measure && ref.cheeger) {
            const double ratio = sup_density_ratio(*ref.measure, m);
            if (std::isfinite(ratio))
                offer(cands, evaluate("milman_density",
                                      BoundInputs{}
                                          .set("ratio_mu_over_nu", ratio)
                                          .set("cheeger_ref", *ref.cheeger)
                                          .set("both_log_concave", both_lc)));
        }
        if (ref.d_tv && ref.cheeger)
            offer(cands, evaluate("tv_transference", BoundInputs{}
                                                         .set("d_tv", *ref.d_tv)
                                                         .set("cheeger_ref", *ref.cheeger)
                                                         .set("both_log_concave", both_lc)));
        if (ref.d_tv && ref.concentration) {
            const ProfileTable beta_mean =
                weak_beta_from_profile(*ref.concentration, Centering::mean);
            BoundCertificate best_tv;
            for (int k = 0; k < 128; ++k) {
                const double s = 0.5 * static_cast<double>(k) / 128.0;
                const double beta_s = (k == 0 && cc_ref) ? std::min(*cc_ref, beta_mean.value_at(s))
                                                         : beta_mean.value_at(s);
                if (!std::isfinite(beta_s)) continue;
                BoundCertificate c = evaluate("tv_weak", BoundInputs{}
                                                             .set("d_tv", *ref.d_tv)
                                                             .set("s", s)
                                                             .set("beta_s", beta_s)
                                                             .set("log_concave", lc));
                if (c.preconditions_met && c.value < best_tv.value) best_tv = std::move(c);
            }
            offer(cands, std::move(best_tv));
        } else if (ref.d_tv && cc_ref) {
            offer(cands, evaluate("tv_weak", BoundInputs{}
                                                 .set("d_tv", *ref.d_tv)
                                                 .set("s", 0.0)
                                                 .set("beta_s", *cc_ref)
                                                 .set("log_concave", lc)));
        }
        if (ref.d_w1 && cc_ref)
            offer(cands, evaluate("w1_weak", BoundInputs{}
                                                 .set("w1", *ref.d_w1)
                                                 .set("c_c_ref", *cc_ref)
                                                 .set("log_concave", lc)));
        if (ref.d_dud && ref.concentration) {
            const ProfileTable beta_mean =
                weak_beta_from_profile(*ref.concentration, Centering::mean);
            BoundCertificate best_dud;
            for (int k = 0; k < 128; ++k) {
                const double s = 0.5 * static_cast<double>(k) / 128.0;
                const double beta_s = (k == 0 && cc_ref) ? std::min(*cc_ref, beta_mean.value_at(s))
                                                         : beta_mean.value_at(s);
                if (!std::isfinite(beta_s)) continue;
                BoundCertificate c = evaluate("dud_weak", BoundInputs{}
                                                              .set("d_dud", *ref.d_dud)
                                                              .set("s", s)
                                                              .set("beta_s", beta_s)
                                                              .set("log_concave", lc));
                if (c.preconditions_met && c.value < best_dud.value) best_dud = std::move(c);
            }
            offer(cands, std::move(best_dud));
        }
        if (ref.d_lp && cc_ref)
            offer(cands, evaluate("lp_to_cheeger", BoundInputs{}
                                                       .set("d_lp", *ref.d_lp)
                                                       .set("c_c_ref", *cc_ref)
                                                       .set("both_log_concave", both_lc)));
        if (ref.d_bl && ref.cheeger)
            offer(cands, evaluate("bl_to_cheeger_pair",
                                  BoundInputs{}
                                      .set("d_bl", *ref.d_bl)
                                      .set("cheeger_ref", *ref.cheeger)
                                      .set("both_log_concave", both_lc)));
        if (ref.d_bl && ref.is_standard_gaussian)
            offer(cands, evaluate("bl_to_cheeger", BoundInputs{}
                                                       .set("d_bl_gaussian", *ref.d_bl)
                                                       .set("log_concave", lc)));
        if (ref.m_p && ref.concentration) {
            BoundInputs bm;
            bm.set("m_p", *ref.m_p).set("p", ref.p).set("log_concave", lc);
            bm.set_profile("alpha_ref", &*ref.concentration);
            offer(cands, evaluate("barthe_milman_cheeger", bm));
        }
    }

    if (cands.empty())
        throw NoApplicableFormula("best_bound: no applicable Cheeger bound in this context");
    std::size_t best = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (cands[i].value < cands[best].value) best = i;
    return cands[best];
}

BoundCertificate best_poincare_bound(const GridMeasure& m, const BoundContext& ctx) {
    std::vector<BoundCertificate> cands;
    const double lc = m.is_log_concave ? 1.0 : 0.0;
    const double var = grid_variance(m);
    offer(cands, evaluate("kls_variance",
                          BoundInputs{}.set("variance", var).set("log_concave", lc)));
    offer(cands,
          evaluate("bobkov_1d", BoundInputs{}.set("variance", var).set("log_concave", lc)));
    for (const ReferenceContext& ref : ctx.references) {
        if (!ref.measure || !ref.c_p) continue;
        const double r1 = sup_density_ratio(m, *ref.measure);
        const double r2 = sup_density_ratio(*ref.measure, m);
        if (std::isfinite(r1) && std::isfinite(r2))
            offer(cands, evaluate("density_ratio_classic", BoundInputs{}
                                                               .set("ratio_nu_over_mu", r1)
                                                               .set("ratio_mu_over_nu", r2)
                                                               .set("c_p_ref", *ref.c_p)));
    }
    try {
        BoundCertificate ch = best_cheeger_bound(m, ctx);
        BoundCertificate cp =
            evaluate("cheeger_to_poincare", BoundInputs{}.set("cheeger", ch.value));
        cp.chain.push_back(std::move(ch));
        offer(cands, std::move(cp));
    } catch (const NoApplicableFormula&) {
    }
    if (cands.empty())
        throw NoApplicableFormula("best_bound: no applicable Poincare bound in this context");
    std::size_t best = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (cands[i].value < cands[best].value) best = i;
    return cands[best];
}

}  // namespace

BoundCertificate best_bound(BoundTarget target, const GridMeasure& m, const BoundContext& ctx) {
    switch (target) {
        case BoundTarget::CheegerMedian: return best_cheeger_bound(m, ctx);
        case BoundTarget::C_P: return best_poincare_bound(m, ctx);
        default:
            throw InvalidParameter("best_bound: only C_P and C'_C targets are optimized");
    }
}

}  // namespace logconc
