#include "logconc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "logconc/bounds.hpp"
#include "logconc/errors.hpp"
#include "logconc/metrics.hpp"
#include "logconc/oracle.hpp"
#include "logconc/semigroup.hpp"

namespace logconc {

namespace {

constexpr double kPi = 3.141592653589793;

std::string fd(double v) { return format_double(v); }

struct Member {
    std::string name;
    GridMeasure measure;
    std::optional<SpectralResult> spec;
    std::optional<double> ch;
    std::optional<ProfileTable> alpha;
    std::optional<MomentReport> mom;
};

double cp_of(Member& m) {
    if (!m.spec) m.spec = spectral_poincare(m.measure);
    return m.spec->c_p;
}
double cheeger_of(Member& m) {
    if (!m.ch) m.ch = cheeger_constant(m.measure);
    return *m.ch;
}
const ProfileTable& alpha_of(Member& m) {
    if (!m.alpha) m.alpha = concentration_profile(m.measure, default_radii(m.measure));
    return *m.alpha;
}
const MomentReport& mom_of(Member& m) {
    if (!m.mom) m.mom = moments(m.measure);
    return *m.mom;
}

struct Workspace {
    const RunConfig* cfg = nullptr;
    std::vector<std::string> names;
    std::vector<MeasureSpec> specs;
    std::vector<Member> all;        // every configured measure
    std::vector<Member> family;     // log-concave sweep family (with derived variants)
    Member gamma;                   // standard gaussian on the configured grid

    Member* find(const std::string& name) {
        for (Member& m : all)
            if (m.name == name) return &m;
        return nullptr;
    }
    Member* find_family(const std::string& name) {
        for (Member& m : family)
            if (m.name == name) return &m;
        return nullptr;
    }
};

Workspace build_workspace(const RunConfig& cfg) {
    Workspace ws;
    ws.cfg = &cfg;
    for (const auto& [name, spec] : cfg.measures) {
        ws.names.push_back(name);
        ws.specs.push_back(spec);
        ws.all.push_back({name, realize(spec), {}, {}, {}, {}});
    }
    MeasureSpec gspec = MeasureSpec::gaussian_spec(0.0, 1.0, cfg.grid.n);
    gspec.grid = cfg.grid;
    ws.gamma = {"gamma", realize(gspec), {}, {}, {}, {}};

    // sweep family: configured log-concave members plus derived variants
    for (const Member& m : ws.all)
        if (m.measure.is_log_concave) ws.family.push_back({m.name, m.measure, {}, {}, {}, {}});
    auto first_of = [&](MeasureSpec::Family f) -> const Member* {
        for (std::size_t i = 0; i < ws.all.size(); ++i)
            if (ws.specs[i].family == f && ws.all[i].measure.is_log_concave) return &ws.all[i];
        return nullptr;
    };
    if (const Member* e = first_of(MeasureSpec::Family::exponential_symmetric))
        ws.family.push_back({e->name + ".smooth", convolve_gaussian(e->measure, 0.5),
                             {}, {}, {}, {}});
    if (const Member* g = first_of(MeasureSpec::Family::gaussian)) {
        DensityModel model(g->measure);
        ws.family.push_back({g->name + ".trunc",
                             truncate(g->measure, model.quantile(0.1), model.quantile(0.8)),
                             {}, {}, {}, {}});
    }
    if (const Member* u = first_of(MeasureSpec::Family::uniform))
        ws.family.push_back({u->name + ".mix", scale_mix(u->measure, 0.5), {}, {}, {}, {}});
    return ws;
}

// ---------------------------------------------------------------------------
// constants

void suite_constants(Workspace& ws, Report& report) {
    SuiteTable t;
    t.name = "constants";
    t.header = {"measure", "oracle_c_p", "oracle_cheeger", "sigma2", "median"};
    for (Member& m : ws.all) {
        std::string cp = "nan", ch = "nan";
        try {
            cp = fd(cp_of(m));
        } catch (const LogconcError&) {
        }
        try {
            ch = fd(cheeger_of(m));
        } catch (const LogconcError&) {
        }
        const MomentReport& mo = mom_of(m);
        t.rows.push_back({m.name, cp, ch, fd(mo.variance), fd(mo.median)});
    }
    report.tables.push_back(std::move(t));
}

// ---------------------------------------------------------------------------
// profiles

void suite_profiles(Workspace& ws, Report& report) {
    SuiteTable t;
    t.name = "profiles";
    t.header = {"measure", "iso_concave", "alpha_monotone", "fradelizi", "brute_rel_err",
                "pass"};
    for (std::size_t i = 0; i < ws.all.size(); ++i) {
        Member& m = ws.all[i];
        if (!m.measure.is_log_concave) {
            t.rows.push_back({m.name, "skipped", "skipped", "skipped", "skipped", "skip"});
            continue;
        }
        bool ok = true;

        const ProfileTable iso = isoperimetric_profile(m.measure, 200);
        double iso_max = 0.0;
        for (double v : iso.values) iso_max = std::max(iso_max, v);
        bool concave = true;
        for (std::size_t k = 1; k + 1 < iso.size(); ++k)
            if (iso.values[k] < 0.5 * (iso.values[k - 1] + iso.values[k + 1]) - 1e-6 * iso_max)
                concave = false;
        ok = ok && concave;

        const ProfileTable& alpha = alpha_of(m);
        bool monotone = true;
        for (std::size_t k = 1; k < alpha.size(); ++k)
            if (alpha.values[k] > alpha.values[k - 1] + 1e-12) monotone = false;
        ok = ok && monotone;

        bool frad = true;
        {
            DensityModel model(m.measure);
            const double total = model.total_mass();
            const double med = model.quantile(0.5);
            const double sigma = std::sqrt(mom_of(m).variance);
            auto two_tail = [&](double r) {
                return 1.0 - model.mass_between(med - r, med + r) / total;
            };
            for (double c : {0.5 * sigma, sigma, 2.0 * sigma})
                for (double tt : {1.0, 1.5, 2.0, 3.0}) {
                    const double lhs = two_tail(c * tt);
                    const double base = two_tail(c);
                    if (lhs <= 0.0) continue;
                    if (lhs > std::pow(base, 0.5 * (1.0 + tt)) + 1e-6) frad = false;
                }
        }
        ok = ok && frad;

        // exhaustive cross-check on a small grid of the same family
        double brute_err = 0.0;
        if (i < ws.specs.size()) {
            MeasureSpec small = ws.specs[i];
            small.grid.n = 128;
            const GridMeasure ms = realize(small);
            if (ms.is_log_concave) {
                const BruteForceProfiles bf = brute_force_isoperimetric(ms, 25);
                DensityModel model(ms);
                const double total = model.total_mass();
                for (std::size_t k = 0; k < bf.iso_u.size(); ++k) {
                    const double u = bf.iso_u[k];
                    if (u < 0.02) continue;  // below the resolution of a 128-node grid
                    const double half = std::min(model.pdf(model.quantile(u)),
                                                 model.pdf(model.quantile(1.0 - u))) /
                                        total;
                    const double err =
                        std::fabs(half - bf.iso_value[k]) / std::max(bf.iso_value[k], 1e-12);
                    brute_err = std::max(brute_err, err);
                }
                const double sigma = std::sqrt(grid_variance(ms));
                for (double r : {0.3 * sigma, sigma}) {
                    const ProfileTable ap = concentration_profile(ms, {r});
                    const double bc = brute_force_concentration(ms, r);
                    const double err = std::fabs(ap.values[0] - bc) / std::max(bc, 1e-12);
                    brute_err = std::max(brute_err, err);
                }
                ok = ok && brute_err <= 0.02;
            }
        }

        if (!ok) ++t.failures;
        t.rows.push_back({m.name, concave ? "yes" : "no", monotone ? "yes" : "no",
                          frad ? "yes" : "no", fd(brute_err), ok ? "pass" : "FAIL"});
    }
    report.tables.push_back(std::move(t));
}

// ---------------------------------------------------------------------------
// distances

void suite_distances(Workspace& ws, Report& report) {
    std::vector<GridMeasure> measures;
    std::vector<std::string> names;
    for (const Member& m : ws.all) {
        measures.push_back(m.measure);
        names.push_back(m.name);
    }
    for (Metric metric : {Metric::TV, Metric::W1, Metric::BL, Metric::Dudley,
                          Metric::LevyProkhorov, Metric::WLP}) {
        const DistanceReport d = distance_matrix(measures, names, metric);
        SuiteTable t;
        t.name = "distances_" + metric_name(metric);
        t.header = {"measure"};
        for (const std::string& n : names) t.header.push_back(n);
        for (std::size_t i = 0; i < names.size(); ++i) {
            std::vector<std::string> row = {names[i]};
            for (std::size_t j = 0; j < names.size(); ++j) row.push_back(fd(d.matrix[i][j]));
            t.rows.push_back(std::move(row));
        }
        t.rows.push_back({"_tolerance", fd(d.tolerance)});
        report.tables.push_back(std::move(t));
    }
}

// ---------------------------------------------------------------------------
// bounds (the validity sweep over catalog entries 1..33)

struct BoundsRows {
    SuiteTable* table = nullptr;
    double slack = 0.02;

    void oracle_row(const std::string& measure, const BoundCertificate& c, double oracle) {
        if (!c.preconditions_met) {
            table->rows.push_back({measure, c.formula_id, "inf", fd(oracle), "", "no", "skip"});
            return;
        }
        double tight = 0.0;
        const bool pass = verify_against_oracle(c, oracle, slack, &tight);
        if (!pass) ++table->failures;
        table->rows.push_back({measure, c.formula_id, fd(c.value), fd(oracle), fd(tight), "yes",
                               pass ? "pass" : "FAIL"});
    }
    void check_row(const std::string& measure, const std::string& id, double value,
                   double comparator, bool pass) {
        if (!pass) ++table->failures;
        table->rows.push_back({measure, id, fd(value), fd(comparator),
                               comparator > 0.0 ? fd(value / comparator) : "", "yes",
                               pass ? "pass" : "FAIL"});
    }
};

void bounds_for_member(Workspace& ws, Member& m, BoundsRows& out) {
    const double cp = cp_of(m);
    const double ch = cheeger_of(m);
    const ProfileTable& alpha = alpha_of(m);
    const ProfileTable beta_med = weak_beta_from_profile(alpha, Centering::median);
    const double lc = 1.0;
    DensityModel model(m.measure);
    const double med = model.quantile(0.5);
    const double var = grid_variance(m.measure);
    const double fam = grid_abs_moment_about(m.measure, med);

    out.oracle_row(m.name, evaluate("cheeger_to_poincare", BoundInputs{}.set("cheeger", ch)),
                   cp);
    out.oracle_row(m.name, evaluate("ledoux_reverse", BoundInputs{}.set("c_p", cp)), ch);
    out.oracle_row(m.name, evaluate("ledoux_improved", BoundInputs{}.set("c_p", cp)), ch);

    {
        BoundCertificate best;
        for (int k = 0; k < 256; ++k) {
            const double s = 0.5 * (static_cast<double>(k) + 0.5) / 256.0;
            const double b = beta_med.value_at(s);
            if (!std::isfinite(b)) continue;
            BoundCertificate c = evaluate(
                "weakmil_osc", BoundInputs{}.set("beta", b).set("s", s).set("log_concave", lc));
            if (c.preconditions_met && c.value < best.value) best = std::move(c);
        }
        out.oracle_row(m.name, best, ch);
    }
    {
        // variance-form weak inequality instantiated through Cauchy-Schwarz and
        // the Poincare inequality: beta(s) = (1 - s) sqrt(C_P)
        BoundCertificate best;
        for (double s : {0.0, 0.25, 0.5, 0.75}) {
            BoundCertificate c =
                evaluate("weakmil_var", BoundInputs{}
                                            .set("beta", (1.0 - s) * std::sqrt(cp))
                                            .set("s", s)
                                            .set("log_concave", lc));
            if (c.preconditions_met && c.value < best.value) best = std::move(c);
        }
        out.oracle_row(m.name, best, ch);
    }
    {
        BoundInputs in;
        in.set("log_concave", lc).set_profile("beta_profile", &beta_med);
        out.oracle_row(m.name, evaluate("weakmil_optimized", in), ch);
    }
    {
        BoundInputs in;
        in.set("log_concave", lc).set_profile("alpha_profile", &alpha);
        out.oracle_row(m.name, evaluate("concentration_to_cheeger", in), ch);
        out.oracle_row(m.name, evaluate("milman_profile", in), ch);
    }
    out.oracle_row(m.name,
                   evaluate("first_moment",
                            BoundInputs{}.set("first_abs_moment", fam).set("log_concave", lc)),
                   ch);
    out.oracle_row(m.name,
                   evaluate("kls_variance",
                            BoundInputs{}.set("variance", var).set("log_concave", lc)),
                   cp);
    out.oracle_row(m.name,
                   evaluate("kls_variance_companion",
                            BoundInputs{}.set("variance", var).set("log_concave", lc)),
                   cp);
    {
        BoundCertificate best;
        for (int k = 1; k <= 48; ++k) {
            const double s = (1.0 / 6.0) * static_cast<double>(k) / 50.0;
            const double b = weak22_beta(m.measure, s);
            if (!std::isfinite(b)) continue;
            BoundCertificate c = evaluate(
                "weak22_to_cheeger",
                BoundInputs{}.set("beta22", b).set("s", s).set("log_concave", lc));
            if (c.preconditions_met && c.value < best.value) best = std::move(c);
        }
        out.oracle_row(m.name, best, ch);
    }
    {
        // restriction to A = [q_{0.1}, infinity), nu(A) = 0.9
        const double q10 = model.quantile(0.1);
        const GridMeasure rest = truncate(m.measure, q10, m.measure.xmax() + 1.0);
        const double ch_rest = cheeger_constant(rest);
        out.oracle_row(m.name,
                       evaluate("restriction", BoundInputs{}
                                                   .set("mass_a", 0.9)
                                                   .set("cheeger_restricted", ch_rest)),
                       ch);
        const ProfileTable alpha_rest = concentration_profile(rest, default_radii(rest));
        const ProfileTable beta_rest = weak_beta_from_profile(alpha_rest, Centering::median);
        BoundCertificate best;
        for (int k = 0; k < 64; ++k) {
            const double u = 0.4 * static_cast<double>(k) / 64.0;
            const double b = beta_rest.value_at(u);
            if (!std::isfinite(b)) continue;
            BoundCertificate c = evaluate("restriction_weak", BoundInputs{}
                                                                  .set("mass_a", 0.9)
                                                                  .set("beta_restricted", b)
                                                                  .set("u", u));
            if (c.preconditions_met && c.value < best.value) best = std::move(c);
        }
        out.oracle_row(m.name, best, ch);
    }
    {
        // l2 truncation at a = 2 standard deviations around the mean
        const double a = 2.0;
        const double mean = grid_mean(m.measure);
        const double sigma = std::sqrt(var);
        const GridMeasure za = truncate(m.measure, mean - a * sigma, mean + a * sigma);
        out.oracle_row(m.name,
                       evaluate("l2_truncation",
                                BoundInputs{}
                                    .set("a_trunc", a)
                                    .set("cheeger_truncated", cheeger_constant(za))),
                       ch);
        // variance sandwich with the Khinchine constant kappa <= 7
        const double var_za = grid_variance(za);
        const double lower = var * (1.0 - 7.0 / a - 1.0 / (a * a));
        const bool sandwich = var_za <= var * (1.0 + out.slack) &&
                              var_za >= lower - out.slack * var;
        out.check_row(m.name, "l2_truncation.variance_sandwich", var_za, var, sandwich);
    }
    out.oracle_row(m.name,
                   evaluate("bobkov_1d",
                            BoundInputs{}.set("variance", var).set("log_concave", lc)),
                   cp);

    // transference against the standard gaussian reference
    Member& g = ws.gamma;
    const double cpg = cp_of(g), chg = cheeger_of(g);
    const double ccg = c_c_upper(chg, cpg);
    const double cref = std::min(chg, std::sqrt(cpg));
    std::optional<MomentReport> rel;
    try {
        rel = moments(m.measure, &g.measure, 2.0);
    } catch (const NotAbsolutelyContinuous&) {
    }
    if (rel && rel->m_p) {
        out.oracle_row(m.name,
                       evaluate("transfer_lp", BoundInputs{}
                                                   .set("m_p", *rel->m_p)
                                                   .set("p", 2.0)
                                                   .set("c_ref", cref)
                                                   .set("log_concave", lc)),
                       ch);
        out.oracle_row(m.name,
                       evaluate("transfer_lp_bis", BoundInputs{}
                                                       .set("m_p", *rel->m_p)
                                                       .set("p", 2.0)
                                                       .set("c_p_ref", cpg)
                                                       .set("log_concave", lc)),
                       ch);
        BoundInputs bm;
        bm.set("m_p", *rel->m_p).set("p", 2.0).set("log_concave", lc);
        bm.set_profile("alpha_ref", &alpha_of(g));
        out.oracle_row(m.name, evaluate("barthe_milman_cheeger", bm), ch);
    }
    if (rel && rel->relative_entropy) {
        BoundCertificate best;
        for (int k = 1; k < 64; ++k) {
            const double u = 0.5 * static_cast<double>(k) / 64.0;
            BoundCertificate c =
                evaluate("transfer_entropy", BoundInputs{}
                                                 .set("entropy", *rel->relative_entropy)
                                                 .set("u", u)
                                                 .set("c_ref", cref)
                                                 .set("log_concave", lc));
            if (c.preconditions_met && c.value < best.value) best = std::move(c);
        }
        out.oracle_row(m.name, best, ch);
        out.oracle_row(m.name,
                       evaluate("transfer_entropy_bis",
                                BoundInputs{}
                                    .set("entropy", *rel->relative_entropy)
                                    .set("c_p_ref", cpg)
                                    .set("log_concave", lc)),
                       ch);
    }
    {
        const double r1 = sup_density_ratio(m.measure, g.measure);
        const double r2 = sup_density_ratio(g.measure, m.measure);
        if (std::isfinite(r1) && std::isfinite(r2))
            out.oracle_row(m.name,
                           evaluate("density_ratio_classic", BoundInputs{}
                                                                 .set("ratio_nu_over_mu", r1)
                                                                 .set("ratio_mu_over_nu", r2)
                                                                 .set("c_p_ref", cpg)),
                           cp);
        if (std::isfinite(r2))
            out.oracle_row(m.name,
                           evaluate("milman_density", BoundInputs{}
                                                          .set("ratio_mu_over_nu", r2)
                                                          .set("cheeger_ref", chg)
                                                          .set("both_log_concave", 1.0)),
                           ch);
    }
    {
        const double dtv = tv(m.measure, g.measure);
        out.oracle_row(m.name,
                       evaluate("tv_transference", BoundInputs{}
                                                       .set("d_tv", dtv)
                                                       .set("cheeger_ref", chg)
                                                       .set("both_log_concave", 1.0)),
                       ch);
        const ProfileTable beta_mean_g = weak_beta_from_profile(alpha_of(g), Centering::mean);
        BoundCertificate best;
        for (int k = 0; k < 64; ++k) {
            const double s = 0.4 * static_cast<double>(k) / 64.0;
            const double bs =
                (k == 0) ? std::min(ccg, beta_mean_g.value_at(s)) : beta_mean_g.value_at(s);
            if (!std::isfinite(bs)) continue;
            BoundCertificate c = evaluate("tv_weak", BoundInputs{}
                                                         .set("d_tv", dtv)
                                                         .set("s", s)
                                                         .set("beta_s", bs)
                                                         .set("log_concave", lc));
            if (c.preconditions_met && c.value < best.value) best = std::move(c);
        }
        if (best.preconditions_met) out.oracle_row(m.name, best, ch);

        const double w = w1(m.measure, g.measure);
        out.oracle_row(m.name,
                       evaluate("w1_weak",
                                BoundInputs{}.set("w1", w).set("c_c_ref", ccg).set(
                                    "log_concave", lc)),
                       ch);
        const double dd = bl_dud(m.measure, g.measure, BLKind::Dudley);
        BoundCertificate bestd;
        for (int k = 0; k < 64; ++k) {
            const double s = 0.4 * static_cast<double>(k) / 64.0;
            const double bs =
                (k == 0) ? std::min(ccg, beta_mean_g.value_at(s)) : beta_mean_g.value_at(s);
            if (!std::isfinite(bs)) continue;
            BoundCertificate c = evaluate("dud_weak", BoundInputs{}
                                                          .set("d_dud", dd)
                                                          .set("s", s)
                                                          .set("beta_s", bs)
                                                          .set("log_concave", lc));
            if (c.preconditions_met && c.value < bestd.value) bestd = std::move(c);
        }
        if (bestd.preconditions_met) out.oracle_row(m.name, bestd, ch);

        const double dbl = bl_dud(m.measure, g.measure, BLKind::BL);
        out.oracle_row(m.name,
                       evaluate("bl_to_cheeger", BoundInputs{}
                                                     .set("d_bl_gaussian", dbl)
                                                     .set("log_concave", lc)),
                       ch);
        out.oracle_row(m.name,
                       evaluate("bl_to_cheeger_pair", BoundInputs{}
                                                          .set("d_bl", dbl)
                                                          .set("cheeger_ref", chg)
                                                          .set("both_log_concave", 1.0)),
                       ch);
        const double dlp = levy_prokhorov(m.measure, g.measure);
        out.oracle_row(m.name,
                       evaluate("lp_to_cheeger", BoundInputs{}
                                                     .set("d_lp", dlp)
                                                     .set("c_c_ref", ccg)
                                                     .set("both_log_concave", 1.0)),
                       ch);
    }
}

void bounds_constructions(Workspace& ws, BoundsRows& out) {
    // klartag_cube: convex log-concave densities on theta * [-1/2, 1/2]
    for (double theta : {1.0, 2.0}) {
        std::vector<double> xs, vs;
        for (int k = 0; k <= 512; ++k) {
            const double x = theta * (static_cast<double>(k) / 512.0 - 0.5);
            xs.push_back(x);
            vs.push_back(x);  // density proportional to e^{-x}, convex on the cube
        }
        MeasureSpec spec = MeasureSpec::potential_spec(xs, vs, ws.cfg->grid.n);
        const GridMeasure m = realize(spec);
        const double cp = spectral_poincare(m).c_p;
        out.oracle_row("cube.exp_theta=" + fd(theta),
                       evaluate("klartag_cube",
                                BoundInputs{}.set("r_ratio", 1.0).set("theta", theta)),
                       cp);
    }
    {
        // uniform_convolution: Z supported on Q, add U uniform on theta*Q,
        // restrict to (theta-1)*Q
        const double theta = 3.0;
        const GridMeasure z =
            truncate(realize(MeasureSpec::gaussian_spec(0.0, 0.35, ws.cfg->grid.n)), -0.5, 0.5);
        DensityModel fz(z);
        const std::size_t n = ws.cfg->grid.n;
        const double lo = -0.5 * (theta + 1.0), hi = 0.5 * (theta + 1.0);
        const double h = (hi - lo) / static_cast<double>(n - 1);
        std::vector<double> dens(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = lo + h * static_cast<double>(i);
            dens[i] = (fz.cdf(x + 0.5 * theta) - fz.cdf(x - 0.5 * theta)) / theta;
        }
        GridMeasure conv = measure_from_density(lo, h, dens, true);
        const GridMeasure rest = truncate(conv, -0.5 * (theta - 1.0), 0.5 * (theta - 1.0));
        const double cp = spectral_poincare(rest).c_p;
        out.oracle_row("cube.uniform_conv",
                       evaluate("uniform_convolution", BoundInputs{}.set("theta", theta)), cp);
    }
    {
        // gaussian_convolution_restricted with Z uniform on Q, beta = 1, theta = 2
        const double beta = 1.0, theta = 2.0;
        const GridMeasure z = realize(MeasureSpec::uniform_spec(-0.5, 0.5, ws.cfg->grid.n));
        const GridMeasure conv = convolve_gaussian(z, beta);
        const GridMeasure rest = truncate(conv, -0.5 * theta, 0.5 * theta);
        const double cp = spectral_poincare(rest).c_p;
        out.oracle_row("cube.gaussian_conv",
                       evaluate("gaussian_convolution_restricted",
                                BoundInputs{}.set("beta", beta).set("theta", theta)),
                       cp);
    }
    {
        // linf_truncation consistency: factor >= 1 and -> 1 as n grows
        Member* g = ws.family.empty() ? nullptr : &ws.family.front();
        if (g) {
            const double mean = grid_mean(g->measure);
            const double sigma = std::sqrt(grid_variance(g->measure));
            const GridMeasure ka = truncate(g->measure, mean - 3.0 * sigma, mean + 3.0 * sigma);
            const double chka = cheeger_constant(ka);
            double prev = kPosInf;
            bool ok = true;
            double last = 0.0;
            for (double n : {10.0, 1e3, 1e6}) {
                BoundCertificate c = evaluate("linf_truncation", BoundInputs{}
                                                                     .set("dim_n", n)
                                                                     .set("a_exp", 2.0)
                                                                     .set("epsilon", 1.0)
                                                                     .set("cheeger_truncated",
                                                                          chka));
                if (!c.preconditions_met || c.value < chka || c.value > prev) ok = false;
                prev = c.value;
                last = c.value;
            }
            ok = ok && std::fabs(last - chka) <= 0.01 * chka;
            out.check_row(g->name, "linf_truncation.consistency", last, chka, ok);
        }
    }
    {
        // latala_tail: decreasing in t and in n once t clears the threshold
        bool ok = true;
        double prev_t = kPosInf;
        for (double tt : {3.5, 4.0, 5.0}) {
            BoundCertificate c = evaluate(
                "latala_tail",
                BoundInputs{}.set("dim_n", 100.0).set("t", tt).set("epsilon", 1.0));
            if (!c.preconditions_met || c.value > prev_t) ok = false;
            prev_t = c.value;
        }
        double prev_n = kPosInf;
        for (double n : {10.0, 100.0, 1000.0}) {
            BoundCertificate c = evaluate(
                "latala_tail", BoundInputs{}.set("dim_n", n).set("t", 4.0).set("epsilon", 1.0));
            if (!c.preconditions_met || c.value > prev_n) ok = false;
            prev_n = c.value;
        }
        out.check_row("formula", "latala_tail.monotone", prev_t, prev_n, ok);
    }
    {
        // radial_split on the chi-type member when configured
        for (std::size_t i = 0; i < ws.specs.size(); ++i) {
            if (ws.specs[i].family != MeasureSpec::Family::radial) continue;
            Member& r = ws.all[i];
            const double n = static_cast<double>(ws.specs[i].dim);
            if (n < 2.0) continue;
            const double dev = grid_abs_moment_about(r.measure, std::sqrt(n));
            BoundCertificate c = evaluate(
                "radial_split", BoundInputs{}.set("radial_abs_dev", dev).set("dim_n", n));
            const bool ok = c.preconditions_met && dev <= 1.0 &&
                            std::fabs(c.value - 32.0 / kPi * (dev + 1.0)) < 1e-9;
            out.check_row(r.name, "radial_split", c.value, dev, ok);
            break;
        }
    }
}

void suite_bounds(Workspace& ws, Report& report) {
    SuiteTable t;
    t.name = "bounds";
    t.header = {"measure", "formula_id", "value", "oracle", "tightness", "preconditions",
                "pass"};
    BoundsRows out;
    out.table = &t;
    out.slack = ws.cfg->slack;
    for (Member& m : ws.family) bounds_for_member(ws, m, out);
    bounds_constructions(ws, out);

    // best_bound sanity: minimal certificate stays valid and improves with context
    for (Member& m : ws.family) {
        BoundContext plain;
        BoundContext rich;
        rich.own_c_p = cp_of(m);
        rich.own_concentration = alpha_of(m);
        ReferenceContext ref;
        ref.name = "gamma";
        ref.measure = &ws.gamma.measure;
        ref.is_standard_gaussian = true;
        ref.c_p = cp_of(ws.gamma);
        ref.cheeger = cheeger_of(ws.gamma);
        ref.concentration = alpha_of(ws.gamma);
        ref.d_tv = tv(m.measure, ws.gamma.measure);
        ref.d_w1 = w1(m.measure, ws.gamma.measure);
        rich.references.push_back(ref);
        const BoundCertificate lean = best_bound(BoundTarget::CheegerMedian, m.measure, plain);
        const BoundCertificate full = best_bound(BoundTarget::CheegerMedian, m.measure, rich);
        const double ch = cheeger_of(m);
        const bool ok = full.value <= lean.value * (1.0 + 1e-9) &&
                        full.value >= ch * (1.0 - ws.cfg->slack);
        out.check_row(m.name, "best_bound.monotone", full.value, lean.value, ok);
    }
    report.tables.push_back(std::move(t));
}

// ---------------------------------------------------------------------------
// transference suite over configured (nu, mu) pairs

void suite_transference(Workspace& ws, Report& report) {
    SuiteTable t;
    t.name = "transference";
    t.header = {"nu", "mu", "formula_id", "value", "oracle", "tightness", "preconditions",
                "pass"};
    BoundsRows out;
    out.table = &t;
    out.slack = ws.cfg->slack;

    for (const auto& [nu_name, mu_name] : ws.cfg->references) {
        Member* nu = ws.find(nu_name);
        Member* mu = ws.find(mu_name);
        if (!nu || !mu) continue;
        if (!nu->measure.is_log_concave) continue;
        const double ch = cheeger_of(*nu);
        const double cp = cp_of(*nu);
        const double chm = cheeger_of(*mu);
        const double cpm = cp_of(*mu);
        const double ccm = c_c_upper(chm, cpm);
        const double both_lc = mu->measure.is_log_concave ? 1.0 : 0.0;

        auto row = [&](const BoundCertificate& c, double oracle) {
            if (!c.preconditions_met) {
                t.rows.push_back(
                    {nu_name, mu_name, c.formula_id, "inf", fd(oracle), "", "no", "skip"});
                return;
            }
            double tight = 0.0;
            const bool pass = verify_against_oracle(c, oracle, out.slack, &tight);
            if (!pass) ++t.failures;
            t.rows.push_back({nu_name, mu_name, c.formula_id, fd(c.value), fd(oracle),
                              fd(tight), "yes", pass ? "pass" : "FAIL"});
        };

        std::optional<MomentReport> rel;
        try {
            rel = moments(nu->measure, &mu->measure, 2.0);
        } catch (const NotAbsolutelyContinuous&) {
        }
        if (rel && rel->m_p) {
            row(evaluate("transfer_lp", BoundInputs{}
                                            .set("m_p", *rel->m_p)
                                            .set("p", 2.0)
                                            .set("c_ref", std::min(chm, std::sqrt(cpm)))),
                ch);
            row(evaluate("transfer_lp_bis", BoundInputs{}
                                                .set("m_p", *rel->m_p)
                                                .set("p", 2.0)
                                                .set("c_p_ref", cpm)),
                ch);
            BoundInputs bm;
            bm.set("m_p", *rel->m_p).set("p", 2.0);
            bm.set_profile("alpha_ref", &alpha_of(*mu));
            row(evaluate("barthe_milman_cheeger", bm), ch);
        }
        if (rel && rel->relative_entropy) {
            BoundCertificate best;
            for (int k = 1; k < 64; ++k) {
                const double u = 0.5 * static_cast<double>(k) / 64.0;
                BoundCertificate c =
                    evaluate("transfer_entropy",
                             BoundInputs{}
                                 .set("entropy", *rel->relative_entropy)
                                 .set("u", u)
                                 .set("c_ref", std::min(chm, std::sqrt(cpm))));
                if (c.preconditions_met && c.value < best.value) best = std::move(c);
            }
            row(best, ch);
            row(evaluate("transfer_entropy_bis", BoundInputs{}
                                                     .set("entropy", *rel->relative_entropy)
                                                     .set("c_p_ref", cpm)),
                ch);
        }
        const double r1 = sup_density_ratio(nu->measure, mu->measure);
        const double r2 = sup_density_ratio(mu->measure, nu->measure);
        if (std::isfinite(r1) && std::isfinite(r2))
            row(evaluate("density_ratio_classic", BoundInputs{}
                                                      .set("ratio_nu_over_mu", r1)
                                                      .set("ratio_mu_over_nu", r2)
                                                      .set("c_p_ref", cpm)),
                cp);
        if (std::isfinite(r2))
            row(evaluate("milman_density", BoundInputs{}
                                               .set("ratio_mu_over_nu", r2)
                                               .set("cheeger_ref", chm)
                                               .set("both_log_concave", both_lc)),
                ch);
        const double dtv = tv(nu->measure, mu->measure);
        row(evaluate("tv_transference", BoundInputs{}
                                            .set("d_tv", dtv)
                                            .set("cheeger_ref", chm)
                                            .set("both_log_concave", both_lc)),
            ch);
        row(evaluate("tv_weak",
                     BoundInputs{}.set("d_tv", dtv).set("s", 0.0).set("beta_s", ccm)),
            ch);
        const double w = w1(nu->measure, mu->measure);
        row(evaluate("w1_weak", BoundInputs{}.set("w1", w).set("c_c_ref", ccm)), ch);
        const double dd = bl_dud(nu->measure, mu->measure, BLKind::Dudley);
        row(evaluate("dud_weak",
                     BoundInputs{}.set("d_dud", dd).set("s", 0.0).set("beta_s", ccm)),
            ch);
        const double dbl = bl_dud(nu->measure, mu->measure, BLKind::BL);
        row(evaluate("bl_to_cheeger_pair", BoundInputs{}
                                               .set("d_bl", dbl)
                                               .set("cheeger_ref", chm)
                                               .set("both_log_concave", both_lc)),
            ch);
        const double dlp = levy_prokhorov(nu->measure, mu->measure);
        row(evaluate("lp_to_cheeger", BoundInputs{}
                                          .set("d_lp", dlp)
                                          .set("c_c_ref", ccm)
                                          .set("both_log_concave", both_lc)),
            ch);
    }
    report.tables.push_back(std::move(t));
}

// ---------------------------------------------------------------------------
// mollification

void suite_mollification(Workspace& ws, Report& report) {
    SuiteTable t;
    t.name = "mollification";
    t.header = {"measure", "formula_id", "value", "oracle", "tightness", "preconditions",
                "pass"};
    BoundsRows out;
    out.table = &t;
    out.slack = ws.cfg->slack;
    const double cpg = cp_of(ws.gamma);

    for (Member& m : ws.family) {
        const double cp = cp_of(m);
        const double ch = cheeger_of(m);

        for (double lambda : {0.25, 0.5, 0.9}) {
            const GridMeasure mix = scale_mix(m.measure, lambda);
            const double cp_mix = spectral_poincare(mix).c_p;
            out.oracle_row(m.name + " lambda=" + fd(lambda),
                           evaluate("demollification", BoundInputs{}
                                                           .set("lambda", lambda)
                                                           .set("c_p_mix", cp_mix)),
                           cp);
            if (lambda == 0.5) {
                // forward interpolation bound on the same mixture
                out.oracle_row(m.name + " interp",
                               evaluate("mollify_interpolation", BoundInputs{}
                                                                     .set("lambda", lambda)
                                                                     .set("c_p_z", cp)
                                                                     .set("c_p_x", cpg)),
                               0.0 + cp_mix);
            }
        }
        {
            const double beta = 0.7;
            const GridMeasure conv = convolve_gaussian(m.measure, beta);
            const double cp_conv = spectral_poincare(conv).c_p;
            out.oracle_row(m.name + " beta=" + fd(beta),
                           evaluate("mollify_additive", BoundInputs{}
                                                            .set("c_p_z", cp)
                                                            .set("c_p_x", beta * beta * cpg)),
                           cp_conv);
        }
        {
            const double a = 0.8, b = 0.6;
            const GridMeasure mix =
                convolve_gaussian(apply_affine(m.measure, {a, 0.0}), b);
            const double cp_mix = spectral_poincare(mix).c_p;
            const double ch_mix = cheeger_constant(mix);
            out.oracle_row(m.name + " affine",
                           evaluate("demollification_affine", BoundInputs{}
                                                                  .set("alpha", a)
                                                                  .set("beta", b)
                                                                  .set("c_p_mix", cp_mix)),
                           cp);
            out.oracle_row(m.name + " affine",
                           evaluate("demollification_cheeger", BoundInputs{}
                                                                   .set("alpha", a)
                                                                   .set("beta", b)
                                                                   .set("cheeger_mix", ch_mix)),
                           ch);
        }
        {
            // variance-of-norm identity for the isotropic rescaling
            const double mean = grid_mean(m.measure);
            const double sigma = std::sqrt(grid_variance(m.measure));
            const GridMeasure iso = apply_affine(m.measure, {1.0 / sigma, -mean / sigma});
            bool ok = true;
            double worst = 0.0;
            for (double tt : {0.5, 1.0}) {
                const GridMeasure conv = convolve_gaussian(iso, std::sqrt(tt));
                const double v_before =
                    grid_moment(iso, 4, 0.0) - std::pow(grid_moment(iso, 2, 0.0), 2);
                const double v_after =
                    grid_moment(conv, 4, 0.0) - std::pow(grid_moment(conv, 2, 0.0), 2);
                const double expect = v_before + 2.0 * tt * (2.0 + tt);
                const double err = std::fabs(v_after - expect) / std::max(expect, 1e-12);
                worst = std::max(worst, err);
                ok = ok && err <= 1e-3;
            }
            out.check_row(m.name, "variance_of_norm", worst, 1e-3, ok);
        }
    }
    {
        // beta_convolution dominance on the first family member
        if (!ws.family.empty()) {
            Member& m = ws.family.front();
            const GridMeasure conv = convolve_gaussian(m.measure, 1.0);
            const ProfileTable beta_conv = weak_beta_from_profile(
                concentration_profile(conv, default_radii(conv)), Centering::mean);
            const ProfileTable beta_m =
                weak_beta_from_profile(alpha_of(m), Centering::mean);
            const ProfileTable beta_g =
                weak_beta_from_profile(alpha_of(ws.gamma), Centering::mean);
            bool ok = true;
            for (double s : {0.05, 0.1, 0.2, 0.4}) {
                BoundInputs in;
                in.set("s", s);
                in.set_profile("beta_a", &beta_m);
                in.set_profile("beta_b", &beta_g);
                const BoundCertificate c = evaluate("beta_convolution", in);
                if (!c.preconditions_met || beta_conv.value_at(s) > c.value + 1e-6) ok = false;
            }
            out.check_row(m.name, "beta_convolution.dominance", 0.0, 0.0, ok);
        }
    }
    report.tables.push_back(std::move(t));
}

// ---------------------------------------------------------------------------
// metric chain on seeded random log-concave pairs

GridMeasure random_log_concave(std::mt19937& rng, const GridRequest& grid) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    switch (kind(rng)) {
        case 0: {
            const double mean = -1.5 + 3.0 * unif(rng);
            const double sd = 0.4 + 1.2 * unif(rng);
            MeasureSpec s = MeasureSpec::gaussian_spec(mean, sd);
            s.grid = grid;
            return realize(s);
        }
        case 1: {
            const double scale = 0.5 + unif(rng);
            MeasureSpec s = MeasureSpec::exponential_spec(scale);
            s.grid = grid;
            GridMeasure m = realize(s);
            return apply_affine(m, {1.0, -1.0 + 2.0 * unif(rng)});
        }
        case 2: {
            const double a = -2.0 + 2.0 * unif(rng);
            const double w = 0.5 + 2.5 * unif(rng);
            MeasureSpec s = MeasureSpec::uniform_spec(a, a + w);
            s.grid = grid;
            return realize(s);
        }
        default: {
            MeasureSpec s = MeasureSpec::gaussian_spec(0.0, 0.5 + unif(rng));
            s.grid = grid;
            GridMeasure m = realize(s);
            DensityModel model(m);
            const double qa = 0.05 + 0.2 * unif(rng);
            return truncate(m, model.quantile(qa), model.quantile(0.75 + 0.2 * unif(rng)));
        }
    }
}

void suite_metric_chain(Workspace& ws, Report& report) {
    SuiteTable t;
    t.name = "metric_chain";
    t.header = {"pair", "d_tv", "w1", "d_bl", "d_dud", "d_lp", "w_lp", "checks", "pass"};
    std::mt19937 rng(static_cast<std::uint32_t>(ws.cfg->seed));
    const int pairs = 20;
    for (int k = 0; k < pairs; ++k) {
        const GridMeasure a = random_log_concave(rng, ws.cfg->grid);
        const GridMeasure b = random_log_concave(rng, ws.cfg->grid);
        const double dtv = tv(a, b);
        const double dw1 = w1(a, b);
        const double dbl = bl_dud(a, b, BLKind::BL);
        const double ddud = bl_dud(a, b, BLKind::Dudley);
        const double dlp = levy_prokhorov(a, b);
        const WlpResult wlp = w_lp_plan(a, b);

        const double tol_lp = 2.0 * (6.2e-5 + 1e-9);
        const double tol_bl = 2.0 * 1e-5;
        const double tol_wlp = 2.0 * wlp.tolerance;
        std::ostringstream failed;
        auto expect = [&](bool ok, const char* what) {
            if (!ok) failed << what << ';';
        };
        expect(ddud <= dbl + tol_bl && dbl <= 2.0 * ddud + tol_bl, "dud<=bl<=2dud");
        expect(dbl <= 2.0 * dtv + tol_bl, "bl<=2tv");
        expect(0.25 * dbl <= 0.5 * ddud + tol_bl + tol_lp, "bl/4<=dud/2");
        expect(0.5 * ddud <= dlp + tol_lp + tol_bl, "dud/2<=lp");
        expect(dlp <= std::sqrt(1.5 * ddud) + tol_lp + tol_bl, "lp<=sqrt(1.5dud)");
        expect(dlp * dlp <= dw1 + tol_lp, "lp^2<=w1");
        if (dlp < 1.0 - 1e-6 && dlp > 0.0)
            expect(dw1 <= dlp * (1.0 + 2.0 * dlp / std::log(1.0 / dlp)) + tol_lp + 1e-6,
                   "w1<=fradelizi(lp)");
        expect(wlp.value <= dw1 / (1.0 + dw1) + tol_wlp, "wlp<=w1/(1+w1)");
        expect(0.5 * wlp.value <= dlp + tol_lp + tol_wlp, "wlp/2<=lp");
        expect(dlp <= std::sqrt(2.0 * wlp.value + tol_wlp) + tol_lp, "lp<=sqrt(2wlp)");
        const auto [kf, kstar] = kyfan(wlp.plan);
        expect(0.5 * kstar <= kf + tol_lp, "kstar/2<=k");
        expect(kf <= std::sqrt(2.0 * kstar) + tol_lp + tol_wlp, "k<=sqrt(2kstar)");

        const std::string fail = failed.str();
        if (!fail.empty()) ++t.failures;
        t.rows.push_back({"pair" + std::to_string(k), fd(dtv), fd(dw1), fd(dbl), fd(ddud),
                          fd(dlp), fd(wlp.value), fail.empty() ? "all" : fail,
                          fail.empty() ? "pass" : "FAIL"});
    }
    report.tables.push_back(std::move(t));
}

// ---------------------------------------------------------------------------
// semigroup

void suite_semigroup(Workspace& ws, Report& report) {
    SuiteTable t;
    t.name = "semigroup";
    t.header = {"check", "T", "lhs", "rhs", "pass"};
    auto row = [&](const std::string& what, double T, double lhs, double rhs, bool ok) {
        if (!ok) ++t.failures;
        t.rows.push_back({what, fd(T), fd(lhs), fd(rhs), ok ? "pass" : "FAIL"});
    };

    const GridMeasure g1 = ws.gamma.measure;
    const GridMeasure g1c = apply_affine(g1, {1.0, 0.7});
    for (double T : {0.25, 1.0, 4.0}) {
        const auto [lhs, rhs] = check_w1_contraction(g1, g1c, T);
        row("w1_translated_equality", T, lhs, rhs,
            std::fabs(lhs - rhs) <= 1e-3 * std::max(rhs, 1e-12));
    }
    {
        const GridMeasure a = g1;
        const GridMeasure b = apply_affine(g1, {1.0, 1.5});
        for (double T : {0.25, 1.0, 4.0}) {
            const auto [lhs, rhs] = check_tv_w1_contraction(a, b, T);
            row("tv_vs_w1", T, lhs, rhs, lhs <= rhs * (1.0 + 1e-3));
        }
        const GridMeasure far = apply_affine(g1, {1.0, 10.0});
        const auto [lhs, rhs] = check_tv_w1_contraction(a, far, 1.0);
        row("tv_vs_w1_stress", 1.0, lhs, rhs, lhs <= rhs * (1.0 + 1e-3));
    }
    for (Member& m : ws.family) {
        const auto [lhs, rhs] = check_tv_w1_contraction(m.measure, g1, 1.0);
        row("tv_vs_w1 " + m.name, 1.0, lhs, rhs, lhs <= rhs * (1.0 + 1e-3));
    }
    for (double T : {0.5, 3.0}) {
        const double d = tv(ou_evolve(g1, T), g1);
        row("gaussian_fixed_point", T, d, 1e-6, d <= 1e-6);
    }
    if (!ws.family.empty()) {
        const GridMeasure& m = ws.family.front().measure;
        const double d = tv(ou_evolve(ou_evolve(m, 0.5), 0.7), ou_evolve(m, 1.2));
        row("semigroup_law", 1.2, d, 1e-4, d <= 1e-4);
        const GridMeasure far_t = ou_evolve(m, 20.0);
        const double dfar = tv(far_t, g1);
        row("long_time_convergence", 20.0, dfar, 1e-3, dfar <= 1e-3);
        const bool lc = log_concavity_holds(ou_evolve(m, 0.8));
        row("log_concavity_preserved", 0.8, lc ? 1.0 : 0.0, 1.0, lc);
    }
    {
        const NonContractionWitness w = non_contraction_witness(1.0);
        row("non_contraction_witness lambda=" + fd(w.lambda), 1.0, w.tv_value, 0.9,
            w.tv_value >= 0.9);
    }
    for (Member& m : ws.family) {
        const double d0 = levy_prokhorov(g1, m.measure);
        if (!(d0 > 0.0) || d0 >= 1.0) continue;
        for (double T : {0.5, 1.0}) {
            const BoundCertificate c = evaluate(
                "lp_semigroup", BoundInputs{}.set("d_lp_initial", d0).set("t_time", T));
            const double lhs = levy_prokhorov(ou_evolve(m.measure, T), g1);
            row("lp_semigroup " + m.name, T, lhs, c.value,
                c.preconditions_met && lhs <= c.value + 2.0 * 6.2e-5);
        }
    }
    report.tables.push_back(std::move(t));
}

}  // namespace

Report run(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    Workspace ws = build_workspace(config);

    Report report;
    report.metadata.emplace_back("tool", "logconc 0.1.0");
    report.metadata.emplace_back("grid_n", std::to_string(config.grid.n));
    report.metadata.emplace_back("tail_mass", fd(config.grid.tail_mass));
    report.metadata.emplace_back("seed", std::to_string(config.seed));
    report.metadata.emplace_back("slack", fd(config.slack));
    {
        std::ostringstream os;
        for (std::size_t i = 0; i < config.suites.size(); ++i)
            os << (i ? "," : "") << config.suites[i];
        report.metadata.emplace_back("suites", os.str());
    }
    report.metadata.emplace_back(
        "kls_context",
        "KLS conjecture: C_P <= C sigma^2 for isotropic log-concave measures; displayed for "
        "context, never asserted");

    for (const std::string& suite : config.suites) {
        if (suite == "constants") suite_constants(ws, report);
        else if (suite == "profiles") suite_profiles(ws, report);
        else if (suite == "distances") suite_distances(ws, report);
        else if (suite == "bounds") suite_bounds(ws, report);
        else if (suite == "transference") suite_transference(ws, report);
        else if (suite == "mollification") suite_mollification(ws, report);
        else if (suite == "metric_chain") suite_metric_chain(ws, report);
        else if (suite == "semigroup") suite_semigroup(ws, report);
    }

    const auto t1 = std::chrono::steady_clock::now();
    report.metadata.emplace_back(
        "wall_time_ms",
        std::to_string(
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()));
    return report;
}

Report run_and_emit(const RunConfig& config) {
    Report report = run(config);
    emit(report, config.out_dir, config.formats);
    return report;
}

}  // namespace logconc
