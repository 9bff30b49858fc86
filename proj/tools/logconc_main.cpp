#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "logconc/bounds.hpp"
#include "logconc/config.hpp"
#include "logconc/errors.hpp"
#include "logconc/metrics.hpp"
#include "logconc/oracle.hpp"
#include "logconc/report.hpp"
#include "logconc/runner.hpp"

namespace {

using namespace logconc;

struct CommonOpts {
    std::size_t grid_n = 4096;
    std::string out = "out";
    std::string format = "csv";
    std::uint64_t seed = 1;
    double slack = 0.02;
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--grid-n", o.grid_n, "grid nodes per measure (>= 64)");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--format", o.format, "csv|json|csv,json");
    app->add_option("--seed", o.seed, "seed for randomized pair suites");
    app->add_option("--slack", o.slack, "validity slack for bound checks");
}

std::vector<std::string> split_formats(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int cmd_run(const std::string& path, const CommonOpts& o, bool override_out) {
    RunConfig cfg = validate_config(path);
    if (override_out) cfg.out_dir = o.out;
    cfg.seed = o.seed != 1 ? o.seed : cfg.seed;
    const Report report = run_and_emit(cfg);
    std::printf("run: %zu suite table(s), %zu failure(s), reports in %s\n",
                report.tables.size(), report.total_failures(), cfg.out_dir.c_str());
    return report.total_failures() == 0 ? 0 : 1;
}

int cmd_constants(const std::string& spec_text, const CommonOpts& o) {
    GridRequest grid;
    grid.n = o.grid_n;
    const MeasureSpec spec = parse_measure_spec(spec_text, grid);
    const GridMeasure m = realize(spec);
    std::printf("measure: %s (N=%zu, domain [%.6g, %.6g])\n", spec.label().c_str(), m.size(),
                m.xmin(), m.xmax());
    const MomentReport mo = moments(m);
    std::printf("mean     %s\nvariance %s\nmedian   %s\nE|x-med| %s\n",
                format_double(mo.mean).c_str(), format_double(mo.variance).c_str(),
                format_double(mo.median).c_str(),
                format_double(mo.first_abs_moment_about_median).c_str());
    try {
        const SpectralResult sr = spectral_poincare(m);
        std::printf("C_P      %s  (grids %zu/%zu, residual %.3g)\n",
                    format_double(sr.c_p).c_str(), sr.grid_fine, sr.grid_coarse, sr.residual);
    } catch (const LogconcError& e) {
        std::printf("C_P      unavailable (%s)\n", e.what());
    }
    try {
        std::printf("C'_C     %s\n", format_double(cheeger_constant(m)).c_str());
    } catch (const LogconcError& e) {
        std::printf("C'_C     unavailable (%s)\n", e.what());
    }
    return 0;
}

int cmd_distance(const std::string& a_text, const std::string& b_text,
                 const std::string& metric, const CommonOpts& o) {
    GridRequest grid;
    grid.n = o.grid_n;
    const GridMeasure a = realize(parse_measure_spec(a_text, grid));
    const GridMeasure b = realize(parse_measure_spec(b_text, grid));
    auto print = [&](Metric m) {
        std::printf("%-14s %s\n", metric_name(m).c_str(),
                    format_double(eval_metric(m, a, b)).c_str());
    };
    if (metric == "all") {
        for (Metric m : {Metric::TV, Metric::W1, Metric::BL, Metric::Dudley,
                         Metric::LevyProkhorov, Metric::WLP})
            print(m);
        return 0;
    }
    for (Metric m : {Metric::TV, Metric::W1, Metric::BL, Metric::Dudley,
                     Metric::LevyProkhorov, Metric::WLP}) {
        if (metric_name(m) == metric) {
            print(m);
            return 0;
        }
    }
    std::fprintf(stderr, "unknown metric '%s'\n", metric.c_str());
    return 2;
}

int cmd_bounds(const std::string& spec_text, const std::string& ref_text,
               const CommonOpts& o) {
    GridRequest grid;
    grid.n = o.grid_n;
    const GridMeasure m = realize(parse_measure_spec(spec_text, grid));
    BoundContext ctx;
    ctx.own_c_p = spectral_poincare(m).c_p;
    ctx.own_concentration = concentration_profile(m, default_radii(m));
    GridMeasure ref;
    if (!ref_text.empty()) {
        ref = realize(parse_measure_spec(ref_text, grid));
        ReferenceContext rc;
        rc.name = ref_text;
        rc.measure = &ref;
        rc.c_p = spectral_poincare(ref).c_p;
        rc.cheeger = cheeger_constant(ref);
        rc.concentration = concentration_profile(ref, default_radii(ref));
        rc.d_tv = tv(m, ref);
        rc.d_w1 = w1(m, ref);
        try {
            const MomentReport rel = moments(m, &ref, 2.0);
            rc.m_p = rel.m_p;
            rc.relative_entropy = rel.relative_entropy;
        } catch (const NotAbsolutelyContinuous&) {
        }
        ctx.references.push_back(std::move(rc));
    }
    for (BoundTarget target : {BoundTarget::CheegerMedian, BoundTarget::C_P}) {
        try {
            const BoundCertificate c = best_bound(target, m, ctx);
            std::printf("%-5s best bound %s via %s\n", target_name(target).c_str(),
                        format_double(c.value).c_str(), c.formula_id.c_str());
            for (const BoundCertificate& link : c.chain)
                std::printf("        <- %s = %s\n", link.formula_id.c_str(),
                            format_double(link.value).c_str());
        } catch (const NoApplicableFormula& e) {
            std::printf("%-5s %s\n", target_name(target).c_str(), e.what());
        }
    }
    const double oracle_ch = cheeger_constant(m);
    const double oracle_cp = spectral_poincare(m).c_p;
    std::printf("oracle C'_C = %s, C_P = %s\n", format_double(oracle_ch).c_str(),
                format_double(oracle_cp).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for Poincare/Cheeger constants of log-concave "
                 "measures"};
    app.require_subcommand(1);
    CommonOpts opts;

    std::string config_path, spec_a, spec_b, metric = "all", reference;

    CLI::App* c_run = app.add_subcommand("run", "execute the suites of a config document");
    c_run->add_option("config", config_path, "JSON config path")->required();
    add_common(c_run, opts);

    CLI::App* c_validate = app.add_subcommand("validate", "parse and cross-check a config");
    c_validate->add_option("config", config_path, "JSON config path")->required();

    CLI::App* c_const = app.add_subcommand("constants", "oracle constants of one measure");
    c_const->add_option("spec", spec_a, "measure spec, e.g. gaussian(0,1)")->required();
    add_common(c_const, opts);

    CLI::App* c_dist = app.add_subcommand("distance", "distance between two measures");
    c_dist->add_option("specA", spec_a)->required();
    c_dist->add_option("specB", spec_b)->required();
    c_dist->add_option("--metric", metric, "TV|W1|BL|Dudley|LevyProkhorov|WLP|all");
    add_common(c_dist, opts);

    CLI::App* c_bounds = app.add_subcommand("bounds", "best certified bounds for one measure");
    c_bounds->add_option("spec", spec_a)->required();
    c_bounds->add_option("--reference", reference, "reference measure spec");
    add_common(c_bounds, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_run->parsed()) return cmd_run(config_path, opts, c_run->count("--out") > 0);
        if (c_validate->parsed()) {
            validate_config(config_path);
            std::printf("config ok\n");
            return 0;
        }
        if (c_const->parsed()) return cmd_constants(spec_a, opts);
        if (c_dist->parsed()) return cmd_distance(spec_a, spec_b, metric, opts);
        if (c_bounds->parsed()) return cmd_bounds(spec_a, reference, opts);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
