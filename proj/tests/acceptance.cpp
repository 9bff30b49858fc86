// Acceptance suite: executes every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "logconc/bounds.hpp"
#include "logconc/config.hpp"
#include "logconc/grid_measure.hpp"
#include "logconc/metrics.hpp"
#include "logconc/oracle.hpp"
#include "logconc/runner.hpp"
#include "logconc/semigroup.hpp"

using namespace logconc;

namespace {

constexpr double kPi = 3.141592653589793;

int failures = 0;

void criterion(int id, const char* what, bool ok, const std::string& detail = "") {
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, what,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

const char* kConfigJson = R"json({
    "grid": {"n": 4096, "tail_mass": 1e-10},
    "measures": {
        "g1": "gaussian(0,1)",
        "g2": "gaussian(2,0.5)",
        "e1": "exponential(1)",
        "e2": "exponential(0.5)",
        "u1": "uniform(-1,1)",
        "u2": "uniform(0,3)",
        "chi3": "radial(3,1)",
        "bimodal": "mixture(0.5,-2,0.7,0.5,2,0.7)"
    },
    "suites": ["constants", "profiles", "bounds", "transference", "mollification",
               "metric_chain", "semigroup"],
    "references": [["e1", "g1"], ["g2", "g1"]],
    "seed": 20240917,
    "slack": 0.02,
    "output": {"formats": ["csv", "json"]}
})json";

std::size_t table_failures(Report& r, const std::string& name, std::size_t* rows = nullptr) {
    SuiteTable* t = r.find(name);
    if (!t) return 1;
    if (rows) *rows = t->rows.size();
    return t->failures;
}

// plain cyclic Jacobi eigensolver, used as the independent route for the
// Kronecker-sum assertion (no external linear algebra in this binary)
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-18) continue;
                const double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<std::vector<double>> generator_matrix(const GridMeasure& m) {
    const std::size_t n = m.size();
    const double h = m.step;
    std::vector<double> mass(n);
    for (std::size_t i = 0; i < n; ++i)
        mass[i] = ((i == 0 || i + 1 == n) ? 0.5 : 1.0) * h * std::exp(m.log_density[i]);
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double c = std::exp(0.5 * (m.log_density[k] + m.log_density[k + 1])) / h;
        a[k][k] += c;
        a[k + 1][k + 1] += c;
        a[k][k + 1] -= c;
        a[k + 1][k] -= c;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] /= std::sqrt(mass[i] * mass[j]);
    return a;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    // ----- criterion 1: oracle anchors under a wall-clock budget -------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::ostringstream detail;
        const double cp_g = spectral_poincare(realize(MeasureSpec::gaussian_spec(0, 1))).c_p;
        ok = ok && std::fabs(cp_g - 1.0) < 1e-3;
        const double cp_e =
            spectral_poincare(realize(MeasureSpec::exponential_spec(1.0))).c_p;
        ok = ok && std::fabs(cp_e - 4.0) < 0.02 * 4.0;
        for (double R : {0.5, 1.0, 2.0}) {
            const double cp_u =
                spectral_poincare(realize(MeasureSpec::uniform_spec(-R, R))).c_p;
            const double expect = 4.0 * R * R / (kPi * kPi);
            ok = ok && std::fabs(cp_u - expect) / expect < 1e-3;
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && secs < 10.0;
        detail << "C_P(gauss)=" << format_double(cp_g) << " C_P(exp)=" << format_double(cp_e)
               << " in " << format_double(secs) << "s";
        criterion(1, "oracle anchors (gaussian=1, exponential=4, uniform=4R^2/pi^2)", ok,
                  detail.str());
    }

    // ----- full run of the acceptance config (shared by criteria 2..7, 9) ----
    RunConfig cfg = parse_config_text(kConfigJson);
    namespace fs = std::filesystem;
    const fs::path dir1 = fs::temp_directory_path() / "logconc_acceptance_run1";
    const fs::path dir2 = fs::temp_directory_path() / "logconc_acceptance_run2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    cfg.out_dir = dir1.string();
    const auto sweep_t0 = std::chrono::steady_clock::now();
    Report report = run_and_emit(cfg);
    const double sweep_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - sweep_t0).count();

    // ----- criterion 2: Ledoux sandwich across the family --------------------
    {
        bool ok = true;
        std::size_t members = 0;
        SuiteTable* bounds = report.find("bounds");
        if (!bounds) {
            ok = false;
        } else {
            // rows carry formula ids; the sandwich is formed by entries 1-3
            std::vector<std::string> seen;
            for (const auto& row : bounds->rows) {
                if (row[1] == "cheeger_to_poincare" || row[1] == "ledoux_improved" ||
                    row[1] == "ledoux_reverse") {
                    if (row[6] != "pass") ok = false;
                    if (row[1] == "cheeger_to_poincare") {
                        seen.push_back(row[0]);
                        ++members;
                    }
                }
            }
        }
        ok = ok && members >= 10;
        std::ostringstream detail;
        detail << members << " family members";
        criterion(2, "Ledoux sandwich C_P <= 4 C'^2, C' <= (16/pi) sqrt(C_P), C'^2 <= 36 C_P",
                  ok, detail.str());
    }

    // ----- criterion 3: validity sweep over the catalog ----------------------
    {
        std::size_t rows = 0;
        const std::size_t fail_bounds = table_failures(report, "bounds", &rows);
        std::size_t rows_t = 0, rows_m = 0;
        const std::size_t fail_trans = table_failures(report, "transference", &rows_t);
        const std::size_t fail_moll = table_failures(report, "mollification", &rows_m);
        const bool ok =
            fail_bounds == 0 && fail_trans == 0 && fail_moll == 0 && sweep_secs < 300.0;
        std::ostringstream detail;
        detail << rows + rows_t + rows_m << " certificate rows, "
               << fail_bounds + fail_trans + fail_moll << " failures, sweep "
               << format_double(sweep_secs) << "s";
        criterion(3, "validity sweep: every applicable catalog formula >= oracle (2% slack)",
                  ok, detail.str());
    }

    // ----- criterion 4: demollification across the family --------------------
    {
        bool ok = true;
        std::size_t rows = 0;
        SuiteTable* moll = report.find("mollification");
        if (!moll) {
            ok = false;
        } else {
            for (const auto& row : moll->rows)
                if (row[1] == "demollification") {
                    ++rows;
                    if (row[6] != "pass") ok = false;
                }
        }
        ok = ok && rows >= 30;  // 10 members x 3 lambdas
        std::ostringstream detail;
        detail << rows << " (measure, lambda) checks";
        criterion(4, "demollification: C_P(m) <= C_P(mix)/lambda + 1/lambda - 1", ok,
                  detail.str());
    }

    // ----- criterion 5: metric chain on seeded pairs --------------------------
    {
        std::size_t rows = 0;
        const std::size_t fail = table_failures(report, "metric_chain", &rows);
        const double lp_tol = std::pow(0.5, 14);
        const bool ok = fail == 0 && rows == 20 && lp_tol <= 1e-4;
        std::ostringstream detail;
        detail << rows << " pairs, lp bisection tolerance " << format_double(lp_tol);
        criterion(5, "metric comparison chain on 20 seeded log-concave pairs", ok,
                  detail.str());
    }

    // ----- criterion 6: semigroup contractions and the witness ----------------
    {
        bool ok = true;
        std::size_t eq_rows = 0, tv_rows = 0;
        bool witness = false;
        SuiteTable* sg = report.find("semigroup");
        if (!sg) {
            ok = false;
        } else {
            for (const auto& row : sg->rows) {
                if (row[0] == "w1_translated_equality") {
                    ++eq_rows;
                    if (row[4] != "pass") ok = false;
                }
                if (row[0].rfind("tv_vs_w1", 0) == 0) {
                    ++tv_rows;
                    if (row[4] != "pass") ok = false;
                }
                if (row[0].rfind("non_contraction_witness", 0) == 0) {
                    witness = true;
                    if (row[4] != "pass") ok = false;
                }
            }
        }
        ok = ok && eq_rows == 3 && tv_rows >= 3 && witness;
        criterion(6, "semigroup: W1 factor e^{-T/2}, TV-vs-W1 bound, TV witness >= 0.9", ok);
    }

    // ----- criterion 7: profile checks -----------------------------------------
    {
        std::size_t rows = 0;
        const std::size_t fail = table_failures(report, "profiles", &rows);
        criterion(7, "profiles: concavity, brute-force cross-check at N=128, tail property",
                  fail == 0 && rows > 0);
    }

    // ----- criterion 8: desk-scale substitutes for dimensional claims ----------
    {
        bool ok = true;
        // tensorization through an independent dense eigensolve of the
        // Kronecker sum of two small generators
        const GridMeasure a = realize(MeasureSpec::gaussian_spec(0.0, 1.0, 64));
        const GridMeasure b = realize(MeasureSpec::uniform_spec(-1.0, 1.0, 64));
        const auto ka = generator_matrix(a);
        const auto kb = generator_matrix(b);
        const double la = spectral_gap_single_grid(a);
        const double lb = spectral_gap_single_grid(b);
        {
            const std::size_t n = 16;  // subsample to keep the dense solve small
            GridMeasure as = a, bs = b;
            std::vector<double> lda, ldb;
            for (std::size_t i = 0; i < a.size(); i += 4) lda.push_back(a.log_density[i]);
            for (std::size_t i = 0; i < b.size(); i += 4) ldb.push_back(b.log_density[i]);
            as = finalize_measure(a.x0, 4.0 * a.step, lda, true);
            bs = finalize_measure(b.x0, 4.0 * b.step, ldb, true);
            const auto ga = generator_matrix(as);
            const auto gb = generator_matrix(bs);
            const std::size_t na = ga.size(), nb = gb.size();
            std::vector<std::vector<double>> kron(na * nb,
                                                  std::vector<double>(na * nb, 0.0));
            for (std::size_t i = 0; i < na; ++i)
                for (std::size_t j = 0; j < na; ++j)
                    for (std::size_t k = 0; k < nb; ++k)
                        for (std::size_t l = 0; l < nb; ++l)
                            kron[i * nb + k][j * nb + l] =
                                ga[i][j] * (k == l ? 1.0 : 0.0) +
                                (i == j ? 1.0 : 0.0) * gb[k][l];
            const std::vector<double> ev = jacobi_eigenvalues(std::move(kron));
            const double gap_product = ev[1];
            const double la_s = spectral_gap_single_grid(as);
            const double lb_s = spectral_gap_single_grid(bs);
            ok = ok && std::fabs(gap_product - std::min(la_s, lb_s)) <
                           1e-8 * std::max(1.0, std::min(la_s, lb_s));
            (void)ka;
            (void)kb;
            (void)la;
            (void)lb;
            (void)n;
        }
        // linf truncation evaluator: factor >= 1 and -> 1 as n -> infinity
        {
            const double ch = 1.3;
            double prev = kPosInf;
            double last = 0.0;
            for (double n : {10.0, 1e3, 1e6}) {
                const BoundCertificate c =
                    evaluate("linf_truncation", BoundInputs{}
                                                    .set("dim_n", n)
                                                    .set("a_exp", 2.0)
                                                    .set("epsilon", 1.0)
                                                    .set("cheeger_truncated", ch));
                if (!c.preconditions_met || c.value < ch || c.value > prev) ok = false;
                prev = c.value;
                last = c.value;
            }
            ok = ok && std::fabs(last - ch) < 0.01 * ch;
        }
        // latala tail evaluator: monotone in t and n above the threshold
        {
            double prev = kPosInf;
            for (double t : {3.5, 4.0, 5.0}) {
                const BoundCertificate c = evaluate(
                    "latala_tail",
                    BoundInputs{}.set("dim_n", 100.0).set("t", t).set("epsilon", 1.0));
                if (!c.preconditions_met || c.value > prev) ok = false;
                prev = c.value;
            }
            prev = kPosInf;
            for (double n : {10.0, 100.0, 1000.0}) {
                const BoundCertificate c = evaluate(
                    "latala_tail",
                    BoundInputs{}.set("dim_n", n).set("t", 4.0).set("epsilon", 1.0));
                if (!c.preconditions_met || c.value > prev) ok = false;
                prev = c.value;
            }
        }
        criterion(8, "dimensional claims covered by substitutes (tensorization, linf, tail)",
                  ok);
    }

    // ----- criterion 9: determinism --------------------------------------------
    {
        cfg.out_dir = dir2.string();
        run_and_emit(cfg);
        bool ok = true;
        std::size_t compared = 0;
        for (const auto& entry : fs::directory_iterator(dir1)) {
            if (entry.path().extension() != ".csv") continue;
            ++compared;
            const std::string other = (dir2 / entry.path().filename()).string();
            if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ok = false;
        }
        ok = ok && compared > 0;
        std::ostringstream detail;
        detail << compared << " csv files byte-compared";
        criterion(9, "determinism: identical seed gives byte-identical csv reports", ok,
                  detail.str());
        fs::remove_all(dir1);
        fs::remove_all(dir2);
    }

    std::printf("%d criterion failure(s)\n", failures);
    return failures;
}
