#include "logconc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "logconc/errors.hpp"

namespace logconc {

// ---------------------------------------------------------------------------
// Concave piecewise-linear value-function DP for the Lipschitz/box LP.

namespace {

struct PLFunc {
    std::vector<double> x, y;

    std::size_t argmax() const {
        std::size_t k = 0;
        for (std::size_t i = 1; i < y.size(); ++i)
            if (y[i] > y[k]) k = i;
        return k;
    }

    double eval(double q) const {
        if (q <= x.front()) return y.front();
        if (q >= x.back()) return y.back();
        auto it = std::upper_bound(x.begin(), x.end(), q);
        std::size_t j = static_cast<std::size_t>(it - x.begin());
        const double t = (q - x[j - 1]) / (x[j] - x[j - 1]);
        return y[j - 1] + t * (y[j] - y[j - 1]);
    }
};

// sliding max over a window of half-width delta, clipped back to [-box, box]
PLFunc slide_and_clip(const PLFunc& v, double delta, double box) {
    const std::size_t k = v.argmax();
    PLFunc s;
    s.x.reserve(v.x.size() + 2);
    s.y.reserve(v.x.size() + 2);
    for (std::size_t i = 0; i <= k; ++i) {
        s.x.push_back(v.x[i] - delta);
        s.y.push_back(v.y[i]);
    }
    s.x.push_back(v.x[k] + delta);
    s.y.push_back(v.y[k]);
    for (std::size_t i = k + 1; i < v.x.size(); ++i) {
        s.x.push_back(v.x[i] + delta);
        s.y.push_back(v.y[i]);
    }
    // clip domain to [-box, box]
    PLFunc c;
    c.x.push_back(-box);
    c.y.push_back(s.eval(-box));
    for (std::size_t i = 0; i < s.x.size(); ++i)
        if (s.x[i] > -box && s.x[i] < box) {
            c.x.push_back(s.x[i]);
            c.y.push_back(s.y[i]);
        }
    c.x.push_back(box);
    c.y.push_back(s.eval(box));
    return c;
}

}  // namespace

double lipschitz_box_lp(const std::vector<double>& x, const std::vector<double>& d, double lip,
                        double box) {
    const std::size_t n = x.size();
    if (n == 0 || d.size() != n) throw InvalidParameter("lipschitz_box_lp: size mismatch");
    if (!(box >= 0.0) || !(lip >= 0.0)) throw InvalidParameter("lipschitz_box_lp: bad bounds");
    if (box == 0.0) return 0.0;
    if (n == 1) return std::fabs(d[0]) * box;

    // backward sweep of value-to-go functions
    std::vector<double> gstar(n, 0.0);  // argmax of V_{i} used by reconstruction
    PLFunc v;
    v.x = {-box, box};
    v.y = {d[n - 1] * -box, d[n - 1] * box};
    for (std::size_t i = n - 1; i-- > 0;) {
        gstar[i + 1] = v.x[v.argmax()];
        const double delta = lip * (x[i + 1] - x[i]);
        PLFunc s = slide_and_clip(v, delta, box);
        for (std::size_t j = 0; j < s.x.size(); ++j) s.y[j] += d[i] * s.x[j];
        v = std::move(s);
    }
    const std::size_t k0 = v.argmax();
    const double best = v.y[k0];

    // reconstruct a maximizer and verify it
    std::vector<double> f(n);
    f[0] = v.x[k0];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double delta = lip * (x[i + 1] - x[i]);
        double g = gstar[i + 1];
        g = std::clamp(g, f[i] - delta, f[i] + delta);
        f[i + 1] = std::clamp(g, -box, box);
    }
    double achieved = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        achieved += d[i] * f[i];
        scale += std::fabs(d[i]) * box;
    }
    if (std::fabs(achieved - best) > 1e-8 * scale)
        throw LPFailure("lipschitz_box_lp: reconstruction mismatch");
    return best;
}

// ---------------------------------------------------------------------------
// Greedy on-band max flow for a common sorted grid.

double max_onband_flow(const std::vector<double>& x, const std::vector<double>& a,
                       const std::vector<double>& b, double eps) {
    const std::size_t n = x.size();
    if (a.size() != n || b.size() != n) throw InvalidParameter("max_onband_flow: size mismatch");
    double flow = 0.0;
    std::size_t j = 0;
    double remb = n ? b[0] : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double rema = a[i];
        if (rema <= 0.0) continue;
        // advance past sinks below the band (their remaining mass is lost)
        while (j < n && x[j] < x[i] - eps - 1e-15) {
            ++j;
            remb = j < n ? b[j] : 0.0;
        }
        while (rema > 0.0 && j < n && x[j] <= x[i] + eps + 1e-15) {
            const double take = std::min(rema, remb);
            flow += take;
            rema -= take;
            remb -= take;
            if (remb <= 0.0) {
                if (j + 1 < n && x[j + 1] <= x[i] + eps + 1e-15) {
                    ++j;
                    remb = b[j];
                } else if (rema > 0.0) {
                    break;  // band exhausted for this source
                }
            }
        }
    }
    return flow;
}

// ---------------------------------------------------------------------------
// Transportation simplex.

namespace {

struct Cell {
    std::size_t i, j;
    double flow;
    bool alive;
};

}  // namespace

TransportPlan min_cost_transport(const std::vector<double>& xs, const std::vector<double>& a,
                                 const std::vector<double>& ys, const std::vector<double>& b,
                                 const std::function<double(double, double)>& cost) {
    const std::size_t ns = xs.size(), nt = ys.size();
    if (a.size() != ns || b.size() != nt || ns == 0 || nt == 0)
        throw InvalidParameter("min_cost_transport: bad atom lists");
    double sa = 0.0, sb = 0.0;
    for (double v : a) sa += v;
    for (double v : b) sb += v;
    if (!(sa > 0.0) || std::fabs(sa - sb) > 1e-9 * std::max(sa, sb))
        throw InvalidParameter("min_cost_transport: unbalanced supplies");

    // deterministic anti-degeneracy jitter on supplies
    std::vector<double> supply(a), demand(b);
    double jit = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        const double e = 1e-13 * sa * static_cast<double>(i + 1) / static_cast<double>(ns);
        supply[i] += e;
        jit += e;
    }
    demand[nt - 1] += sa - sb + jit;

    std::vector<std::vector<double>> c(ns, std::vector<double>(nt));
    double cmax = 0.0;
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            c[i][j] = cost(xs[i], ys[j]);
            if (!(c[i][j] >= 0.0) || !std::isfinite(c[i][j]))
                throw InvalidParameter("min_cost_transport: costs must be finite and >= 0");
            cmax = std::max(cmax, c[i][j]);
        }
    const double tol = 1e-11 * std::max(1.0, cmax);

    // northwest-corner start
    std::vector<Cell> basis;
    basis.reserve(ns + nt);
    {
        std::size_t i = 0, j = 0;
        double ra = supply[0], rb = demand[0];
        while (true) {
            const double take = std::min(ra, rb);
            basis.push_back({i, j, take, true});
            ra -= take;
            rb -= take;
            if (i + 1 == ns && j + 1 == nt) break;
            if (ra <= rb && i + 1 < ns) {
                ++i;
                ra = supply[i];
            } else {
                ++j;
                rb = demand[j];
            }
        }
    }

    std::vector<double> u(ns), v(nt);
    std::vector<std::vector<std::size_t>> row_cells(ns), col_cells(nt);
    std::vector<char> useen(ns), vseen(nt);

    const std::size_t max_iters = 400 * (ns + nt) + 20000;
    for (std::size_t iter = 0;; ++iter) {
        if (iter >= max_iters) throw LPFailure("min_cost_transport: iteration cap hit");
        // duals via BFS over the basis tree
        for (auto& rc : row_cells) rc.clear();
        for (auto& cc : col_cells) cc.clear();
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (basis[k].alive) {
                row_cells[basis[k].i].push_back(k);
                col_cells[basis[k].j].push_back(k);
            }
        std::fill(useen.begin(), useen.end(), 0);
        std::fill(vseen.begin(), vseen.end(), 0);
        std::queue<std::pair<char, std::size_t>> q;  // ('r', i) or ('c', j)
        u[0] = 0.0;
        useen[0] = 1;
        q.push({'r', 0});
        while (!q.empty()) {
            auto [kind, idx] = q.front();
            q.pop();
            if (kind == 'r') {
                for (std::size_t k : row_cells[idx]) {
                    const std::size_t j = basis[k].j;
                    if (!vseen[j]) {
                        v[j] = c[idx][j] - u[idx];
                        vseen[j] = 1;
                        q.push({'c', j});
                    }
                }
            } else {
                for (std::size_t k : col_cells[idx]) {
                    const std::size_t i = basis[k].i;
                    if (!useen[i]) {
                        u[i] = c[i][idx] - v[idx];
                        useen[i] = 1;
                        q.push({'r', i});
                    }
                }
            }
        }
        for (std::size_t i = 0; i < ns; ++i)
            if (!useen[i]) throw LPFailure("min_cost_transport: basis tree disconnected");

        // pricing (Dantzig)
        double best_red = -tol;
        std::size_t bi = ns, bj = nt;
        for (std::size_t i = 0; i < ns; ++i) {
            const double ui = u[i];
            const auto& ci = c[i];
            for (std::size_t j = 0; j < nt; ++j) {
                const double red = ci[j] - ui - v[j];
                if (red < best_red) {
                    best_red = red;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == ns) break;  // optimal

        // unique cycle: path from row bi to col bj through the basis tree
        // parent pointers over (rows, cols)
        std::vector<std::size_t> prow(ns, SIZE_MAX), pcol(nt, SIZE_MAX);  // cell indices
        std::fill(useen.begin(), useen.end(), 0);
        std::fill(vseen.begin(), vseen.end(), 0);
        std::queue<std::pair<char, std::size_t>> bq;
        useen[bi] = 1;
        bq.push({'r', bi});
        while (!bq.empty() && !vseen[bj]) {
            auto [kind, idx] = bq.front();
            bq.pop();
            if (kind == 'r') {
                for (std::size_t k : row_cells[idx]) {
                    const std::size_t j = basis[k].j;
                    if (!vseen[j]) {
                        vseen[j] = 1;
                        pcol[j] = k;
                        bq.push({'c', j});
                    }
                }
            } else {
                for (std::size_t k : col_cells[idx]) {
                    const std::size_t i = basis[k].i;
                    if (!useen[i]) {
                        useen[i] = 1;
                        prow[i] = k;
                        bq.push({'r', i});
                    }
                }
            }
        }
        if (!vseen[bj]) throw LPFailure("min_cost_transport: cycle search failed");

        // walk back col bj -> row bi collecting the alternating path
        std::vector<std::size_t> path;  // cell indices, starting adjacent to col bj
        {
            char kind = 'c';
            std::size_t idx = bj;
            while (!(kind == 'r' && idx == bi)) {
                const std::size_t k = (kind == 'c') ? pcol[idx] : prow[idx];
                path.push_back(k);
                if (kind == 'c') {
                    kind = 'r';
                    idx = basis[k].i;
                } else {
                    kind = 'c';
                    idx = basis[k].j;
                }
            }
        }
        // entering cell has sign +; cells along the path alternate -, +, ...
        double theta = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < path.size(); t += 2)
            theta = std::min(theta, basis[path[t]].flow);
        std::size_t leave = SIZE_MAX;
        for (std::size_t t = 0; t < path.size(); t += 2) {
            basis[path[t]].flow -= theta;
            if (leave == SIZE_MAX && basis[path[t]].flow <= 1e-15) leave = path[t];
        }
        for (std::size_t t = 1; t < path.size(); t += 2) basis[path[t]].flow += theta;
        if (leave == SIZE_MAX) throw LPFailure("min_cost_transport: no leaving cell");
        basis[leave].alive = false;
        basis.push_back({bi, bj, theta, true});
    }

    TransportPlan plan;
    double total = 0.0;
    std::vector<double> row_sum(ns, 0.0), col_sum(nt, 0.0);
    for (const Cell& cell : basis)
        if (cell.alive && cell.flow > 0.0) {
            plan.from.push_back(cell.i);
            plan.to.push_back(cell.j);
            plan.mass.push_back(cell.flow);
            plan.cost += cell.flow * c[cell.i][cell.j];
            row_sum[cell.i] += cell.flow;
            col_sum[cell.j] += cell.flow;
            total += cell.flow;
        }
    for (std::size_t i = 0; i < ns; ++i)
        if (std::fabs(row_sum[i] - a[i]) > 1e-8 * std::max(1.0, sa))
            throw LPFailure("min_cost_transport: marginal violation");
    for (std::size_t j = 0; j < nt; ++j)
        if (std::fabs(col_sum[j] - b[j]) > 1e-8 * std::max(1.0, sa))
            throw LPFailure("min_cost_transport: marginal violation");
    (void)total;
    return plan;
}

}  // namespace logconc
