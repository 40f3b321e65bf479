#include "tvpl/convex.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace tvpl {

bool is_convex(const ScalarField& u, double tol) {
    const Grid& g = u.grid;
    std::array<std::array<int, 2>, 4> dirs{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
    int ndirs = g.dim == 2 ? 4 : 1;
    for (int d = 0; d < ndirs; ++d) {
        auto [di, dj] = dirs[d];
        for (int off : {1, 2}) {
            int si = di * off, sj = dj * off;
            for (int j = 0; j < g.nodes_y(); ++j)
                for (int i = 0; i < g.nodes_x(); ++i) {
                    int il = i - si, jl = j - sj, ir = i + si, jr = j + sj;
                    if (il < 0 || ir >= g.nodes_x()) continue;
                    if (g.dim == 2 && (std::min(jl, jr) < 0 || std::max(jl, jr) >= g.nodes_y()))
                        continue;
                    if (u.at(il, g.dim == 2 ? jl : 0) + u.at(ir, g.dim == 2 ? jr : 0) <
                        2.0 * u.at(i, j) - tol)
                        return false;
                }
        }
    }
    return true;
}

SubdifferentialEstimate subdifferential_at(const ScalarField& u, int i, int j, double tol) {
    const Grid& g = u.grid;
    if (i <= 0 || i >= g.cells[0] || (g.dim == 2 && (j <= 0 || j >= g.cells[1])))
        throw BoundaryNode("one-sided slopes need both neighbors");
    SubdifferentialEstimate est;
    est.dim = g.dim;
    est.point = {g.x(i), g.dim == 2 ? g.y(j) : 0.0};
    est.is_singleton = true;
    for (int a = 0; a < g.dim; ++a) {
        int di = a == 0 ? 1 : 0, dj = a == 1 ? 1 : 0;
        double h = g.spacing[a];
        double lo = (u.at(i, j) - u.at(i - di, j - dj)) / h;
        double hi = (u.at(i + di, j + dj) - u.at(i, j)) / h;
        if (lo > hi + 1e-12 * (1.0 + std::abs(lo) + std::abs(hi)))
            throw NotConvex("one-sided slopes are not ordered at this node");
        est.lower[a] = lo;
        est.upper[a] = hi;
        est.witness[a] = 0.5 * (lo + hi);
        if (hi - lo > tol) est.is_singleton = false;
    }
    return est;
}

SubdifferentialEstimate subdifferential_at(const ScalarField& u, int i, double tol) {
    return subdifferential_at(u, i, 0, tol);
}

double default_facet_tol(const ScalarField& u) {
    double lip = lp_norm(grad_h(u), std::numeric_limits<double>::infinity());
    double h = u.grid.spacing[0];
    if (u.grid.dim == 2) h = std::max(h, u.grid.spacing[1]);
    return 10.0 * h * lip;
}

FacetReport facet_detect(const ScalarField& u, double tol) {
    const Grid& g = u.grid;
    double scale = 0.0;
    for (double v : u.values) scale = std::max(scale, std::abs(v));
    if (!is_convex(u, 1e-10 * (1.0 + scale)))
        throw NotConvex("facet detection requires a convex field");

    FacetReport rep;
    rep.tol = tol;
    rep.min_value = *std::min_element(u.values.begin(), u.values.end());
    rep.facet_mask.assign(u.values.size(), 0);
    for (size_t k = 0; k < u.values.size(); ++k)
        rep.facet_mask[k] = u.values[k] <= rep.min_value + tol ? 1 : 0;
    rep.facet_size = std::count(rep.facet_mask.begin(), rep.facet_mask.end(), 1);

    auto in_facet = [&](int i, int j) { return rep.facet_mask[g.node_index(i, j)] != 0; };
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int i = 0; i < g.nodes_x(); ++i) {
            if (!in_facet(i, j)) continue;
            if (g.is_boundary_node(i, j)) {
                rep.touches_boundary = true;
                continue; // boundary nodes lie outside the open domain
            }
            bool edge = false;
            if (i > 0 && !in_facet(i - 1, j)) edge = true;
            if (i < g.cells[0] && !in_facet(i + 1, j)) edge = true;
            if (g.dim == 2) {
                if (j > 0 && !in_facet(i, j - 1)) edge = true;
                if (j < g.cells[1] && !in_facet(i, j + 1)) edge = true;
            }
            if (edge) rep.boundary_nodes.push_back(g.node_index(i, j));
        }

    // connectivity: flood fill from the first facet node
    long first = -1;
    for (size_t k = 0; k < rep.facet_mask.size(); ++k)
        if (rep.facet_mask[k]) {
            first = static_cast<long>(k);
            break;
        }
    if (first >= 0) {
        std::vector<std::uint8_t> seen(rep.facet_mask.size(), 0);
        std::deque<long> queue{first};
        seen[first] = 1;
        long reached = 0;
        while (!queue.empty()) {
            long k = queue.front();
            queue.pop_front();
            ++reached;
            int i = static_cast<int>(k % g.nodes_x());
            int j = static_cast<int>(k / g.nodes_x());
            auto push = [&](int ii, int jj) {
                if (ii < 0 || ii >= g.nodes_x() || jj < 0 || jj >= g.nodes_y()) return;
                long kk = g.node_index(ii, jj);
                if (!seen[kk] && rep.facet_mask[kk]) {
                    seen[kk] = 1;
                    queue.push_back(kk);
                }
            };
            push(i - 1, j);
            push(i + 1, j);
            if (g.dim == 2) {
                push(i, j - 1);
                push(i, j + 1);
            }
        }
        rep.connected = reached == rep.facet_size;
    }
    return rep;
}

BlowUpSequence blow_up(const ScalarField& u, const std::array<double, 2>& x0,
                       const std::vector<double>& scales, double window_radius) {
    const Grid& g = u.grid;
    if (scales.empty()) throw InvalidRange("need at least one scale");
    for (size_t k = 0; k < scales.size(); ++k) {
        if (!(scales[k] > 0.0)) throw InvalidRange("scales must be positive");
        if (k > 0 && !(scales[k] < scales[k - 1]))
            throw InvalidRange("scales must be strictly decreasing");
    }
    double amax = scales.front();
    for (int a = 0; a < g.dim; ++a) {
        double lo = g.origin[a], hi = g.origin[a] + g.spacing[a] * g.cells[a];
        if (x0[a] - amax * window_radius < lo - 1e-12 ||
            x0[a] + amax * window_radius > hi + 1e-12)
            throw WindowTooLarge("rescaled window leaves the domain");
    }

    Grid window;
    window.dim = g.dim;
    for (int a = 0; a < g.dim; ++a) {
        int half = std::max(2, static_cast<int>(std::round(window_radius / g.spacing[a])));
        window.cells[a] = 2 * half;
        window.spacing[a] = window_radius / half;
        window.origin[a] = x0[a] - window_radius;
    }
    window.validate();

    BlowUpSequence seq;
    seq.center = x0;
    seq.scales = scales;
    double u0 = u.interpolate(x0[0], x0[1]);
    for (double a : scales) {
        ScalarField ua(window, 0.0);
        for (int j = 0; j < window.nodes_y(); ++j)
            for (int i = 0; i < window.nodes_x(); ++i) {
                double px = x0[0] + a * (window.x(i) - x0[0]);
                double py = g.dim == 2 ? x0[1] + a * (window.y(j) - x0[1]) : 0.0;
                ua.at(i, j) = (u.interpolate(px, py) - u0) / a;
            }
        seq.rescaled.push_back(std::move(ua));
    }
    for (size_t k = 0; k + 1 < seq.rescaled.size(); ++k) {
        double dev = 0.0;
        for (size_t m = 0; m < seq.rescaled[k].values.size(); ++m)
            dev = std::max(dev,
                           std::abs(seq.rescaled[k].values[m] - seq.rescaled[k + 1].values[m]));
        seq.deviations.push_back(dev);
    }

    // least-squares affine fit at the smallest scale
    const ScalarField& last = seq.rescaled.back();
    int n = g.dim;
    Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::VectorXd atb = Eigen::VectorXd::Zero(n + 1);
    for (int j = 0; j < window.nodes_y(); ++j)
        for (int i = 0; i < window.nodes_x(); ++i) {
            Eigen::VectorXd row(n + 1);
            row[0] = 1.0;
            row[1] = window.x(i) - x0[0];
            if (n == 2) row[2] = window.y(j) - x0[1];
            ata += row * row.transpose();
            atb += row * last.at(i, j);
        }
    Eigen::VectorXd coef = ata.ldlt().solve(atb);
    seq.affine_slope = coef.tail(n);

    double scale_ref = 0.0;
    for (double v : seq.rescaled.front().values) scale_ref = std::max(scale_ref, std::abs(v));
    double atol = 1e-13 * (1.0 + scale_ref);
    bool shrinking = true;
    for (size_t k = 0; k + 1 < seq.deviations.size(); ++k)
        if (seq.deviations[k + 1] > seq.deviations[k] + atol) shrinking = false;
    if (!shrinking) {
        seq.kind = BlowUpLimit::unresolved;
    } else {
        double dev_last = seq.deviations.empty() ? 0.0 : seq.deviations.back();
        seq.kind = seq.affine_slope.norm() <= 10.0 * dev_last ? BlowUpLimit::zero
                                                              : BlowUpLimit::affine;
    }
    return seq;
}

bool slope_bound_check(const ScalarField& u, int i1, int j1, int i2, int j2,
                       const Eigen::VectorXd& z2, double tol) {
    const Grid& g = u.grid;
    double dx = g.x(i2) - g.x(i1);
    double dy = g.dim == 2 ? g.y(j2) - g.y(j1) : 0.0;
    double d = std::hypot(dx, dy);
    if (d == 0.0) throw InvalidRange("nodes must differ");
    double lhs = g.dim == 2 ? z2[0] * dx / d + z2[1] * dy / d : z2[0] * dx / d;
    double rhs = (u.at(i2, j2) - u.at(i1, j1)) / d;
    return lhs >= rhs - tol;
}

GradientModulus gradient_modulus(const ScalarField& u,
                                 const std::vector<std::uint8_t>& region_mask) {
    const Grid& g = u.grid;
    VectorField grad = grad_h(u);
    auto in_region = [&](int i, int j) {
        return region_mask.empty() || region_mask[g.node_index(i, j)] != 0;
    };

    GradientModulus out;
    int kmax = std::min(20, g.cells[0] - 1);
    std::vector<double> osc(kmax + 1, 0.0);
    // axis-0 edge pairs sharing a row; a pair at lag m is attributed to the
    // nodes between the two edges
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int e = 0; e < g.cells[0]; ++e)
            for (int m = 1; m <= kmax && e + m < g.cells[0]; ++m) {
                bool ok = true;
                for (int t = e; t <= e + m && ok; ++t) ok = in_region(t, j) || in_region(t + 1, j);
                if (!ok) continue;
                double d = std::abs(grad.x_at(e + m, j) - grad.x_at(e, j));
                osc[m] = std::max(osc[m], d);
                if (m == 1) out.max_jump = std::max(out.max_jump, d);
            }
    if (g.dim == 2) {
        for (int i = 0; i < g.nodes_x(); ++i)
            for (int e = 0; e + 1 < g.cells[1]; ++e) {
                if (!(in_region(i, e) || in_region(i, e + 1))) continue;
                double d = std::abs(grad.y_at(i, e + 1) - grad.y_at(i, e));
                out.max_jump = std::max(out.max_jump, d);
                osc[1] = std::max(osc[1], d);
            }
    }
    double running = 0.0;
    for (int m = 1; m <= kmax; ++m) {
        running = std::max(running, osc[m]);
        out.modulus_table.emplace_back(m * g.spacing[0], running);
    }
    return out;
}

} // namespace tvpl
