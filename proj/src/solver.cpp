#include "tvpl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tvpl {

void ProblemInstance::validate() const {
    grid.validate();
    if (model.variant() != EnergyVariant::standard)
        throw InvalidModel("solver handles the standard (b, p) energy only");
    if (!(f.grid == grid) || !(dirichlet.grid == grid))
        throw GridMismatch("instance fields must share the instance grid");
    for (double v : f.values)
        if (!std::isfinite(v)) throw InvalidRange("source term must be finite");
    // interior values serve as the warm start, so all of them must be usable
    for (double v : dirichlet.values)
        if (!std::isfinite(v)) throw InvalidRange("Dirichlet field must be finite");
}

namespace {

// prox of sigma * conj(|.|^p / p) per edge: solve r + sigma r^{1/(p-1)} = |w|.
double prox_w_conj(double w, double sigma, double p) {
    double mag = std::abs(w);
    if (mag == 0.0) return 0.0;
    double r;
    if (p == 2.0) {
        r = mag / (1.0 + sigma);
    } else if (p == 3.0) {
        // r + sigma sqrt(r) = mag, quadratic in sqrt(r)
        double s = 0.5 * (-sigma + std::sqrt(sigma * sigma + 4.0 * mag));
        r = s * s;
    } else {
        double e = 1.0 / (p - 1.0);
        double lo = 0.0, hi = mag;
        r = mag / 2.0;
        for (int it = 0; it < 80; ++it) {
            double phi = r + sigma * std::pow(r, e) - mag;
            if (phi > 0.0)
                hi = r;
            else
                lo = r;
            double dphi = 1.0 + sigma * e * std::pow(r, e - 1.0);
            double step = phi / dphi;
            double next = r - step;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - r) <= 1e-14 * (1.0 + r)) {
                r = next;
                break;
            }
            r = next;
        }
    }
    return w < 0.0 ? -r : r;
}

double grad_norm_sq_estimate(const Grid& g) {
    // power iteration on -div grad; the analytic bound caps roundoff
    ScalarField v(g);
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (double& x : v.values) x = unif(rng);
    double lam = 0.0;
    for (int it = 0; it < 50; ++it) {
        ScalarField w = div_h(grad_h(v));
        double nrm = 0.0;
        for (double x : w.values) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) break;
        lam = nrm;
        for (size_t k = 0; k < v.values.size(); ++k) v.values[k] = -w.values[k] / nrm;
    }
    double bound = 0.0;
    for (int a = 0; a < g.dim; ++a) bound += 4.0 / (g.spacing[a] * g.spacing[a]);
    return std::min(lam * 1.05, bound);
}

void apply_scalar_flux(const VectorField& g, double p, VectorField& out) {
    for (int a = 0; a < g.grid.dim; ++a)
        for (size_t k = 0; k < g.comp[a].size(); ++k) {
            double s = g.comp[a][k];
            out.comp[a][k] = s == 0.0 ? 0.0 : std::pow(std::abs(s), p - 2.0) * s;
        }
}

} // namespace

namespace {

// residual of the tested weak form against an explicit flux field
// flux = b Z + |grad u|^{p-2} grad u (per edge)
ResidualReport weak_residual_with_flux(const ScalarField& u, const VectorField& z,
                                       const VectorField& flux,
                                       const ProblemInstance& instance) {
    if (!(u.grid == instance.grid) || !(z.grid == instance.grid) ||
        !(flux.grid == instance.grid))
        throw GridMismatch("pair and instance must share a grid");
    const Grid& g = instance.grid;
    VectorField grad = grad_h(u);

    ResidualReport rep;
    for (int ax = 0; ax < g.dim; ++ax)
        for (size_t k = 0; k < grad.comp[ax].size(); ++k) {
            double ge = grad.comp[ax][k];
            double ze = z.comp[ax][k];
            rep.complementarity_gap =
                std::max(rep.complementarity_gap, std::abs(ge) - ze * ge);
            rep.z_norm_excess = std::max(rep.z_norm_excess, std::abs(ze) - 1.0);
        }
    rep.z_norm_excess = std::max(rep.z_norm_excess, 0.0);

    ScalarField div_flux = div_h(flux);
    double vol = g.cell_volume();
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int i = 0; i < g.nodes_x(); ++i) {
            if (g.is_boundary_node(i, j)) continue;
            double r = -div_flux.at(i, j) - instance.f.at(i, j);
            rep.weak_residual_max = std::max(rep.weak_residual_max, std::abs(r) * vol);
        }
    return rep;
}

} // namespace

ResidualReport weak_residual(const ScalarField& u, const VectorField& z,
                             const ProblemInstance& instance) {
    if (!(u.grid == instance.grid) || !(z.grid == instance.grid))
        throw GridMismatch("pair and instance must share a grid");
    VectorField flux(instance.grid);
    apply_scalar_flux(grad_h(u), instance.model.p(), flux);
    double b = instance.model.b();
    for (int ax = 0; ax < instance.grid.dim; ++ax)
        for (size_t k = 0; k < flux.comp[ax].size(); ++k)
            flux.comp[ax][k] += b * z.comp[ax][k];
    return weak_residual_with_flux(u, z, flux, instance);
}

ResidualReport weak_residual(const WeakPair& pair, const ProblemInstance& instance) {
    bool has_flux = pair.flux.comp[0].size() == pair.z.comp[0].size() &&
                    !pair.flux.comp[0].empty();
    if (has_flux) return weak_residual_with_flux(pair.u, pair.z, pair.flux, instance);
    return weak_residual(pair.u, pair.z, instance);
}

double discrete_energy(const ProblemInstance& instance, const ScalarField& u) {
    const Grid& g = instance.grid;
    double b = instance.model.b();
    double p = instance.model.p();
    VectorField grad = grad_h(u);
    double acc = 0.0;
    for (int a = 0; a < g.dim; ++a)
        for (double ge : grad.comp[a])
            acc += b * std::abs(ge) + std::pow(std::abs(ge), p) / p;
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int i = 0; i < g.nodes_x(); ++i)
            if (!g.is_boundary_node(i, j)) acc -= instance.f.at(i, j) * u.at(i, j);
    return acc * g.cell_volume();
}

WeakPair solve(const ProblemInstance& instance, const SolveOptions& opts) {
    instance.validate();
    if (opts.max_iters < 1 || opts.tol_primal < 0.0 || opts.tol_residual < 0.0 ||
        !(opts.step_ratio > 0.0) || opts.check_every < 1)
        throw InvalidOptions("bad solver options");

    const Grid& g = instance.grid;
    const double b = instance.model.b();
    const double p = instance.model.p();

    double L2 = grad_norm_sq_estimate(g);
    // two stacked dual copies of grad_h: stability needs tau*sigma*2*L2 < 1
    double s = std::sqrt(0.995 / (2.0 * L2));
    double tau = s * opts.step_ratio;
    double sigma = s / opts.step_ratio;

    ScalarField u = instance.dirichlet;
    ScalarField ubar = u;
    VectorField y1(g), y2(g), grad_bar(g);
    ScalarField d(g);
    std::vector<std::uint8_t> interior(g.node_count(), 0);
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int i = 0; i < g.nodes_x(); ++i)
            interior[g.node_index(i, j)] = g.is_boundary_node(i, j) ? 0 : 1;

    WeakPair out{u, VectorField(g), VectorField(g), {}, 0, false, {}};
    if (opts.record_energy) out.energy_history.reserve(opts.max_iters);

    const int nx = g.nodes_x(), ny = g.nodes_y(), cx = g.cells[0];
    const double hx = g.spacing[0], hy = g.spacing[1];

    for (long it = 1; it <= opts.max_iters; ++it) {
        // dual ascent on both edge variables, fused with the gradient sweep
        double* gx = grad_bar.comp[0].data();
        const double* ub = ubar.values.data();
        for (int j = 0; j < ny; ++j) {
            const double* row = ub + static_cast<long>(j) * nx;
            double* grow = gx + static_cast<long>(j) * cx;
            for (int e = 0; e < cx; ++e) grow[e] = (row[e + 1] - row[e]) / hx;
        }
        if (g.dim == 2) {
            double* gy = grad_bar.comp[1].data();
            for (int e = 0; e < g.cells[1]; ++e)
                for (int i = 0; i < nx; ++i)
                    gy[static_cast<long>(e) * nx + i] = (ub[(e + 1) * nx + i] - ub[e * nx + i]) / hy;
        }
        for (int a = 0; a < g.dim; ++a) {
            double* y1a = y1.comp[a].data();
            double* y2a = y2.comp[a].data();
            const double* ga = grad_bar.comp[a].data();
            size_t m = y1.comp[a].size();
            if (p == 2.0) {
                for (size_t k = 0; k < m; ++k) {
                    double ge = sigma * ga[k];
                    y1a[k] = std::clamp(y1a[k] + ge, -b, b);
                    y2a[k] = (y2a[k] + ge) / (1.0 + sigma);
                }
            } else if (p == 3.0) {
                for (size_t k = 0; k < m; ++k) {
                    double ge = sigma * ga[k];
                    y1a[k] = std::clamp(y1a[k] + ge, -b, b);
                    double w = y2a[k] + ge;
                    double r = 0.5 * (-sigma + std::sqrt(sigma * sigma + 4.0 * std::abs(w)));
                    y2a[k] = w < 0.0 ? -r * r : r * r;
                }
            } else {
                for (size_t k = 0; k < m; ++k) {
                    double ge = sigma * ga[k];
                    y1a[k] = std::clamp(y1a[k] + ge, -b, b);
                    y2a[k] = prox_w_conj(y2a[k] + ge, sigma, p);
                }
            }
        }
        // primal descent: u += tau (div(y1+y2) + f) on interior nodes
        {
            double* dv = d.values.data();
            const double* y1x = y1.comp[0].data();
            const double* y2x = y2.comp[0].data();
            for (int j = 0; j < ny; ++j) {
                const double* r1 = y1x + static_cast<long>(j) * cx;
                const double* r2 = y2x + static_cast<long>(j) * cx;
                double* drow = dv + static_cast<long>(j) * nx;
                for (int i = 0; i < nx; ++i) {
                    double zr = i < cx ? r1[i] + r2[i] : 0.0;
                    double zl = i > 0 ? r1[i - 1] + r2[i - 1] : 0.0;
                    drow[i] = (zr - zl) / hx;
                }
            }
            if (g.dim == 2) {
                const double* y1y = y1.comp[1].data();
                const double* y2y = y2.comp[1].data();
                int cy = g.cells[1];
                for (int j = 0; j < ny; ++j)
                    for (int i = 0; i < nx; ++i) {
                        double zu = j < cy ? y1y[static_cast<long>(j) * nx + i] +
                                                 y2y[static_cast<long>(j) * nx + i]
                                           : 0.0;
                        double zd = j > 0 ? y1y[static_cast<long>(j - 1) * nx + i] +
                                                y2y[static_cast<long>(j - 1) * nx + i]
                                          : 0.0;
                        dv[static_cast<long>(j) * nx + i] += (zu - zd) / hy;
                    }
            }
            double* uv = u.values.data();
            double* ubv = ubar.values.data();
            const double* fv = instance.f.values.data();
            const double* gv = instance.dirichlet.values.data();
            long nn = g.node_count();
            for (long k = 0; k < nn; ++k) {
                double unew = interior[k] ? uv[k] + tau * (dv[k] + fv[k]) : gv[k];
                ubv[k] = 2.0 * unew - uv[k];
                uv[k] = unew;
            }
        }
        out.iterations = it;
        if (opts.record_energy) out.energy_history.push_back(discrete_energy(instance, u));
        if (it % opts.check_every == 0 || it == opts.max_iters) {
            VectorField z(g);
            for (int a = 0; a < g.dim; ++a)
                for (size_t k = 0; k < y1.comp[a].size(); ++k)
                    z.comp[a][k] = y1.comp[a][k] / b;
            ResidualReport rep = weak_residual(u, z, instance);
            if (rep.complementarity_gap <= opts.tol_primal &&
                rep.weak_residual_max <= opts.tol_residual) {
                out.converged = true;
                break;
            }
        }
    }

    out.u = u;
    out.z = VectorField(g);
    for (int a = 0; a < g.dim; ++a)
        for (size_t k = 0; k < y1.comp[a].size(); ++k) out.z.comp[a][k] = y1.comp[a][k] / b;
    VectorField grad = grad_h(u);
    out.flux = VectorField(g);
    apply_scalar_flux(grad, p, out.flux);
    for (int a = 0; a < g.dim; ++a)
        for (size_t k = 0; k < y1.comp[a].size(); ++k)
            out.flux.comp[a][k] += b * out.z.comp[a][k];
    out.residual = weak_residual(u, out.z, instance);
    return out;
}

bool comparison_check(const ScalarField& u_minus, const ScalarField& u_plus, double tol) {
    if (!(u_minus.grid == u_plus.grid)) throw GridMismatch("fields live on different grids");
    const Grid& g = u_minus.grid;
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int i = 0; i < g.nodes_x(); ++i)
            if (g.is_boundary_node(i, j) && u_minus.at(i, j) > u_plus.at(i, j) + tol)
                throw BoundaryOrderViolated("u_minus exceeds u_plus on the boundary");
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int i = 0; i < g.nodes_x(); ++i)
            if (u_minus.at(i, j) > u_plus.at(i, j) + tol) return false;
    return true;
}

namespace {

// 15-point Gauss-Legendre on [-1, 1]
constexpr int kGaussN = 15;
constexpr double kGaussX[kGaussN] = {
    -0.98799251802048543, -0.93727339240070590, -0.84820658341042722, -0.72441773136017005,
    -0.57097217260853885, -0.39415134707756337, -0.20119409399743452, 0.0,
    0.20119409399743452,  0.39415134707756337,  0.57097217260853885,  0.72441773136017005,
    0.84820658341042722,  0.93727339240070590,  0.98799251802048543};
constexpr double kGaussW[kGaussN] = {
    0.030753241996117268, 0.070366047488108124, 0.107159220467171935, 0.139570677926154314,
    0.166269205816993934, 0.186161000015562211, 0.198431485327111576, 0.202578241925561273,
    0.198431485327111576, 0.186161000015562211, 0.166269205816993934, 0.139570677926154314,
    0.107159220467171935, 0.070366047488108124, 0.030753241996117268};

struct CellFlux {
    // q(x_i + t) = A + B t + C t^2 on the cell
    double A, B, C;
    double operator()(double t) const { return A + t * (B + t * C); }
};

// roots of q(t) = level inside (0, len), appended to cuts
void add_roots(const CellFlux& q, double level, double len, std::vector<double>& cuts) {
    double c = q.A - level, b = q.B, a = q.C;
    if (a == 0.0) {
        if (b != 0.0) {
            double t = -c / b;
            if (t > 0.0 && t < len) cuts.push_back(t);
        }
        return;
    }
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return;
    // cancellation-free quadratic roots
    double s = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    for (double t : {s / a, s != 0.0 ? c / s : -b / (2.0 * a)})
        if (t > 0.0 && t < len) cuts.push_back(t);
}

double slope_of(const EnergyModel& model, double q) { return model.scalar_flux_inverse(q); }

// integral of the inverted flux over [t0, t1] within one cell
double integrate_slope(const EnergyModel& model, const CellFlux& q, double t0, double t1) {
    double mid = q(0.5 * (t0 + t1));
    double b = model.b();
    if (std::abs(mid) <= b) return 0.0; // facet piece
    double gamma = 1.0 / (model.p() - 1.0);
    if (q.C == 0.0) {
        // nearly flat flux: the antiderivative form would cancel catastrophically
        if (std::abs(q.B) * (t1 - t0) <= 1e-12 * (std::abs(q.A) + b))
            return slope_of(model, mid) * (t1 - t0);
        // d/dt (|q|-b)^{gamma+1} = (gamma+1) (|q|-b)^gamma sign(q) B
        double f1 = std::pow(std::max(std::abs(q(t1)) - b, 0.0), gamma + 1.0);
        double f0 = std::pow(std::max(std::abs(q(t0)) - b, 0.0), gamma + 1.0);
        return (f1 - f0) / (q.B * (gamma + 1.0));
    }
    double half = 0.5 * (t1 - t0), center = 0.5 * (t0 + t1);
    double acc = 0.0;
    for (int k = 0; k < kGaussN; ++k)
        acc += kGaussW[k] * slope_of(model, q(center + half * kGaussX[k]));
    return acc * half;
}

} // namespace

OracleSolution oracle_solve_1d(const EnergyModel& model, const Grid& grid,
                               const std::vector<double>& f_nodes, double anchor_flux) {
    grid.validate();
    if (grid.dim != 1) throw InvalidGrid("oracle is one-dimensional");
    if (f_nodes.size() != static_cast<size_t>(grid.nodes_x()))
        throw GridMismatch("source values must be nodal");

    int n = grid.cells[0];
    double h = grid.spacing[0];

    // nodal flux by exact integration of the piecewise-linear source
    std::vector<double> q_node(n + 1);
    q_node[0] = anchor_flux;
    for (int i = 0; i < n; ++i)
        q_node[i + 1] = q_node[i] - 0.5 * h * (f_nodes[i] + f_nodes[i + 1]);

    OracleSolution sol;
    sol.u = ScalarField(grid, 0.0);
    sol.z = VectorField(grid);
    sol.flux = VectorField(grid);

    double b = model.b();
    for (int i = 0; i < n; ++i) {
        CellFlux q{q_node[i], -f_nodes[i], -(f_nodes[i + 1] - f_nodes[i]) / (2.0 * h)};
        double qm = q(0.5 * h);
        sol.flux.comp[0][i] = qm;
        sol.z.comp[0][i] = std::clamp(qm / b, -1.0, 1.0);

        std::vector<double> cuts{0.0, h};
        add_roots(q, b, h, cuts);
        add_roots(q, -b, h, cuts);
        std::sort(cuts.begin(), cuts.end());
        double du = 0.0;
        for (size_t k = 0; k + 1 < cuts.size(); ++k)
            du += integrate_slope(model, q, cuts[k], cuts[k + 1]);
        sol.u.values[i + 1] = sol.u.values[i] + du;
    }
    return sol;
}

OracleSolution oracle_solve_1d(const EnergyModel& model, const Grid& grid, double f_constant,
                               double anchor_flux) {
    return oracle_solve_1d(model, grid,
                           std::vector<double>(grid.nodes_x(), f_constant), anchor_flux);
}

} // namespace tvpl
