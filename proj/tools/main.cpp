#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "tvpl/barrier.hpp"
#include "tvpl/convex.hpp"
#include "tvpl/io.hpp"
#include "tvpl/liouville.hpp"
#include "tvpl/solver.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace tvpl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitCertificate = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    long samples = -1;
    std::optional<double> b, p, t1, t2, l0, R, d, alpha;
};

json load_config(const CommonArgs& args) {
    if (args.config_path.empty()) return json::object();
    std::ifstream in(args.config_path);
    if (!in) throw Error("cannot open config " + args.config_path);
    return json::parse(in);
}

void apply_overrides(json& cfg, const CommonArgs& args) {
    auto set = [&](const char* key, const std::optional<double>& v) {
        if (v) cfg[key] = *v;
    };
    set("b", args.b);
    set("p", args.p);
    set("t1", args.t1);
    set("t2", args.t2);
    set("l0", args.l0);
    set("R", args.R);
    set("d", args.d);
    set("alpha", args.alpha);
    if (args.samples > 0) cfg["samples"] = args.samples;
    cfg["seed"] = args.seed;
}

EnergyModel parse_model(const json& cfg, int default_dim) {
    double b = cfg.value("b", 1.0);
    double p = cfg.value("p", 2.0);
    std::string variant = cfg.value("variant", "standard");
    if (variant == "standard") {
        int dim = cfg.value("dim", default_dim);
        return EnergyModel::standard(b, p, dim);
    }
    if (variant != "generalized") throw Error("model variant must be standard or generalized");
    auto rows = cfg.at("anisotropy").get<std::vector<std::vector<double>>>();
    int n = static_cast<int>(rows.size());
    Mat aniso(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) aniso(i, j) = rows.at(i).at(j);
    return EnergyModel::generalized(b, p, aniso);
}

json model_json(const EnergyModel& m) {
    json j;
    j["b"] = m.b();
    j["p"] = m.p();
    j["variant"] = m.variant() == EnergyVariant::standard ? "standard" : "generalized";
    if (m.variant() == EnergyVariant::generalized) {
        std::vector<std::vector<double>> rows(m.dim(), std::vector<double>(m.dim()));
        for (int i = 0; i < m.dim(); ++i)
            for (int j2 = 0; j2 < m.dim(); ++j2) rows[i][j2] = m.anisotropy()(i, j2);
        j["anisotropy"] = rows;
    }
    j["dim"] = m.dim();
    return j;
}

Grid parse_grid(const json& cfg) {
    Grid g;
    g.dim = cfg.at("dim").get<int>();
    auto ext = cfg.at("extents").get<std::vector<int>>();
    auto sp = cfg.at("spacing").get<std::vector<double>>();
    std::vector<double> org(g.dim, 0.0);
    if (cfg.contains("origin")) org = cfg.at("origin").get<std::vector<double>>();
    for (int a = 0; a < g.dim; ++a) {
        g.cells[a] = ext.at(a);
        g.spacing[a] = sp.at(a);
        g.origin[a] = org.at(a);
    }
    g.validate();
    return g;
}

json grid_json(const Grid& g) {
    json j;
    j["dim"] = g.dim;
    j["extents"] = std::vector<int>(g.cells.begin(), g.cells.begin() + g.dim);
    j["spacing"] = std::vector<double>(g.spacing.begin(), g.spacing.begin() + g.dim);
    j["origin"] = std::vector<double>(g.origin.begin(), g.origin.begin() + g.dim);
    return j;
}

ScalarField parse_field(const json& cfg, const Grid& g, BoundaryMode mode) {
    ScalarField u(g, 0.0, mode);
    if (cfg.contains("constant")) {
        double v = cfg.at("constant").get<double>();
        for (double& x : u.values) x = v;
        return u;
    }
    if (cfg.contains("values")) {
        auto vals = cfg.at("values").get<std::vector<double>>();
        if (vals.size() != u.values.size())
            throw Error("field value table does not match the grid");
        u.values = vals;
        return u;
    }
    if (cfg.contains("csv")) return read_scalar_csv(g, cfg.at("csv").get<std::string>(), mode);
    throw Error("field spec needs one of: constant, values, csv");
}

// fixtures may pull their Dirichlet data from the 1D oracle
ScalarField dirichlet_field(const json& cfg, const EnergyModel& model, const Grid& g,
                            const ScalarField& f) {
    if (cfg.contains("from_oracle")) {
        if (g.dim != 1) throw Error("oracle Dirichlet data needs a 1D grid");
        double anchor = cfg.at("from_oracle").value("anchor_flux", 0.0);
        std::vector<double> fn(f.values.begin(), f.values.end());
        return oracle_solve_1d(model, g, fn, anchor).u;
    }
    return parse_field(cfg, g, BoundaryMode::dirichlet);
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

void write_json_artifact(const std::string& dir, const std::string& name, const json& j) {
    write_text_file((fs::path(dir) / name).string(), j.dump(2) + "\n");
}

// timestamps stay out of the JSON artifacts so reruns are byte-identical
void append_run_log(const std::string& dir, const std::string& command) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    std::ofstream log(fs::path(dir) / "run.log", std::ios::app);
    log << command << " finished at epoch_ms=" << ms << "\n";
}

int cmd_solve(const CommonArgs& args) {
    json cfg = load_config(args);
    apply_overrides(cfg, args);
    json mj = cfg.value("model", json::object());
    if (args.b) mj["b"] = *args.b;
    if (args.p) mj["p"] = *args.p;
    EnergyModel model = parse_model(mj, 1);
    Grid grid = parse_grid(cfg.at("grid"));
    ScalarField f = parse_field(cfg.value("f", json{{"constant", 0.0}}), grid,
                                BoundaryMode::dirichlet);
    ScalarField dir = dirichlet_field(cfg.at("dirichlet"), model, grid, f);
    ProblemInstance inst{model, grid, f, dir,
                         cfg.value("q", std::numeric_limits<double>::infinity())};

    SolveOptions opts;
    if (cfg.contains("opts")) {
        const json& o = cfg.at("opts");
        opts.max_iters = o.value("max_iters", opts.max_iters);
        opts.tol_primal = o.value("tol_primal", opts.tol_primal);
        opts.tol_residual = o.value("tol_residual", opts.tol_residual);
        opts.step_ratio = o.value("step_ratio", opts.step_ratio);
    }
    WeakPair sol = solve(inst, opts);

    ensure_dir(args.out_dir);
    write_scalar_csv(sol.u, (fs::path(args.out_dir) / "u.csv").string());
    write_vector_csv(sol.z, (fs::path(args.out_dir) / "z.csv").string());
    write_vector_csv(sol.flux, (fs::path(args.out_dir) / "flux.csv").string());

    json out;
    out["config"] = {{"model", model_json(model)},
                     {"grid", grid_json(grid)},
                     {"opts",
                      {{"max_iters", opts.max_iters},
                       {"tol_primal", opts.tol_primal},
                       {"tol_residual", opts.tol_residual},
                       {"step_ratio", opts.step_ratio}}},
                     {"seed", args.seed}};
    out["converged"] = sol.converged;
    out["iterations"] = sol.iterations;
    out["weak_residual_max"] = sol.residual.weak_residual_max;
    out["complementarity_gap"] = sol.residual.complementarity_gap;
    out["z_norm_excess"] = sol.residual.z_norm_excess;
    write_json_artifact(args.out_dir, "residual.json", out);
    append_run_log(args.out_dir, "solve");
    return sol.converged ? kExitOk : kExitNotConverged;
}

int cmd_oracle1d(const CommonArgs& args) {
    json cfg = load_config(args);
    apply_overrides(cfg, args);
    json mj = cfg.value("model", json::object());
    if (args.b) mj["b"] = *args.b;
    if (args.p) mj["p"] = *args.p;
    EnergyModel model = parse_model(mj, 1);
    Grid grid = parse_grid(cfg.at("grid"));
    if (grid.dim != 1) throw Error("oracle1d needs a 1D grid");
    ScalarField f = parse_field(cfg.value("f", json{{"constant", 0.0}}), grid,
                                BoundaryMode::dirichlet);
    double anchor = cfg.value("anchor_flux", 0.0);
    std::vector<double> fn(f.values.begin(), f.values.end());
    auto sol = oracle_solve_1d(model, grid, fn, anchor);

    ensure_dir(args.out_dir);
    write_scalar_csv(sol.u, (fs::path(args.out_dir) / "u.csv").string());
    write_vector_csv(sol.z, (fs::path(args.out_dir) / "z.csv").string());
    write_vector_csv(sol.flux, (fs::path(args.out_dir) / "flux.csv").string());

    json out;
    out["config"] = {{"model", model_json(model)},
                     {"grid", grid_json(grid)},
                     {"anchor_flux", anchor},
                     {"seed", args.seed}};
    ProblemInstance inst{model, grid, f, sol.u, std::numeric_limits<double>::infinity()};
    WeakPair pair{sol.u, sol.z, sol.flux, {}, 0, true, {}};
    auto rep = weak_residual(pair, inst);
    out["weak_residual_max"] = rep.weak_residual_max;
    out["complementarity_gap"] = rep.complementarity_gap;
    write_json_artifact(args.out_dir, "oracle.json", out);
    append_run_log(args.out_dir, "oracle1d");
    return kExitOk;
}

ScalarField load_input_field(const json& cfg, Grid& grid_out) {
    if (cfg.contains("from_oracle")) {
        const json& o = cfg.at("from_oracle");
        EnergyModel model = parse_model(o.value("model", json::object()), 1);
        Grid grid = parse_grid(o.at("grid"));
        ScalarField f = parse_field(o.value("f", json{{"constant", 0.0}}), grid,
                                    BoundaryMode::dirichlet);
        std::vector<double> fn(f.values.begin(), f.values.end());
        grid_out = grid;
        return oracle_solve_1d(model, grid, fn, o.value("anchor_flux", 0.0)).u;
    }
    Grid grid = parse_grid(cfg.at("grid"));
    grid_out = grid;
    return parse_field(cfg, grid, BoundaryMode::dirichlet);
}

int cmd_facet(const CommonArgs& args) {
    json cfg = load_config(args);
    apply_overrides(cfg, args);
    Grid grid;
    ScalarField u = load_input_field(cfg.at("field"), grid);
    double tol = cfg.contains("tol") ? cfg.at("tol").get<double>() : default_facet_tol(u);
    auto rep = facet_detect(u, tol);

    ensure_dir(args.out_dir);
    ScalarField mask(grid);
    for (size_t k = 0; k < mask.values.size(); ++k) mask.values[k] = rep.facet_mask[k];
    write_scalar_csv(mask, (fs::path(args.out_dir) / "facet_mask.csv").string());

    auto gm = gradient_modulus(u);
    {
        std::ofstream mod(fs::path(args.out_dir) / "modulus.csv");
        mod << "distance,oscillation\n";
        for (auto [dist, osc] : gm.modulus_table)
            mod << format_double(dist) << ',' << format_double(osc) << '\n';
    }

    json out;
    out["config"] = {{"grid", grid_json(grid)}, {"tol", tol}, {"seed", args.seed}};
    out["min_value"] = rep.min_value;
    out["facet_size"] = rep.facet_size;
    out["connected"] = rep.connected;
    out["touches_boundary"] = rep.touches_boundary;
    out["boundary_nodes"] = rep.boundary_nodes;
    out["max_gradient_jump"] = gm.max_jump;
    write_json_artifact(args.out_dir, "facet.json", out);
    append_run_log(args.out_dir, "facet");
    return kExitOk;
}

int cmd_blowup(const CommonArgs& args) {
    json cfg = load_config(args);
    apply_overrides(cfg, args);
    Grid grid;
    ScalarField u = load_input_field(cfg.at("field"), grid);
    std::array<double, 2> x0{0.0, 0.0};
    auto xs = cfg.at("x0").get<std::vector<double>>();
    for (size_t a = 0; a < xs.size() && a < 2; ++a) x0[a] = xs[a];
    auto scales = cfg.at("scales").get<std::vector<double>>();
    double radius = cfg.value("window_radius", 1.0);
    auto seq = blow_up(u, x0, scales, radius);

    ensure_dir(args.out_dir);
    {
        std::ofstream dev(fs::path(args.out_dir) / "deviations.csv");
        dev << "scale,next_scale,sup_deviation\n";
        for (size_t k = 0; k + 1 < seq.scales.size(); ++k)
            dev << format_double(seq.scales[k]) << ',' << format_double(seq.scales[k + 1])
                << ',' << format_double(seq.deviations[k]) << '\n';
    }
    write_scalar_csv(seq.rescaled.back(),
                     (fs::path(args.out_dir) / "rescaled_finest.csv").string());

    json out;
    out["config"] = {{"grid", grid_json(grid)},
                     {"x0", xs},
                     {"scales", scales},
                     {"window_radius", radius},
                     {"seed", args.seed}};
    const char* kind = seq.kind == BlowUpLimit::zero     ? "zero"
                       : seq.kind == BlowUpLimit::affine ? "affine"
                                                         : "unresolved";
    out["limit"] = kind;
    out["affine_slope"] = std::vector<double>(
        seq.affine_slope.data(), seq.affine_slope.data() + seq.affine_slope.size());
    out["deviations"] = seq.deviations;
    write_json_artifact(args.out_dir, "blowup.json", out);
    append_run_log(args.out_dir, "blowup");
    return kExitOk;
}

json condition_json(const ConditionReport& c) {
    return json{{"satisfied", c.satisfied}, {"margin", c.margin}};
}

int cmd_barrier(const CommonArgs& args) {
    json cfg = load_config(args);
    apply_overrides(cfg, args);
    const json c = cfg.value("context", json::object());
    int n = c.value("n", 2);
    json mj = cfg.value("model", json{{"b", c.value("b", 1.0)}, {"p", c.value("p", 2.0)}});
    if (args.b) mj["b"] = *args.b;
    if (args.p) mj["p"] = *args.p;
    EnergyModel model = parse_model(mj, n);
    Vec cv = Vec::Zero(model.dim());
    cv[0] = 1.0;
    if (c.contains("c")) {
        auto cc = c.at("c").get<std::vector<double>>();
        for (int a = 0; a < model.dim() && a < static_cast<int>(cc.size()); ++a) cv[a] = cc[a];
    }
    auto ctx = BarrierContext::make(model, cv, c.value("m", 1.0),
                                    cfg.value("R", c.value("R", 1.0)));

    std::string variant = cfg.value("variant", "exponential");
    BarrierSpec spec = variant == "power" ? construct_power(ctx) : construct_exponential(ctx);
    if (cfg.contains("alpha")) spec.alpha = cfg.at("alpha").get<double>();
    if (cfg.contains("beta")) spec.beta = cfg.at("beta").get<double>();

    long samples = cfg.value("samples", 10000L);
    auto cert = verify_barrier(spec, samples);

    json out;
    out["config"] = {{"variant", variant},
                     {"context",
                      {{"model", model_json(model)},
                       {"c", std::vector<double>(cv.data(), cv.data() + cv.size())},
                       {"m", ctx.m},
                       {"R", ctx.R},
                       {"n", model.dim()}}},
                     {"samples", samples},
                     {"seed", args.seed}};
    out["alpha"] = spec.alpha;
    out["beta"] = spec.beta;
    out["bounds"] = {{"mu0", spec.bounds.mu0},
                     {"M0", spec.bounds.M0},
                     {"lambda", spec.bounds.lambda},
                     {"Lambda", spec.bounds.Lambda}};
    out["conditions"] = {{"c1", condition_json(cert.conditions.c1)},
                         {"c2", condition_json(cert.conditions.c2)},
                         {"c3", condition_json(cert.conditions.c3)},
                         {"pucci", condition_json(cert.conditions.pucci)}};
    out["pass"] = cert.pass;
    out["h_min"] = cert.h_min;
    out["h_max"] = cert.h_max;
    out["grad_h_max"] = cert.grad_h_max;
    out["pucci_min"] = cert.pucci_min;
    out["trace_min"] = cert.trace_min;
    out["grad_v_min"] = cert.grad_v_min;
    out["grad_v_max"] = cert.grad_v_max;
    out["dnu_h_max"] = cert.dnu_h_max;
    auto point = [](const SamplePoint& s) {
        return json{{"x", std::vector<double>(s.x.data(), s.x.data() + s.x.size())},
                    {"value", s.value}};
    };
    out["worst_points"] = {{"pucci", point(cert.worst_pucci)},
                           {"trace", point(cert.worst_trace)},
                           {"grad", point(cert.worst_grad)}};
    ensure_dir(args.out_dir);
    write_json_artifact(args.out_dir, "certificate.json", out);
    append_run_log(args.out_dir, "barrier");
    return cert.pass ? kExitOk : kExitCertificate;
}

int cmd_certify(const CommonArgs& args) {
    json cfg = load_config(args);
    apply_overrides(cfg, args);
    const json cc = cfg.value("candidate", json::object());
    std::string kind = cc.value("kind", "type2");
    int n = cc.value("n", 2);
    double t1 = cfg.value("t1", cc.value("t1", 1.0));
    double t2 = cfg.value("t2", cc.value("t2", 1.0));
    double l0 = cfg.value("l0", cc.value("l0", 1.0));
    PLCandidate cand = kind == "type1"   ? PLCandidate::type1(t1, n)
                       : kind == "type3" ? PLCandidate::type3(t1, t2, l0, n)
                                         : PLCandidate::type2(t1, t2, n);
    json mj = cfg.value("model", json::object());
    if (args.b) mj["b"] = *args.b;
    if (args.p) mj["p"] = *args.p;
    EnergyModel model = parse_model(mj, n);

    TestBump proto = canonical_bumps(0.5, n);
    double d = cfg.contains("d") ? cfg.at("d").get<double>() : choose_d(cand, model, proto);
    TestBump bump = canonical_bumps(d, n);

    json out;
    out["config"] = {
        {"candidate", {{"kind", kind}, {"t1", t1}, {"t2", t2}, {"l0", l0}, {"n", n}}},
        {"model", model_json(model)},
        {"d", d},
        {"seed", args.seed}};
    out["bump"] = {{"d", bump.d},
                   {"phi1_at_0", bump.phi1_at_0},
                   {"norm_phi2_L1", bump.norm_phi2_L1},
                   {"norm_grad_phi2_L1", bump.norm_grad_phi2_L1}};

    double value;
    bool certifies;
    if (model.variant() == EnergyVariant::generalized) {
        auto r = generalized_residuals(cand, model, bump);
        value = r.value;
        certifies = r.value < 0.0;
        out["mu1"] = r.mu1;
        if (cand.kind == PLCandidate::Kind::type2) out["mu2"] = r.mu2;
        out["psi_line_mass"] = r.psi_line_mass;
        out["is_bound"] = r.is_bound;
    } else if (cand.kind == PLCandidate::Kind::type2) {
        value = type2_residual(cand, model, bump);
        certifies = value < 0.0;
        out["is_bound"] = false;
    } else {
        value = type1_residual_bound(cand, model, bump);
        certifies = value < 0.0;
        out["is_bound"] = true;
    }
    out["bound_or_residual"] = value;
    out["verdict"] = certifies ? "not_weak_solution" : "inconclusive";

    long resolution = cfg.value("crosscheck_resolution", 1000000L);
    if (resolution > 0) {
        double cross = quadrature_crosscheck(cand, model, bump, resolution);
        out["crosscheck"] = cross;
        out["crosscheck_resolution"] = resolution;
    }
    ensure_dir(args.out_dir);
    write_json_artifact(args.out_dir, "certificate.json", out);
    append_run_log(args.out_dir, "certify");
    return certifies ? kExitOk : kExitCertificate;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational solver and certificate toolkit for the TV + p-Laplacian model"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string command;
    for (const char* name : {"solve", "oracle1d", "facet", "blowup", "barrier", "certify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "JSON config file");
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--seed", args.seed, "seed recorded in artifacts");
        sub->add_option("--samples", args.samples, "sample count override");
        sub->add_option("--b", args.b, "model weight b");
        sub->add_option("--p", args.p, "growth exponent p");
        sub->add_option("--t1", args.t1, "candidate slope t1");
        sub->add_option("--t2", args.t2, "candidate slope t2");
        sub->add_option("--l0", args.l0, "candidate slab width");
        sub->add_option("--R", args.R, "barrier radius");
        sub->add_option("--d", args.d, "test-cube half width");
        sub->add_option("--alpha", args.alpha, "barrier alpha override");
        sub->callback([&command, name]() { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (command == "solve") return cmd_solve(args);
        if (command == "oracle1d") return cmd_oracle1d(args);
        if (command == "facet") return cmd_facet(args);
        if (command == "blowup") return cmd_blowup(args);
        if (command == "barrier") return cmd_barrier(args);
        if (command == "certify") return cmd_certify(args);
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
