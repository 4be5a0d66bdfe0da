#include "cli.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "bnls/constants.hpp"
#include "bnls/error.hpp"
#include "bnls/field_io.hpp"
#include "bnls/parallel.hpp"
#include "bnls/scalings.hpp"
#include "bnls/solvers.hpp"
#include "bnls/verify.hpp"

namespace bnls::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* sweep_columns =
    "CSV columns (sweep): N, p, eps, C, c_eps, omega_eps, v_mass, q_mass, residual_pde, residual_raw, sweeps,\n"
    "  eps_exponent = alpha/(p-2), c_eps_at_unit_eps = c_eps * eps^(-eps_exponent) (constant in eps for fixed N, p),\n"
    "  verify_pass (1 if every identity check on Q passed).";

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << text;
}

json nt_json(const NormTuple& nt) {
    return {{"mass", nt.mass}, {"grad", nt.grad}, {"bilap", nt.bilap}, {"lp", nt.lp}};
}

// Resolved objects for one command.
struct Setup {
    RunConfig cfg;
    Params params;
    BoxGrid grid;
    SolverConfig solver;
    fs::path out;
};

Params make_params(const RunConfig& c) {
    double eps = 1.0;
    if (c.eps) {
        eps = *c.eps;
    } else {
        spdlog::info("eps not given; using the default eps = 1");
    }
    return Params(c.N, c.p, eps, c.omega, c.mass);
}

Setup make_setup(const RunConfig& c) {
    Params params = make_params(c);  // regime check before anything heavy
    BoxGrid grid(c.N, c.points, c.L);
    SolverConfig s;
    s.max_iters = c.max_iters;
    s.tol_residual = c.tol_residual;
    s.relaxation = c.relaxation;
    s.seed = c.seed;
    s.init = init_kind_from_string(c.init);
    s.filter = c.filter;
    s.petviashvili_gamma = c.gamma;
    if (c.load) {
        s.initial_field = read_field(*c.load);
        s.init = InitKind::stored_field;
    }
    s.validate();
    fs::path out(c.out);
    fs::create_directories(out);
    return {c, params, grid, s, out};
}

json sidecar(const Setup& st, const std::string& command) {
    return {{"command", command},
            {"timestamp", utc_timestamp()},
            {"config", to_json(st.cfg)},
            {"config_hash", config_hash(st.cfg)}};
}

void write_profile_csv(const fs::path& path, const Field& u) {
    const BoxGrid& g = u.grid();
    std::ostringstream os;
    for (int a = 0; a < g.dim(); ++a) os << "x" << a << ",";
    os << "u\n";
    const std::size_t m = g.points();
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::vector<std::size_t> idx(static_cast<std::size_t>(g.dim()));
        std::size_t rest = i;
        for (int a = g.dim() - 1; a >= 0; --a) {
            idx[static_cast<std::size_t>(a)] = rest % m;
            rest /= m;
        }
        for (std::size_t j : idx) os << num(g.coordinate(j)) << ",";
        os << num(u[i]) << "\n";
    }
    write_text(path, os.str());
}

void write_history_csv(const fs::path& path, const GroundState& gs) {
    std::ostringstream os;
    os << "iter,residual,energy\n";
    const std::size_t n = std::max(gs.residual_history.size(), gs.energy_history.size());
    for (std::size_t i = 0; i < n; ++i) {
        os << i + 1 << ",";
        if (i < gs.residual_history.size()) os << num(gs.residual_history[i]);
        os << ",";
        if (i < gs.energy_history.size()) os << num(gs.energy_history[i]);
        os << "\n";
    }
    write_text(path, os.str());
}

void write_fiber_csv(const fs::path& path, const GroundState& gs) {
    const double omega = gs.params.omega().value_or(gs.omega_extracted);
    const Params pw = gs.params.with_omega(omega);
    std::ostringstream os;
    os << "t,action\n";
    for (int k = -16; k <= 16; ++k) {
        const double t = std::exp2(k / 8.0);
        os << num(t) << "," << num(action(fiber_scale_laws(gs.nt, t, pw), pw)) << "\n";
    }
    write_text(path, os.str());
}

void write_state(const Setup& st, const std::string& stem, const std::string& command, const GroundState& gs,
                 const json& extra = json::object()) {
    write_field(st.out / (stem + ".bnls"), gs.field);
    json side = sidecar(st, command);
    side["params"] = {{"N", gs.params.bigN()}, {"p", gs.params.p()}, {"eps", gs.params.eps()}};
    if (gs.params.omega()) side["params"]["omega"] = *gs.params.omega();
    if (gs.params.mass_c()) side["params"]["mass"] = *gs.params.mass_c();
    side["route"] = to_string(gs.route);
    side["outcome"] = to_string(gs.outcome);
    side["iters"] = gs.iters;
    side["residual_pde"] = std::isfinite(gs.residual_pde) ? json(gs.residual_pde) : json(nullptr);
    side["residual_raw"] = std::isfinite(gs.residual_raw) ? json(gs.residual_raw) : json(nullptr);
    side["omega_extracted"] = gs.omega_extracted;
    side["norms"] = nt_json(gs.nt);
    side["grid"] = {{"dim", gs.field.grid().dim()},
                    {"points", gs.field.grid().points()},
                    {"L", gs.field.grid().length()}};
    side["field_hash"] = field_hash(gs.field);
    side["solver"] = extra;
    write_text(st.out / (stem + ".json"), side.dump(2) + "\n");
    write_profile_csv(st.out / (stem + "_profile.csv"), gs.field);
    write_history_csv(st.out / (stem + "_residuals.csv"), gs);
    if (gs.outcome == Outcome::converged && gs.omega_extracted > 0.0)
        write_fiber_csv(st.out / (stem + "_fiber.csv"), gs);
}

void print_state(std::ostream& out, const std::string& label, const GroundState& gs) {
    out << label << ": route " << to_string(gs.route) << ", outcome " << to_string(gs.outcome) << ", iters "
        << gs.iters << "\n"
        << "  mass " << num(gs.nt.mass) << ", grad " << num(gs.nt.grad) << ", bilap " << num(gs.nt.bilap) << ", lp "
        << num(gs.nt.lp) << "\n"
        << "  omega_extracted " << num(gs.omega_extracted) << ", residual_pde " << num(gs.residual_pde)
        << ", residual_raw " << num(gs.residual_raw) << "\n";
}

GroundState state_from_field(const Field& u, const Params& params, double omega, Route route) {
    const NormTuple nt = norms(u, params.p());
    const double extracted = (nt.lp - params.eps() * nt.bilap - nt.grad) / nt.mass;
    const PdeResiduals r = pde_residuals(u, params, omega);
    return GroundState{u, params.with_omega(omega), nt, extracted, r.preconditioned, r.raw, 0, route,
                       Outcome::converged, {}, {}};
}

int cmd_constants(const Setup& st, std::ostream& out) {
    const ConstantsRun run = compute_constants(st.params, st.grid, st.solver);
    json report = to_json(run.report);
    report["config_hash"] = config_hash(st.cfg);
    write_text(st.out / "constants.json", report.dump(2) + "\n");
    write_text(st.out / "constants.sidecar.json", sidecar(st, "constants").dump(2) + "\n");
    out << to_table(run.report);
    return exit_pass;
}

int cmd_ground_state(const Setup& st, std::ostream& out) {
    if (st.cfg.route == "weinstein_Q") {
        const RouteQResult rq = route_Q(st.params, st.grid, st.solver);
        write_state(st, "ground_state", "ground-state", rq.gs,
                    {{"weinstein_sweeps", rq.weinstein.sweeps},
                     {"C", rq.weinstein.C},
                     {"lambda", rq.lambda},
                     {"mu", rq.mu},
                     {"omega_formula", rq.omega_formula}});
        print_state(out, "ground state", rq.gs);
        out << "  C " << num(rq.weinstein.C) << ", omega(eps) " << num(rq.omega_formula) << "\n";
        return exit_pass;
    }
    if (st.cfg.route == "mass_flow") {
        if (!st.params.mass_c()) throw ConfigError("route mass_flow needs --mass");
        const GroundState gs = mass_constrained_flow(st.params, st.grid, st.solver);
        write_state(st, "ground_state", "ground-state", gs);
        print_state(out, "ground state", gs);
        out << "  energy " << num(energy(gs.nt, st.params)) << "\n";
        if (gs.outcome == Outcome::no_minimizer) out << "  no minimizer: the flow spread to the box boundary\n";
        return exit_pass;
    }
    throw ConfigError("unknown route '" + st.cfg.route + "' (expected weinstein_Q or mass_flow)");
}

int cmd_action_gss(const Setup& st, std::ostream& out) {
    Params params = st.params;
    if (!params.omega()) {
        const RouteQResult rq = route_Q(st.params, st.grid, st.solver);
        spdlog::info("omega not given; using omega(eps) = {:.15g} from the constants pipeline", rq.omega_formula);
        params = params.with_omega(rq.omega_formula);
    }
    const GroundState gs = petviashvili(params, st.grid, st.solver);
    write_state(st, "action_gss", "action-gss", gs);
    print_state(out, "action ground state", gs);
    return exit_pass;
}

int cmd_verify(const Setup& st, std::ostream& out) {
    const ConstantsRun run = compute_constants(st.params, st.grid, st.solver);
    const ConstantsReport& cr = run.report;
    GroundState gs_e = run.route.gs;
    std::optional<GroundState> gs_a;
    if (st.cfg.fresh) {
        gs_a = petviashvili(st.params.with_omega(cr.omega_eps.value), st.grid, st.solver);
    } else {
        if (!st.cfg.energy_state || !st.cfg.action_state)
            throw ConfigError("verify needs --fresh or both --energy-state and --action-state");
        const Field fe = read_field(*st.cfg.energy_state);
        const Field fa = read_field(*st.cfg.action_state);
        if (fe.grid().dim() != st.params.bigN() || fa.grid().dim() != st.params.bigN())
            throw ConfigError("stored states must have dimension N");
        gs_e = state_from_field(fe, st.params, cr.omega_eps.value, Route::weinstein_Q);
        const double omega_a = st.params.omega().value_or(cr.omega_eps.value);
        gs_a = state_from_field(fa, st.params, omega_a, Route::petviashvili);
    }

    const BoxGrid tight = st.grid.with_length(st.grid.length() / 10.0);
    const std::vector<std::function<VerificationReport()>> tasks = {
        [&] { return verify_Q(gs_e, cr); },
        [&] { return verify_equivalence(gs_e, *gs_a, cr.c_eps.value); },
        [&] { return verify_gn_random(st.params, cr.C.value, cr.K.value, st.grid, st.cfg.gn_samples, st.cfg.seed); },
        [&] { return verify_algebra(st.cfg.seed); },
        [&] { return verify_supercritical(st.params, cr.c_eps.value, tight, st.solver); },
    };
    std::vector<VerificationReport> parts(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) { parts[i] = tasks[i](); });
    VerificationReport report;
    for (const auto& p : parts) report.merge(p);
    if (cr.K_numeric)
        report.add("ascent supremum = (p/2) c_eps^{-(p-2)/2}", "k_numeric",
                   std::abs(cr.K_numeric->value - cr.K.value) / cr.K.value, 1e-3);
    const auto missing = missing_anchors(report);
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    report.add("every required anchor reported", "anchor_coverage", static_cast<double>(missing.size()), 0.0, names);

    json j = to_json(report);
    j["constants"] = to_json(cr);
    j["config_hash"] = config_hash(st.cfg);
    write_text(st.out / "verify_report.json", j.dump(2) + "\n");
    write_text(st.out / "verify.sidecar.json", sidecar(st, "verify").dump(2) + "\n");
    out << to_table(report);
    return report.ok() ? exit_pass : exit_check_failure;
}

int cmd_sweep(const Setup& st, std::ostream& out) {
    const std::vector<double> ps = st.cfg.p_grid.empty() ? std::vector<double>{st.cfg.p} : st.cfg.p_grid;
    const std::vector<double> es =
        st.cfg.eps_grid.empty() ? std::vector<double>{st.params.eps()} : st.cfg.eps_grid;
    std::vector<Params> tuples;
    for (double p : ps)
        for (double e : es) tuples.emplace_back(st.cfg.N, p, e);  // regime check up front

    std::vector<std::string> rows(tuples.size());
    parallel_for(tuples.size(), [&](std::size_t i) {
        const Params& pr = tuples[i];
        const ConstantsRun run = compute_constants(pr, st.grid, st.solver, false);
        const ConstantsReport& r = run.report;
        const VerificationReport vr = verify_Q(run.route.gs, r);
        const auto [alpha, beta] = pr.exponent_pack();
        const double expo = alpha / (pr.p() - 2.0);
        std::ostringstream os;
        os << pr.bigN() << "," << num(pr.p()) << "," << num(pr.eps()) << "," << num(r.C.value) << ","
           << num(r.c_eps.value) << "," << num(r.omega_eps.value) << "," << num(r.v_mass.value) << ","
           << num(r.Q_mass.value) << "," << num(run.route.gs.residual_pde) << "," << num(run.route.gs.residual_raw)
           << "," << r.weinstein_sweeps << "," << num(expo) << "," << num(r.c_eps.value * std::pow(pr.eps(), -expo))
           << "," << (vr.ok() ? 1 : 0) << "\n";
        rows[i] = os.str();
    });
    std::string csv =
        "N,p,eps,C,c_eps,omega_eps,v_mass,q_mass,residual_pde,residual_raw,sweeps,eps_exponent,c_eps_at_unit_eps,"
        "verify_pass\n";
    for (const auto& r : rows) csv += r;
    write_text(st.out / "sweep.csv", csv);
    write_text(st.out / "sweep.sidecar.json", sidecar(st, "sweep").dump(2) + "\n");
    out << csv;
    return exit_pass;
}

void dump_divergence(const fs::path& dir, const DivergenceError& e, std::ostream& err) {
    err << "solver diverged: " << e.what() << " (last residual " << num(e.last_residual()) << ")\n";
    std::ostringstream os;
    os << "iter,residual\n";
    for (std::size_t i = 0; i < e.history().size(); ++i) os << i + 1 << "," << num(e.history()[i]) << "\n";
    try {
        fs::create_directories(dir);
        write_text(dir / "divergence_history.csv", os.str());
        err << "residual history written to " << (dir / "divergence_history.csv").string() << "\n";
    } catch (const std::exception&) {
        err << os.str();
    }
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
    j[key] = v ? json(*v) : json(nullptr);
}

template <class T>
void get(const json& j, const char* key, T& dst) {
    if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

template <class T>
void get(const json& j, const char* key, std::optional<T>& dst) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        dst.reset();
    } else {
        dst = j.at(key).get<T>();
    }
}

}  // namespace

json to_json(const RunConfig& c) {
    json j;
    j["N"] = c.N;
    j["p"] = c.p;
    put(j, "eps", c.eps);
    put(j, "omega", c.omega);
    put(j, "mass", c.mass);
    j["points"] = c.points;
    j["L"] = c.L;
    j["max_iters"] = c.max_iters;
    j["tol_residual"] = c.tol_residual;
    j["relaxation"] = c.relaxation;
    j["seed"] = c.seed;
    j["init"] = c.init;
    j["filter"] = c.filter;
    put(j, "gamma", c.gamma);
    j["route"] = c.route;
    put(j, "load", c.load);
    put(j, "energy_state", c.energy_state);
    put(j, "action_state", c.action_state);
    j["fresh"] = c.fresh;
    j["gn_samples"] = c.gn_samples;
    j["p_grid"] = c.p_grid;
    j["eps_grid"] = c.eps_grid;
    j["out"] = c.out;
    return j;
}

void apply_json(RunConfig& c, const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> known = {
        "N",     "p",        "eps",        "omega",        "mass",         "points", "L",          "max_iters",
        "tol_residual", "relaxation", "seed", "init", "filter", "gamma", "route", "load", "energy_state",
        "action_state", "fresh", "gn_samples", "p_grid", "eps_grid", "out"};
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config key '" + key + "'");
    try {
        get(j, "N", c.N);
        get(j, "p", c.p);
        get(j, "eps", c.eps);
        get(j, "omega", c.omega);
        get(j, "mass", c.mass);
        get(j, "points", c.points);
        get(j, "L", c.L);
        get(j, "max_iters", c.max_iters);
        get(j, "tol_residual", c.tol_residual);
        get(j, "relaxation", c.relaxation);
        get(j, "seed", c.seed);
        get(j, "init", c.init);
        get(j, "filter", c.filter);
        get(j, "gamma", c.gamma);
        get(j, "route", c.route);
        get(j, "load", c.load);
        get(j, "energy_state", c.energy_state);
        get(j, "action_state", c.action_state);
        get(j, "fresh", c.fresh);
        get(j, "gn_samples", c.gn_samples);
        get(j, "p_grid", c.p_grid);
        get(j, "eps_grid", c.eps_grid);
        get(j, "out", c.out);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

std::string config_hash(const RunConfig& c) {
    json j = to_json(c);
    j.erase("out");  // where results go does not change them
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("bnls", sink);
    logger->set_pattern("[%l] %v");
    const auto previous = spdlog::default_logger();
    spdlog::set_default_logger(logger);
    struct Restore {
        std::shared_ptr<spdlog::logger> prev;
        ~Restore() { spdlog::set_default_logger(prev); }
    } restore{previous};

    CLI::App app{"Pseudospectral ground states of eps D^4 u - D^2 u + omega u = |u|^{p-2} u"};
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")->capture_default_str();

    json overrides = json::object();
    std::optional<std::string> config_file;
    bool print_config = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option_function<std::string>("--config", [&](const std::string& v) { config_file = v; },
                                               "JSON config file (flags override its values)");
        sub->add_flag("--print-config", print_config, "print the resolved configuration and exit");
        sub->add_option_function<int>("--N", [&](const int& v) { overrides["N"] = v; }, "dimension N (1-3)");
        sub->add_option_function<double>("--p", [&](const double& v) { overrides["p"] = v; }, "exponent p");
        sub->add_option_function<double>("--eps", [&](const double& v) { overrides["eps"] = v; },
                                         "dispersion eps (default 1)");
        sub->add_option_function<double>("--omega", [&](const double& v) { overrides["omega"] = v; }, "frequency");
        sub->add_option_function<double>("--mass", [&](const double& v) { overrides["mass"] = v; }, "mass c");
        sub->add_option_function<std::size_t>("--points", [&](const std::size_t& v) { overrides["points"] = v; },
                                              "grid points per axis (power of two >= 32)");
        sub->add_option_function<double>("--L", [&](const double& v) { overrides["L"] = v; }, "box length");
        sub->add_option_function<int>("--max-iters", [&](const int& v) { overrides["max_iters"] = v; });
        sub->add_option_function<double>("--tol", [&](const double& v) { overrides["tol_residual"] = v; },
                                         "relative residual tolerance");
        sub->add_option_function<double>("--relaxation", [&](const double& v) { overrides["relaxation"] = v; });
        sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { overrides["seed"] = v; });
        sub->add_option_function<std::string>("--init", [&](const std::string& v) { overrides["init"] = v; },
                                              "gaussian_bump|random_bandlimited");
        sub->add_flag_callback("--filter", [&] { overrides["filter"] = true; }, "2/3 low-pass on the nonlinearity");
        sub->add_option_function<double>("--gamma", [&](const double& v) { overrides["gamma"] = v; },
                                         "stabilizing exponent (default (p-1)/(p-2))");
        sub->add_option_function<std::string>("--load", [&](const std::string& v) { overrides["load"] = v; },
                                              "initial field file");
        sub->add_option_function<std::string>("--out", [&](const std::string& v) { overrides["out"] = v; },
                                              "output directory");
    };

    CLI::App* constants = app.add_subcommand("constants", "C, K, c_eps, eps_c, omega(eps) with provenance");
    CLI::App* ground = app.add_subcommand("ground-state", "energy ground state (weinstein_Q or mass_flow route)");
    CLI::App* action = app.add_subcommand("action-gss", "action ground state by Petviashvili iteration");
    CLI::App* verify = app.add_subcommand("verify", "identity verification report");
    CLI::App* sweep = app.add_subcommand("sweep", "constants over a parameter grid, CSV");
    for (CLI::App* s : {constants, ground, action, verify, sweep}) common(s);
    ground->add_option_function<std::string>("--route", [&](const std::string& v) { overrides["route"] = v; },
                                             "weinstein_Q|mass_flow");
    verify->add_flag_callback("--fresh", [&] { overrides["fresh"] = true; }, "solve both states now");
    verify->add_option_function<std::string>("--energy-state",
                                             [&](const std::string& v) { overrides["energy_state"] = v; });
    verify->add_option_function<std::string>("--action-state",
                                             [&](const std::string& v) { overrides["action_state"] = v; });
    verify->add_option_function<int>("--gn-samples", [&](const int& v) { overrides["gn_samples"] = v; });
    sweep->add_option_function<std::vector<double>>("--p-grid", [&](const std::vector<double>& v) {
        overrides["p_grid"] = v;
    })->delimiter(',');
    sweep->add_option_function<std::vector<double>>("--eps-grid", [&](const std::vector<double>& v) {
        overrides["eps_grid"] = v;
    })->delimiter(',');
    sweep->footer(sweep_columns);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_pass : exit_config;
    }
    logger->set_level(spdlog::level::from_str(log_level));

    RunConfig cfg;
    fs::path out_dir = ".";
    try {
        if (config_file) {
            std::ifstream f(*config_file);
            if (!f) throw ConfigError("cannot read config file " + *config_file);
            json j;
            try {
                j = json::parse(f);
            } catch (const json::exception& e) {
                throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
            }
            apply_json(cfg, j);
        }
        apply_json(cfg, overrides);
        out_dir = cfg.out;
        if (print_config) {
            out << to_json(cfg).dump(2) << "\n";
            return exit_pass;
        }
        const Setup st = make_setup(cfg);
        if (constants->parsed()) return cmd_constants(st, out);
        if (ground->parsed()) return cmd_ground_state(st, out);
        if (action->parsed()) return cmd_action_gss(st, out);
        if (verify->parsed()) return cmd_verify(st, out);
        return cmd_sweep(st, out);
    } catch (const DivergenceError& e) {
        dump_divergence(out_dir, e, err);
        return exit_divergence;
    } catch (const VanishingError& e) {
        err << "solver collapsed: " << e.what() << "\n";
        return exit_divergence;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << "\n";
        return exit_config;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return exit_config;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_check_failure;
    }
}

}  // namespace bnls::cli
