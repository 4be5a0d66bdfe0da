#include "bnls/solvers.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "bnls/error.hpp"
#include "bnls/random_fields.hpp"
#include "bnls/scalings.hpp"

namespace bnls {

namespace {

// Iterations without a new residual minimum before a run is declared stuck.
constexpr int stall_window = 400;
constexpr int burn_in = 10;

struct Symbol {
    double a;
    double b;
    double w;
    double operator()(double k2) const noexcept { return a * k2 * k2 + b * k2 + w; }
};

double filter_cut2(const BoxGrid& g) {
    const double kmax = std::numbers::pi * static_cast<double>(g.points()) / g.length();
    const double cut = (2.0 / 3.0) * kmax;
    return cut * cut;
}

struct StepResult {
    Field linear;  // L^{-1} N(u)
    double stab;   // <Lu,u> / <N(u),u>
    double residual;
};

StepResult petviashvili_step(const Field& u, const Symbol& sym, double p, bool filter) {
    const BoxGrid& g = u.grid();
    Spectrum uh = forward_transform(u);
    Spectrum nh = forward_transform(power_nonlinearity(u, p));
    const double cut2 = filter ? filter_cut2(g) : std::numeric_limits<double>::infinity();
    double num = 0.0;
    double den = 0.0;
    for_each_mode(g, [&](std::size_t idx, double k2, double weight) {
        if (k2 > cut2) nh[idx] = 0.0;
        const double s = sym(k2);
        num += weight * s * std::norm(uh[idx]);
        den += weight * (std::conj(uh[idx]) * nh[idx]).real();
        nh[idx] /= s;
    });
    const double stab = num / den;
    if (!std::isfinite(stab) || !(stab > 0.0)) throw VanishingError("iterate collapsed (stabilizing factor not positive)");
    Field lin = inverse_transform(g, nh);
    const double nu = l2_norm(u);
    const double residual = l2_norm(combine(1.0, u, -1.0, lin)) / nu;
    return {std::move(lin), stab, residual};
}

Field relax(const Field& u, const Field& update, double r) {
    return r == 1.0 ? update : combine(1.0 - r, u, r, update);
}

void require_live(const Field& u) {
    if (!u.is_finite()) throw DivergenceError("iterate became non-finite", std::numeric_limits<double>::infinity(), {});
    if (!(u.max_abs() > 1e-200)) throw VanishingError("iterate collapsed to the zero field");
}

// Tracks the best residual so far and flags runs that stop improving.
class StallMonitor {
public:
    explicit StallMonitor(const char* name) : name_(name) {}

    void observe(int iter, double r, const std::vector<double>& history) {
        if (!std::isfinite(r)) throw DivergenceError(std::string(name_) + ": residual is not finite", r, history);
        if (r < best_) {
            best_ = r;
            best_iter_ = iter;
        }
        if (iter > burn_in && r > last_ && !warned_) {
            spdlog::debug("{}: residual rose after burn-in at iteration {} ({:.3e} > {:.3e})", name_, iter, r, last_);
            warned_ = true;
        }
        last_ = r;
        if (iter - best_iter_ > stall_window)
            throw DivergenceError(std::string(name_) + ": residual stopped decreasing", r, history);
    }

private:
    const char* name_;
    double best_ = std::numeric_limits<double>::infinity();
    double last_ = std::numeric_limits<double>::infinity();
    int best_iter_ = 0;
    bool warned_ = false;
};

double extract_omega(const NormTuple& nt, const Params& params) {
    return (nt.lp - params.eps() * nt.bilap - nt.grad) / nt.mass;
}

void warn_boundary(const Field& u, const char* what) {
    const double r = boundary_amplitude_ratio(u);
    if (r > boundary_warning_ratio)
        spdlog::warn("{}: boundary amplitude ratio {:.2e} exceeds {:.0e}; box may be too small", what, r,
                     boundary_warning_ratio);
}

Field gaussian_bump(const BoxGrid& grid) {
    const double w = grid.length() / 10.0;
    return Field::from_function(grid, [&](const std::array<double, BoxGrid::max_dim>& x) {
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) r2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
        return std::exp(-r2 / (w * w));
    });
}

Field mass_normalize(const Field& u, double c) {
    const double m = inner(u, u);
    if (!(m > 0.0)) throw VanishingError("cannot normalize the zero field");
    return u.scaled(std::sqrt(c / m));
}

}  // namespace

std::string to_string(InitKind k) {
    switch (k) {
        case InitKind::gaussian_bump: return "gaussian_bump";
        case InitKind::stored_field: return "stored_field";
        case InitKind::random_bandlimited: return "random_bandlimited";
    }
    return "?";
}

std::string to_string(Route r) {
    switch (r) {
        case Route::weinstein_Q: return "weinstein_Q";
        case Route::petviashvili: return "petviashvili";
        case Route::mass_flow: return "mass_flow";
    }
    return "?";
}

std::string to_string(Outcome o) { return o == Outcome::converged ? "converged" : "no_minimizer"; }

InitKind init_kind_from_string(const std::string& s) {
    if (s == "gaussian_bump") return InitKind::gaussian_bump;
    if (s == "stored_field") return InitKind::stored_field;
    if (s == "random_bandlimited") return InitKind::random_bandlimited;
    throw ConfigError("unknown init kind '" + s + "'");
}

void SolverConfig::validate() const {
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (!(tol_residual > 0.0)) throw ConfigError("tol_residual must be > 0");
    if (!(relaxation > 0.0) || relaxation > 1.0) throw ConfigError("relaxation must lie in (0, 1]");
    if (petviashvili_gamma && !std::isfinite(*petviashvili_gamma)) throw ConfigError("gamma must be finite");
    if (init == InitKind::stored_field && !initial_field) throw ConfigError("init stored_field needs a field");
}

Field initial_guess(const BoxGrid& grid, const SolverConfig& config) {
    switch (config.init) {
        case InitKind::stored_field: {
            if (!config.initial_field) throw ConfigError("init stored_field needs a field");
            const Field& f = *config.initial_field;
            if (f.grid() == grid) return f;
            if (f.grid().dim() != grid.dim()) throw ConfigError("stored field has the wrong dimension");
            return fourier_resample(f, grid);
        }
        case InitKind::random_bandlimited: {
            std::mt19937_64 rng(config.seed);
            std::uniform_real_distribution<double> offset(-grid.length() / 20.0, grid.length() / 20.0);
            std::vector<double> d(static_cast<std::size_t>(grid.dim()));
            for (double& v : d) v = offset(rng);
            const Field bump = shift(gaussian_bump(grid), d);
            const Field noise = bandlimited_noise(grid, rng, 20.0 / grid.length());
            std::vector<double> s(grid.size());
            for (std::size_t i = 0; i < s.size(); ++i) s[i] = bump[i] * (1.0 + 0.5 * noise[i]);
            return Field(grid, std::move(s));
        }
        case InitKind::gaussian_bump: break;
    }
    return gaussian_bump(grid);
}

PdeResiduals pde_residuals(const Field& u, const Params& params, double omega) {
    const Field nl = power_nonlinearity(u, params.p());
    const Field lu = forward_operator(u, params.eps(), 1.0, omega);
    const double raw = l2_norm(combine(1.0, lu, -1.0, nl)) / l2_norm(nl);
    const Field lin = inverse_operator(nl, params.eps(), 1.0, omega);
    const double pre = l2_norm(combine(1.0, u, -1.0, lin)) / l2_norm(u);
    return {pre, raw};
}

WeinsteinResult weinstein_minimize(const Params& params, const BoxGrid& grid, const SolverConfig& config) {
    config.validate();
    if (grid.dim() != params.bigN()) throw PreconditionError("grid dimension must equal N");
    const auto [alpha, beta] = params.exponent_pack();
    if (!(alpha > 0.0) || !(beta > 0.0)) throw RegimeError("Weinstein minimization needs alpha, beta > 0");
    const double p = params.p();
    const int n = params.bigN();
    const double gamma = config.petviashvili_gamma.value_or((p - 1.0) / (p - 2.0));
    constexpr int inner_steps = 3;

    Field u = initial_guess(grid, config);
    double kappa = 1.0;
    WeinsteinResult out{u, 0.0, 0, 0.0, kappa, {}};
    StallMonitor monitor("weinstein_minimize");

    for (int sweep = 1; sweep <= config.max_iters; ++sweep) {
        const Symbol sym{alpha, beta, kappa};
        double residual = 0.0;
        for (int k = 0; k < inner_steps; ++k) {
            StepResult st = petviashvili_step(u, sym, p, config.filter);
            residual = st.residual;
            u = relax(u, st.linear.scaled(std::pow(st.stab, gamma)), config.relaxation);
            require_live(u);
        }
        const NormTuple nt = norms(u, p);
        const LambdaFactors lf = lambda_factors(nt.grad, nt.bilap, n);
        const NormTuple nv = lambda_normalized_laws(nt, lf, p, n);
        const double kappa_next = (p - 2.0) / nv.mass;
        const double drift = std::abs(kappa_next / kappa - 1.0);
        const double measure = std::max(residual, drift);
        out.history.push_back(measure);
        monitor.observe(sweep, measure, out.history);
        kappa = kappa_next;
        if (residual < config.tol_residual && drift < config.tol_residual) {
            out.sweeps = sweep;
            out.residual = residual;
            out.kappa = kappa;
            out.v = lambda_normalize(u);
            out.C = 1.0 / weinstein(norms(out.v, p), params);
            warn_boundary(out.v, "weinstein_minimize");
            spdlog::debug("weinstein_minimize converged in {} sweeps, C = {:.15g}", sweep, out.C);
            return out;
        }
    }
    throw DivergenceError("weinstein_minimize did not converge in " + std::to_string(config.max_iters) + " sweeps",
                          out.history.empty() ? 0.0 : out.history.back(), out.history);
}

GroundState petviashvili(const Params& params, const BoxGrid& grid, const SolverConfig& config) {
    config.validate();
    if (grid.dim() != params.bigN()) throw PreconditionError("grid dimension must equal N");
    const double omega = params.require_omega();
    if (!(omega > 0.0)) throw ConfigError("petviashvili needs omega > 0");
    const double p = params.p();
    const double gamma = config.petviashvili_gamma.value_or((p - 1.0) / (p - 2.0));
    const Symbol sym{params.eps(), 1.0, omega};

    Field u = initial_guess(grid, config);
    std::vector<double> history;
    std::vector<double> energies;
    StallMonitor monitor("petviashvili");
    for (int it = 1; it <= config.max_iters; ++it) {
        StepResult st = petviashvili_step(u, sym, p, config.filter);
        history.push_back(st.residual);
        energies.push_back(energy(norms(u, p), params));
        monitor.observe(it, st.residual, history);
        if (st.residual < config.tol_residual) {
            const NormTuple nt = norms(u, p);
            const PdeResiduals r = pde_residuals(u, params, omega);
            warn_boundary(u, "petviashvili");
            GroundState gs{u, params, nt, extract_omega(nt, params), r.preconditioned, r.raw, it,
                           Route::petviashvili, Outcome::converged, std::move(history), std::move(energies)};
            return gs;
        }
        u = relax(u, st.linear.scaled(std::pow(st.stab, gamma)), config.relaxation);
        require_live(u);
    }
    throw DivergenceError("petviashvili did not converge in " + std::to_string(config.max_iters) + " iterations",
                          history.empty() ? 0.0 : history.back(), history);
}

RouteQResult route_Q(const Params& params, const BoxGrid& grid, const SolverConfig& config) {
    WeinsteinResult w = weinstein_minimize(params, grid, config);
    const QConstruction qc = construct_Q(w.v, params);
    const Params pq = params.with_omega(qc.omega);
    const NormTuple nt = norms(qc.q, params.p());
    const PdeResiduals r = pde_residuals(qc.q, pq, qc.omega);
    GroundState gs{qc.q, pq, nt, extract_omega(nt, params), r.preconditioned, r.raw, w.sweeps,
                   Route::weinstein_Q, Outcome::converged, w.history, {}};
    gs.energy_history.push_back(energy(nt, params));
    return {std::move(gs), std::move(w), qc.lambda, qc.mu, qc.omega};
}

GroundState mass_constrained_flow(const Params& params, const BoxGrid& grid, const SolverConfig& config) {
    config.validate();
    if (grid.dim() != params.bigN()) throw PreconditionError("grid dimension must equal N");
    const double c = params.require_mass();
    const double p = params.p();
    const double eps = params.eps();
    constexpr int max_halvings = 60;

    Field u = mass_normalize(initial_guess(grid, config), c);
    NormTuple nt = norms(u, p);
    double e = energy(nt, params);
    double tau = 1.0;
    std::vector<double> history;
    std::vector<double> energies{e};

    auto finish = [&](Outcome outcome, int it) {
        const double omega = extract_omega(nt, params);
        PdeResiduals r{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
        if (omega > 0.0) r = pde_residuals(u, params, omega);
        const Params pw = params.with_omega(omega);
        return GroundState{u, pw, nt, omega, r.preconditioned, r.raw, it, Route::mass_flow, outcome,
                           std::move(history), std::move(energies)};
    };

    for (int it = 1; it <= config.max_iters; ++it) {
        const double quad = eps * nt.bilap + nt.grad;
        const double omega_est = std::max(extract_omega(nt, params), 1e-3 * quad / nt.mass);
        Field nl = power_nonlinearity(u, p);
        if (config.filter) nl = low_pass(nl);
        const Field d = combine(1.0, u, -1.0, inverse_operator(nl, eps, 1.0, omega_est));
        const double pre = l2_norm(d) / std::sqrt(c);
        history.push_back(pre);
        if (pre < config.tol_residual) return finish(Outcome::converged, it);
        if (boundary_amplitude_ratio(u) > spreading_ratio) {
            spdlog::info("mass_constrained_flow: iterate reached the box boundary; no minimizer at c = {:.6g}", c);
            return finish(Outcome::no_minimizer, it);
        }

        bool accepted = false;
        for (int h = 0; h < max_halvings; ++h) {
            Field trial = mass_normalize(combine(1.0, u, -tau, d), c);
            const NormTuple nt_trial = norms(trial, p);
            const double e_trial = energy(nt_trial, params);
            if (e_trial <= e + 1e-12 * quad) {
                u = std::move(trial);
                nt = nt_trial;
                e = e_trial;
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) throw DivergenceError("mass_constrained_flow: line search stalled", pre, history);
        energies.push_back(e);
        tau = std::min(1.0, 2.0 * tau);
    }
    throw DivergenceError("mass_constrained_flow did not converge in " + std::to_string(config.max_iters) +
                              " iterations",
                          history.empty() ? 0.0 : history.back(), history);
}

}  // namespace bnls
