#include "bnls/constants.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <random>
#include <sstream>

#include "bnls/error.hpp"
#include "bnls/parallel.hpp"
#include "bnls/random_fields.hpp"

namespace bnls {

namespace {

ExponentPack competition_pack(const Params& params) {
    const ExponentPack ep = params.exponent_pack();
    if (!(ep.alpha > 0.0) || !(ep.beta > 0.0))
        throw RegimeError("closed forms need the mass-competition regime (alpha, beta > 0)");
    if (!(params.eps() > 0.0)) throw RegimeError("closed forms need eps > 0");
    return ep;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw PreconditionError(std::string(name) + " must be positive and finite");
}

// Neumaier-compensated sum of log terms, exponentiated.
double exp_sum(std::initializer_list<double> terms) {
    double s = 0.0;
    double comp = 0.0;
    for (double t : terms) {
        const double next = s + t;
        comp += std::abs(s) >= std::abs(t) ? (s - next) + t : (t - next) + s;
        s = next;
    }
    return std::exp(s + comp);
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::abs(b); }

// One run of the normalized ascent; returns the best quotient seen.
double ascend(Field u, const Params& params, int max_iters, double tol) {
    const double p = params.p();
    const double eps = params.eps();
    NormTuple nt = norms(u, p);
    const double mass = nt.mass;
    double best = gn_k_quotient(nt, params);
    for (int it = 0; it < max_iters; ++it) {
        const double quad = eps * nt.bilap + nt.grad;
        const double a = 2.0 * eps / quad;
        const double b = 2.0 / quad;
        const double w = (p - 2.0) / nt.mass;
        const Field rhs = power_nonlinearity(u, p).scaled(p / nt.lp);
        Field next = inverse_operator(rhs, a, b, w);
        const double m = inner(next, next);
        if (!(m > 0.0) || !next.is_finite()) break;
        next = next.scaled(std::sqrt(mass / m));
        const double change = l2_norm(combine(1.0, next, -1.0, u)) / std::sqrt(mass);
        u = std::move(next);
        nt = norms(u, p);
        best = std::max(best, gn_k_quotient(nt, params));
        if (change < tol) break;
    }
    return best;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

nlohmann::json entry_json(const ConstantEntry& e) {
    return {{"value", e.value}, {"provenance", to_string(e.provenance)}};
}

}  // namespace

double c_eps_formula(double C, const Params& params) {
    require_positive(C, "C");
    const auto [alpha, beta] = competition_pack(params);
    const double p = params.p();
    const double q = p - 2.0;
    return exp_sum({-2.0 / q * std::log(C), alpha / q * std::log(p / alpha), beta / q * std::log(p / beta),
                    alpha / q * std::log(params.eps())});
}

double eps_c_formula(double c, double C, const Params& params) {
    require_positive(c, "c");
    require_positive(C, "C");
    const auto [alpha, beta] = competition_pack(params);
    const double p = params.p();
    return exp_sum({(p - 2.0) / alpha * std::log(c), 2.0 / alpha * std::log(C), std::log(alpha / p),
                    -beta / alpha * std::log(p / beta)});
}

double eps_c_as_printed(double c, double C, const Params& params) {
    require_positive(c, "c");
    require_positive(C, "C");
    const auto [alpha, beta] = competition_pack(params);
    const double p = params.p();
    return exp_sum({(p - 2.0) / (2.0 * alpha) * std::log(c), 2.0 / alpha * std::log(C), std::log(alpha / p),
                    -beta / alpha * std::log(p / beta)});
}

double K_from_c_eps(double c_eps, const Params& params) {
    require_positive(c_eps, "c_eps");
    const double p = params.p();
    return exp_sum({std::log(p / 2.0), -(p - 2.0) / 2.0 * std::log(c_eps)});
}

double c_eps_from_K(double K, const Params& params) {
    require_positive(K, "K");
    const double p = params.p();
    return std::exp(-2.0 / (p - 2.0) * std::log(2.0 / p * K));
}

double K_from_C(double C, const Params& params) {
    require_positive(C, "C");
    const auto [alpha, beta] = competition_pack(params);
    const double p = params.p();
    return exp_sum({std::log(p / 2.0), std::log(C), -alpha / 2.0 * std::log(p / alpha),
                    -beta / 2.0 * std::log(p / beta), -alpha / 2.0 * std::log(params.eps())});
}

double K_from_C_as_printed(double C, const Params& params) {
    require_positive(C, "C");
    const auto [alpha, beta] = competition_pack(params);
    const double p = params.p();
    return exp_sum({std::log(p / 2.0), std::log(C), -alpha / 2.0 * std::log(p / alpha),
                    -beta / (p - 2.0) * std::log(p / beta), -alpha / 2.0 * std::log(params.eps())});
}

double omega_formula(double v_mass, const Params& params) {
    require_positive(v_mass, "v_mass");
    const auto [alpha, beta] = competition_pack(params);
    return (params.p() - 2.0) * alpha / (beta * beta * params.eps() * v_mass);
}

KNumericResult K_numeric(const Params& params, const BoxGrid& grid, const SolverConfig& config,
                         const std::optional<Field>& seed, int n_random) {
    competition_pack(params);
    if (grid.dim() != params.bigN()) throw PreconditionError("grid dimension must equal N");
    std::vector<Field> starts;
    if (seed) starts.push_back(seed->grid() == grid ? *seed : fourier_resample(*seed, grid));
    std::mt19937_64 rng(config.seed);
    for (int i = 0; i < n_random; ++i) starts.push_back(random_localized_field(grid, rng));

    KNumericResult out;
    out.per_start.assign(starts.size(), 0.0);
    const int iters = config.max_iters;
    const double tol = std::max(config.tol_residual, 1e-14);
    parallel_for(starts.size(), [&](std::size_t i) { out.per_start[i] = ascend(starts[i], params, iters, tol); });
    for (double v : out.per_start) out.K = std::max(out.K, v);
    if (seed) out.K_seed = out.per_start.front();
    return out;
}

std::string to_string(Provenance p) { return p == Provenance::numeric ? "numeric" : "formula"; }

ConstantsRun compute_constants(const Params& params, const BoxGrid& grid, const SolverConfig& config,
                               bool with_K_numeric) {
    competition_pack(params);
    RouteQResult route = route_Q(params, grid, config);
    ConstantsReport r;
    r.bigN = params.bigN();
    r.p = params.p();
    r.eps = params.eps();
    const double C = route.weinstein.C;
    const double v_mass = norms(route.weinstein.v, params.p()).mass;
    r.C = {C, Provenance::numeric};
    r.v_mass = {v_mass, Provenance::numeric};
    r.c_eps = {c_eps_formula(C, params), Provenance::formula};
    r.Q_mass = {route.gs.nt.mass, Provenance::numeric};
    r.K = {K_from_c_eps(r.c_eps.value, params), Provenance::formula};
    r.K_from_C = {K_from_C(C, params), Provenance::formula};
    r.mass_for_eps_c = params.mass_c().value_or(r.c_eps.value);
    r.eps_c = {eps_c_formula(r.mass_for_eps_c, C, params), Provenance::formula};
    r.omega_eps = {omega_formula(v_mass, params), Provenance::formula};
    r.omega_extracted = {route.gs.omega_extracted, Provenance::numeric};
    r.K_from_C_printed = K_from_C_as_printed(C, params);
    r.eps_c_printed = eps_c_as_printed(r.mass_for_eps_c, C, params);
    r.K_printed_gap = rel_gap(r.K_from_C_printed, r.K_from_C.value);
    r.eps_c_printed_gap = rel_gap(r.eps_c_printed, r.eps_c.value);
    r.weinstein_sweeps = route.weinstein.sweeps;
    r.weinstein_residual = route.weinstein.residual;
    if (r.K_printed_gap > 1e-12)
        spdlog::info("published K-from-C variant differs from the consistent form by {:.3e} (relative)",
                     r.K_printed_gap);
    if (with_K_numeric) {
        const KNumericResult kn = K_numeric(params, grid, config, route.gs.field);
        r.K_numeric = ConstantEntry{kn.K, Provenance::numeric};
    }
    return {r, std::move(route)};
}

nlohmann::json to_json(const ConstantsReport& r) {
    nlohmann::json j;
    j["N"] = r.bigN;
    j["p"] = r.p;
    j["eps"] = r.eps;
    j["C"] = entry_json(r.C);
    j["v_mass"] = entry_json(r.v_mass);
    j["c_eps"] = entry_json(r.c_eps);
    j["Q_mass"] = entry_json(r.Q_mass);
    j["K"] = entry_json(r.K);
    j["K_from_C"] = entry_json(r.K_from_C);
    j["K_numeric"] = r.K_numeric ? entry_json(*r.K_numeric) : nlohmann::json(nullptr);
    j["eps_c"] = entry_json(r.eps_c);
    j["eps_c_mass"] = r.mass_for_eps_c;
    j["omega_eps"] = entry_json(r.omega_eps);
    j["omega_extracted"] = entry_json(r.omega_extracted);
    j["published_variants"] = {{"K_from_C", r.K_from_C_printed},
                               {"K_from_C_relative_gap", r.K_printed_gap},
                               {"eps_c", r.eps_c_printed},
                               {"eps_c_relative_gap", r.eps_c_printed_gap}};
    j["weinstein"] = {{"sweeps", r.weinstein_sweeps}, {"residual", r.weinstein_residual}};
    return j;
}

std::string to_table(const ConstantsReport& r) {
    std::ostringstream os;
    os << "N = " << r.bigN << ", p = " << fmt(r.p) << ", eps = " << fmt(r.eps) << "\n";
    auto row = [&](const std::string& name, const ConstantEntry& e) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "  %-16s %22.15g  [%s]\n", name.c_str(), e.value,
                      to_string(e.provenance).c_str());
        os << buf;
    };
    row("C", r.C);
    row("K", r.K);
    if (r.K_numeric) row("K (ascent)", *r.K_numeric);
    row("c_eps", r.c_eps);
    row("mass(Q)", r.Q_mass);
    row("eps_c", r.eps_c);
    row("omega(eps)", r.omega_eps);
    row("omega (Nehari)", r.omega_extracted);
    row("v_mass", r.v_mass);
    return os.str();
}

}  // namespace bnls
