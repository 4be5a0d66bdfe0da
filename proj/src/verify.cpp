#include "bnls/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "bnls/error.hpp"
#include "bnls/field_io.hpp"
#include "bnls/parallel.hpp"
#include "bnls/random_fields.hpp"
#include "bnls/scalings.hpp"

namespace bnls {

namespace {

double rel(double measured, double expected) { return std::abs(measured - expected) / std::abs(expected); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// t = 2^{k/8}, k = -16..16, excluding t = 1.
std::vector<double> fiber_ts() {
    std::vector<double> ts;
    for (int k = -16; k <= 16; ++k)
        if (k != 0) ts.push_back(std::exp2(k / 8.0));
    return ts;
}

// Largest relative rise of the action along the fiber away from t = 1.
double fiber_rise(const NormTuple& nt, const Params& params) {
    const double base = action(nt, params);
    double worst = 0.0;
    for (double t : fiber_ts()) {
        const double rise = (action(fiber_scale_laws(nt, t, params), params) - base) / std::abs(base);
        worst = std::max(worst, rise);
    }
    return worst;
}

NormTuple random_admissible(std::mt19937_64& rng, const Params& params) {
    std::uniform_real_distribution<double> pos(0.1, 10.0);
    const double n = params.bigN();
    const double p = params.p();
    const double eps = params.eps();
    const double omega = params.require_omega();
    NormTuple nt;
    nt.bilap = pos(rng);
    nt.grad = pos(rng);
    // Choose mass and lp so that the Nehari and Pohozaev residuals vanish.
    nt.mass = (eps * nt.bilap * (n / p - (n - 4.0) / 2.0) + nt.grad * (n / p - (n - 2.0) / 2.0)) /
              (omega * n * (0.5 - 1.0 / p));
    nt.lp = eps * nt.bilap + nt.grad + omega * nt.mass;
    return nt;
}

Params random_params(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(1, 3);
    std::uniform_real_distribution<double> unit(0.02, 0.98);
    std::uniform_real_distribution<double> pos(0.1, 10.0);
    const int n = dim(rng);
    const double lo = 2.0 + 4.0 / n;
    const double hi = 2.0 + 8.0 / n;
    const double p = lo + unit(rng) * (hi - lo);
    const double eps = pos(rng);
    const double omega = pos(rng);
    return Params(n, p, eps, omega);
}

}  // namespace

Check& VerificationReport::add(std::string name, std::string anchor, double measured, double tolerance,
                               std::string note) {
    const bool pass = std::isfinite(measured) && std::abs(measured) <= tolerance;
    checks.push_back({std::move(name), std::move(anchor), measured, tolerance, pass, false, std::move(note)});
    return checks.back();
}

Check& VerificationReport::skip(std::string name, std::string anchor, std::string note) {
    checks.push_back({std::move(name), std::move(anchor), std::numeric_limits<double>::quiet_NaN(), 0.0, true, true,
                      std::move(note)});
    return checks.back();
}

void VerificationReport::merge(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    for (const auto& h : other.inputs)
        if (std::find(inputs.begin(), inputs.end(), h) == inputs.end()) inputs.push_back(h);
}

std::size_t VerificationReport::passed() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.pass && !c.skipped; }));
}

std::size_t VerificationReport::failed() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
}

std::size_t VerificationReport::skipped() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.skipped; }));
}

const Check* VerificationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

const Check* VerificationReport::find(const std::string& anchor) const {
    for (const auto& c : checks)
        if (c.anchor == anchor) return &c;
    return nullptr;
}

std::string field_hash(const Field& u) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint8_t b : encode_field(u)) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

VerificationReport verify_Q(const GroundState& gs, const ConstantsReport& cr, const TolProfile& tol) {
    if (gs.outcome != Outcome::converged || !std::isfinite(gs.residual_pde))
        throw PreconditionError("verify_Q needs a converged ground state");
    const Params& params = gs.params;
    const double omega = params.omega().value_or(gs.omega_extracted);
    const Params pw = params.with_omega(omega);
    const auto [alpha, beta] = params.exponent_pack();
    const double p = params.p();
    const double eps = params.eps();
    const NormTuple nt = norms(gs.field, p);
    const double scale = quadratic_scale(nt, pw);

    VerificationReport r;
    r.inputs.push_back(field_hash(gs.field));
    r.add("PDE residual (preconditioned)", "pde_residual", pde_residuals(gs.field, pw, omega).preconditioned,
          tol.numeric);
    r.add("grad / (eps bilap) = beta / alpha", "q_norms_grad_bilap", rel(nt.grad / (eps * nt.bilap), beta / alpha),
          tol.numeric);
    r.add("grad / lp = beta / p", "q_norms_grad_lp", rel(nt.grad / nt.lp, beta / p), tol.numeric);
    r.add("eps bilap / lp = alpha / p", "q_norms_bilap_lp", rel(eps * nt.bilap / nt.lp, alpha / p), tol.numeric);
    r.add("energy(Q) = 0", "q_energy_zero", energy(nt, params) / scale, tol.numeric);
    r.add("mass(Q) = c_eps", "q_mass_critical", rel(nt.mass, cr.c_eps.value), tol.cross);
    r.add("mass(Q) >= c_eps", "q_mass_lower_bound", std::max(0.0, (cr.c_eps.value - nt.mass) / cr.c_eps.value),
          tol.cross);
    r.add("Nehari residual", "nehari_identity", nehari_residual(nt, pw) / scale, tol.numeric);
    r.add("Pohozaev residual", "pohozaev_zero_set", pohozaev(nt, pw) / scale, tol.numeric);
    r.add("extracted omega = omega(eps)", "omega_formula", rel(gs.omega_extracted, cr.omega_eps.value), tol.numeric);
    r.add("C * W_p(Q) = 1", "gn_c_extremal", weinstein(nt, params) * cr.C.value - 1.0, tol.numeric);
    r.add("gn_k_quotient(Q) = (p/2) c_eps^{-(p-2)/2}", "gn_k_extremal", rel(gn_k_quotient(nt, params), cr.K.value),
          tol.cross);
    r.add("t_eps(Q) = 1", "h_critical_point", t_eps(nt, params) - 1.0, tol.numeric);
    r.add("factored energy bracket = 0", "energy_factored_bracket",
          energy_factored(nt, params.with_mass(nt.mass)).bracket, tol.numeric);
    r.add("c_eps from K round trip", "k_inversion", rel(c_eps_from_K(cr.K.value, params), cr.c_eps.value),
          tol.algebraic);
    r.add("K from C = K from c_eps", "k_routes_agree", rel(cr.K_from_C.value, cr.K.value), tol.algebraic);
    r.add("action maximal at t = 1 on the fiber", "fiber_maximality", fiber_rise(nt, pw), tol.numeric);
    return r;
}

VerificationReport verify_equivalence(const GroundState& gs_energy, const GroundState& gs_action, double c_eps,
                                      const TolProfile& tol) {
    const Params& pe = gs_energy.params;
    const Params& pa = gs_action.params;
    if (pe.bigN() != pa.bigN() || pe.p() != pa.p() || pe.eps() != pa.eps())
        throw PreconditionError("verify_equivalence needs states with the same (N, p, eps)");
    const double omega = pa.omega().value_or(gs_action.omega_extracted);
    const Params pw = pa.with_omega(omega);
    const double p = pa.p();

    const Field& a = gs_action.field;
    const Field e = gs_energy.field.grid() == a.grid() ? gs_energy.field : fourier_resample(gs_energy.field, a.grid());
    const Field ea = center_and_align(e);
    const Field aa = center_and_align(a);
    const NormTuple ne = norms(gs_energy.field, p);
    const NormTuple na = norms(a, p);

    VerificationReport r;
    r.inputs.push_back(field_hash(gs_energy.field));
    r.inputs.push_back(field_hash(a));
    r.add("aligned relative L2 distance", "route_aligned_distance", l2_norm(combine(1.0, ea, -1.0, aa)) / l2_norm(aa),
          tol.route);
    r.add("mass(energy GSS) = mass(action GSS)", "route_mass", rel(ne.mass, na.mass), tol.cross);
    r.add("mass(action GSS) = c_eps", "route_mass_critical", rel(na.mass, c_eps), tol.cross);
    r.add("energy(action GSS) = 0", "route_energy_zero", energy(na, pa) / quadratic_scale(na, pw), tol.numeric);
    r.add("action equal on both states", "route_action_equality", rel(action(ne, pw), action(na, pw)), tol.cross);
    const double t = fiber_t_for_mass(na.mass, c_eps, pa.bigN());
    r.add("fiber parameter to c_eps equals 1", "route_fiber_t", t - 1.0, tol.cross);
    r.add("fiber chain: I(w^t) <= I(w)", "route_fiber_chain",
          std::max(0.0, (action(fiber_scale_laws(na, t, pw), pw) - action(na, pw)) / std::abs(action(na, pw))),
          tol.numeric);
    r.add("action GSS maximal on the fiber", "fiber_maximality", fiber_rise(na, pw), tol.numeric);
    r.add("action GSS Pohozaev residual", "pohozaev_zero_set", pohozaev(na, pw) / quadratic_scale(na, pw), tol.numeric);
    r.add("action GSS Nehari residual", "nehari_identity", nehari_residual(na, pw) / quadratic_scale(na, pw),
          tol.numeric);
    return r;
}

VerificationReport verify_gn_samples(const Params& params, double C, double K, std::span<const Field> samples,
                                     double tol) {
    struct Margins {
        bool degenerate = false;
        double c_margin = 0.0;  // 1 - C W_p, violation if > tol
        double k_margin = 0.0;  // J / K - 1, violation if > tol
        double holder = 0.0;    // lp / bound - 1, violation if > 1e-12
    };
    std::vector<Margins> m(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
        const NormTuple nt = norms(samples[i], params.p());
        if (!(nt.grad > 0.0) || !(nt.bilap > 0.0) || !(nt.lp > 0.0)) {
            m[i].degenerate = true;
            return;
        }
        m[i].c_margin = 1.0 - C * weinstein(nt, params);
        m[i].k_margin = gn_k_quotient(nt, params) / K - 1.0;
        m[i].holder = nt.lp / holder_interpolation_bound(samples[i], params) - 1.0;
    });

    VerificationReport r;
    double worst_c = -std::numeric_limits<double>::infinity();
    double worst_k = worst_c;
    double worst_h = worst_c;
    int vc = 0, vk = 0, vh = 0, used = 0;
    for (const auto& s : m) {
        if (s.degenerate) continue;
        ++used;
        worst_c = std::max(worst_c, s.c_margin);
        worst_k = std::max(worst_k, s.k_margin);
        worst_h = std::max(worst_h, s.holder);
        vc += s.c_margin > tol;
        vk += s.k_margin > tol;
        vh += s.holder > 1e-12;
    }
    const int skipped = static_cast<int>(samples.size()) - used;
    if (skipped > 0)
        r.skip("degenerate samples", "gn_degenerate",
               std::to_string(skipped) + " sample(s) with zero grad, bilap or lp excluded");
    if (used == 0) return r;
    const std::string suffix = " over " + std::to_string(used) + " samples";
    r.add("violations of C W_p >= 1", "gn_c_inequality", vc, 0.0, "worst margin " + fmt(worst_c) + suffix);
    r.add("violations of gn_k_quotient <= K", "gn_k_inequality", vk, 0.0, "worst margin " + fmt(worst_k) + suffix);
    r.add("violations of the Holder interpolation bound", "holder_chain", vh, 0.0,
          "worst margin " + fmt(worst_h) + suffix);
    return r;
}

VerificationReport verify_gn_random(const Params& params, double C, double K, const BoxGrid& grid, int n_samples,
                                    std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    std::vector<Field> samples;
    samples.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) samples.push_back(random_localized_field(grid, rng));
    return verify_gn_samples(params, C, K, samples, tol);
}

VerificationReport verify_algebra(std::uint64_t seed, int n_samples, double tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_t(std::log(0.25), std::log(4.0));
    std::uniform_real_distribution<double> pos(0.1, 10.0);

    double g_min = std::numeric_limits<double>::infinity();
    double g_one = 0.0;
    double decomposition = 0.0;
    double rise = 0.0;
    double strict = std::numeric_limits<double>::infinity();
    double slope = 0.0;
    double factored = 0.0;
    double w_invariance = 0.0;
    double eps_round = 0.0;
    double k_round = 0.0;
    double nehari_poh = 0.0;

    std::vector<double> grid_ts;
    for (int k = 0; k <= 64; ++k) grid_ts.push_back(0.25 * std::pow(16.0, k / 64.0));

    for (int i = 0; i < n_samples; ++i) {
        const Params params = random_params(rng);
        const int n = params.bigN();
        const double p = params.p();
        const double t = std::exp(log_t(rng));
        const GValues g = g_functions(t, n, p);
        g_min = std::min({g_min, g.g1, g.g2, g.g3});
        const GValues g1 = g_functions(1.0, n, p);
        g_one = std::max({g_one, std::abs(g1.g1), std::abs(g1.g2), std::abs(g1.g3)});

        const NormTuple nt = random_admissible(rng, params);
        const double scale = quadratic_scale(nt, params);
        nehari_poh = std::max({nehari_poh, std::abs(nehari_residual(nt, params)) / scale,
                               std::abs(pohozaev(nt, params)) / scale});
        const double base = action(nt, params);
        for (double s : grid_ts) {
            const double gap = fiber_action_gap(nt, params, s);
            // Relative to the size of the summed terms, which grow like s^{N(p-1)}.
            const double size = std::abs(base) + std::abs(action(fiber_scale_laws(nt, s, params), params));
            decomposition = std::max(decomposition, std::abs(gap - fiber_gap_decomposition(nt, params, s)) / size);
            rise = std::max(rise, -gap / std::abs(base));
            if (std::abs(s - 1.0) > 1e-9) strict = std::min(strict, gap / std::abs(base));
        }

        NormTuple any{pos(rng), pos(rng), pos(rng), pos(rng)};
        slope = std::max(slope, std::abs(n * nehari_residual(any, params) - pohozaev(any, params) -
                                         fiber_slope(any, params)) /
                                    (quadratic_scale(any, params) + any.lp));
        const FactoredEnergy fe = energy_factored(any, params.with_mass(any.mass));
        const double e = energy(any, params);
        factored = std::max(factored, std::abs(0.5 * fe.quadratic * fe.bracket - e) /
                                          (0.5 * params.eps() * any.bilap + 0.5 * any.grad + any.lp / p));
        w_invariance =
            std::max(w_invariance, rel(weinstein(mass_preserving_scale_laws(any, t, params), params), weinstein(any, params)));

        const double C = pos(rng);
        const double c = pos(rng);
        const double eps_c = eps_c_formula(c, C, params);
        eps_round = std::max(eps_round, rel(c_eps_formula(C, params.with_eps(eps_c)), c));
        const double K = K_from_c_eps(c, params);
        k_round = std::max(k_round, rel(K_from_c_eps(c_eps_from_K(K, params), params), K));
    }

    VerificationReport r;
    const std::string over = " over " + std::to_string(n_samples) + " random inputs";
    r.add("min g_i(t) >= 0", "g_nonnegative", std::max(0.0, -g_min), tol, "min " + fmt(g_min) + over);
    r.add("g_i(1) = 0", "g_vanish_at_one", g_one, tol);
    r.add("admissible tuples satisfy Nehari and Pohozaev", "admissible_tuples", nehari_poh, tol);
    r.add("fiber gap = g-function decomposition", "fiber_gap_decomposition", decomposition, tol);
    r.add("I(u^t) <= I(u) on admissible tuples", "fiber_maximality", rise, tol,
          "smallest gap away from t = 1: " + fmt(strict));
    r.add("strict maximum at t = 1", "fiber_strict_maximum", strict > 0.0 ? 0.0 : 1.0, 0.0);
    r.add("N Nehari - Pohozaev = fiber slope", "fiber_slope_identity", slope, tol);
    r.add("(1/2) quadratic * bracket = energy", "energy_factored_reconstruction", factored, tol);
    r.add("W_p invariant under mass-preserving dilation", "weinstein_scale_invariance", w_invariance, tol);
    r.add("c -> eps_c -> c_eps round trip", "eps_c_round_trip", eps_round, tol);
    r.add("K -> c_eps -> K round trip", "k_inversion", k_round, tol);
    return r;
}

VerificationReport verify_supercritical(const Params& params, double c_eps, const BoxGrid& grid,
                                        const SolverConfig& config, const TolProfile& tol) {
    const GroundState gs = mass_constrained_flow(params.with_mass(2.0 * c_eps), grid, config);
    VerificationReport r;
    r.inputs.push_back(field_hash(gs.field));
    if (gs.outcome != Outcome::converged) {
        r.add("mass flow at 2 c_eps converged", "supercritical_energy_negative", 1.0, 0.0, "flow spread out");
        return r;
    }
    const double quad = params.eps() * gs.nt.bilap + gs.nt.grad;
    const double e = energy(gs.nt, params);
    r.add("energy < -1e-6 (eps bilap + grad)", "supercritical_energy_negative", std::max(0.0, e / quad + 1e-6), 0.0,
          "E = " + fmt(e));
    double worst = 0.0;
    for (std::size_t i = 1; i < gs.energy_history.size(); ++i)
        worst = std::max(worst, (gs.energy_history[i] - gs.energy_history[i - 1]) / quad);
    r.add("energy nonincreasing per accepted step", "energy_descent", worst, 1e-12);
    const Params pw = gs.params;
    const double scale = quadratic_scale(gs.nt, pw);
    r.add("supercritical state Nehari residual", "nehari_identity", nehari_residual(gs.nt, pw) / scale, tol.numeric);
    r.add("supercritical state Pohozaev residual", "pohozaev_zero_set", pohozaev(gs.nt, pw) / scale, tol.numeric);
    r.add("supercritical state PDE residual", "pde_residual", gs.residual_pde, tol.numeric);
    return r;
}

const std::vector<std::string>& required_anchors() {
    static const std::vector<std::string> anchors = {
        "pde_residual",          "q_norms_grad_bilap",     "q_norms_grad_lp",
        "q_norms_bilap_lp",      "q_energy_zero",          "q_mass_critical",
        "q_mass_lower_bound",    "nehari_identity",        "pohozaev_zero_set",
        "omega_formula",         "gn_c_extremal",          "gn_k_extremal",
        "h_critical_point",      "energy_factored_bracket", "k_inversion",
        "k_routes_agree",        "fiber_maximality",       "route_aligned_distance",
        "route_mass",            "route_mass_critical",    "route_energy_zero",
        "route_action_equality", "route_fiber_t",          "route_fiber_chain",
        "gn_c_inequality",       "gn_k_inequality",        "holder_chain",
        "g_nonnegative",         "g_vanish_at_one",        "fiber_gap_decomposition",
        "fiber_strict_maximum",  "fiber_slope_identity",   "energy_factored_reconstruction",
        "weinstein_scale_invariance", "eps_c_round_trip",  "supercritical_energy_negative",
        "energy_descent",
    };
    return anchors;
}

std::vector<std::string> missing_anchors(const VerificationReport& r) {
    std::vector<std::string> missing;
    for (const auto& a : required_anchors())
        if (r.find(a) == nullptr) missing.push_back(a);
    return missing;
}

nlohmann::json to_json(const VerificationReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json j{{"name", c.name},   {"anchor", c.anchor}, {"tolerance", c.tolerance},
                         {"pass", c.pass},   {"skipped", c.skipped}};
        j["measured"] = std::isfinite(c.measured) ? nlohmann::json(c.measured) : nlohmann::json(nullptr);
        if (!c.note.empty()) j["note"] = c.note;
        checks.push_back(std::move(j));
    }
    return {{"checks", checks},
            {"summary", {{"passed", r.passed()}, {"failed", r.failed()}, {"skipped", r.skipped()}, {"ok", r.ok()}}},
            {"inputs", r.inputs}};
}

std::string to_table(const VerificationReport& r) {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-6s %-32s %-12s %-10s %s\n", "status", "anchor", "measured", "tolerance", "check");
    os << buf;
    for (const auto& c : r.checks) {
        const char* status = c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL");
        std::snprintf(buf, sizeof buf, "%-6s %-32s %-12.3e %-10.1e %s\n", status, c.anchor.c_str(), c.measured,
                      c.tolerance, c.name.c_str());
        os << buf;
    }
    os << r.passed() << " passed, " << r.failed() << " failed, " << r.skipped() << " skipped\n";
    return os.str();
}

}  // namespace bnls
