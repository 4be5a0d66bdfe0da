#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bnls/functionals.hpp"
#include "bnls/grid.hpp"
#include "bnls/solvers.hpp"
#include "json.hpp"

namespace bnls {

// Closed forms. All exponent algebra is done on logarithms; each throws
// RegimeError outside the mass-competition window and PreconditionError for
// non-positive inputs.

/// c_eps = C^{-2/(p-2)} (p/alpha)^{alpha/(p-2)} (p/beta)^{beta/(p-2)} eps^{alpha/(p-2)}.
double c_eps_formula(double C, const Params& params);
/// Exact inverse of c_eps_formula in eps: c_eps_formula(C, params.with_eps(eps_c)) = c.
double eps_c_formula(double c, double C, const Params& params);
/// The published variant, whose c-exponent is (p-2)/(2 alpha) instead of (p-2)/alpha.
double eps_c_as_printed(double c, double C, const Params& params);

/// K = (p/2) c_eps^{-(p-2)/2}.
double K_from_c_eps(double c_eps, const Params& params);
/// c_eps = ((2/p) K)^{-2/(p-2)}.
double c_eps_from_K(double K, const Params& params);
/// K = (p/2) C (p/alpha)^{-alpha/2} (p/beta)^{-beta/2} eps^{-alpha/2}, consistent with
/// K_from_c_eps(c_eps_formula(C)).
double K_from_C(double C, const Params& params);
/// The published variant with (p/beta)^{-beta/(p-2)} on the second bracket.
double K_from_C_as_printed(double C, const Params& params);

/// omega(eps) = (p-2) alpha / (beta^2 eps v_mass).
double omega_formula(double v_mass, const Params& params);

struct KNumericResult {
    double K = 0.0;            ///< best quotient over all starts
    double K_seed = 0.0;       ///< best quotient from the seeded start (0 if none)
    std::vector<double> per_start;
};

/// Best-effort supremum of gn_k_quotient by normalized fixed-point ascent on
/// its Euler-Lagrange equation, from `seed` (if given) and `n_random` random
/// localized starts run concurrently.
KNumericResult K_numeric(const Params& params, const BoxGrid& grid, const SolverConfig& config,
                         const std::optional<Field>& seed, int n_random = 8);

enum class Provenance { numeric, formula };
std::string to_string(Provenance p);

struct ConstantEntry {
    double value = 0.0;
    Provenance provenance = Provenance::formula;
};

struct ConstantsReport {
    int bigN = 0;
    double p = 0.0;
    double eps = 0.0;
    double mass_for_eps_c = 0.0;  ///< the c used for eps_c (params mass or c_eps)

    ConstantEntry C;          ///< 1 / W_p at the numeric minimizer
    ConstantEntry v_mass;     ///< mass of the normalized minimizer
    ConstantEntry c_eps;      ///< from C via the closed form
    ConstantEntry Q_mass;     ///< mass of the constructed Q
    ConstantEntry K;          ///< from c_eps
    ConstantEntry K_from_C;
    std::optional<ConstantEntry> K_numeric;
    ConstantEntry eps_c;
    ConstantEntry omega_eps;  ///< closed form at v_mass
    ConstantEntry omega_extracted;

    double K_from_C_printed = 0.0;
    double eps_c_printed = 0.0;
    /// Relative gaps between published variants and the consistent forms.
    double K_printed_gap = 0.0;
    double eps_c_printed_gap = 0.0;

    int weinstein_sweeps = 0;
    double weinstein_residual = 0.0;
};

struct ConstantsRun {
    ConstantsReport report;
    RouteQResult route;
};

/// Runs route_Q (and K_numeric when requested) and fills the report.
ConstantsRun compute_constants(const Params& params, const BoxGrid& grid, const SolverConfig& config,
                               bool with_K_numeric = true);

nlohmann::json to_json(const ConstantsReport& r);
/// Fixed-width table of the constants with provenance flags.
std::string to_table(const ConstantsReport& r);

}  // namespace bnls
