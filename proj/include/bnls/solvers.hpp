#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnls/functionals.hpp"
#include "bnls/grid.hpp"

namespace bnls {

enum class InitKind { gaussian_bump, stored_field, random_bandlimited };
enum class Route { weinstein_Q, petviashvili, mass_flow };
/// no_minimizer: the mass flow spread to the box boundary (c below the critical mass).
enum class Outcome { converged, no_minimizer };

std::string to_string(InitKind k);
std::string to_string(Route r);
std::string to_string(Outcome o);
/// Throws ConfigError on unknown names.
InitKind init_kind_from_string(const std::string& s);

struct SolverConfig {
    int max_iters = 4000;
    double tol_residual = 1e-10;
    /// u <- (1 - r) u + r * update; r in (0, 1].
    double relaxation = 1.0;
    std::uint64_t seed = 0;
    InitKind init = InitKind::gaussian_bump;
    std::optional<Field> initial_field;  ///< used when init == stored_field
    bool filter = false;                 ///< 2/3 low-pass on the nonlinearity
    std::optional<double> petviashvili_gamma;  ///< default (p-1)/(p-2)

    /// Throws ConfigError.
    void validate() const;
};

/// Starting field for a solve on `grid` (gaussian bump of width L/10, the
/// stored field, or a seeded band-limited perturbation of the bump).
Field initial_guess(const BoxGrid& grid, const SolverConfig& config);

struct GroundState {
    Field field;
    Params params;
    NormTuple nt;
    /// (lp - eps*bilap - grad) / mass.
    double omega_extracted = 0.0;
    /// ||u - L^{-1} N(u)|| / ||u|| with L = eps D^4 - D^2 + omega.
    double residual_pde = 0.0;
    /// ||L u - N(u)|| / ||N(u)||, limited by roundoff at ~1e-16 k_max^4.
    double residual_raw = 0.0;
    int iters = 0;
    Route route = Route::petviashvili;
    Outcome outcome = Outcome::converged;
    std::vector<double> residual_history;
    std::vector<double> energy_history;
};

struct PdeResiduals {
    double preconditioned;
    double raw;
};

/// Residuals of eps D^4 u - D^2 u + omega u = |u|^{p-2} u.
PdeResiduals pde_residuals(const Field& u, const Params& params, double omega);

struct WeinsteinResult {
    Field v;  ///< grad = bilap = 1
    double C = 0.0;
    int sweeps = 0;
    double residual = 0.0;
    double kappa = 0.0;
    std::vector<double> history;
};

/// Minimizes the Weinstein quotient. Each sweep runs Petviashvili steps on
/// alpha D^4 - beta D^2 + kappa and resets kappa = (p-2)/mass of the
/// Lambda-normalized iterate. Throws DivergenceError or VanishingError.
WeinsteinResult weinstein_minimize(const Params& params, const BoxGrid& grid, const SolverConfig& config);

/// Fixed-omega Petviashvili iteration for the action ground state.
GroundState petviashvili(const Params& params, const BoxGrid& grid, const SolverConfig& config);

struct RouteQResult {
    GroundState gs;
    WeinsteinResult weinstein;
    double lambda = 0.0;
    double mu = 0.0;
    double omega_formula = 0.0;
};

/// weinstein_minimize -> lambda_normalize -> construct_Q.
RouteQResult route_Q(const Params& params, const BoxGrid& grid, const SolverConfig& config);

/// Preconditioned projected descent on the energy over the mass sphere,
/// with backtracking so accepted steps never raise the energy.
GroundState mass_constrained_flow(const Params& params, const BoxGrid& grid, const SolverConfig& config);

/// Boundary ratio above which the mass flow reports no_minimizer.
inline constexpr double spreading_ratio = 1e-3;

}  // namespace bnls
