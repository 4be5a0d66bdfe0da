#pragma once

#include <optional>

#include "bnls/grid.hpp"

namespace bnls {

/// Which exponent window Params accepts.
enum class Regime {
    mass_competition,  ///< 2 + 4/N < p < 2 + 8/N, eps > 0
    relaxed,           ///< 2 < p < 2*, eps >= 0 (second-order oracle runs)
};

/// alpha = (N(p-2)-4)/2, beta = (8-N(p-2))/2; alpha + beta = 2.
struct ExponentPack {
    double alpha;
    double beta;
};

ExponentPack exponents(int bigN, double p) noexcept;

/// Problem parameters (N, p, eps) with optional frequency and mass.
class Params {
public:
    /// Distance from the regime endpoints below which p is rejected.
    static constexpr double boundary_guard = 1e-9;

    /// Throws RegimeError naming the violated bound.
    Params(int bigN, double p, double eps, std::optional<double> omega = std::nullopt,
           std::optional<double> mass_c = std::nullopt, Regime regime = Regime::mass_competition);

    int bigN() const noexcept { return bigN_; }
    double p() const noexcept { return p_; }
    double eps() const noexcept { return eps_; }
    std::optional<double> omega() const noexcept { return omega_; }
    std::optional<double> mass_c() const noexcept { return mass_c_; }
    Regime regime() const noexcept { return regime_; }
    ExponentPack exponent_pack() const noexcept { return exponents(bigN_, p_); }

    /// Throws ConfigError when omega / mass are missing.
    double require_omega() const;
    double require_mass() const;

    Params with_omega(double omega) const;
    Params with_mass(double mass_c) const;
    Params with_eps(double eps) const;

    /// Lower and upper ends of the mass-competition window.
    double lower_exponent() const noexcept;
    double upper_exponent() const noexcept;

private:
    int bigN_;
    double p_;
    double eps_;
    std::optional<double> omega_;
    std::optional<double> mass_c_;
    Regime regime_;
};

/// E = (eps/2) bilap + (1/2) grad - (1/p) lp.
double energy(const NormTuple& nt, const Params& params);
/// I = E + (omega/2) mass.
double action(const NormTuple& nt, const Params& params);
/// <I'(u), u> = eps*bilap + grad + omega*mass - lp.
double nehari_residual(const NormTuple& nt, const Params& params);
/// eps(N-4)/2 bilap + (N-2)/2 grad + omega N/2 mass - (N/p) lp.
double pohozaev(const NormTuple& nt, const Params& params);
/// d/dt I(u^t) at t = 1 for u^t = t^N u(t.), equal to N<I'(u),u> - P(u).
double fiber_slope(const NormTuple& nt, const Params& params);
/// eps*bilap + grad + omega*mass: the scale Nehari and Pohozaev residuals are
/// measured against.
double quadratic_scale(const NormTuple& nt, const Params& params);

/// W_p = bilap^{alpha/2} grad^{beta/2} mass^{(p-2)/2} / lp.
double weinstein(const NormTuple& nt, const Params& params);
/// lp / (mass^{(p-2)/2} (eps*bilap + grad)).
double gn_k_quotient(const NormTuple& nt, const Params& params);

/// Energy on the mass sphere written as (1/2) * quadratic * bracket.
struct FactoredEnergy {
    double quadratic;  ///< eps*bilap + grad
    double bracket;    ///< 1 - (2/p) c^{(p-2)/2} * gn_k_quotient
};

/// Requires params.mass_c() and mass == c within 1e-10 relative.
FactoredEnergy energy_factored(const NormTuple& nt, const Params& params);

/// Right-hand side of the Holder interpolation between the exponents 2 + 4/N
/// and 2 + 8/N: (int|u|^{q1})^theta (int|u|^{q2})^{1-theta}, an upper bound
/// for int|u|^p.
double holder_interpolation_bound(const Field& u, const Params& params);

}  // namespace bnls
