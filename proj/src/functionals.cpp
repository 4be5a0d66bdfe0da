#include "bnls/functionals.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bnls/error.hpp"

namespace bnls {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double omega_of(const Params& params) { return params.require_omega(); }

}  // namespace

ExponentPack exponents(int bigN, double p) noexcept {
    const double np2 = bigN * (p - 2.0);
    return {(np2 - 4.0) / 2.0, (8.0 - np2) / 2.0};
}

Params::Params(int bigN, double p, double eps, std::optional<double> omega, std::optional<double> mass_c,
               Regime regime)
    : bigN_(bigN), p_(p), eps_(eps), omega_(omega), mass_c_(mass_c), regime_(regime) {
    if (bigN < 1) throw RegimeError("N must be >= 1");
    if (!std::isfinite(p) || !(p > 2.0)) throw RegimeError("p must exceed 2, got " + fmt_double(p));
    if (bigN > 4 && !(p < 2.0 * bigN / (bigN - 4.0)))
        throw RegimeError("p must be below 2N/(N-4) = " + fmt_double(2.0 * bigN / (bigN - 4.0)));
    if (omega && !std::isfinite(*omega)) throw RegimeError("omega must be finite");
    if (mass_c && !(*mass_c > 0.0)) throw RegimeError("mass c must be positive");

    if (regime == Regime::relaxed) {
        if (!(eps >= 0.0) || !std::isfinite(eps)) throw RegimeError("eps must be >= 0 in relaxed mode");
        return;
    }
    if (!(eps > 0.0) || !std::isfinite(eps)) throw RegimeError("eps must be > 0");
    const double lo = lower_exponent();
    const double hi = upper_exponent();
    if (!(p > lo + boundary_guard))
        throw RegimeError("p = " + fmt_double(p) + " violates the lower bound p > 2 + 4/N = " + fmt_double(lo));
    if (!(p < hi - boundary_guard))
        throw RegimeError("p = " + fmt_double(p) + " violates the upper bound p < 2 + 8/N = " + fmt_double(hi));
}

double Params::require_omega() const {
    if (!omega_) throw ConfigError("omega is required for this operation");
    return *omega_;
}

double Params::require_mass() const {
    if (!mass_c_) throw ConfigError("mass c is required for this operation");
    return *mass_c_;
}

Params Params::with_omega(double omega) const { return {bigN_, p_, eps_, omega, mass_c_, regime_}; }
Params Params::with_mass(double mass_c) const { return {bigN_, p_, eps_, omega_, mass_c, regime_}; }
Params Params::with_eps(double eps) const { return {bigN_, p_, eps, omega_, mass_c_, regime_}; }

double Params::lower_exponent() const noexcept { return 2.0 + 4.0 / bigN_; }
double Params::upper_exponent() const noexcept { return 2.0 + 8.0 / bigN_; }

double energy(const NormTuple& nt, const Params& params) {
    return 0.5 * params.eps() * nt.bilap + 0.5 * nt.grad - nt.lp / params.p();
}

double action(const NormTuple& nt, const Params& params) {
    return energy(nt, params) + 0.5 * omega_of(params) * nt.mass;
}

double nehari_residual(const NormTuple& nt, const Params& params) {
    return params.eps() * nt.bilap + nt.grad + omega_of(params) * nt.mass - nt.lp;
}

double pohozaev(const NormTuple& nt, const Params& params) {
    const double n = params.bigN();
    return params.eps() * (n - 4.0) / 2.0 * nt.bilap + (n - 2.0) / 2.0 * nt.grad +
           omega_of(params) * n / 2.0 * nt.mass - n / params.p() * nt.lp;
}

double fiber_slope(const NormTuple& nt, const Params& params) {
    const double n = params.bigN();
    const double p = params.p();
    return params.eps() * (n + 4.0) / 2.0 * nt.bilap + (n + 2.0) / 2.0 * nt.grad +
           omega_of(params) * n / 2.0 * nt.mass - n * (p - 1.0) / p * nt.lp;
}

double quadratic_scale(const NormTuple& nt, const Params& params) {
    return params.eps() * nt.bilap + nt.grad + params.omega().value_or(0.0) * nt.mass;
}

double weinstein(const NormTuple& nt, const Params& params) {
    if (!(nt.lp > 0.0)) throw UndefinedQuotientError("Weinstein quotient undefined for lp = 0");
    const auto [alpha, beta] = params.exponent_pack();
    const double p = params.p();
    if (nt.bilap > 0.0 && nt.grad > 0.0 && nt.mass > 0.0) {
        const double log_w = 0.5 * alpha * std::log(nt.bilap) + 0.5 * beta * std::log(nt.grad) +
                             0.5 * (p - 2.0) * std::log(nt.mass) - std::log(nt.lp);
        return std::exp(log_w);
    }
    return std::pow(nt.bilap, 0.5 * alpha) * std::pow(nt.grad, 0.5 * beta) * std::pow(nt.mass, 0.5 * (p - 2.0)) /
           nt.lp;
}

double gn_k_quotient(const NormTuple& nt, const Params& params) {
    const double quad = params.eps() * nt.bilap + nt.grad;
    const double denom = std::pow(nt.mass, 0.5 * (params.p() - 2.0)) * quad;
    if (!(denom > 0.0)) throw UndefinedQuotientError("GN_K quotient undefined: zero denominator");
    return nt.lp / denom;
}

FactoredEnergy energy_factored(const NormTuple& nt, const Params& params) {
    const double c = params.require_mass();
    if (std::abs(nt.mass - c) > 1e-10 * c)
        throw PreconditionError("energy factorization needs mass == c (mass " + fmt_double(nt.mass) + ", c " +
                                fmt_double(c) + ")");
    const double p = params.p();
    FactoredEnergy fe;
    fe.quadratic = params.eps() * nt.bilap + nt.grad;
    fe.bracket = 1.0 - (2.0 / p) * std::pow(c, 0.5 * (p - 2.0)) * gn_k_quotient(nt, params);
    return fe;
}

double holder_interpolation_bound(const Field& u, const Params& params) {
    const double n = params.bigN();
    const double q1 = 2.0 + 4.0 / n;
    const double q2 = 2.0 + 8.0 / n;
    const double theta = (q2 - params.p()) / (4.0 / n);
    return std::pow(power_integral(u, q1), theta) * std::pow(power_integral(u, q2), 1.0 - theta);
}

}  // namespace bnls
