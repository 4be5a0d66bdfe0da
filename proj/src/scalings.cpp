#include "bnls/scalings.hpp"

#include <cmath>
#include <string>

#include "bnls/error.hpp"

namespace bnls {

namespace {

void require_positive_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw PreconditionError("scaling parameter t must be positive");
}

void require_competition(const ExponentPack& ep) {
    if (!(ep.alpha > 0.0) || !(ep.beta > 0.0))
        throw RegimeError("operation needs the mass-competition regime (alpha, beta > 0)");
}

}  // namespace

NormTuple mass_preserving_scale_laws(const NormTuple& nt, double t, const Params& params) {
    require_positive_t(t);
    const double n = params.bigN();
    return {nt.mass, t * t * nt.grad, std::pow(t, 4.0) * nt.bilap, std::pow(t, n * (params.p() - 2.0) / 2.0) * nt.lp};
}

NormTuple fiber_scale_laws(const NormTuple& nt, double t, const Params& params) {
    require_positive_t(t);
    const double n = params.bigN();
    return {std::pow(t, n) * nt.mass, std::pow(t, n + 2.0) * nt.grad, std::pow(t, n + 4.0) * nt.bilap,
            std::pow(t, n * (params.p() - 1.0)) * nt.lp};
}

LambdaFactors lambda_factors(double grad, double bilap, int n) {
    if (!(grad > 0.0) || !(bilap > 0.0))
        throw PreconditionError("Lambda normalization needs positive grad and bilap (degenerate field)");
    const double dn = n;
    return {std::pow(grad, (dn - 4.0) / 4.0) / std::pow(bilap, (dn - 2.0) / 4.0), std::sqrt(grad / bilap)};
}

NormTuple lambda_normalized_laws(const NormTuple& nt, const LambdaFactors& lf, double p, int n) {
    const double a2 = lf.amplitude * lf.amplitude;
    const double d = lf.dilation;
    const double dn = n;
    return {a2 * std::pow(d, -dn) * nt.mass, a2 * std::pow(d, 2.0 - dn) * nt.grad,
            a2 * std::pow(d, 4.0 - dn) * nt.bilap, std::pow(lf.amplitude, p) * std::pow(d, -dn) * nt.lp};
}

Field lambda_normalize(const Field& v) {
    const NormTuple s = seminorms(v);
    const LambdaFactors lf = lambda_factors(s.grad, s.bilap, v.grid().dim());
    return v.scaled(lf.amplitude).on_grid(v.grid().with_length(v.grid().length() / lf.dilation));
}

Field resample(const Field& u, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw PreconditionError("resample needs mu > 0");
    return u.on_grid(u.grid().with_length(u.grid().length() / mu));
}

QConstruction construct_Q(const Field& v, const Params& params) {
    const ExponentPack ep = params.exponent_pack();
    require_competition(ep);
    if (v.grid().dim() != params.bigN()) throw PreconditionError("grid dimension must equal N");
    const NormTuple nt = norms(v, params.p());
    if (std::abs(nt.grad - 1.0) > 1e-6 || std::abs(nt.bilap - 1.0) > 1e-6)
        throw PreconditionError("construct_Q needs grad(v) = bilap(v) = 1 (got " + std::to_string(nt.grad) + ", " +
                                std::to_string(nt.bilap) + ")");
    const double eps = params.eps();
    const double p = params.p();
    const double beta2 = ep.beta * ep.beta;
    const double mu = std::sqrt(ep.alpha / (ep.beta * eps));
    const double lambda = std::pow(p * ep.alpha / (beta2 * eps * nt.lp), 1.0 / (p - 2.0));
    const double omega = (p - 2.0) * ep.alpha / (beta2 * eps * nt.mass);
    return {resample(v.scaled(lambda), mu), omega, lambda, mu};
}

double h_value(const NormTuple& nt, const Params& params, double t) {
    require_positive_t(t);
    const double n = params.bigN();
    const double p = params.p();
    return params.eps() * t * t / 2.0 * nt.bilap + nt.grad / 2.0 - std::pow(t, n * (p - 2.0) / 2.0 - 2.0) / p * nt.lp;
}

std::vector<std::pair<double, double>> h_profile(const NormTuple& nt, const Params& params,
                                                 const std::vector<double>& ts) {
    std::vector<std::pair<double, double>> out;
    out.reserve(ts.size());
    for (double t : ts) out.emplace_back(t, h_value(nt, params, t));
    return out;
}

double t_eps(const NormTuple& nt, const Params& params) {
    const ExponentPack ep = params.exponent_pack();
    require_competition(ep);
    if (!(nt.bilap > 0.0) || !(nt.lp > 0.0)) throw PreconditionError("t_eps needs bilap > 0 and lp > 0");
    // t^{beta} = alpha lp / (p eps bilap), with 2/(8 - N(p-2)) = 1/beta.
    const double log_base =
        std::log(ep.alpha) - std::log(params.p()) + std::log(nt.lp) - std::log(params.eps()) - std::log(nt.bilap);
    return std::exp(log_base / ep.beta);
}

GValues g_functions(double t, int bigN, double p) {
    require_positive_t(t);
    const double n = bigN;
    const double tn = std::pow(t, n);
    const double tn2 = tn * t * t;
    const double tn4 = tn2 * t * t;
    return {2.0 - (n + 4.0) * tn2 + (n + 2.0) * tn4, 4.0 - (n + 4.0) * tn + n * tn4,
            n * (p - 2.0) - 4.0 - n * (p - 1.0) * tn4 + (n + 4.0) * std::pow(t, n * (p - 1.0))};
}

double fiber_action_gap(const NormTuple& nt, const Params& params, double t) {
    return action(nt, params) - action(fiber_scale_laws(nt, t, params), params);
}

double fiber_gap_decomposition(const NormTuple& nt, const Params& params, double t) {
    const GValues g = g_functions(t, params.bigN(), params.p());
    const double n4 = params.bigN() + 4.0;
    return g.g1 * nt.grad / (2.0 * n4) + g.g2 * params.require_omega() * nt.mass / (2.0 * n4) +
           g.g3 * nt.lp / (params.p() * n4);
}

double fiber_t_for_mass(double mass, double c, int bigN) {
    if (!(mass > 0.0) || !(c > 0.0)) throw PreconditionError("fiber_t_for_mass needs positive masses");
    return std::pow(c / mass, 1.0 / bigN);
}

}  // namespace bnls
