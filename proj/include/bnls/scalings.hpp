#pragma once

#include <utility>
#include <vector>

#include "bnls/functionals.hpp"
#include "bnls/grid.hpp"

namespace bnls {

// Changes of variables, each available as exact algebra on NormTuples and,
// where it acts on fields, as a grid reinterpretation (box length changes,
// samples are kept or uniformly scaled; no interpolation).

/// u_t(x) = t^{N/2} u(t x): mass fixed, grad * t^2, bilap * t^4, lp * t^{N(p-2)/2}.
NormTuple mass_preserving_scale_laws(const NormTuple& nt, double t, const Params& params);

/// u^t(x) = t^N u(t x): mass * t^N, grad * t^{N+2}, bilap * t^{N+4}, lp * t^{N(p-1)}.
NormTuple fiber_scale_laws(const NormTuple& nt, double t, const Params& params);

/// Amplitude and dilation factors mapping (grad, bilap) to (1, 1) in dimension n.
struct LambdaFactors {
    double amplitude;  ///< grad^{(n-4)/4} / bilap^{(n-2)/4}
    double dilation;   ///< (grad / bilap)^{1/2}
};

LambdaFactors lambda_factors(double grad, double bilap, int n);

/// Norms of Lambda1 * v(Lambda2 x) from those of v, exact algebra.
NormTuple lambda_normalized_laws(const NormTuple& nt, const LambdaFactors& lf, double p, int n);

/// w(x) = Lambda1 v(Lambda2 x), realised by scaling samples and dividing the
/// box length by Lambda2. Throws PreconditionError for fields with zero grad or bilap.
Field lambda_normalize(const Field& v);

/// v(mu .) realised by reinterpreting the samples on a box of length L / mu.
Field resample(const Field& u, double mu);

/// Output of the v -> Q construction.
struct QConstruction {
    Field q;
    double omega;
    double lambda;
    double mu;
};

/// Q = lambda v(mu .) with mu = sqrt(alpha/(beta eps)),
/// lambda = (p alpha / (beta^2 eps lp(v)))^{1/(p-2)}, omega = (p-2) alpha / (beta^2 eps mass(v)).
/// Requires grad(v) = bilap(v) = 1 within 1e-6.
QConstruction construct_Q(const Field& v, const Params& params);

/// h(t) = eps t^2/2 bilap + grad/2 - t^{N(p-2)/2-2}/p lp = E(u_t)/t^2 for the
/// mass-preserving dilation.
double h_value(const NormTuple& nt, const Params& params, double t);
std::vector<std::pair<double, double>> h_profile(const NormTuple& nt, const Params& params,
                                                 const std::vector<double>& ts);
/// Unique critical point (a minimum) of h; computed in log space.
double t_eps(const NormTuple& nt, const Params& params);

struct GValues {
    double g1;
    double g2;
    double g3;
};

/// The three auxiliary polynomials whose nonnegativity gives action
/// maximality along the fiber u^t; each vanishes only at t = 1.
GValues g_functions(double t, int bigN, double p);

/// I(u) - I(u^t) from the fiber laws.
double fiber_action_gap(const NormTuple& nt, const Params& params, double t);
/// The same gap written with g1, g2, g3 (valid on Nehari and Pohozaev zero sets).
double fiber_gap_decomposition(const NormTuple& nt, const Params& params, double t);

/// t = (c / mass)^{1/N}, the fiber parameter sending mass to c.
double fiber_t_for_mass(double mass, double c, int bigN);

}  // namespace bnls
