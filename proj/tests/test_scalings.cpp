#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bnls/error.hpp"
#include "bnls/random_fields.hpp"
#include "bnls/scalings.hpp"
#include "support.hpp"

using namespace bnls;
using bnls::test::pi;
using bnls::test::rel_err;

namespace {

void check_tuple(const NormTuple& a, const NormTuple& b, double tol) {
    CHECK(rel_err(a.mass, b.mass) < tol);
    CHECK(rel_err(a.grad, b.grad) < tol);
    CHECK(rel_err(a.bilap, b.bilap) < tol);
    CHECK(rel_err(a.lp, b.lp) < tol);
}

}  // namespace

TEST_CASE("mass-preserving scale laws") {
    const Params pr(1, 8.0, 1.0);
    const NormTuple one{1.0, 1.0, 1.0, 1.0};
    check_tuple(mass_preserving_scale_laws(one, 1.0, pr), one, 1e-15);
    check_tuple(mass_preserving_scale_laws(one, 2.0, pr), {1.0, 4.0, 16.0, 8.0}, 1e-15);
    CHECK_THROWS_AS(mass_preserving_scale_laws(one, 0.0, pr), PreconditionError);
    CHECK_THROWS_AS(mass_preserving_scale_laws(one, -1.0, pr), PreconditionError);
}

TEST_CASE("fiber scale laws") {
    const Params pr(1, 8.0, 1.0);
    const NormTuple one{1.0, 1.0, 1.0, 1.0};
    check_tuple(fiber_scale_laws(one, 1.0, pr), one, 1e-15);
    check_tuple(fiber_scale_laws(one, 2.0, pr), {2.0, 8.0, 32.0, 128.0}, 1e-15);
    CHECK_THROWS_AS(fiber_scale_laws(one, 0.0, pr), PreconditionError);

    const NormTuple nt{0.37, 1.2, 3.3, 0.8};
    const double c = 3.7629511164767;
    for (int n = 1; n <= 3; ++n) {
        const Params pn(n, 2.0 + 6.0 / n, 1.0);
        const double t = fiber_t_for_mass(nt.mass, c, n);
        CHECK(rel_err(fiber_scale_laws(nt, t, pn).mass, c) < 1e-14);
    }
}

TEST_CASE("scale laws agree with dilated fields") {
    const Params pr(1, 8.0, 1.0);
    const BoxGrid g(1, 1024, 40.0);
    const Field u = test::gaussian(g, 1.3);
    const NormTuple nt = norms(u, 8.0);
    const double t = 1.7;
    const Field ut = Field::from_function(g, [&](const auto& x) { return std::sqrt(t) * std::exp(-t * t * x[0] * x[0] / 1.69); });
    check_tuple(norms(ut, 8.0), mass_preserving_scale_laws(nt, t, pr), 1e-12);
    const Field uf = Field::from_function(g, [&](const auto& x) { return t * std::exp(-t * t * x[0] * x[0] / 1.69); });
    check_tuple(norms(uf, 8.0), fiber_scale_laws(nt, t, pr), 1e-12);
}

TEST_CASE("lambda normalization") {
    const Params pr(1, 8.0, 1.0);
    const BoxGrid g(1, 1024, 40.0);
    std::mt19937_64 rng(21);
    for (int i = 0; i < 20; ++i) {
        const Field v = random_localized_field(g, rng);
        const Field w = lambda_normalize(v);
        const NormTuple nv = norms(v, 8.0);
        const NormTuple nw = norms(w, 8.0);
        CHECK(std::abs(nw.grad - 1.0) < 1e-6);
        CHECK(std::abs(nw.bilap - 1.0) < 1e-6);
        CHECK(rel_err(weinstein(nw, pr), weinstein(nv, pr)) < 1e-8);
        const LambdaFactors lf = lambda_factors(nv.grad, nv.bilap, 1);
        check_tuple(lambda_normalized_laws(nv, lf, 8.0, 1), nw, 1e-12);
    }
    const Field w = lambda_normalize(test::gaussian(g, 2.0));
    const Field ww = lambda_normalize(w);
    CHECK(ww.grid().length() == doctest::Approx(w.grid().length()).epsilon(1e-12));
    CHECK(combine(1.0, ww.on_grid(w.grid()), -1.0, w).max_abs() < 1e-12 * w.max_abs());
    CHECK_THROWS_AS(lambda_normalize(Field::zeros(g)), PreconditionError);
}

TEST_CASE("resample") {
    const BoxGrid g(1, 64, 2.0 * pi);
    const Field u = test::sine_field(g, 3.0);
    const Field same = resample(u, 1.0);
    CHECK(same.grid() == g);
    const Field half = resample(u, 2.0);
    CHECK(half.grid().length() == doctest::Approx(pi));
    CHECK(rel_err(norms(half, 4.0).mass, pi / 2.0) < 1e-12);
    const Field back = resample(half, 0.5);
    CHECK(back.grid() == g);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == u[i]);

    const double mu = 1.9;
    const NormTuple a = norms(u, 4.0);
    const NormTuple b = norms(resample(u, mu), 4.0);
    check_tuple(b, {a.mass / mu, a.grad * mu, a.bilap * std::pow(mu, 3), a.lp / mu}, 1e-12);
    CHECK_THROWS_AS(resample(u, 0.0), PreconditionError);
}

TEST_CASE("construct_Q parameters") {
    const BoxGrid g(1, 1024, 40.0);
    const Field v = lambda_normalize(test::gaussian(g, 1.0));
    const NormTuple nv = norms(v, 8.0);
    for (double eps : {1.0, 4.0, 0.25}) {
        const QConstruction q = construct_Q(v, Params(1, 8.0, eps));
        CHECK(rel_err(q.mu, 1.0 / std::sqrt(eps)) < 1e-14);
        CHECK(rel_err(q.lambda, std::pow(8.0 / (eps * nv.lp), 1.0 / 6.0)) < 1e-14);
        CHECK(rel_err(q.omega, 6.0 / (eps * nv.mass)) < 1e-14);
        CHECK(rel_err(q.q.grid().length(), v.grid().length() / q.mu) < 1e-14);
    }

    const BoxGrid g2(2, 128, 30.0);
    const Field v2 = lambda_normalize(test::gaussian(g2, 1.5));
    const QConstruction q2 = construct_Q(v2, Params(2, 5.0, 1.0));
    CHECK(q2.mu == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rel_err(q2.omega, 3.0 / norms(v2, 5.0).mass) < 1e-14);

    CHECK_THROWS_AS(construct_Q(test::gaussian(g, 1.0), Params(1, 8.0, 1.0)), PreconditionError);
}

TEST_CASE("h profile and t_eps") {
    const Params pr(1, 8.0, 1.0);
    const NormTuple nt{1.0, 0.5, 1.0, 8.0};
    CHECK(t_eps(nt, pr) == doctest::Approx(1.0).epsilon(1e-14));
    NormTuple doubled = nt;
    doubled.lp *= 2.0;
    CHECK(rel_err(t_eps(doubled, pr), 2.0) < 1e-14);

    const Params p2(2, 5.0, 0.7);
    const NormTuple n2{0.4, 1.3, 2.2, 3.1};
    const double t = t_eps(n2, p2);
    const double h = 1e-5;
    const double slope = (h_value(n2, p2, t + h) - h_value(n2, p2, t - h)) / (2 * h);
    CHECK(std::abs(slope) < 1e-10 * (n2.grad + n2.bilap + n2.lp));
    const auto prof = h_profile(n2, p2, {0.1, 0.5, 0.9 * t, 1.1 * t, 2.0, 10.0});
    CHECK(prof.size() == 6);
    for (const auto& [tt, hv] : prof) CHECK(hv > h_value(n2, p2, t));
    CHECK(prof[0].second == h_value(n2, p2, 0.1));
}

TEST_CASE("g functions") {
    for (int n = 1; n <= 3; ++n) {
        const GValues g = g_functions(1.0, n, 2.0 + 6.0 / n);
        CHECK(std::abs(g.g1) < 1e-12);
        CHECK(std::abs(g.g2) < 1e-12);
        CHECK(std::abs(g.g3) < 1e-12);
    }
    const GValues g = g_functions(2.0, 1, 8.0);
    CHECK(g.g1 == doctest::Approx(58.0).epsilon(1e-15));
    CHECK(g.g2 == doctest::Approx(26.0).epsilon(1e-15));
    CHECK(g.g3 == doctest::Approx(418.0).epsilon(1e-15));

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> logt(std::log(0.05), std::log(20.0));
    std::uniform_real_distribution<double> frac(0.01, 0.99);
    for (int i = 0; i < 1000; ++i) {
        const int n = 1 + i % 3;
        const double p = 2.0 + 4.0 / n + frac(rng) * 4.0 / n;
        const double t = std::exp(logt(rng));
        const GValues v = g_functions(t, n, p);
        CHECK(v.g1 >= -1e-12);
        CHECK(v.g2 >= -1e-12);
        CHECK(v.g3 >= -1e-12);
    }
}

TEST_CASE("fiber gap on the Nehari and Pohozaev zero set") {
    // Solve the two identities for (grad, lp) given (mass, bilap, omega).
    const int n = 1;
    const double p = 8.0;
    const double eps = 1.0;
    const double omega = 1.8;
    const double mass = 3.0;
    const double bilap = 0.9;
    // Nehari: eps B + G + w M = P;  Pohozaev with N = 1.
    // eps(-3/2)B - G/2 + w M/2 - P/8 = 0  =>  G = (-(3/2+1/8) eps B + (1/2-1/8) w M) / (1/2+1/8)
    const double grad = (-(1.5 + 0.125) * eps * bilap + (0.5 - 0.125) * omega * mass) / 0.625;
    const double lp = eps * bilap + grad + omega * mass;
    const NormTuple nt{mass, grad, bilap, lp};
    const Params pr(n, p, eps, omega);
    CHECK(std::abs(nehari_residual(nt, pr)) < 1e-12 * lp);
    CHECK(std::abs(pohozaev(nt, pr)) < 1e-12 * lp);
    for (double t : {0.25, 0.5, 0.9, 1.1, 2.0, 4.0}) {
        const double gap = fiber_action_gap(nt, pr, t);
        CHECK(gap > 0.0);
        CHECK(std::abs(gap - fiber_gap_decomposition(nt, pr, t)) < 1e-12 * (std::abs(action(nt, pr)) + std::abs(action(fiber_scale_laws(nt, t, pr), pr))));
    }
    CHECK(fiber_action_gap(nt, pr, 1.0) == doctest::Approx(0.0));
}
