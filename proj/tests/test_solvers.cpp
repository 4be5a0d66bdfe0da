#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <thread>

#include "bnls/error.hpp"
#include "bnls/scalings.hpp"
#include "support.hpp"

using namespace bnls;
using bnls::test::rel_err;

namespace {

double aligned_distance(const Field& a, const Field& b) {
    const Field ca = center_and_align(a);
    const Field cb = center_and_align(b.on_grid(a.grid()));
    return l2_norm(combine(1.0, ca, -1.0, cb)) / l2_norm(ca);
}

bool same_bits(const Field& a, const Field& b) {
    return a.size() == b.size() && std::memcmp(a.samples().data(), b.samples().data(), 8 * a.size()) == 0;
}

}  // namespace

TEST_CASE("solver config validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.max_iters = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.relaxation = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.relaxation = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.tol_residual = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.init = InitKind::stored_field;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    CHECK(init_kind_from_string("random_bandlimited") == InitKind::random_bandlimited);
    CHECK(to_string(InitKind::gaussian_bump) == "gaussian_bump");
    CHECK_THROWS_AS(init_kind_from_string("spiral"), ConfigError);
    CHECK(to_string(Route::weinstein_Q) == "weinstein_Q");
    CHECK(to_string(Outcome::no_minimizer) == "no_minimizer");
}

TEST_CASE("initial guesses are seeded") {
    const BoxGrid g(1, 256, 20.0);
    SolverConfig c;
    c.init = InitKind::random_bandlimited;
    c.seed = 3;
    const Field a = initial_guess(g, c);
    CHECK(same_bits(a, initial_guess(g, c)));
    c.seed = 4;
    CHECK_FALSE(same_bits(a, initial_guess(g, c)));
    CHECK(boundary_amplitude_ratio(a) < 1e-8);

    SolverConfig s;
    s.init = InitKind::stored_field;
    s.initial_field = test::gaussian(BoxGrid(1, 128, 20.0), 2.0);
    CHECK(combine(1.0, initial_guess(g, s), -1.0, test::gaussian(g, 2.0)).max_abs() < 1e-11);
}

TEST_CASE("second-order soliton oracle") {
    const Params pr(1, 8.0, 0.0, 1.0, std::nullopt, Regime::relaxed);
    const BoxGrid g(1, 1024, 40.0);
    const GroundState gs = petviashvili(pr, g, SolverConfig{});
    CHECK(gs.outcome == Outcome::converged);
    const double amp = std::pow(4.0, 1.0 / 6.0);
    const Field exact = Field::from_function(g, [&](const auto& x) { return amp * std::pow(1.0 / std::cosh(3.0 * x[0]), 1.0 / 3.0); });
    const Field u = center_and_align(gs.field);
    CHECK(combine(1.0, u, -1.0, exact).max_abs() / amp < 1e-6);
}

TEST_CASE("fixed-frequency Petviashvili") {
    const Params pr(1, 8.0, 1.0, 1.0);
    const BoxGrid g(1, 1024, 40.0);
    const GroundState gs = petviashvili(pr, g, SolverConfig{});
    CHECK(gs.route == Route::petviashvili);
    CHECK(gs.residual_pde < 1e-10);
    CHECK(std::abs(nehari_residual(gs.nt, pr)) < 1e-10 * quadratic_scale(gs.nt, pr));
    CHECK(std::abs(pohozaev(gs.nt, pr)) < 1e-6 * quadratic_scale(gs.nt, pr));
    CHECK(rel_err(gs.omega_extracted, 1.0) < 1e-10);
    CHECK(gs.residual_history.size() == static_cast<std::size_t>(gs.iters));

    SolverConfig relaxed;
    relaxed.relaxation = 0.8;
    relaxed.filter = true;
    const GroundState gr = petviashvili(pr, g, relaxed);
    CHECK(aligned_distance(gr.field, gs.field) < 1e-8);

    SolverConfig warm;
    warm.init = InitKind::stored_field;
    warm.initial_field = gs.field;
    CHECK(petviashvili(pr, g, warm).iters <= 2);

    CHECK_THROWS_AS(petviashvili(Params(1, 8.0, 1.0), g, SolverConfig{}), ConfigError);
    CHECK_THROWS_AS(petviashvili(Params(1, 8.0, 1.0, -1.0), g, SolverConfig{}), ConfigError);
}

TEST_CASE("divergence carries the residual history") {
    SolverConfig c;
    c.max_iters = 2;
    try {
        petviashvili(Params(1, 8.0, 1.0, 1.0), BoxGrid(1, 512, 40.0), c);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.history().size() == 2);
        CHECK(e.last_residual() == e.history().back());
        CHECK(e.last_residual() > 1e-10);
    }
}

TEST_CASE("Weinstein minimization") {
    const Params pr = test::default_params();
    const BoxGrid g = test::default_grid();
    SolverConfig a;
    a.init = InitKind::random_bandlimited;
    a.seed = 1;
    SolverConfig b = a;
    b.seed = 2;
    const WeinsteinResult ra = weinstein_minimize(pr, g, a);
    const WeinsteinResult rb = weinstein_minimize(pr, g, b);
    CHECK(rel_err(ra.C, rb.C) < 1e-8);
    CHECK(aligned_distance(ra.v, rb.v) < 1e-6);

    const NormTuple nv = norms(ra.v, pr.p());
    CHECK(std::abs(nv.grad - 1.0) < 1e-10);
    CHECK(std::abs(nv.bilap - 1.0) < 1e-10);
    CHECK(rel_err(ra.C, 1.0 / weinstein(nv, pr)) < 1e-12);
    CHECK(ra.residual < 1e-10);

    // C does not depend on eps.
    CHECK(rel_err(weinstein_minimize(pr.with_eps(9.0), g, a).C, ra.C) < 1e-12);

    const WeinsteinResult fine = weinstein_minimize(pr, g.with_points(2048), SolverConfig{});
    CHECK(rel_err(fine.C, ra.C) < 1e-8);
}

TEST_CASE("route_Q identities") {
    const RouteQResult& r = test::default_run().route;
    const Params& pr = r.gs.params;
    const NormTuple& q = r.gs.nt;
    CHECK(r.gs.route == Route::weinstein_Q);
    CHECK(rel_err(q.mass, c_eps_formula(r.weinstein.C, pr)) < 1e-4);
    CHECK(rel_err(q.grad, pr.eps() * q.bilap) < 1e-6);
    CHECK(rel_err(q.grad / q.lp, 1.0 / 8.0) < 1e-6);
    CHECK(std::abs(energy(q, pr)) < 1e-6 * quadratic_scale(q, pr));
    CHECK(rel_err(r.gs.omega_extracted, r.omega_formula) < 1e-6);
    CHECK(r.gs.residual_pde < 1e-6);
    CHECK(rel_err(t_eps(q, pr), 1.0) < 1e-6);
}

TEST_CASE("mass-constrained flow above the critical mass") {
    const double c_eps = test::default_run().report.c_eps.value;
    const Params pr = test::default_params().with_mass(2.0 * c_eps);
    const GroundState gs = mass_constrained_flow(pr, BoxGrid(1, 1024, 4.0), SolverConfig{});
    CHECK(gs.outcome == Outcome::converged);
    CHECK(gs.route == Route::mass_flow);
    CHECK(rel_err(gs.nt.mass, 2.0 * c_eps) < 1e-10);
    CHECK(energy(gs.nt, pr) < -1e-6 * (pr.eps() * gs.nt.bilap + gs.nt.grad));
    // Accepted steps may rise by roundoff only.
    const double slack = 1e-12 * (pr.eps() * gs.nt.bilap + gs.nt.grad);
    int rises = 0;
    for (std::size_t i = 1; i < gs.energy_history.size(); ++i)
        if (gs.energy_history[i] > gs.energy_history[i - 1] + slack) ++rises;
    CHECK(rises == 0);
    CHECK(gs.residual_pde < 1e-6);
    const Params pw = pr.with_omega(gs.omega_extracted);
    CHECK(std::abs(nehari_residual(gs.nt, pw)) < 1e-6 * quadratic_scale(gs.nt, pw));
    CHECK(std::abs(pohozaev(gs.nt, pw)) < 1e-6 * quadratic_scale(gs.nt, pw));
}

TEST_CASE("mass-constrained flow below the critical mass spreads") {
    const double c_eps = test::default_run().report.c_eps.value;
    const Params pr = test::default_params().with_mass(0.5 * c_eps);
    const GroundState gs = mass_constrained_flow(pr, test::default_grid(), SolverConfig{});
    CHECK(gs.outcome == Outcome::no_minimizer);
    CHECK_THROWS_AS(mass_constrained_flow(test::default_params(), test::default_grid(), SolverConfig{}), ConfigError);
}

TEST_CASE("solves are deterministic and thread independent") {
    const Params pr(1, 8.0, 1.0, 1.3);
    const BoxGrid g(1, 512, 30.0);
    SolverConfig c;
    c.init = InitKind::random_bandlimited;
    c.seed = 11;
    const GroundState ref = petviashvili(pr, g, c);
    GroundState other[2] = {ref, ref};
    std::thread t0([&] { other[0] = petviashvili(pr, g, c); });
    std::thread t1([&] { other[1] = petviashvili(pr, g, c); });
    t0.join();
    t1.join();
    CHECK(same_bits(ref.field, other[0].field));
    CHECK(same_bits(ref.field, other[1].field));
}
