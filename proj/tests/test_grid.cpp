#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <limits>
#include <random>

#include "bnls/error.hpp"
#include "bnls/random_fields.hpp"
#include "support.hpp"

using namespace bnls;
using bnls::test::pi;
using bnls::test::rel_err;

TEST_CASE("BoxGrid validates its shape") {
    CHECK_THROWS_AS(BoxGrid(1, 1000, 1.0), ConfigError);
    CHECK_THROWS_AS(BoxGrid(1, 16, 1.0), ConfigError);
    CHECK_THROWS_AS(BoxGrid(4, 32, 1.0), ConfigError);
    CHECK_THROWS_AS(BoxGrid(0, 32, 1.0), ConfigError);
    CHECK_THROWS_AS(BoxGrid(1, 32, 0.0), ConfigError);
    CHECK_THROWS_AS(BoxGrid(1, 32, -1.0), ConfigError);
    const BoxGrid g(2, 64, 8.0);
    CHECK(g.spacing() == doctest::Approx(0.125));
    CHECK(g.size() == 64 * 64);
    CHECK(g.spectral_size() == 64 * 33);
    CHECK(g.coordinate(0) == -4.0);
    CHECK(g.coordinate(32) == 0.0);
}

TEST_CASE("wavenumbers are symmetric except at the Nyquist index") {
    const BoxGrid g(1, 64, 2.0 * pi);
    for (std::size_t m = 1; m < 32; ++m) CHECK(g.wavenumber(m) == doctest::Approx(-g.wavenumber(64 - m)));
    CHECK(g.wavenumber(0) == 0.0);
    CHECK(g.wavenumber(1) == doctest::Approx(1.0));
    CHECK(g.wavenumber(32) == doctest::Approx(-32.0));
}

TEST_CASE("Field rejects bad samples") {
    const BoxGrid g(1, 32, 1.0);
    CHECK_THROWS_AS(Field(g, std::vector<double>(31)), InvalidFieldError);
    std::vector<double> s(32, 1.0);
    s[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(norms(Field(g, s), 4.0), InvalidFieldError);
    s[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(norms(Field(g, s), 4.0), InvalidFieldError);
}

TEST_CASE("norms of the zero field vanish") {
    const NormTuple nt = norms(Field::zeros(BoxGrid(1, 64, 3.0)), 4.0);
    CHECK(nt.mass == 0.0);
    CHECK(nt.grad == 0.0);
    CHECK(nt.bilap == 0.0);
    CHECK(nt.lp == 0.0);
}

TEST_CASE("norms of sin(3x) on [-pi, pi) are analytic") {
    const BoxGrid g(1, 64, 2.0 * pi);
    const NormTuple nt = norms(test::sine_field(g, 3.0), 4.0);
    CHECK(rel_err(nt.mass, pi) < 1e-12);
    CHECK(rel_err(nt.grad, 9.0 * pi) < 1e-12);
    CHECK(rel_err(nt.bilap, 81.0 * pi) < 1e-12);
    CHECK(rel_err(nt.lp, 0.75 * pi) < 1e-12);
}

TEST_CASE("norms of a constant") {
    const BoxGrid g(1, 128, 2.0 * pi);
    const double c = -1.7;
    const Field u(g, std::vector<double>(g.size(), c));
    const NormTuple nt = norms(u, 5.5);
    CHECK(rel_err(nt.mass, 2.0 * pi * c * c) < 1e-12);
    CHECK(std::abs(nt.grad) < 1e-20);
    CHECK(std::abs(nt.bilap) < 1e-20);
    CHECK(rel_err(nt.lp, 2.0 * pi * std::pow(std::abs(c), 5.5)) < 1e-12);
}

TEST_CASE("norms in two and three dimensions") {
    const BoxGrid g2(2, 32, 2.0 * pi);
    const Field u2 = Field::from_function(g2, [](const auto& x) { return std::sin(x[0]) * std::sin(2.0 * x[1]); });
    const NormTuple n2 = seminorms(u2);
    CHECK(rel_err(inner(u2, u2), pi * pi) < 1e-12);
    CHECK(rel_err(n2.grad, 5.0 * pi * pi) < 1e-12);
    CHECK(rel_err(n2.bilap, 25.0 * pi * pi) < 1e-12);

    const BoxGrid g3(3, 32, 2.0 * pi);
    const Field u3 = Field::from_function(
        g3, [](const auto& x) { return std::cos(x[0]) * std::cos(x[1]) * std::sin(3.0 * x[2]); });
    const NormTuple n3 = seminorms(u3);
    const double mass = std::pow(pi, 3);
    CHECK(rel_err(inner(u3, u3), mass) < 1e-12);
    CHECK(rel_err(n3.grad, 11.0 * mass) < 1e-12);
    CHECK(rel_err(n3.bilap, 121.0 * mass) < 1e-12);
}

TEST_CASE("multipliers scale as k^2 and k^4 for every resolved mode") {
    const BoxGrid g(1, 64, 2.0 * pi);
    for (int k = 1; k < 32; ++k) {
        const NormTuple nt = norms(test::sine_field(g, k), 4.0);
        CHECK(rel_err(nt.grad, k * k * nt.mass) < 1e-12);
        CHECK(rel_err(nt.bilap, std::pow(k, 4) * nt.mass) < 1e-12);
    }
}

TEST_CASE("laplacian and bilaplacian act diagonally") {
    const BoxGrid g(1, 64, 2.0 * pi);
    const Field u = test::sine_field(g, 5.0);
    const Field lap = laplacian(u);
    const Field bil = bilaplacian(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(std::abs(lap[i] + 25.0 * u[i]) <= 1e-12 * 25.0);
        CHECK(std::abs(bil[i] - 625.0 * u[i]) <= 1e-9);
    }
    const Field c(g, std::vector<double>(g.size(), 3.0));
    CHECK(bilaplacian(c).max_abs() < 1e-12);
}

TEST_CASE("inverse operator") {
    const BoxGrid g(1, 64, 2.0 * pi);
    const Field u = test::sine_field(g, 1.0);
    const Field v = inverse_operator(u, 1.0, 1.0, 1.0);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(v[i] - u[i] / 3.0) < 1e-14);

    std::mt19937_64 rng(4);
    const Field r = bandlimited_noise(BoxGrid(1, 128, 10.0), rng, 5.0);
    const Field back = inverse_operator(forward_operator(r, 0.3, 2.0, 0.7), 0.3, 2.0, 0.7);
    CHECK(l2_norm(combine(1.0, back, -1.0, r)) < 1e-12 * l2_norm(r));

    CHECK_THROWS_AS(inverse_operator(u, 1.0, 1.0, 0.0), SingularOperatorError);
    CHECK_THROWS_AS(inverse_operator(u, 1.0, 1.0, -2.0), SingularOperatorError);
}

TEST_CASE("spectral derivative") {
    const BoxGrid g(1, 64, 2.0 * pi);
    const Field d = derivative(test::sine_field(g, 2.0), 0);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(d[i] - 2.0 * std::cos(2.0 * g.coordinate(i))) < 1e-12);
    // The Nyquist mode has no odd derivative.
    const Field nyq = Field::from_function(g, [](const auto& x) { return std::cos(32.0 * x[0]); });
    CHECK(derivative(nyq, 0).max_abs() < 1e-12);
}

TEST_CASE("low pass removes the upper third") {
    const BoxGrid g(1, 64, 2.0 * pi);
    const Field lo = test::sine_field(g, 10.0);
    const Field hi = test::sine_field(g, 25.0);
    CHECK(l2_norm(combine(1.0, low_pass(lo), -1.0, lo)) < 1e-12);
    CHECK(low_pass(hi).max_abs() < 1e-12);
}

TEST_CASE("Parseval consistency on random band-limited fields") {
    std::mt19937_64 rng(11);
    for (int d = 1; d <= 3; ++d) {
        const BoxGrid g(d, d == 3 ? 32 : 64, 7.0);
        for (int trial = 0; trial < 5; ++trial) {
            const Field u = bandlimited_noise(g, rng, 3.0);
            const Spectrum c = forward_transform(u);
            double s = 0.0;
            for_each_mode(g, [&](std::size_t idx, double, double w) { s += w * std::norm(c[idx]); });
            CHECK(rel_err(s * parseval_weight(g), inner(u, u)) < 1e-12);
        }
    }
}

TEST_CASE("grad^2 <= mass * bilap on 500 random fields") {
    std::mt19937_64 rng(12);
    const BoxGrid g(1, 256, 20.0);
    int violations = 0;
    for (int i = 0; i < 500; ++i) {
        const NormTuple nt = norms(random_localized_field(g, rng), 4.0);
        if (nt.grad * nt.grad > nt.mass * nt.bilap * (1.0 + 1e-12)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("center_and_align") {
    const BoxGrid g(1, 256, 20.0);
    const Field bump = test::gaussian(g, 1.5);
    CHECK(l2_norm(combine(1.0, center_and_align(bump), -1.0, bump)) < 1e-10);

    const double d = 37.0 * g.spacing();
    const Field moved = shift(bump, std::vector<double>{d});
    CHECK(combine(1.0, center_and_align(moved), -1.0, center_and_align(bump)).max_abs() <= 1e-10);

    CHECK(combine(1.0, center_and_align(bump.scaled(-1.0)), -1.0, center_and_align(bump)).max_abs() <= 1e-12);
    CHECK_THROWS_AS(center_and_align(Field::zeros(g)), PreconditionError);
}

TEST_CASE("shift by whole cells is a circular shift") {
    const BoxGrid g(2, 32, 4.0);
    std::mt19937_64 rng(3);
    const Field u = bandlimited_noise(g, rng, 4.0);
    const Field s = shift(u, std::vector<double>{2.0 * g.spacing(), -3.0 * g.spacing()});
    for (std::size_t i = 0; i < 32; ++i)
        for (std::size_t j = 0; j < 32; ++j) {
            const std::size_t si = (i + 2) % 32;
            const std::size_t sj = (j + 32 - 3) % 32;
            CHECK(std::abs(s[si * 32 + sj] - u[i * 32 + j]) < 1e-12);
        }
}

TEST_CASE("boundary amplitude ratio") {
    const BoxGrid g(1, 128, 10.0);
    CHECK(boundary_amplitude_ratio(test::gaussian(g, 0.5)) < boundary_warning_ratio);
    CHECK(boundary_amplitude_ratio(test::gaussian(g, 5.0)) > 0.3);
    CHECK(boundary_amplitude_ratio(Field::zeros(g)) == 0.0);
}

TEST_CASE("Fourier resampling reproduces smooth fields") {
    const BoxGrid src(1, 128, 20.0);
    const Field u = test::gaussian(src, 1.0);
    const BoxGrid fine(1, 256, 20.0);
    const Field v = fourier_resample(u, fine);
    CHECK(combine(1.0, v, -1.0, test::gaussian(fine, 1.0)).max_abs() < 1e-12);

    // A larger target box is zero-filled outside the source box.
    const BoxGrid wide(1, 256, 40.0);
    const Field w = fourier_resample(u, wide);
    CHECK(combine(1.0, w, -1.0, test::gaussian(wide, 1.0)).max_abs() < 1e-12);

    const BoxGrid g2(2, 64, 10.0);
    const BoxGrid g2f(2, 128, 10.0);
    const Field u2 = fourier_resample(test::gaussian(g2, 1.0), g2f);
    CHECK(combine(1.0, u2, -1.0, test::gaussian(g2f, 1.0)).max_abs() < 1e-9);
    CHECK_THROWS_AS(fourier_resample(u, g2), PreconditionError);
}

TEST_CASE("power nonlinearity keeps the sign") {
    const BoxGrid g(1, 32, 1.0);
    std::vector<double> s(32, -2.0);
    const Field n = power_nonlinearity(Field(g, s), 3.5);
    CHECK(n[0] == doctest::Approx(-std::pow(2.0, 2.5)));
}
