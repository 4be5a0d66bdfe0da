#pragma once

#include <cmath>
#include <numbers>

#include "bnls/constants.hpp"
#include "bnls/functionals.hpp"
#include "bnls/grid.hpp"
#include "bnls/solvers.hpp"

namespace bnls::test {

inline constexpr double pi = std::numbers::pi;

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline Params default_params() { return Params(1, 8.0, 1.0); }
inline BoxGrid default_grid() { return BoxGrid(1, 1024, 40.0); }

/// One route_Q + constants run at the default problem, shared by a test binary.
inline const ConstantsRun& default_run() {
    static const ConstantsRun run = compute_constants(default_params(), default_grid(), SolverConfig{});
    return run;
}

inline Field sine_field(const BoxGrid& g, double k) {
    return Field::from_function(g, [&](const auto& x) { return std::sin(k * x[0]); });
}

inline Field gaussian(const BoxGrid& g, double width, double amp = 1.0) {
    return Field::from_function(g, [&](const auto& x) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) r2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
        return amp * std::exp(-r2 / (width * width));
    });
}

}  // namespace bnls::test
