#pragma once

#include <random>

#include "bnls/grid.hpp"

namespace bnls {

/// Real field whose Fourier coefficients are independent normals damped by
/// exp(-(|k|/k_cut)^2). Unit peak amplitude.
Field bandlimited_noise(const BoxGrid& grid, std::mt19937_64& rng, double k_cut);

/// Band-limited noise times a Gaussian window of random width (L/40 to L/8)
/// and random centre, so the field is negligible near the box faces and
/// behaves like a function on R^N.
Field random_localized_field(const BoxGrid& grid, std::mt19937_64& rng);

}  // namespace bnls
