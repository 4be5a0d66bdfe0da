#include "bnls/random_fields.hpp"

#include <cmath>

namespace bnls {

Field bandlimited_noise(const BoxGrid& grid, std::mt19937_64& rng, double k_cut) {
    std::normal_distribution<double> normal;
    Spectrum c(grid.spectral_size());
    for_each_mode(grid, [&](std::size_t idx, double k2, double) {
        const double env = std::exp(-k2 / (k_cut * k_cut));
        const double re = normal(rng);
        const double im = normal(rng);
        c[idx] = {re * env, im * env};
    });
    Field f = inverse_transform(grid, c);
    const double peak = f.max_abs();
    return peak > 0.0 ? f.scaled(1.0 / peak) : f;
}

Field random_localized_field(const BoxGrid& grid, std::mt19937_64& rng) {
    const double len = grid.length();
    std::uniform_real_distribution<double> cut(0.5, 4.0);
    std::uniform_real_distribution<double> width(len / 40.0, len / 8.0);
    std::uniform_real_distribution<double> centre(-len / 10.0, len / 10.0);

    // Scale the cutoff with the box so the noise is resolved on any grid.
    const Field noise = bandlimited_noise(grid, rng, cut(rng) * 40.0 / len);
    const double w = width(rng);
    std::array<double, BoxGrid::max_dim> x0{};
    for (int a = 0; a < grid.dim(); ++a) x0[static_cast<std::size_t>(a)] = centre(rng);
    const Field window = Field::from_function(grid, [&](const std::array<double, BoxGrid::max_dim>& x) {
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            const double d = x[static_cast<std::size_t>(a)] - x0[static_cast<std::size_t>(a)];
            r2 += d * d;
        }
        return std::exp(-r2 / (w * w));
    });
    std::vector<double> s(grid.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = noise[i] * window[i];
    return Field(grid, std::move(s));
}

}  // namespace bnls
