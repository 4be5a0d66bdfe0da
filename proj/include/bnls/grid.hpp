#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bnls {

/// Uniform periodic grid on the box [-L/2, L/2)^d, the discrete stand-in for R^N.
///
/// Sample j along an axis sits at x_j = -L/2 + j*h with h = L/M. Samples are
/// stored row-major with axis 0 slowest.
class BoxGrid {
public:
    static constexpr int max_dim = 3;
    static constexpr std::size_t min_points = 32;

    /// Throws ConfigError unless dim in {1,2,3}, points is a power of two >= 32
    /// and box_length > 0.
    BoxGrid(int dim, std::size_t points_per_axis, double box_length);

    int dim() const noexcept { return dim_; }
    std::size_t points() const noexcept { return points_; }
    double length() const noexcept { return length_; }
    double spacing() const noexcept { return length_ / static_cast<double>(points_); }
    double cell_volume() const noexcept;

    /// Total number of samples, points^dim.
    std::size_t size() const noexcept;
    /// Number of half-spectrum coefficients, points^(dim-1) * (points/2 + 1).
    std::size_t spectral_size() const noexcept;

    double coordinate(std::size_t index) const noexcept;
    /// 2*pi*wrap(m)/L with wrap(m) in [-M/2, M/2).
    double wavenumber(std::size_t m) const noexcept;

    BoxGrid with_length(double box_length) const { return {dim_, points_, box_length}; }
    BoxGrid with_points(std::size_t points_per_axis) const { return {dim_, points_per_axis, length_}; }

    bool operator==(const BoxGrid&) const = default;

private:
    int dim_;
    std::size_t points_;
    double length_;
};

/// Real samples of a function on a BoxGrid.
class Field {
public:
    /// Throws InvalidFieldError if samples.size() != grid.size().
    Field(BoxGrid grid, std::vector<double> samples);

    static Field zeros(const BoxGrid& grid);

    /// Samples f at every grid point; f receives the point's coordinates
    /// (unused trailing entries are zero).
    template <class Fn>
    static Field from_function(const BoxGrid& grid, Fn&& f) {
        std::vector<double> s(grid.size());
        const std::size_t m = grid.points();
        std::array<double, BoxGrid::max_dim> x{};
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::size_t rest = i;
            for (int a = grid.dim() - 1; a >= 0; --a) {
                x[static_cast<std::size_t>(a)] = grid.coordinate(rest % m);
                rest /= m;
            }
            s[i] = f(x);
        }
        return Field(grid, std::move(s));
    }

    const BoxGrid& grid() const noexcept { return grid_; }
    std::span<const double> samples() const noexcept { return samples_; }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }

    bool is_finite() const noexcept;
    double max_abs() const noexcept;

    Field scaled(double factor) const;
    /// Same samples reinterpreted on another grid of the same shape.
    Field on_grid(const BoxGrid& grid) const;

private:
    BoxGrid grid_;
    std::vector<double> samples_;
};

/// a*x + b*y samplewise; grids must match.
Field combine(double a, const Field& x, double b, const Field& y);

/// The four integrals every functional is built from, for a given exponent p.
struct NormTuple {
    double mass = 0.0;   ///< ||u||_2^2
    double grad = 0.0;   ///< ||grad u||_2^2
    double bilap = 0.0;  ///< ||Lap u||_2^2
    double lp = 0.0;     ///< ||u||_p^p
};

using Spectrum = std::vector<std::complex<double>>;

/// Unnormalized real-to-complex DFT (half spectrum along the last axis).
Spectrum forward_transform(const Field& u);
/// Inverse of forward_transform, including the 1/M^d factor.
Field inverse_transform(const BoxGrid& grid, const Spectrum& coeffs);

/// Visits every half-spectrum mode with its squared wavenumber |k|^2 and its
/// Parseval multiplicity (1 for self-conjugate last-axis columns, else 2).
template <class Fn>
void for_each_mode(const BoxGrid& grid, Fn&& f) {
    const std::size_t m = grid.points();
    const std::size_t half = m / 2 + 1;
    const std::size_t n = grid.spectral_size();
    for (std::size_t idx = 0; idx < n; ++idx) {
        const std::size_t last = idx % half;
        double k2 = grid.wavenumber(last) * grid.wavenumber(last);
        std::size_t rest = idx / half;
        for (int a = 0; a < grid.dim() - 1; ++a) {
            const double k = grid.wavenumber(rest % m);
            k2 += k * k;
            rest /= m;
        }
        const double weight = (last == 0 || last == m / 2) ? 1.0 : 2.0;
        f(idx, k2, weight);
    }
}

/// Parseval factor: integral of u^2 = parseval_weight * sum(multiplicity * |u_hat|^2).
double parseval_weight(const BoxGrid& grid) noexcept;

/// Throws InvalidFieldError on non-finite samples; requires p > 2.
NormTuple norms(const Field& u, double p);

/// (grad, bilap) only, without the quadrature integrals.
NormTuple seminorms(const Field& u);

/// Quadrature integral of u*v.
double inner(const Field& u, const Field& v);
/// Quadrature L^2 norm (not squared).
double l2_norm(const Field& u);
/// Quadrature integral of |u|^q.
double power_integral(const Field& u, double q);

Field laplacian(const Field& u);
Field bilaplacian(const Field& u);
/// (a*Lap^2 - b*Lap + w) u.
Field forward_operator(const Field& u, double a, double b, double w);
/// (a*Lap^2 - b*Lap + w)^{-1} u; throws SingularOperatorError unless w > 0.
Field inverse_operator(const Field& u, double a, double b, double w);
/// Spectral derivative along one axis (Nyquist mode zeroed).
Field derivative(const Field& u, int axis);
/// Zeroes modes with |k| > (2/3) k_max.
Field low_pass(const Field& u);

/// |u|^{p-2} u pointwise.
Field power_nonlinearity(const Field& u, double p);

/// Circular shift by an arbitrary displacement per axis via Fourier phases.
Field shift(const Field& u, std::span<const double> displacement);

/// Shifts u so that its |u|^2 centroid (circular mean) is at the box centre
/// and flips the sign so the centre value is >= 0. Throws on the zero field.
Field center_and_align(const Field& u);

/// Largest |u| on the box faces divided by max |u|.
double boundary_amplitude_ratio(const Field& u);
inline constexpr double boundary_warning_ratio = 1e-8;

/// Evaluates the trigonometric interpolant of u on another grid of the same
/// dimension. Target points outside the source box are set to zero (R^N
/// surrogate, no periodic wrap).
Field fourier_resample(const Field& u, const BoxGrid& target);

}  // namespace bnls
