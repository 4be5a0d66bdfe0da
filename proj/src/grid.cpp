#include "bnls/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "bnls/error.hpp"

namespace bnls {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

template <class T>
struct FftwDeleter {
    void operator()(T* ptr) const noexcept { fftw_free(ptr); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <class T>
FftwBuffer<T> make_buffer(std::size_t n) {
    auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
    if (raw == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(raw);
}

// Plans are created once per (dim, points) under a lock; execution goes through
// the new-array interface on per-call buffers, which FFTW allows concurrently.
struct PlanPair {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

PlanPair plans_for(const BoxGrid& grid) {
    static std::map<std::pair<int, std::size_t>, PlanPair> cache;
    std::lock_guard lock(planner_mutex());
    const auto key = std::make_pair(grid.dim(), grid.points());
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    std::array<int, BoxGrid::max_dim> dims{};
    for (int a = 0; a < grid.dim(); ++a) dims[static_cast<std::size_t>(a)] = static_cast<int>(grid.points());
    auto real = make_buffer<double>(grid.size());
    auto cplx = make_buffer<fftw_complex>(grid.spectral_size());
    PlanPair pp;
    pp.r2c = fftw_plan_dft_r2c(grid.dim(), dims.data(), real.get(), cplx.get(), FFTW_ESTIMATE);
    pp.c2r = fftw_plan_dft_c2r(grid.dim(), dims.data(), cplx.get(), real.get(), FFTW_ESTIMATE);
    if (pp.r2c == nullptr || pp.c2r == nullptr) throw Error("FFTW planning failed");
    cache.emplace(key, pp);
    return pp;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw PreconditionError("fields live on different grids");
}

template <class Symbol>
Field apply_multiplier(const Field& u, Symbol&& symbol) {
    Spectrum c = forward_transform(u);
    for_each_mode(u.grid(), [&](std::size_t idx, double k2, double) { c[idx] *= symbol(k2); });
    return inverse_transform(u.grid(), c);
}

// Index of the sample along `axis` for flat index i.
std::size_t axis_index(const BoxGrid& grid, std::size_t i, int axis) {
    const std::size_t m = grid.points();
    for (int a = grid.dim() - 1; a > axis; --a) i /= m;
    return i % m;
}

// Periodic Dirichlet kernel of an even-length trigonometric interpolant with
// the Nyquist term split symmetrically.
double dirichlet_kernel(double t, double length, std::size_t m) {
    const double theta = two_pi * t / length;
    const double half = 0.5 * theta;
    const double s = std::sin(half);
    const double md = static_cast<double>(m);
    double core;
    if (std::abs(s) < 1e-14) {
        const double sign = std::cos(half * (md - 1.0)) * std::cos(half) >= 0.0 ? 1.0 : -1.0;
        core = sign * (md - 1.0);
    } else {
        core = std::sin(0.5 * (md - 1.0) * theta) / s;
    }
    return (core + std::cos(0.5 * md * theta)) / md;
}

}  // namespace

BoxGrid::BoxGrid(int dim, std::size_t points_per_axis, double box_length)
    : dim_(dim), points_(points_per_axis), length_(box_length) {
    if (dim < 1 || dim > max_dim) throw ConfigError("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
    if (!is_power_of_two(points_per_axis) || points_per_axis < min_points)
        throw ConfigError("points per axis must be a power of two >= 32, got " + std::to_string(points_per_axis));
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw ConfigError("box length must be positive and finite");
}

double BoxGrid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

std::size_t BoxGrid::size() const noexcept {
    std::size_t n = 1;
    for (int a = 0; a < dim_; ++a) n *= points_;
    return n;
}

std::size_t BoxGrid::spectral_size() const noexcept { return size() / points_ * (points_ / 2 + 1); }

double BoxGrid::coordinate(std::size_t index) const noexcept {
    return -0.5 * length_ + static_cast<double>(index) * spacing();
}

double BoxGrid::wavenumber(std::size_t m) const noexcept {
    const auto mi = static_cast<long long>(m);
    const auto n = static_cast<long long>(points_);
    const long long wrapped = mi < n / 2 ? mi : mi - n;
    return two_pi * static_cast<double>(wrapped) / length_;
}

Field::Field(BoxGrid grid, std::vector<double> samples) : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size())
        throw InvalidFieldError("field has " + std::to_string(samples_.size()) + " samples, grid needs " +
                                std::to_string(grid_.size()));
}

Field Field::zeros(const BoxGrid& grid) { return Field(grid, std::vector<double>(grid.size(), 0.0)); }

bool Field::is_finite() const noexcept {
    return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const noexcept {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

Field Field::scaled(double factor) const {
    std::vector<double> s(samples_);
    for (double& v : s) v *= factor;
    return Field(grid_, std::move(s));
}

Field Field::on_grid(const BoxGrid& grid) const {
    if (grid.dim() != grid_.dim() || grid.points() != grid_.points())
        throw PreconditionError("reinterpretation requires the same grid shape");
    return Field(grid, samples_);
}

Field combine(double a, const Field& x, double b, const Field& y) {
    require_same_grid(x, y);
    std::vector<double> s(x.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = a * x[i] + b * y[i];
    return Field(x.grid(), std::move(s));
}

Spectrum forward_transform(const Field& u) {
    const BoxGrid& g = u.grid();
    const PlanPair pp = plans_for(g);
    auto in = make_buffer<double>(g.size());
    auto out = make_buffer<fftw_complex>(g.spectral_size());
    std::copy(u.samples().begin(), u.samples().end(), in.get());
    fftw_execute_dft_r2c(pp.r2c, in.get(), out.get());
    Spectrum c(g.spectral_size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = {out[i][0], out[i][1]};
    return c;
}

Field inverse_transform(const BoxGrid& grid, const Spectrum& coeffs) {
    if (coeffs.size() != grid.spectral_size()) throw PreconditionError("spectrum size does not match grid");
    const PlanPair pp = plans_for(grid);
    auto in = make_buffer<fftw_complex>(grid.spectral_size());
    auto out = make_buffer<double>(grid.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        in[i][0] = coeffs[i].real();
        in[i][1] = coeffs[i].imag();
    }
    fftw_execute_dft_c2r(pp.c2r, in.get(), out.get());
    const double scale = 1.0 / static_cast<double>(grid.size());
    std::vector<double> s(grid.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = out[i] * scale;
    return Field(grid, std::move(s));
}

double parseval_weight(const BoxGrid& grid) noexcept {
    // h^d / M^d = (L / M^2)^d
    const double m = static_cast<double>(grid.points());
    return std::pow(grid.length() / (m * m), grid.dim());
}

NormTuple norms(const Field& u, double p) {
    if (!(p > 2.0)) throw ConfigError("norms require p > 2");
    if (!u.is_finite()) throw InvalidFieldError("field contains non-finite samples");
    const double dv = u.grid().cell_volume();
    NormTuple nt;
    for (double v : u.samples()) {
        nt.mass += v * v;
        nt.lp += std::pow(std::abs(v), p);
    }
    nt.mass *= dv;
    nt.lp *= dv;
    const NormTuple d = seminorms(u);
    nt.grad = d.grad;
    nt.bilap = d.bilap;
    return nt;
}

NormTuple seminorms(const Field& u) {
    if (!u.is_finite()) throw InvalidFieldError("field contains non-finite samples");
    const Spectrum c = forward_transform(u);
    NormTuple nt;
    for_each_mode(u.grid(), [&](std::size_t idx, double k2, double weight) {
        const double a2 = std::norm(c[idx]) * weight;
        nt.grad += k2 * a2;
        nt.bilap += k2 * k2 * a2;
    });
    const double w = parseval_weight(u.grid());
    nt.grad *= w;
    nt.bilap *= w;
    return nt;
}

double inner(const Field& u, const Field& v) {
    require_same_grid(u, v);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s * u.grid().cell_volume();
}

double l2_norm(const Field& u) { return std::sqrt(inner(u, u)); }

double power_integral(const Field& u, double q) {
    double s = 0.0;
    for (double v : u.samples()) s += std::pow(std::abs(v), q);
    return s * u.grid().cell_volume();
}

Field laplacian(const Field& u) {
    return apply_multiplier(u, [](double k2) { return -k2; });
}

Field bilaplacian(const Field& u) {
    return apply_multiplier(u, [](double k2) { return k2 * k2; });
}

Field forward_operator(const Field& u, double a, double b, double w) {
    return apply_multiplier(u, [=](double k2) { return a * k2 * k2 + b * k2 + w; });
}

Field inverse_operator(const Field& u, double a, double b, double w) {
    if (!(w > 0.0)) throw SingularOperatorError("inverse operator needs w > 0, got " + std::to_string(w));
    if (a < 0.0 || b < 0.0) throw SingularOperatorError("inverse operator needs a, b >= 0");
    return apply_multiplier(u, [=](double k2) { return 1.0 / (a * k2 * k2 + b * k2 + w); });
}

Field derivative(const Field& u, int axis) {
    const BoxGrid& g = u.grid();
    if (axis < 0 || axis >= g.dim()) throw PreconditionError("derivative axis out of range");
    const std::size_t m = g.points();
    const std::size_t half = m / 2 + 1;
    Spectrum c = forward_transform(u);
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
        std::size_t mode;
        if (axis == g.dim() - 1) {
            mode = idx % half;
        } else {
            std::size_t rest = idx / half;
            for (int a = g.dim() - 2; a > axis; --a) rest /= m;
            mode = rest % m;
        }
        const double k = (mode == m / 2) ? 0.0 : g.wavenumber(mode);
        c[idx] *= std::complex<double>(0.0, k);
    }
    return inverse_transform(g, c);
}

Field low_pass(const Field& u) {
    const double kmax = std::numbers::pi * static_cast<double>(u.grid().points()) / u.grid().length();
    const double cut = (2.0 / 3.0) * kmax;
    return apply_multiplier(u, [=](double k2) { return k2 > cut * cut ? 0.0 : 1.0; });
}

Field power_nonlinearity(const Field& u, double p) {
    std::vector<double> s(u.size());
    const double q = p - 2.0;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::pow(std::abs(u[i]), q) * u[i];
    return Field(u.grid(), std::move(s));
}

Field shift(const Field& u, std::span<const double> displacement) {
    const BoxGrid& g = u.grid();
    if (displacement.size() != static_cast<std::size_t>(g.dim()))
        throw PreconditionError("shift needs one displacement per axis");
    const std::size_t m = g.points();
    const std::size_t half = m / 2 + 1;
    Spectrum c = forward_transform(u);
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
        const std::size_t last = idx % half;
        double phase = g.wavenumber(last) * displacement[static_cast<std::size_t>(g.dim() - 1)];
        std::size_t rest = idx / half;
        for (int a = g.dim() - 2; a >= 0; --a) {
            phase += g.wavenumber(rest % m) * displacement[static_cast<std::size_t>(a)];
            rest /= m;
        }
        c[idx] *= std::polar(1.0, -phase);
    }
    return inverse_transform(g, c);
}

Field center_and_align(const Field& u) {
    const BoxGrid& g = u.grid();
    if (u.max_abs() == 0.0) throw PreconditionError("cannot centre the zero field");
    std::array<double, BoxGrid::max_dim> sin_sum{};
    std::array<double, BoxGrid::max_dim> cos_sum{};
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double w = u[i] * u[i];
        for (int a = 0; a < g.dim(); ++a) {
            const double theta = two_pi * g.coordinate(axis_index(g, i, a)) / g.length();
            sin_sum[static_cast<std::size_t>(a)] += w * std::sin(theta);
            cos_sum[static_cast<std::size_t>(a)] += w * std::cos(theta);
        }
    }
    std::vector<double> disp(static_cast<std::size_t>(g.dim()));
    for (std::size_t a = 0; a < disp.size(); ++a) {
        const double centroid = std::atan2(sin_sum[a], cos_sum[a]) * g.length() / two_pi;
        disp[a] = -centroid;
    }
    Field centred = shift(u, disp);

    std::size_t centre = 0;
    for (int a = 0; a < g.dim(); ++a) centre = centre * g.points() + g.points() / 2;
    double sign_ref = centred[centre];
    if (sign_ref == 0.0) {
        for (double v : centred.samples()) sign_ref += v * std::abs(v);
    }
    return sign_ref < 0.0 ? centred.scaled(-1.0) : centred;
}

double boundary_amplitude_ratio(const Field& u) {
    const BoxGrid& g = u.grid();
    const double peak = u.max_abs();
    if (peak == 0.0) return 0.0;
    double edge = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (int a = 0; a < g.dim(); ++a) {
            const std::size_t j = axis_index(g, i, a);
            if (j == 0 || j + 1 == g.points()) {
                edge = std::max(edge, std::abs(u[i]));
                break;
            }
        }
    }
    return edge / peak;
}

Field fourier_resample(const Field& u, const BoxGrid& target) {
    const BoxGrid& src = u.grid();
    if (target.dim() != src.dim()) throw PreconditionError("resampling needs grids of equal dimension");
    const std::size_t ms = src.points();
    const std::size_t mt = target.points();
    const double half_src = 0.5 * src.length();

    // Interpolation matrix, mt x ms, shared by all axes.
    std::vector<double> mat(mt * ms, 0.0);
    for (std::size_t i = 0; i < mt; ++i) {
        const double y = target.coordinate(i);
        if (y < -half_src - 1e-12 * src.length() || y >= half_src) continue;
        for (std::size_t j = 0; j < ms; ++j) mat[i * ms + j] = dirichlet_kernel(y - src.coordinate(j), src.length(), ms);
    }

    // Apply along each axis in turn; shape[a] tracks the current extent.
    std::vector<double> cur(u.samples().begin(), u.samples().end());
    std::array<std::size_t, BoxGrid::max_dim> shape{};
    for (int a = 0; a < src.dim(); ++a) shape[static_cast<std::size_t>(a)] = ms;
    for (int axis = 0; axis < src.dim(); ++axis) {
        std::size_t outer = 1;
        std::size_t inner_n = 1;
        for (int a = 0; a < axis; ++a) outer *= shape[static_cast<std::size_t>(a)];
        for (int a = axis + 1; a < src.dim(); ++a) inner_n *= shape[static_cast<std::size_t>(a)];
        std::vector<double> next(outer * mt * inner_n, 0.0);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t i = 0; i < mt; ++i) {
                const double* row = &mat[i * ms];
                double* dst = &next[(o * mt + i) * inner_n];
                for (std::size_t j = 0; j < ms; ++j) {
                    const double w = row[j];
                    if (w == 0.0) continue;
                    const double* s = &cur[(o * ms + j) * inner_n];
                    for (std::size_t r = 0; r < inner_n; ++r) dst[r] += w * s[r];
                }
            }
        }
        cur = std::move(next);
        shape[static_cast<std::size_t>(axis)] = mt;
    }
    return Field(target, std::move(cur));
}

}  // namespace bnls
