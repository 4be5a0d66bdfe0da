#include "bnls/field_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "bnls/error.hpp"

namespace bnls {

namespace {

constexpr std::uint8_t magic[4] = {'B', 'N', 'L', 'S'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }

    void need(std::size_t n, const char* what) const {
        if (bytes_.size() - pos_ < n) throw FormatError(std::string("truncated field file reading ") + what, pos_);
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    double f64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

    std::span<const std::uint8_t> take(std::size_t n, const char* what) {
        need(n, what);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_field(const Field& u) {
    const BoxGrid& g = u.grid();
    std::vector<std::uint8_t> out;
    out.reserve(field_header_bytes + 8 * u.size());
    out.insert(out.end(), std::begin(magic), std::end(magic));
    put_u32(out, field_format_version);
    put_u32(out, static_cast<std::uint32_t>(g.dim()));
    put_u32(out, static_cast<std::uint32_t>(g.points()));
    put_f64(out, g.length());
    for (double v : u.samples()) put_f64(out, v);
    return out;
}

Field decode_field(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    const auto m = r.take(4, "magic");
    for (std::size_t i = 0; i < 4; ++i)
        if (m[i] != magic[i]) throw FormatError("bad magic, expected \"BNLS\"", i);

    std::size_t at = r.offset();
    const std::uint32_t version = r.u32("version");
    if (version != field_format_version) throw FormatError("unsupported format version " + std::to_string(version), at);

    at = r.offset();
    const std::uint32_t dim = r.u32("dim");
    if (dim < 1 || dim > static_cast<std::uint32_t>(BoxGrid::max_dim))
        throw FormatError("invalid dimension " + std::to_string(dim), at);

    at = r.offset();
    const std::uint32_t points = r.u32("points_per_axis");
    if (points < BoxGrid::min_points || !std::has_single_bit(points))
        throw FormatError("points per axis must be a power of two >= 32, got " + std::to_string(points), at);
    at = r.offset();
    const double length = r.f64("box_length");

    std::optional<BoxGrid> grid;
    try {
        grid.emplace(static_cast<int>(dim), points, length);
    } catch (const ConfigError& e) {
        throw FormatError(std::string("invalid grid header: ") + e.what(), at);
    }

    std::vector<double> samples(grid->size());
    for (double& v : samples) {
        at = r.offset();
        v = r.f64("samples");
        if (!std::isfinite(v)) throw FormatError("non-finite sample", at);
    }
    if (r.offset() != bytes.size()) throw FormatError("trailing bytes after samples", r.offset());
    return Field(*grid, std::move(samples));
}

void write_field(const std::filesystem::path& path, const Field& u) {
    const auto bytes = encode_field(u);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing " + path.string());
}

Field read_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string(), 0);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_field(bytes);
}

}  // namespace bnls
