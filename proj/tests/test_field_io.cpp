#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <random>

#include "bnls/error.hpp"
#include "bnls/field_io.hpp"
#include "bnls/random_fields.hpp"

using namespace bnls;

namespace {

Field sample_field() {
    std::mt19937_64 rng(9);
    return bandlimited_noise(BoxGrid(2, 32, 6.5), rng, 3.0);
}

std::size_t offset_of(std::span<const std::uint8_t> bytes) {
    try {
        decode_field(bytes);
    } catch (const FormatError& e) {
        return e.offset();
    }
    return static_cast<std::size_t>(-1);
}

}  // namespace

TEST_CASE("encode/decode round trip is bit exact") {
    const Field u = sample_field();
    const auto bytes = encode_field(u);
    CHECK(bytes.size() == field_header_bytes + 8 * u.size());
    const Field v = decode_field(bytes);
    CHECK(v.grid() == u.grid());
    CHECK(std::memcmp(v.samples().data(), u.samples().data(), 8 * u.size()) == 0);
}

TEST_CASE("header layout") {
    const auto bytes = encode_field(Field::zeros(BoxGrid(1, 64, 2.0)));
    CHECK(std::memcmp(bytes.data(), "BNLS", 4) == 0);
    CHECK(bytes[4] == 1);
    CHECK(bytes[8] == 1);
    CHECK(bytes[12] == 64);
    double L = 0.0;
    std::memcpy(&L, bytes.data() + 16, 8);
    CHECK(L == 2.0);
}

TEST_CASE("malformed input names the failing offset") {
    auto bytes = encode_field(sample_field());

    auto bad = bytes;
    bad[0] = 'X';
    CHECK(offset_of(bad) == 0);
    CHECK_THROWS_WITH_AS(decode_field(bad), doctest::Contains("byte offset 0"), FormatError);

    bad = bytes;
    bad[4] = 7;
    CHECK(offset_of(bad) == 4);

    bad = bytes;
    bad[8] = 5;
    CHECK(offset_of(bad) == 8);

    bad = bytes;
    bad[12] = 33;
    CHECK(offset_of(bad) == 12);

    bad.assign(bytes.begin(), bytes.begin() + 10);
    CHECK(offset_of(bad) == 8);

    bad.assign(bytes.begin(), bytes.end() - 3);
    CHECK(offset_of(bad) >= field_header_bytes);

    bad = bytes;
    bad.push_back(0);
    CHECK(offset_of(bad) == bytes.size());

    bad = bytes;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::memcpy(bad.data() + field_header_bytes + 8 * 5, &nan, 8);
    CHECK(offset_of(bad) == field_header_bytes + 8 * 5);
}

TEST_CASE("file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "bnls_field_io_test.bnls";
    const Field u = sample_field();
    write_field(path, u);
    const Field v = read_field(path);
    CHECK(std::memcmp(v.samples().data(), u.samples().data(), 8 * u.size()) == 0);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_field(path), Error);
}
