#include "gamma3/generators.hpp"
#include "gamma3/io.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>

using namespace gamma3;

TEST(ParseComplex, Grammar) {
    EXPECT_EQ(parse_complex("1.5"), Complex(1.5, 0));
    EXPECT_EQ(parse_complex("-2"), Complex(-2, 0));
    EXPECT_EQ(parse_complex("2i"), Complex(0, 2));
    EXPECT_EQ(parse_complex("-0.5i"), Complex(0, -0.5));
    EXPECT_EQ(parse_complex("1+2i"), Complex(1, 2));
    EXPECT_EQ(parse_complex("1-2i"), Complex(1, -2));
    EXPECT_EQ(parse_complex("i"), Complex(0, 1));
    EXPECT_EQ(parse_complex("-i"), Complex(0, -1));
    EXPECT_EQ(parse_complex("3+i"), Complex(3, 1));
    EXPECT_EQ(parse_complex("3-i"), Complex(3, -1));
    EXPECT_EQ(parse_complex("1e-3+2E+2i"), Complex(1e-3, 200));
    EXPECT_EQ(parse_complex("-1.5e2-2.5e-1j"), Complex(-150, -0.25));
    EXPECT_EQ(parse_complex(" 1 + 2i "), Complex(1, 2));
    EXPECT_EQ(parse_complex("+4"), Complex(4, 0));
}

TEST(ParseComplex, Errors) {
    for (const char* bad : {"", "abc", "1+", "1+2", "1++2i", "1.2.3", "2ii", "e5"}) {
        try {
            parse_complex(bad);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
        }
    }
}

TEST(ParseComplex, Lists) {
    const auto v = parse_complex_list("1.5,0.75,0.125");
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[2], Complex(0.125));
    EXPECT_EQ(parse_complex_list("i;-i", ';')[1], Complex(0, -1));
    EXPECT_THROW(parse_complex_list("1,,2"), Error);
}

TEST(FormatComplex, RoundTrips) {
    Rng rng(71);
    for (int k = 0; k < 1000; ++k) {
        const Complex z = random_disc_point(rng, 1e3) * std::pow(10.0, (k % 20) - 10);
        const Complex back = parse_complex(format_complex(z));
        EXPECT_EQ(std::memcmp(&back, &z, sizeof z), 0) << format_complex(z);
    }
    EXPECT_EQ(parse_complex(format_complex(Complex(-0.0, -0.0))), Complex(0, 0));
}

TEST(MatrixJson, BitExactRoundTrip) {
    Rng rng(72);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix M = random_gaussian(1 + trial % 5, 1 + trial % 3, rng) * 1e-7;
        const ComplexMatrix back = matrix_from_json(Json::parse(matrix_to_json(M).dump()));
        ASSERT_EQ(back.rows(), M.rows());
        ASSERT_EQ(back.cols(), M.cols());
        EXPECT_EQ(std::memcmp(back.data(), M.data(), sizeof(Complex) * M.size()), 0);
    }
}

TEST(MatrixJson, RowMajorLayout) {
    ComplexMatrix M(2, 2);
    M << 1, Complex(0, 2), 3, 4;
    const Json j = matrix_to_json(M);
    EXPECT_EQ(j["rows"], 2);
    EXPECT_EQ(j["data"][1][1], 2.0);
    EXPECT_EQ(j["data"][2][0], 3.0);
}

TEST(MatrixJson, Errors) {
    for (const char* bad : {R"({"rows": 2, "cols": 2, "data": [[1, 0]]})", R"({"rows": 1, "cols": 1, "data": [[1]]})",
                            R"({"rows": 1, "cols": 1, "data": [["a", 0]]})", R"({"cols": 1, "data": []})",
                            R"({"rows": 1, "cols": 1, "data": [1, 0]})"}) {
        try {
            matrix_from_json(Json::parse(bad));
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
        }
    }
}

TEST(TripleJson, RoundTripThroughFile) {
    Rng rng(73);
    const auto T = diagonal_triple(3, rng);
    TripleFile t{T.S1, T.S2, T.P, {{"kind", "diagonal"}}};
    const auto path = (std::filesystem::temp_directory_path() / "gamma3_io_roundtrip.json").string();
    write_json_file(path, triple_to_json(t));
    const auto back = triple_from_json(read_json_file(path));
    std::filesystem::remove(path);
    EXPECT_EQ(back.S1, T.S1);
    EXPECT_EQ(back.S2, T.S2);
    EXPECT_EQ(back.P, T.P);
    EXPECT_EQ(back.metadata["kind"], "diagonal");
}

TEST(TripleJson, Errors) {
    EXPECT_THROW(triple_from_json(Json::parse(R"({"S1": 1})")), Error);
    const Json one = matrix_to_json(ComplexMatrix::Identity(1, 1)), two = matrix_to_json(ComplexMatrix::Identity(2, 2));
    try {
        triple_from_json({{"S1", one}, {"S2", two}, {"P", one}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    EXPECT_THROW(read_json_file("/nonexistent/triple.json"), Error);
}
