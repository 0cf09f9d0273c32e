#include "hrkl/csv_io.hpp"
#include "hrkl/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace hrkl;

TEST_CASE("split and parse fields") {
    CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(split_csv_line("x\r") == std::vector<std::string>{"x"});
    CHECK(parse_double(" 2.5 ", 1) == 2.5);
    CHECK(parse_double("-1e-3", 1) == -1e-3);
    CHECK_THROWS_AS(parse_double("abc", 3), ParseError);
    CHECK_THROWS_AS(parse_double("inf", 3), ParseError);
    CHECK_THROWS_AS(parse_double("1.5x", 3), ParseError);
    CHECK(parse_integer("-4", 1) == -4);
    CHECK_THROWS_AS(parse_integer("4.2", 1), ParseError);
}

TEST_CASE("format_double round trips") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(parse_double(format_double(v), 1) == v);
    }
}

TEST_CASE("read_csv reports ragged rows with their line") {
    testutil::TempDir dir("csv");
    testutil::write_file(dir / "r.csv", "\xEF\xBB\xBF" "a,b\n1,2\n\n3\n");
    try {
        read_csv(dir / "r.csv");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    testutil::write_file(dir / "ok.csv", "\xEF\xBB\xBF" "a,b\n1,2\n\n3,4\n");
    const CsvTable t = read_csv(dir / "ok.csv");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    CHECK(t.rows.size() == 2);
    CHECK(t.line_numbers == std::vector<std::size_t>{2, 4});
}

TEST_CASE("id labels round trip") {
    testutil::TempDir dir("csv");
    write_id_labels({{"x", "y"}, {3, -1}}, dir / "sub" / "l.csv", "cluster");
    CHECK(testutil::read_file(dir / "sub" / "l.csv") == "series_id,cluster\nx,3\ny,-1\n");
    const IdLabels back = read_id_labels(dir / "sub" / "l.csv");
    CHECK(back.ids == std::vector<std::string>{"x", "y"});
    CHECK(back.labels == std::vector<int>{3, -1});
}

TEST_CASE("write_text_file failures are I/O errors") {
    testutil::TempDir dir("csv");
    testutil::write_file(dir / "file", "x");
    CHECK_THROWS_AS(write_text_file(dir / "file" / "below.txt", "y"), IoError);
}
