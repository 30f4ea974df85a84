#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gmfdfa/csv.hpp"
#include "gmfdfa/errors.hpp"

using namespace gmfdfa;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_file(const std::string& name, const std::string& content) {
    const std::string path = temp_path(name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}

TEST_CASE("ingests a named column from a dated price file", "[csv]") {
    std::string content = "date,close\n";
    std::vector<double> expected;
    char buffer[64];
    for (int i = 0; i < 1000; ++i) {
        const double value = 100.0 + 0.25 * i;
        expected.push_back(value);
        std::snprintf(buffer, sizeof(buffer), "2020-01-01,%.17g\n", value);
        content += buffer;
    }
    const std::string path = write_file("prices.csv", content);

    CsvSpec by_name;
    by_name.column = "close";
    const TimeSeries named = ingest_csv(path, by_name);
    REQUIRE(named.size() == 1000);
    REQUIRE(named.label() == TransformKind::raw);
    REQUIRE(named.values() == expected);

    CsvSpec by_index;
    by_index.column = "1";
    REQUIRE(ingest_csv(path, by_index).values() == expected);
}

TEST_CASE("bad cells are reported with their physical line", "[csv]") {
    std::string content = "date,close\n";
    for (int i = 0; i < 15; ++i) {
        content += "2020-01-01,1.5\n";
    }
    content += "2020-01-17,\n";
    content += "2020-01-18,2.5\n";
    const std::string path = write_file("bad_cell.csv", content);

    CsvSpec spec;
    spec.column = "close";
    try {
        ingest_csv(path, spec);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        REQUIRE(e.row() == 17);
        REQUIRE(e.column() == "close");
    }

    SECTION("blank lines are skipped but keep the line count honest") {
        const std::string gappy = write_file("gappy.csv",
                                             "close\n1.0\n\n2.0\n   \noops\n");
        try {
            ingest_csv(gappy, CsvSpec{.column = "close"});
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            REQUIRE(e.row() == 6);
        }
    }
}

TEST_CASE("single-column output round-trips exactly", "[csv]") {
    const std::vector<double> values = {0.1,           -3.5,     1e300, 1e-300,
                                        3.14159265358979312, 12345.678, -0.0,  7.0};
    const TimeSeries original(std::vector<double>(values), TransformKind::raw, "mem");
    const std::string path = temp_path("roundtrip.csv");
    write_series_csv(path, original);

    const TimeSeries back = ingest_csv(path, CsvSpec{});
    REQUIRE(back.values() == values);
    REQUIRE(ingest_csv(path, CsvSpec{.column = "value"}).values() == values);
}

TEST_CASE("header detection modes", "[csv]") {
    const std::string path = write_file("headerless.csv", "1\n2\n3\n");

    SECTION("a numeric first row is data by default") {
        REQUIRE(ingest_csv(path, CsvSpec{}).values() == std::vector<double>{1.0, 2.0, 3.0});
    }
    SECTION("a declared header row is always skipped") {
        CsvSpec spec;
        spec.header = HeaderMode::yes;
        REQUIRE(ingest_csv(path, spec).values() == std::vector<double>{2.0, 3.0});
    }
    SECTION("declaring no header keeps every row") {
        CsvSpec spec;
        spec.header = HeaderMode::no;
        REQUIRE(ingest_csv(path, spec).values() == std::vector<double>{1.0, 2.0, 3.0});
    }
    SECTION("selecting by name without a header is a configuration error") {
        CsvSpec spec;
        spec.column = "close";
        spec.header = HeaderMode::no;
        REQUIRE_THROWS_AS(ingest_csv(path, spec), ConfigError);
    }
}

TEST_CASE("delimiter and name matching", "[csv]") {
    const std::string path = write_file("semi.csv", "open; close\n1;2\n3;4\n");

    CsvSpec spec;
    spec.delimiter = ';';
    spec.column = "close";
    REQUIRE(ingest_csv(path, spec).values() == std::vector<double>{2.0, 4.0});

    SECTION("the wrong delimiter cannot find the column") {
        CsvSpec comma;
        comma.column = "close";
        REQUIRE_THROWS_AS(ingest_csv(path, comma), ParseError);
    }
    SECTION("an unknown name is rejected on the header line") {
        CsvSpec unknown = spec;
        unknown.column = "volume";
        try {
            ingest_csv(path, unknown);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            REQUIRE(e.row() == 1);
        }
    }
}

TEST_CASE("short rows are rejected", "[csv]") {
    const std::string path = write_file("short_row.csv", "a,b\n1,2\n3\n");
    CsvSpec spec;
    spec.column = "b";
    try {
        ingest_csv(path, spec);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        REQUIRE(e.row() == 3);
    }
}

TEST_CASE("empty inputs", "[csv]") {
    REQUIRE_THROWS_AS(ingest_csv(write_file("empty.csv", ""), CsvSpec{}), EmptySeries);
    REQUIRE_THROWS_AS(ingest_csv(write_file("header_only.csv", "value\n"), CsvSpec{}),
                      EmptySeries);
    REQUIRE_THROWS_AS(ingest_csv(write_file("blank.csv", "\n   \n\n"), CsvSpec{}), EmptySeries);
    REQUIRE_THROWS_AS(ingest_csv(temp_path("does_not_exist.csv"), CsvSpec{}), FileNotFound);
}

TEST_CASE("carriage returns are stripped", "[csv]") {
    const std::string path = write_file("crlf.csv", "close\r\n1.5\r\n2.5\r\n");
    CsvSpec spec;
    spec.column = "close";
    REQUIRE(ingest_csv(path, spec).values() == std::vector<double>{1.5, 2.5});
}
