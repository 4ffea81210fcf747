#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <algorithm>

#include "oscillab/fixtures.hpp"
#include "oscillab/grid_io.hpp"

using namespace oscillab;

namespace {
GridFunction parse(const std::string& text)
{
    std::istringstream in(text);
    return read_grid(in, "t.csv");
}

std::string error_of(const std::string& text)
{
    try {
        parse(text);
    } catch (const GridFormatError& e) {
        return e.what();
    }
    return "";
}
}  // namespace

TEST_CASE("CSV round trip is bit exact")
{
    for (int dim : {1, 2}) {
        const auto u = fixture(Generator::random_piecewise, dim, dim == 1 ? 37 : 9, 1.0 / 3.0, 4);
        std::ostringstream out;
        write_grid_csv(out, u);
        const auto v = parse(out.str());
        CHECK(v.domain() == u.domain());
        CHECK(std::ranges::equal(v.values(), u.values()));
    }
}

TEST_CASE("JSON round trip, flat and row layouts")
{
    const auto u = fixture(Generator::gaussian_bump, 2, 6);
    const auto j = grid_to_json(u);
    std::istringstream in(j.dump());
    const auto v = read_grid(in, "t.json");
    CHECK(std::ranges::equal(v.values(), u.values()));
    CHECK(v.domain() == u.domain());
    nlohmann::json rows = j;
    rows["values"] = nlohmann::json::array();
    for (std::size_t i = 0; i < 6; ++i) {
        rows["values"].push_back(std::vector<double>(u.values().begin() + 6 * i, u.values().begin() + 6 * (i + 1)));
    }
    CHECK(std::ranges::equal(read_grid_json(rows).values(), u.values()));
}

TEST_CASE("hand-written CSV")
{
    const auto u = parse("dim,2\ncells,2,3\norigin,-1,0.5\nspacing,0.25\n1,2,3\n\n4,5,6\n");
    CHECK(u.domain().dim == 2);
    CHECK(u.domain().cells[0] == 2);
    CHECK(u.domain().cells[1] == 3);
    CHECK(u.domain().origin[1] == 0.5);
    CHECK(u.at({1, 2}) == 6.0);
}

TEST_CASE("format errors name the line")
{
    CHECK_THAT(error_of("dim,3\n"), Catch::Matchers::ContainsSubstring("t.csv:1"));
    CHECK_THAT(error_of("dim,1\ncells,2\norigin,0\nspacing,1\n1\nabc\n"), Catch::Matchers::ContainsSubstring("t.csv:6"));
    CHECK_THAT(error_of("dim,1\ncells,3\norigin,0\nspacing,1\n1\n2\n"), Catch::Matchers::ContainsSubstring("t.csv"));
    CHECK_THAT(error_of("dim,1\nsize,2\n"), Catch::Matchers::ContainsSubstring("t.csv:2"));
    CHECK_FALSE(error_of("dim,1\ncells,2\norigin,0\nspacing,-1\n1\n2\n").empty());
    CHECK_FALSE(error_of("dim,2\ncells,2,2\norigin,0,0\nspacing,1\n1,2\n3\n").empty());
    CHECK_FALSE(error_of("{\"dim\": 1, \"cells\": [2]}").empty());
    CHECK_FALSE(error_of("{ not json").empty());
    CHECK_FALSE(error_of("").empty());
}

TEST_CASE("files and masks")
{
    const auto dir = std::filesystem::temp_directory_path() / "oscillab_grid_io_test";
    std::filesystem::create_directories(dir);
    const auto u = fixture(Generator::step, 1, 8);
    {
        std::ofstream f(dir / "u.csv");
        write_grid_csv(f, u);
        std::ofstream m(dir / "m.csv");
        m << "dim,1\ncells,8\norigin,-1\nspacing,0.25\n0\n1\n1\n0\n0\n2\n0\n0\n";
        std::ofstream bad(dir / "bad.csv");
        bad << "dim,1\ncells,4\norigin,-1\nspacing,0.5\n0\n1\n1\n0\n";
    }
    CHECK(std::ranges::equal(read_grid_file((dir / "u.csv").string()).values(), u.values()));
    const auto m = read_mask_file((dir / "m.csv").string(), u.domain());
    CHECK(m.count() == 3);
    CHECK(m[5]);
    CHECK_THROWS_AS(read_mask_file((dir / "bad.csv").string(), u.domain()), GridFormatError);
    CHECK_THROWS_AS(read_grid_file((dir / "missing.csv").string()), GridFormatError);
    std::filesystem::remove_all(dir);
}
