#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sqc/config.hpp"
#include "sqc/report.hpp"

using namespace sqc;

TEST_CASE("config parsing") {
    auto c = Config::parse_string(
        "# comment\n"
        "mu = 1, 1.5\n"
        "depth=6 ; trailing\n"
        "[cdim]\n"
        "p = 1.5:2.5:0.5\n"
        "packing = yes\n");
    CHECK(c.get_list("mu", {}) == std::vector<double>{1.0, 1.5});
    CHECK(c.get_int("depth", 0) == 6);
    CHECK(c.get_list("cdim.p", {}) == std::vector<double>{1.5, 2.0, 2.5});
    CHECK(c.get_bool("cdim.packing", false));
    CHECK(c.get("missing", "x") == "x");
    CHECK_FALSE(c.has("p"));
    c.set_assignment("depth=7");
    CHECK(c.get_int("depth", 0) == 7);
    CHECK(parse_number_list("1:4", "f") == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("config errors name the field") {
    auto c = Config::parse_string("depth = six\n");
    try {
        c.get_int("depth", 0);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "depth");
    }
    try {
        c.require("mu");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "mu");
    }
    CHECK_THROWS_AS(Config::parse_string("no equals sign here\n"), ConfigError);
    CHECK_THROWS_AS(c.set_assignment("novalue"), ConfigError);
}

TEST_CASE("digest depends on content only") {
    auto a = Config::parse_string("b = 2\na = 1\n");
    auto b = Config::parse_string("a=1\n\n# x\nb=2\n");
    CHECK(a.digest() == b.digest());
    CHECK(a.digest().size() == 16);
    b.set("a", "3");
    CHECK(a.digest() != b.digest());
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv and svg output") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "sqc_report_test";
    fs::create_directories(dir);
    {
        CsvWriter w((dir / "t.csv").string(), {"a", "b"}, "0123456789abcdef");
        w.row(std::vector<double>{1.0, 0.5});
        w.row(std::vector<std::string>{"x,y", "z"});
        CHECK_THROWS(w.row(std::vector<double>{1.0}));
    }
    std::ifstream in(dir / "t.csv");
    std::string l1, l2, l3, l4;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    std::getline(in, l4);
    CHECK(l1 == std::string("# sqc ") + kToolVersion + " config 0123456789abcdef");
    CHECK(l2 == "a,b");
    CHECK(l3 == "1,0.5");
    CHECK(l4 == "\"x,y\",z");

    PlotSpec p;
    p.log_y = true;
    p.series.push_back({"s", {1, 2, 3}, {1, 10, 100}});
    p.bands.push_back({1.5, 2.5});
    write_svg((dir / "t.svg").string(), p);
    std::ifstream svg(dir / "t.svg");
    std::stringstream ss;
    ss << svg.rdbuf();
    CHECK(ss.str().find("<svg") != std::string::npos);
    CHECK(ss.str().find("polyline") != std::string::npos);
    fs::remove_all(dir);
}
