#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mkit/io.hpp"

using namespace mkit;

TEST_CASE("group elements round trip through JSON and files")
{
    const GroupElement g = random_element(3, 3, 0.4);
    CHECK(max_abs(group_from_json(group_to_json(g)).matrix() - g.matrix()) == 0.0);
    const std::string path = "test_io_group.json";
    write_group_file(g, path);
    CHECK(max_abs(read_group_file(path).matrix() - g.matrix()) == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("malformed group JSON is rejected")
{
    CHECK_THROWS_AS(complex_from_json(json::parse("[1]")), std::invalid_argument);
    CHECK_THROWS_AS(complex_from_json(json::parse(R"(["a", 1])")), std::invalid_argument);
    json j = group_to_json(GroupElement::identity(2));
    j["b"] = json::array({json::array({0.0, 0.0})});
    CHECK_THROWS_AS(group_from_json(j), std::invalid_argument);
    j = group_to_json(GroupElement::identity(2));
    j.erase("D");
    CHECK_THROWS_AS(group_from_json(j), std::invalid_argument);

    const std::string path = "test_io_bad.json";
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(read_group_file(path), std::invalid_argument);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_group_file("does/not/exist.json"), std::invalid_argument);
}

TEST_CASE("operator matrices round trip through JSON and write CSV")
{
    const OperatorMatrix op = operator_matrix(random_element(4, 2, 0.3), 4, 3);
    const OperatorMatrix back = operator_matrix_from_json(operator_matrix_to_json(op));
    CHECK(back.sigma() == 4);
    CHECK(back.max_degree() == 3);
    CHECK(max_abs(back.values() - op.values()) == 0.0);

    std::ostringstream out;
    write_operator_csv(out, op);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "m;n;re;im");
    std::size_t rows = 0;
    while (std::getline(lines, line))
        ++rows;
    CHECK(rows == op.basis().size() * op.basis().size());
}

TEST_CASE("reports round trip and omit timing by default")
{
    CheckReport r;
    r.identity = "duality";
    r.d = 2;
    r.sigma = 4;
    r.seed = 12345678901234ULL;
    r.indices = "|m|,|n|<=2";
    r.max_abs_residual = 1.5e-16;
    r.max_rel_residual = 1e-16;
    r.status = CheckStatus::inconclusive;
    r.wall_time_ms = 3.5;
    r.notes.push_back("note");
    r.metrics["x"] = 2.0;
    const json j = report_to_json(r);
    CHECK_FALSE(j.contains("wall_time_ms"));
    CHECK(report_to_json(r, true).contains("wall_time_ms"));
    const CheckReport back = report_from_json(j);
    CHECK(back.identity == r.identity);
    CHECK(back.seed == r.seed);
    CHECK(back.status == CheckStatus::inconclusive);
    CHECK(back.max_abs_residual == r.max_abs_residual);
    CHECK(back.metrics.at("x") == 2.0);
    CHECK(back.notes == r.notes);
    CHECK(format_value(0.1) == "0.1");
}
