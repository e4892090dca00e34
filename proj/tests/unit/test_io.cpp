#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "anisomin/error.hpp"
#include "anisomin/fixtures.hpp"
#include "anisomin/harness.hpp"
#include "anisomin/io.hpp"

using namespace anisomin;

TEST_CASE("graph solutions survive a JSON round trip") {
    GraphProblem p;
    p.nx = p.ny = 17;
    p.spec = IntegrandSpec::ellipsoid(1, 1, 2);
    p.boundary_data = parse_boundary("linear:1,2,3");
    const GraphSolution s = solve_graph(p);
    const GraphSolution t = solution_from_json(nlohmann::json::parse(dump(to_json(s))));
    CHECK(t.nx == s.nx);
    CHECK(t.ny == s.ny);
    CHECK(t.u == s.u);
    CHECK(t.converged == s.converged);
    CHECK(t.integrand == "ellipsoid:1,1,2");
    CHECK(t.domain.u1 == s.domain.u1);
    CHECK(t.residual_history == s.residual_history);

    auto j = nlohmann::json::parse(dump(to_json(s)));
    j["u"].erase(0);
    CHECK_THROWS_AS(solution_from_json(j), Error);
    CHECK_THROWS_AS(solution_from_json(nlohmann::json::parse(R"({"nx": 2})")), Error);
}

TEST_CASE("a solution file loads as a surface") {
    GraphProblem p;
    p.nx = p.ny = 17;
    p.boundary_data = parse_boundary("linear:0.5,0,0");
    const std::string path = "io_test_solution.json";
    write_text_file(path, dump(to_json(solve_graph(p))));
    const SurfacePatch s = load_surface(path, 96);
    CHECK(s.nu() == 15);
    CHECK(s.topology().name == "graph");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file("does/not/exist.json"), Error);
}

TEST_CASE("curvature sidecar keys") {
    const CurvatureField f = curvature_field(catenoid_patch(1.0, 16), IntegrandSpec::constant(1));
    const ordered_json j = to_json(f);
    for (const char* k : {"nodes", "curvature_scale", "sup_H_gamma", "total_curvature", "H_gamma", "K_sigma", "K_gamma"})
        CHECK(j.contains(k));
    CHECK(j["H_gamma"].size() == f.nodes.size());
}

TEST_CASE("patch OBJ") {
    const SurfacePatch p = catenoid_patch(1.0, 10);
    std::ostringstream os;
    write_patch_obj(os, p);
    std::istringstream is(os.str());
    std::string line;
    int v = 0, f = 0;
    while (std::getline(is, line)) {
        v += line.rfind("v ", 0) == 0;
        f += line.rfind("f ", 0) == 0;
    }
    CHECK(v == p.node_count());
    CHECK(f == static_cast<int>(p.triangles().size()));
}

TEST_CASE("pseudograph JSON shape") {
    const Pseudograph pg = pseudograph_extract(catenoid_patch(2.0, 64), IntegrandSpec::constant(1), Vec3::UnitZ(), 0);
    const ordered_json j = to_json(pg);
    CHECK(j["axis"].size() == 3);
    CHECK(j["vertices"].size() == pg.vertices.size());
    CHECK(j["vertices"][0]["kind"] == "artificial");
    CHECK(j["edges"].size() == pg.edges.size());
    CHECK(j["edge_vertices"][0].size() == 2);
    CHECK(j["N"] == 2);
    CHECK(j["degenerate"] == false);
}

TEST_CASE("axis labels") {
    CHECK(axis_label(Vec3::UnitX()) == "e1");
    CHECK(axis_label(Vec3::UnitZ()) == "e3");
    CHECK(axis_label(Vec3(0.6, 0.8, 0)) == "(0.6,0.8,0)");
}
