#include <doctest.h>

#include <cmath>

#include "anisomin/error.hpp"
#include "anisomin/fixtures.hpp"
#include "anisomin/gauss_analysis.hpp"
#include "support.hpp"

using namespace anisomin;
using testing_support::simpson;

namespace {

int code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return static_cast<int>(e.code());
    }
    return -1;
}

const WulffMesh& unit_wulff() {
    static const WulffMesh w = wulff_mesh(IntegrandSpec::constant(1), 5);
    return w;
}

}  // namespace

TEST_CASE("critical sets") {
    for (const char* s : {"catenoid:2", "enneper:1.3"}) {
        const CurvatureField f = curvature_field(make_fixture(s, 64), IntegrandSpec::constant(1));
        CAPTURE(s);
        CHECK(critical_set(f).points.empty());
    }
    const CurvatureField plane = curvature_field(plane_patch(32), IntegrandSpec::constant(1));
    CHECK(code_of([&] { critical_set(plane); }) == static_cast<int>(ErrorCode::NonDiscreteCriticalSet));
}

TEST_CASE("branch orders at the origin of z^k data") {
    for (int k : {2, 3}) {
        const SurfacePatch p = branched_enneper_patch(1.2, k, 65);
        const CurvatureField f = curvature_field(p, IntegrandSpec::constant(1));
        const CriticalSet cs = critical_set(f);
        CAPTURE(k);
        REQUIRE(cs.points.size() == 1);
        CHECK(cs.points[0].location.norm() < 1e-9);
        CHECK(cs.points[0].branch_order == k - 1);
        CHECK(branch_order(p, cs.points[0]) == k - 1);
    }
    // a regular point has order zero
    const SurfacePatch e = enneper_patch(1.0, 33);
    CriticalPoint regular;
    regular.location = Vec2(0.3, -0.2);
    CHECK(branch_order(e, regular) == 0);
}

TEST_CASE("flat clusters are stable under refinement") {
    std::size_t first = 0;
    for (int grid : {33, 64, 65, 96, 129}) {  // even grids straddle the branch point
        const CriticalSet cs = critical_set(curvature_field(branched_enneper_patch(1.2, 2, grid), IntegrandSpec::constant(1)));
        if (grid == 33) first = cs.points.size();
        CAPTURE(grid);
        CHECK(cs.points.size() == first);
    }
    CHECK(first == 1);
}

TEST_CASE("Gauss map degree") {
    double prev_residue = 1.0;
    for (double V : {2.0, 3.0, 4.0}) {
        const Degrees d = degrees(curvature_field(catenoid_patch(V, 128), IntegrandSpec::constant(1)), unit_wulff());
        CAPTURE(V);
        CHECK(d.raw_nu == doctest::Approx(std::tanh(V)).epsilon(1e-2));
        CHECK(d.deg_nu == 1);
        CHECK_FALSE(d.orientation_reversed);
        CHECK(std::abs(d.residue_nu) < prev_residue);
        prev_residue = std::abs(d.residue_nu);
    }

    const Degrees s = degrees(curvature_field(sphere_patch(96), IntegrandSpec::constant(1)), unit_wulff());
    CHECK(s.orientation_reversed);
    CHECK(s.raw_nu == doctest::Approx(-1.0).epsilon(1e-2));

    // Enneper: g(z) = z, so the spherical image of the square has area
    // int int 4 / (1 + r^2)^2 du dv.
    const double R = 1.3;
    const double area = simpson(
        [&](double u) { return simpson([&](double v) { return 4.0 / std::pow(1 + u * u + v * v, 2); }, -R, R, 400); }, -R,
        R, 400);
    const Degrees e = degrees(curvature_field(enneper_patch(R, 128), IntegrandSpec::constant(1)), unit_wulff());
    CHECK(e.raw_nu == doctest::Approx(area / (4 * kPi)).epsilon(1e-2));
    CHECK(area / (4 * kPi) == doctest::Approx(0.676).epsilon(2e-3));
}

TEST_CASE("anisotropic degree uses the Wulff area") {
    const IntegrandSpec ell = IntegrandSpec::ellipsoid(1, 1, 2);
    const Mat3 M = Eigen::Vector3d(1, 1, 2).asDiagonal();
    const Degrees d = degrees(curvature_field(sheared_catenoid_patch(M, 3.0, 128), ell), wulff_mesh(ell, 5));
    CHECK(d.deg_nu == 1);
    CHECK(d.deg_nu_gamma == 1);
    CHECK(d.raw_nu_gamma == doctest::Approx(d.total_gamma_curvature / d.wulff_area));
}

TEST_CASE("catenoid pseudographs") {
    const SurfacePatch p = catenoid_patch(2.0, 96);
    const IntegrandSpec one = IntegrandSpec::constant(1);

    const Pseudograph waist = pseudograph_extract(p, one, Vec3::UnitZ(), 0);
    CHECK_FALSE(waist.degenerate);
    REQUIRE(waist.vertices.size() == 1);
    CHECK(waist.vertices[0].kind == PseudographVertex::Kind::Artificial);
    CHECK(waist.edges.size() == 1);
    CHECK(waist.edges[0].closed);
    CHECK(waist.n_components_complement == 2);
    CHECK(index_lower_bound(waist) == 1);
    const EulerCount ew = euler_inequality_check(waist);
    CHECK(ew.slack == 0);

    const Pseudograph side = pseudograph_extract(p, one, Vec3::UnitX(), 0);
    CHECK(side.n_components_complement == 2);
    CHECK(side.edges.size() == 2);
    int ends = 0;
    for (const auto& v : side.vertices) ends += v.kind == PseudographVertex::Kind::End;
    CHECK(ends == 2);
    CHECK(euler_inequality_check(side).slack >= 0);

    // every traced zero sits on the great circle orthogonal to the axis
    for (const Vec2& q : side.nodal_points) CHECK(std::abs(p.normal(q.x(), q.y()).x()) < 5e-3);
    CHECK(nodal_domains(p, Vec3::UnitX()) == 2);
    CHECK(nodal_domains(p, Vec3::UnitZ()) == 2);
}

TEST_CASE("plane pseudographs") {
    const SurfacePatch p = plane_patch(32);
    const Pseudograph up = pseudograph_extract(p, IntegrandSpec::constant(1), Vec3::UnitZ(), 0);
    CHECK(up.degenerate);
    CHECK(euler_inequality_check(up).degenerate);
    CHECK(code_of([&] { pseudograph_extract(p, IntegrandSpec::constant(1), Vec3::UnitX(), 0); }) ==
          static_cast<int>(ErrorCode::GrazingCircle));
}

TEST_CASE("lower bound from hand-built pseudographs") {
    Pseudograph pg;
    pg.genus = 1;
    PseudographVertex a, b;
    a.branch_order = 2;
    pg.vertices = {a, b};
    CHECK(index_lower_bound(pg) == 1);
    pg.genus = 0;
    pg.vertices = {b};
    CHECK(index_lower_bound(pg) == 1);

    // two disjoint loops on a sphere: V = 2, E = 2, N = 3
    PseudographEdge loop;
    loop.closed = true;
    pg.vertices = {b, b};
    pg.edges = {loop, loop};
    pg.n_components_complement = 3;
    CHECK(euler_inequality_check(pg).slack == 1);
}

TEST_CASE("Riemann-Hurwitz") {
    CHECK(riemann_hurwitz_defect(2, 1, {}) == 0.0);
    CHECK(riemann_hurwitz_defect(2, 2, {1, 1}) == 0.0);
    CHECK(riemann_hurwitz_defect(0, 1, {}) == -2.0);

    const std::vector<Vec3> axes{Vec3::UnitZ()};
    for (const char* s : {"catenoid:2", "enneper:1.3", "branched_enneper:2,2"}) {
        const SurfacePatch p = make_fixture(s, 96);
        const GaussReport r = gauss_report(p, IntegrandSpec::constant(1), axes, 0);
        CAPTURE(s);
        CHECK_FALSE(r.degenerate);
        CHECK(r.rh_defect == 0.0);
    }
    // branch orders add up: interior plus end equals 2 (deg - 1)
    const GaussReport b = gauss_report(make_fixture("branched_enneper:2,2", 96), IntegrandSpec::constant(1), axes, 0);
    int sum = 0;
    for (const auto& c : b.branch_points) sum += c.branch_order;
    for (int x : b.end_branch_orders) sum += x;
    CHECK(sum == 2 * (b.degrees.deg_nu - 1));
}

TEST_CASE("Gauss report on the plane is degenerate") {
    const GaussReport r = gauss_report(plane_patch(32), IntegrandSpec::constant(1), {Vec3::UnitZ()}, 0);
    CHECK(r.degenerate);
    CHECK(r.pseudographs.empty());
}

TEST_CASE("Gauss report lower bound on the catenoid") {
    const GaussReport r = gauss_report(catenoid_patch(2.0, 96), IntegrandSpec::constant(1),
                                       {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()}, 0);
    REQUIRE(r.pseudographs.size() == 3);
    CHECK(r.lower_bounds == std::vector<int>{1, 1, 1});
    CHECK(r.lower_bound == 1);
    CHECK(r.upper_chain.c_prime == doctest::Approx(4.0));
}
