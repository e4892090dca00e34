#include <doctest.h>

#include <cmath>
#include <memory>

#include "anisomin/error.hpp"
#include "anisomin/fixtures.hpp"
#include "anisomin/surface.hpp"
#include "support.hpp"

using namespace anisomin;

namespace {

double max_over(const CurvatureField& f, double (*g)(const CurvatureNode&)) {
    double m = 0.0;
    for (const auto& n : f.nodes) m = std::max(m, g(n));
    return m;
}

// Analytic catenoid area element, integrated with a fine Simpson rule.
double catenoid_area(double V) {
    return 2.0 * kPi * testing_support::simpson([](double v) { return std::cosh(v) * std::cosh(v); }, -V, V);
}

}  // namespace

TEST_CASE("plane: every curvature vanishes") {
    const SurfacePatch p = plane_patch(17, 2.0, 3.0);
    const CurvatureField f = curvature_field(p, IntegrandSpec::ellipsoid(1, 2, 3));
    CHECK(max_over(f, [](const CurvatureNode& n) { return std::abs(n.H_gamma); }) == 0.0);
    CHECK(max_over(f, [](const CurvatureNode& n) { return std::abs(n.K_sigma); }) == 0.0);
    CHECK(max_over(f, [](const CurvatureNode& n) { return n.aniso_pairing; }) == 0.0);
    CHECK(f.curvature_scale == 1.0);
    // principal directions tie everywhere; the frame follows X_u
    for (const auto& n : f.nodes) CHECK((n.e1 - Vec3::UnitX()).norm() < 1e-14);
}

TEST_CASE("catenoid: H = 0 and K = -1/cosh^4 v") {
    const SurfacePatch p = catenoid_patch(2.0, 65);  // odd: v = 0 is a node
    const CurvatureField f = curvature_field(p, IntegrandSpec::constant(1));
    for (int j = 0; j < p.nv(); ++j) {
        for (int i = 0; i < p.nu(); ++i) {
            const auto& n = f.nodes[p.node(i, j)];
            const double c = std::cosh(p.v_at(j));
            CHECK(std::abs(n.H_gamma) < 1e-8);
            CHECK(std::abs(n.K_sigma + 1.0 / (c * c * c * c)) < 1e-6);
        }
    }
    CHECK(f.curvature_scale == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sphere: principal curvatures -1 with the outward normal") {
    const CurvatureField f = curvature_field(sphere_patch(48), IntegrandSpec::constant(1));
    for (const auto& n : f.nodes) {
        CHECK(n.kappa1 == doctest::Approx(-1.0).epsilon(1e-8));
        CHECK(n.kappa2 == doctest::Approx(-1.0).epsilon(1e-8));
        CHECK(n.H_gamma == doctest::Approx(-2.0).epsilon(1e-8));
        CHECK((n.nu - n.position.normalized()).norm() < 1e-12);
    }
}

TEST_CASE("curvature identities at every node") {
    Mat3 M;
    M << 1.0, 0.2, 0.0, 0.0, 1.0, 0.1, 0.0, 0.0, 2.0;
    for (const char* integrand : {"const:1", "ellipsoid:1,1,2", "sh:3,1,0.05"}) {
        const IntegrandSpec spec = IntegrandSpec::parse(integrand);
        for (const SurfacePatch& p : {catenoid_patch(1.5, 40), enneper_patch(1.0, 40), sheared_catenoid_patch(M, 1.0, 40)}) {
            const CurvatureField f = curvature_field(p, spec);
            const double s2 = f.curvature_scale * f.curvature_scale;
            for (const auto& n : f.nodes) {
                CHECK(std::abs(n.K_sigma - n.kappa1 * n.kappa2) <= 1e-9 * s2);
                CHECK(std::abs(n.K_gamma - n.A.determinant() * n.K_sigma) <= 1e-9 * s2 * n.A.determinant());
                CHECK(n.aniso_pairing >= -1e-12 * s2);
                CHECK(std::abs(n.norm_A_sq - (n.kappa1 * n.kappa1 + n.kappa2 * n.kappa2)) <= 1e-9 * s2);
            }
        }
    }
}

TEST_CASE("anisotropic minimality ties the pairing to K") {
    // With a1 k1 + a2 k2 = 0 the pairing a1 k1^2 + a2 k2^2 equals -(a1 + a2) K.
    const Mat3 M = Eigen::Vector3d(1, 1, 2).asDiagonal();
    const SurfacePatch p = sheared_catenoid_patch(M, 1.5, 64);
    const CurvatureField f = curvature_field(p, IntegrandSpec::ellipsoid(1, 1, 2));
    const double s2 = f.curvature_scale * f.curvature_scale;
    double worst = 0.0;
    for (const auto& n : f.nodes) {
        worst = std::max(worst, std::abs(n.aniso_pairing + (n.a1 + n.a2) * n.K_sigma) / s2);
        CHECK(n.K_sigma <= 1e-10 * s2);
        CHECK(n.K_gamma <= 1e-10 * s2);
    }
    CHECK(worst < 1e-6);
    CHECK(f.sup_abs_H_gamma() < 1e-8 * f.curvature_scale);
}

TEST_CASE("anisotropic energy") {
    CHECK(anisotropic_energy(sphere_patch(128), IntegrandSpec::constant(1)) == doctest::Approx(4 * kPi).epsilon(5e-3));
    CHECK(std::abs(anisotropic_energy(plane_patch(9, 2.0, 3.0), IntegrandSpec::constant(1.7)) - 1.7 * 6.0) < 1e-10);
    const double exact = 2.0 * kPi * (1.0 + std::sinh(1.0) * std::cosh(1.0));
    CHECK(exact == doctest::Approx(catenoid_area(1.0)).epsilon(1e-12));
    CHECK(anisotropic_energy(catenoid_patch(1.0, 96), IntegrandSpec::constant(1)) ==
          doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("trapezoid energy converges at second order") {
    const double exact = catenoid_area(1.5);
    const double e1 = std::abs(anisotropic_energy(catenoid_patch(1.5, 32), IntegrandSpec::constant(1)) - exact);
    const double e2 = std::abs(anisotropic_energy(catenoid_patch(1.5, 64), IntegrandSpec::constant(1)) - exact);
    CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("first variation matches -int H_gamma u") {
    {
        const SurfacePatch p = plane_patch(33);
        const FirstVariation fv = first_variation_check(p, IntegrandSpec::ellipsoid(1, 1, 2), interior_bump(p), 1e-4);
        CHECK(std::abs(fv.minus_integral_Hu) == 0.0);
        CHECK(std::abs(fv.numeric_derivative) < 1e-10);
    }
    {
        const SurfacePatch p = catenoid_patch(1.5, 128);
        const FirstVariation fv = first_variation_check(p, IntegrandSpec::constant(1), interior_bump(p), 1e-4);
        CHECK(std::abs(fv.numeric_derivative) < 1e-4);
    }
    {
        // dE/dt = 2 int u dSigma on the outward-normal sphere
        const SurfacePatch p = sphere_patch(128);
        const std::vector<double> u = interior_bump(p);
        const FirstVariation fv = first_variation_check(p, IntegrandSpec::constant(1), u, 1e-4);
        const CurvatureField f = curvature_field(p, IntegrandSpec::constant(1));
        double integral = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) integral += u[k] * f.nodes[k].area_weight;
        CHECK(fv.numeric_derivative == doctest::Approx(2.0 * integral).epsilon(1e-2));
        CHECK(fv.minus_integral_Hu == doctest::Approx(2.0 * integral).epsilon(1e-10));
    }
    const SurfacePatch p = plane_patch(17);
    std::vector<double> ones(p.node_count(), 1.0);
    try {
        first_variation_check(p, IntegrandSpec::constant(1), ones, 1e-4);
        FAIL("expected BoundaryNotFixed");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BoundaryNotFixed);
    }
    CHECK_THROWS_AS(first_variation_check(p, IntegrandSpec::constant(1), interior_bump(p), 1.0), Error);
    CHECK_THROWS_AS(first_variation_check(p, IntegrandSpec::constant(1), std::vector<double>(3), 1e-4), Error);
}

TEST_CASE("interior bump vanishes on the boundary") {
    for (const SurfacePatch& p : {plane_patch(20), catenoid_patch(2.0, 24), sphere_patch(24)}) {
        const std::vector<double> b = interior_bump(p);
        double peak = 0.0;
        for (int k = 0; k < p.node_count(); ++k) {
            if (p.on_boundary(k)) CHECK(b[k] == 0.0);
            peak = std::max(peak, b[k]);
        }
        CHECK(peak > 0.5);
    }
}

TEST_CASE("fixture grammar") {
    CHECK(make_fixture("plane", 16).topology().planar);
    CHECK(make_fixture("plane:2,3", 16).domain().u1 == doctest::Approx(2.0));
    CHECK(make_fixture("catenoid:2", 16).periodic_u());
    CHECK(make_fixture("enneper:1.3", 16).topology().genus == 0);
    CHECK(make_fixture("branched_enneper:1.2,2", 16).topology().end_branch_orders.size() == 1);
    CHECK(make_fixture("sheared_catenoid:1,1,0,0,0,1,0,0,0,2", 16).orientation() == 1);
    CHECK(make_fixture("sheared_catenoid:1,-1,0,0,0,1,0,0,0,1", 16).orientation() == -1);

    auto code_of = [](const char* text) {
        try {
            make_fixture(text, 16);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code_of("torus") == ErrorCode::UnknownFixture);
    CHECK(code_of("sheared_catenoid:1,1,0,0,0,1,0,0,0,0") == ErrorCode::SingularShear);
    CHECK_THROWS_AS(make_fixture("catenoid:9", 16), Error);
    CHECK_THROWS_AS(make_fixture("enneper:2", 16), Error);
    CHECK_THROWS_AS(make_fixture("catenoid", 16), Error);
}

TEST_CASE("patch bookkeeping") {
    const SurfacePatch p = catenoid_patch(1.0, 12);
    CHECK(p.node(3, 2) == 2 * p.nu() + 3);
    CHECK_FALSE(p.on_boundary(0, 5));
    CHECK(p.on_boundary(4, 0));
    CHECK(p.on_boundary(4, p.nv() - 1));
    CHECK(p.triangles().size() == static_cast<std::size_t>(2 * p.nu() * (p.nv() - 1)));
    double total = 0.0;
    for (double w : p.parameter_weights()) total += w;
    CHECK(total == doctest::Approx(2 * kPi * 2.0).epsilon(1e-12));
    const SurfacePatch q = p.regridded(20, 30);
    CHECK(q.node_count() == 600);
    CHECK(q.topology().name == p.topology().name);
}
