#include <doctest.h>

#include <cmath>
#include <Eigen/Eigenvalues>
#include <random>
#include <set>
#include <sstream>

#include "anisomin/error.hpp"
#include "anisomin/integrand.hpp"
#include "support.hpp"

using namespace anisomin;
using testing_support::random_unit;

namespace {

std::vector<IntegrandSpec> families() {
    return {IntegrandSpec::constant(1.0), IntegrandSpec::constant(2.5), IntegrandSpec::ellipsoid(1, 1, 2),
            IntegrandSpec::ellipsoid(0.7, 1.3, 1.9), IntegrandSpec::spherical_harmonic(2, 0, 0.1),
            IntegrandSpec::spherical_harmonic(3, -2, 0.05), IntegrandSpec::spherical_harmonic(4, 3, 0.02)};
}

// Real Y_2^0 with unit L2 norm, written out by hand.
double y20(const Vec3& n) { return std::sqrt(5.0 / (16.0 * kPi)) * (3.0 * n.z() * n.z() - 1.0); }

// Unit-normalised real Y_1^1 (cos phi variant, no Condon-Shortley phase).
double y11(const Vec3& n) { return std::sqrt(3.0 / (4.0 * kPi)) * n.x(); }

}  // namespace

TEST_CASE("gamma values on the three families") {
    CHECK(eval_gamma(IntegrandSpec::constant(1), Vec3::UnitZ()) == 1.0);
    CHECK(eval_gamma(IntegrandSpec::ellipsoid(1, 1, 2), Vec3::UnitZ()) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(eval_gamma(IntegrandSpec::spherical_harmonic(2, 0, 0.1), Vec3::UnitZ()) ==
          doctest::Approx(1.0 + 0.1 * y20(Vec3::UnitZ())).epsilon(1e-13));

    std::mt19937 rng(7);
    for (int s = 0; s < 50; ++s) {
        const Vec3 n = random_unit(rng);
        CHECK(eval_gamma(IntegrandSpec::spherical_harmonic(2, 0, 0.2), n) ==
              doctest::Approx(1.0 + 0.2 * y20(n)).epsilon(1e-12));
        CHECK(eval_gamma(IntegrandSpec::spherical_harmonic(1, 1, 0.3), n) ==
              doctest::Approx(1.0 + 0.3 * y11(n)).epsilon(1e-12));
    }
}

TEST_CASE("non-unit normals are refused") {
    CHECK_THROWS_AS(eval_gamma(IntegrandSpec::constant(1), Vec3(0, 0, 1.1)), Error);
    try {
        eval_gamma(IntegrandSpec::constant(1), Vec3(0, 0, 1.0 + 1e-9));
        FAIL("expected NonUnitNormal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonUnitNormal);
    }
    CHECK_NOTHROW(eval_gamma(IntegrandSpec::constant(1), Vec3(0, 0, 1.0 + 1e-13)));
}

TEST_CASE("homogeneous extension and derivatives") {
    CHECK(gamma_bar(IntegrandSpec::constant(1), Vec3(0, 0, 2)) == doctest::Approx(2.0));
    CHECK(gamma_bar(IntegrandSpec::ellipsoid(1, 1, 2), Vec3(3, 4, 0)) == doctest::Approx(5.0));

    std::mt19937 rng(11);
    for (int s = 0; s < 20; ++s) {
        const Vec3 n = random_unit(rng);
        const Mat3 h = gamma_bar_hessian(IntegrandSpec::constant(1), n);
        CHECK((h - (Mat3::Identity() - n * n.transpose())).norm() < 1e-14);
    }

    try {
        gamma_bar(IntegrandSpec::constant(1), Vec3(1e-11, 0, 0));
        FAIL("expected ZeroVector");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroVector);
    }
}

TEST_CASE("gradient and Hessian agree with central differences") {
    std::mt19937 rng(3);
    for (const auto& spec : families()) {
        for (int s = 0; s < 10; ++s) {
            const Vec3 x = 1.7 * random_unit(rng);
            const double h = 1e-5;
            Vec3 fd_grad;
            Mat3 fd_hess;
            for (int a = 0; a < 3; ++a) {
                const Vec3 e = h * Vec3::Unit(a);
                fd_grad(a) = (gamma_bar(spec, x + e) - gamma_bar(spec, x - e)) / (2 * h);
                fd_hess.col(a) = (gamma_bar_gradient(spec, x + e) - gamma_bar_gradient(spec, x - e)) / (2 * h);
            }
            CHECK((fd_grad - gamma_bar_gradient(spec, x)).norm() < 1e-8);
            CHECK((fd_hess - gamma_bar_hessian(spec, x)).norm() < 1e-7);
        }
    }
}

TEST_CASE("A_gamma examples") {
    std::mt19937 rng(5);
    for (int s = 0; s < 10; ++s) {
        const Vec3 n = random_unit(rng);
        CHECK((hessian_A_gamma(IntegrandSpec::constant(1), n).matrix - Mat2::Identity()).norm() < 1e-14);
        CHECK((hessian_A_gamma(IntegrandSpec::constant(2), n).matrix - 2.0 * Mat2::Identity()).norm() < 1e-14);
        const TangentTensor t = hessian_A_gamma(IntegrandSpec::ellipsoid(1, 2, 3), n);
        CHECK((t.e1.cross(t.e2) - n).norm() < 1e-14);
        CHECK(std::abs(t.e1.dot(t.e2)) < 1e-14);
    }

    // Ellipsoid(1,1,2) at e1: restriction of central differences of the gradient.
    const IntegrandSpec ell = IntegrandSpec::ellipsoid(1, 1, 2);
    const Vec3 n = Vec3::UnitX();
    const TangentTensor t = hessian_A_gamma(ell, n);
    const double h = 1e-5;
    Mat3 fd;
    for (int a = 0; a < 3; ++a) {
        const Vec3 e = h * Vec3::Unit(a);
        fd.col(a) = (gamma_bar_gradient(ell, n + e) - gamma_bar_gradient(ell, n - e)) / (2 * h);
    }
    Mat32 frame;
    frame.col(0) = t.e1;
    frame.col(1) = t.e2;
    const Mat2 restricted = frame.transpose() * fd * frame;
    CHECK((restricted - t.matrix).norm() < 1e-9);
    // eigenvalues diag(1, 4) in closed form
    Eigen::SelfAdjointEigenSolver<Mat2> es(t.matrix);
    CHECK(es.eigenvalues()(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("Cahn-Hoffman map") {
    std::mt19937 rng(9);
    for (int s = 0; s < 20; ++s) {
        const Vec3 n = random_unit(rng);
        CHECK((cahn_hoffman(IntegrandSpec::constant(1), n) - n).norm() < 1e-14);
    }
    CHECK((cahn_hoffman(IntegrandSpec::ellipsoid(1.5, 0.5, 3), Vec3::UnitZ()) - Vec3(0, 0, 3)).norm() < 1e-14);

    const IntegrandSpec sh = IntegrandSpec::spherical_harmonic(2, 0, 0.05);
    for (int s = 0; s < 50; ++s) {
        const Vec3 n = random_unit(rng);
        CHECK((cahn_hoffman(sh, n) - gamma_bar_gradient(sh, n)).norm() < 1e-10);
    }
}

TEST_CASE("anisotropy constants") {
    const AnisotropyConstants one = anisotropy_constants(IntegrandSpec::constant(1));
    CHECK(one.lambda_gamma == doctest::Approx(1.0));
    CHECK(one.Lambda_gamma == doctest::Approx(1.0));
    CHECK(one.c_gamma == doctest::Approx(2.0));
    CHECK(one.c_prime_gamma == doctest::Approx(4.0));

    const AnisotropyConstants two = anisotropy_constants(IntegrandSpec::constant(2));
    CHECK(two.lambda_gamma == doctest::Approx(2.0));
    CHECK(two.Lambda_gamma == doctest::Approx(2.0));
    CHECK(two.c_gamma == doctest::Approx(2.0));
    CHECK(two.c_prime_gamma == doctest::Approx(1.0));

    // Refining the sample can only widen [lambda, Lambda]; extremes settle.
    const IntegrandSpec ell = IntegrandSpec::ellipsoid(1, 1, 2);
    double prev_lo = 1e300, prev_hi = -1e300;
    double moved = 1.0;
    for (int n : {200, 1000, 10000, 40000}) {
        const AnisotropyConstants c = anisotropy_constants(ell, n);
        CHECK(c.lambda_gamma <= prev_lo + 1e-12);
        CHECK(c.Lambda_gamma >= prev_hi - 1e-12);
        if (prev_lo < 1e299) moved = std::max(std::abs(c.lambda_gamma - prev_lo), std::abs(c.Lambda_gamma - prev_hi));
        prev_lo = c.lambda_gamma;
        prev_hi = c.Lambda_gamma;
        const double r = c.Lambda_gamma / c.lambda_gamma;
        CHECK(c.c_gamma == doctest::Approx(r * r * (r + 1.0 / r)));
        CHECK(c.c_prime_gamma == doctest::Approx(2.0 * c.c_gamma / (c.lambda_gamma * c.lambda_gamma)));
    }
    CHECK(moved < 1e-4);
    // A_gamma(e3) = I/2 and A_gamma(e1) = diag(1, 4) bound the extremes.
    CHECK(prev_lo == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(prev_hi == doctest::Approx(4.0).epsilon(1e-9));

    CHECK_THROWS_AS(anisotropy_constants(ell, 50), Error);
}

TEST_CASE("spec grammar") {
    CHECK(IntegrandSpec::parse("const:2").to_string() == "const:2");
    CHECK(IntegrandSpec::parse("ellipsoid:1,1,2").to_string() == "ellipsoid:1,1,2");
    CHECK(IntegrandSpec::parse("sh:2,0,0.1").to_string() == "sh:2,0,0.1");
    for (const char* bad : {"", "foo", "const:", "const:-1", "const:0", "ellipsoid:1,2", "ellipsoid:1,2,x",
                            "sh:0,0,0.1", "sh:2,3,0.1", "sh:2,0,5", "const:1,2"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(IntegrandSpec::parse(bad), Error);
    }
    try {
        IntegrandSpec::parse("sh:2,0,5");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidSpec);
    }
}

TEST_CASE("homogeneity kernel, frame independence, consistency") {
    std::mt19937 rng(21);
    for (const auto& spec : families()) {
        for (int s = 0; s < 30; ++s) {
            const Vec3 n = random_unit(rng);
            CHECK((gamma_bar_hessian(spec, n) * n).norm() < 1e-8);
            CHECK(std::abs(eval_gamma(spec, n) - gamma_bar(spec, n)) < 1e-14);

            // two random right-handed tangent frames
            const auto [f1, f2] = tangent_frame(n);
            const double t = std::uniform_real_distribution<double>(0, 2 * kPi)(rng);
            const Vec3 g1 = std::cos(t) * f1 + std::sin(t) * f2;
            const Vec3 g2 = n.cross(g1);
            Eigen::SelfAdjointEigenSolver<Mat2> a(hessian_A_gamma_in_frame(spec, n, f1, f2));
            Eigen::SelfAdjointEigenSolver<Mat2> b(hessian_A_gamma_in_frame(spec, n, g1, g2));
            CHECK((a.eigenvalues() - b.eigenvalues()).norm() < 1e-10);
        }
    }
}

TEST_CASE("Cahn-Hoffman differential is tangent (property)") {
    std::mt19937 rng(1234);
    const double h = 1e-6;
    for (const auto& spec : families()) {
        double worst = 0.0;
        for (int s = 0; s < 200; ++s) {
            const Vec3 n = random_unit(rng);
            const auto [e1, e2] = tangent_frame(n);
            const double t = std::uniform_real_distribution<double>(0, 2 * kPi)(rng);
            const Vec3 x = std::cos(t) * e1 + std::sin(t) * e2;
            const Vec3 d = (cahn_hoffman(spec, (n + h * x).normalized()) - cahn_hoffman(spec, n)) / h;
            worst = std::max(worst, std::abs(d.dot(n)));
        }
        CAPTURE(spec.to_string());
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("spherical harmonic convexity margin shrinks with |eps|") {
    double prev = anisotropy_constants(IntegrandSpec::spherical_harmonic(2, 0, 0.0)).lambda_gamma;
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));
    for (double eps : {0.01, 0.02, 0.05, 0.1}) {
        const double lam = anisotropy_constants(IntegrandSpec::spherical_harmonic(2, 0, eps)).lambda_gamma;
        CHECK(lam < prev);
        CHECK(lam > 0.0);
        prev = lam;
    }
    // continuity at zero
    const double small = anisotropy_constants(IntegrandSpec::spherical_harmonic(2, 0, 1e-4)).lambda_gamma;
    CHECK(std::abs(small - 1.0) < 1e-3);
}

TEST_CASE("Wulff meshes") {
    const WulffMesh s1 = wulff_mesh(IntegrandSpec::constant(1), 4);
    CHECK(s1.area == doctest::Approx(4 * kPi).epsilon(5e-3));
    const WulffMesh s2 = wulff_mesh(IntegrandSpec::constant(2), 4);
    CHECK(s2.area == doctest::Approx(16 * kPi).epsilon(5e-3));

    // prolate spheroid with semi-axes (1, 1, 2)
    const double a = 1.0, c = 2.0;
    const double e = std::sqrt(1.0 - a * a / (c * c));
    const double spheroid = 2.0 * kPi * a * a * (1.0 + c / (a * e) * std::asin(e));
    const IntegrandSpec ell = IntegrandSpec::ellipsoid(1, 1, 2);
    const WulffMesh w = wulff_mesh(ell, 5);
    CHECK(w.area == doctest::Approx(spheroid).epsilon(1e-2));
    CHECK(w.is_closed());
    CHECK(w.signed_volume() > 0.0);
    for (std::size_t k = 0; k < w.vertices.size(); k += 97) {
        CHECK((w.vertices[k] - cahn_hoffman(ell, w.source_normals[k])).norm() < 1e-14);
    }

    std::ostringstream os;
    write_obj(os, wulff_mesh(IntegrandSpec::constant(1), 1));
    std::istringstream is(os.str());
    std::string line;
    int v = 0, f = 0, min_index = 1 << 30;
    while (std::getline(is, line)) {
        if (line.rfind("v ", 0) == 0) ++v;
        if (line.rfind("f ", 0) == 0) {
            ++f;
            std::istringstream ls(line.substr(2));
            int i;
            while (ls >> i) min_index = std::min(min_index, i);
        }
    }
    CHECK(v == 42);
    CHECK(f == 80);
    CHECK(min_index == 1);
}
