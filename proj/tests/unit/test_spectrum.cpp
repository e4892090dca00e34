#include <doctest.h>

#include <cmath>
#include <random>

#include "anisomin/error.hpp"
#include "anisomin/fixtures.hpp"
#include "anisomin/spectrum.hpp"
#include "support.hpp"

using namespace anisomin;

namespace {

Eigen::VectorXd nodal(const SurfacePatch& p, double (*f)(double, double)) {
    Eigen::VectorXd u(p.node_count());
    for (int j = 0; j < p.nv(); ++j)
        for (int i = 0; i < p.nu(); ++i) u(p.node(i, j)) = p.on_boundary(i, j) ? 0.0 : f(p.u_at(i), p.v_at(j));
    return u;
}

ParamRect band(double v) { return {0.0, 2 * kPi, -v, v}; }

}  // namespace

TEST_CASE("plane: stiffness is the Laplacian, no potential") {
    const SurfacePatch p = plane_patch(12);
    const JacobiDiscretization d = assemble(p, IntegrandSpec::constant(1));
    CHECK((Eigen::MatrixXd(d.stiffness) - Eigen::MatrixXd(d.laplace_stiffness)).norm() < 1e-14);
    CHECK(d.pairing.cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.mass.minCoeff() > 0.0);
    CHECK(d.mass.sum() == doctest::Approx(1.0).epsilon(1e-12));
    // rows of the stiffness annihilate constants
    CHECK((d.stiffness * Eigen::VectorXd::Ones(p.node_count())).cwiseAbs().maxCoeff() < 1e-12);

    const JacobiDiscretization d2 = assemble(p, IntegrandSpec::constant(2));
    CHECK((Eigen::MatrixXd(d2.stiffness) - 2.0 * Eigen::MatrixXd(d.stiffness)).norm() < 1e-12);
}

TEST_CASE("assembled operators are symmetric") {
    const JacobiDiscretization d = assemble(enneper_patch(1.0, 24), IntegrandSpec::ellipsoid(1, 1, 2));
    const Eigen::MatrixXd s(d.stiffness), j(d.jacobi_matrix()), c(d.comparison_matrix());
    CHECK((s - s.transpose()).norm() < 1e-12 * s.norm());
    CHECK((j - j.transpose()).norm() < 1e-12 * j.norm());
    CHECK((c - c.transpose()).norm() < 1e-12 * c.norm());
    CHECK(d.mass.minCoeff() > 0.0);
}

TEST_CASE("catenoid Q against conformal-coordinate quadrature") {
    // dSigma = cosh^2 v du dv, |grad f|^2 dSigma = (f_u^2 + f_v^2) du dv, |A|^2 = 2 / cosh^4 v
    const double V = 2.0;
    auto f = [](double u, double v) { return (1.0 + 0.3 * std::cos(u)) * std::cos(kPi * v / 4.0); };
    auto fu = [](double u, double v) { return -0.3 * std::sin(u) * std::cos(kPi * v / 4.0); };
    auto fv = [](double u, double v) { return -(1.0 + 0.3 * std::cos(u)) * kPi / 4.0 * std::sin(kPi * v / 4.0); };
    using testing_support::simpson;
    const double exact = simpson(
        [&](double u) {
            return simpson(
                [&](double v) {
                    const double c = std::cosh(v);
                    return fu(u, v) * fu(u, v) + fv(u, v) * fv(u, v) - 2.0 / (c * c) * f(u, v) * f(u, v);
                },
                -V, V, 400);
        },
        0.0, 2 * kPi, 400);

    const SurfacePatch p = catenoid_patch(V, 96);
    const JacobiDiscretization d = assemble(p, IntegrandSpec::constant(1));
    Eigen::VectorXd u(p.node_count());
    for (int j = 0; j < p.nv(); ++j)
        for (int i = 0; i < p.nu(); ++i) u(p.node(i, j)) = f(p.u_at(i), p.v_at(j));
    CHECK(q_form(d, u) == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("unit square Dirichlet eigenvalues") {
    const SurfacePatch p = plane_patch(96);
    const DirichletSpectrum s = dirichlet_eigs(assemble(p, IntegrandSpec::constant(1)), 4);
    const double pi2 = kPi * kPi;
    CHECK(s.eigenvalues(0) == doctest::Approx(2 * pi2).epsilon(1e-2));
    CHECK(s.eigenvalues(1) == doctest::Approx(5 * pi2).epsilon(1e-2));
    CHECK(s.eigenvalues(2) == doctest::Approx(5 * pi2).epsilon(1e-2));
    CHECK(s.negative_count == 0);
    CHECK(s.inertia_count == 0);
}

TEST_CASE("catenoid: index switches on near |v| = 1.2") {
    const JacobiDiscretization d = assemble(catenoid_patch(2.0, 96), IntegrandSpec::constant(1));
    const DirichletSpectrum small = dirichlet_eigs(d, 6, band(1.05));
    CHECK(small.negative_count == 0);
    for (double v : {1.35, 1.6, 2.0}) {
        const DirichletSpectrum s = dirichlet_eigs(d, 6, band(v));
        CAPTURE(v);
        CHECK(s.negative_count == 1);
        CHECK(s.inertia_count == 1);
    }
}

TEST_CASE("index exhaustion") {
    {
        const SurfacePatch p = plane_patch(48);
        const SpectralReport r = morse_index_exhaustion(assemble(p, IntegrandSpec::constant(1)),
                                                        {{0.25, 0.75, 0.25, 0.75}, {0.1, 0.9, 0.1, 0.9}, {0, 1, 0, 1}});
        REQUIRE(r.stabilized_index);
        CHECK(*r.stabilized_index == 0);
    }
    {
        const SurfacePatch p = catenoid_patch(3.0, 96);
        const SpectralReport r =
            morse_index_exhaustion(assemble(p, IntegrandSpec::constant(1)), {band(1.5), band(2.4), band(3.0)});
        REQUIRE(r.stabilized_index);
        CHECK(*r.stabilized_index == 1);
        CHECK(r.morse_index == r.inertia_index);
    }
    {
        const SurfacePatch p = enneper_patch(1.3, 96);
        const SpectralReport r = morse_index_exhaustion(assemble(p, IntegrandSpec::constant(1)),
                                                        {{-1.0, 1.0, -1.0, 1.0}, {-1.15, 1.15, -1.15, 1.15},
                                                         {-1.3, 1.3, -1.3, 1.3}});
        REQUIRE(r.stabilized_index);
        CHECK(*r.stabilized_index == 1);
    }
    const JacobiDiscretization d = assemble(plane_patch(24), IntegrandSpec::constant(1));
    CHECK_THROWS_AS(morse_index_exhaustion(d, {{0, 1, 0, 1}, {0, 1, 0, 1}}), Error);
    CHECK_THROWS_AS(morse_index_exhaustion(d, {{0, 1, 0, 1}, {0.2, 0.8, 0.2, 0.8}, {0, 1, 0, 1}}), Error);
    CHECK_THROWS_AS(dirichlet_eigs(d, 0), Error);
    CHECK_THROWS_AS(dirichlet_eigs(d, 3, ParamRect{0.5, 0.5, 0.5, 0.5}), Error);
}

TEST_CASE("k doubles until the window reaches nonnegative eigenvalues") {
    const JacobiDiscretization d = assemble(catenoid_patch(2.0, 64), IntegrandSpec::constant(1));
    const DirichletSpectrum s = dirichlet_eigs(d, 1);
    CHECK(s.k >= 2);
    CHECK(s.negative_count == 1);
    CHECK(s.eigenvalues(s.k - 1) >= -s.tol_zero);
}

TEST_CASE("comparison operator counts") {
    {
        const JacobiDiscretization d = assemble(plane_patch(32), IntegrandSpec::constant(1));
        const auto c = comparison_operator_counts(d, {{0, 1, 0, 1}});
        CHECK(c[0].neg_L == 0);
        CHECK(c[0].neg_Lgamma == 0);
    }
    {
        // gamma = 1: lambda = 1 and L_gamma is L
        const JacobiDiscretization d = assemble(catenoid_patch(2.0, 64), IntegrandSpec::constant(1));
        for (const auto& c : comparison_operator_counts(d, {band(1.0), band(1.5), band(2.0)})) CHECK(c.neg_L == c.neg_Lgamma);
        CHECK((Eigen::MatrixXd(d.jacobi_matrix()) - Eigen::MatrixXd(d.comparison_matrix())).norm() <
              1e-10 * Eigen::MatrixXd(d.jacobi_matrix()).norm());
    }
    {
        const Mat3 M = Eigen::Vector3d(1, 1, 2).asDiagonal();
        const JacobiDiscretization d = assemble(sheared_catenoid_patch(M, 2.0, 64), IntegrandSpec::ellipsoid(1, 1, 2));
        for (const auto& c : comparison_operator_counts(d, {band(1.0), band(1.5), band(2.0)})) CHECK(c.neg_L <= c.neg_Lgamma);
    }
}

TEST_CASE("Q dominates lambda Q_gamma on random tests") {
    const Mat3 M = Eigen::Vector3d(1, 1, 2).asDiagonal();
    const SurfacePatch p = sheared_catenoid_patch(M, 2.0, 48);
    const JacobiDiscretization d = assemble(p, IntegrandSpec::ellipsoid(1, 1, 2));
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    for (int s = 0; s < 100; ++s) {
        Eigen::VectorXd u(p.node_count());
        for (int k = 0; k < p.node_count(); ++k) u(k) = p.on_boundary(k) ? 0.0 : g(rng);
        const double m = mass_norm_sq(d, u);
        CHECK((q_form(d, u) - d.lambda_gamma * q_gamma_form(d, u)) / m >= -1e-9);
        // coercivity sandwich on the gradient part
        const double grad = u.dot(d.laplace_stiffness * u), agrad = u.dot(d.stiffness * u);
        CHECK(agrad >= d.lambda_gamma * grad * (1 - 1e-9));
        CHECK(agrad <= d.Lambda_gamma * grad * (1 + 1e-9));
    }
}

TEST_CASE("translations are Jacobi fields") {
    {
        const JacobiDiscretization d = assemble(plane_patch(24), IntegrandSpec::constant(1));
        for (int a = 0; a < 3; ++a) CHECK(jacobi_field_residual(d, Vec3::Unit(a)).linf_residual < 1e-12);
    }
    const JacobiDiscretization c64 = assemble(catenoid_patch(2.0, 64), IntegrandSpec::constant(1));
    const JacobiDiscretization c128 = assemble(catenoid_patch(2.0, 128), IntegrandSpec::constant(1));
    for (int a = 0; a < 3; ++a) {
        const double r64 = jacobi_field_residual(c64, Vec3::Unit(a)).relative_residual;
        const double r128 = jacobi_field_residual(c128, Vec3::Unit(a)).relative_residual;
        CAPTURE(a);
        CHECK(r64 / r128 >= 3.0);
        CHECK(r128 <= 1e-3);
    }
    const Mat3 M = Eigen::Vector3d(1, 1, 2).asDiagonal();
    const JacobiDiscretization s = assemble(sheared_catenoid_patch(M, 2.0, 128), IntegrandSpec::ellipsoid(1, 1, 2));
    for (int a = 0; a < 3; ++a) CHECK(jacobi_field_residual(s, Vec3::Unit(a)).relative_residual < 5e-3);
}

TEST_CASE("eigenvector of the negative mode has one sign") {
    // first Dirichlet eigenfunction: a single nodal domain
    const SurfacePatch p = catenoid_patch(2.0, 64);
    const DirichletSpectrum s = dirichlet_eigs(assemble(p, IntegrandSpec::constant(1)), 4);
    const Eigen::VectorXd v = s.eigenvectors.col(0);
    CHECK((v.array() >= -1e-10 * v.cwiseAbs().maxCoeff()).all());
}
