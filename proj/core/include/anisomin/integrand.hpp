#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "anisomin/types.hpp"

namespace anisomin {

class SphericalHarmonic;

struct ConstantFamily {
    double c = 1.0;
};

struct EllipsoidFamily {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
};

struct SphericalHarmonicFamily {
    int l = 1;
    int m = 0;
    double eps = 0.0;
};

using IntegrandFamily = std::variant<ConstantFamily, EllipsoidFamily, SphericalHarmonicFamily>;

/// A validated, immutable convex integrand on the unit sphere.
///
/// Construction goes through `parse` or the named factories, all of which
/// check positivity and convexity on a Fibonacci validation sample and throw
/// `Error{InvalidSpec | NonConvexIntegrand}` otherwise.
///
/// Grammar: `const:<c>` | `ellipsoid:<a>,<b>,<c>` | `sh:<l>,<m>,<eps>`.
class IntegrandSpec {
public:
    static IntegrandSpec parse(std::string_view text);
    static IntegrandSpec constant(double c);
    static IntegrandSpec ellipsoid(double a, double b, double c);
    static IntegrandSpec spherical_harmonic(int l, int m, double eps);

    const IntegrandFamily& family() const noexcept { return family_; }
    std::string to_string() const;

    bool is_constant() const noexcept { return std::holds_alternative<ConstantFamily>(family_); }

    // Only set for the spherical-harmonic family.
    const SphericalHarmonic* harmonic() const noexcept { return harmonic_.get(); }

private:
    explicit IntegrandSpec(IntegrandFamily family);

    IntegrandFamily family_;
    std::shared_ptr<const SphericalHarmonic> harmonic_;
};

// Largest |eps| accepted for `sh:<l>,<m>,<eps>`; keeps A_gamma positive
// definite with a 10% margin.
double spherical_harmonic_eps_cap(int l, int m);

/// gamma(nu) for a unit normal; throws NonUnitNormal if | |nu| - 1 | > 1e-12.
double eval_gamma(const IntegrandSpec& spec, const Vec3& nu);

struct GammaBarJet {
    double value = 0.0;
    Vec3 gradient = Vec3::Zero();
    Mat3 hessian = Mat3::Zero();
};

/// One-homogeneous extension gamma_bar(x) = |x| gamma(x/|x|) with its first
/// and second derivatives (closed forms for every family). Throws ZeroVector
/// for |x| <= 1e-10.
GammaBarJet gamma_bar_jet(const IntegrandSpec& spec, const Vec3& x);

double gamma_bar(const IntegrandSpec& spec, const Vec3& x);
Vec3 gamma_bar_gradient(const IntegrandSpec& spec, const Vec3& x);
Mat3 gamma_bar_hessian(const IntegrandSpec& spec, const Vec3& x);

/// Orthonormal tangent frame (e1, e2) at nu with e1 x e2 = nu.
std::pair<Vec3, Vec3> tangent_frame(const Vec3& nu);

struct TangentTensor {
    Mat2 matrix = Mat2::Identity();
    Vec3 e1 = Vec3::UnitX();
    Vec3 e2 = Vec3::UnitY();
};

/// A_gamma at nu as a symmetric 2x2 in the frame returned by `tangent_frame`.
TangentTensor hessian_A_gamma(const IntegrandSpec& spec, const Vec3& nu);

/// Same tensor expressed in a caller-supplied orthonormal frame of T_nu S^2.
Mat2 hessian_A_gamma_in_frame(const IntegrandSpec& spec, const Vec3& nu, const Vec3& e1,
                              const Vec3& e2);

/// xi(nu) = grad_S gamma(nu) + gamma(nu) nu, computed through the tangential
/// gradient (independently of gamma_bar_gradient).
Vec3 cahn_hoffman(const IntegrandSpec& spec, const Vec3& nu);

struct AnisotropyConstants {
    double lambda_gamma = 1.0;
    double Lambda_gamma = 1.0;
    double c_gamma = 2.0;
    double c_prime_gamma = 4.0;
    Vec3 argmin = Vec3::UnitZ();
    Vec3 argmax = Vec3::UnitZ();
};

/// Extremal tangential eigenvalues of A_gamma. The Fibonacci sample (plus the
/// six coordinate directions) is searched first, then the best candidates are
/// polished by a local pattern search on the sphere.
AnisotropyConstants anisotropy_constants(const IntegrandSpec& spec, int sample_count = 10000);

/// Deterministic Fibonacci lattice on the unit sphere.
std::vector<Vec3> fibonacci_sphere(int count);

struct WulffMesh {
    std::vector<Vec3> vertices;
    std::vector<Vec3> source_normals;
    std::vector<std::array<int, 3>> faces;
    double area = 0.0;

    bool is_closed() const;
    double signed_volume() const;
};

WulffMesh wulff_mesh(const IntegrandSpec& spec, int refinement);

/// Unit icosphere after `refinement` rounds of 4:1 subdivision.
void icosphere(int refinement, std::vector<Vec3>& vertices, std::vector<std::array<int, 3>>& faces);

void write_obj(std::ostream& os, const WulffMesh& mesh);

}  // namespace anisomin
