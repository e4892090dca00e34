#pragma once

#include <array>
#include <map>

#include "anisomin/types.hpp"

namespace anisomin {

// Polynomial in (x, y, z); keys are exponent triples.
class Polynomial3 {
public:
    using Exponents = std::array<int, 3>;

    void add(const Exponents& e, double coeff);
    double operator()(const Vec3& x) const;
    Polynomial3 derivative(int axis) const;
    Polynomial3 operator*(const Polynomial3& other) const;
    Polynomial3& operator+=(const Polynomial3& other);
    Polynomial3 scaled(double s) const;

    const std::map<Exponents, double>& terms() const noexcept { return terms_; }

private:
    std::map<Exponents, double> terms_;
};

/// Real spherical harmonic Y_l^m with unit L^2 norm on the sphere, stored as
/// the harmonic homogeneous polynomial P of degree l with Y = P on |x| = 1.
///
/// m > 0 uses cos(m phi), m < 0 uses sin(|m| phi); no Condon-Shortley phase.
class SphericalHarmonic {
public:
    SphericalHarmonic(int l, int m);

    int degree() const noexcept { return l_; }
    int order() const noexcept { return m_; }

    double poly(const Vec3& x) const { return p_(x); }
    Vec3 poly_gradient(const Vec3& x) const;
    Mat3 poly_hessian(const Vec3& x) const;

private:
    int l_;
    int m_;
    Polynomial3 p_;
    std::array<Polynomial3, 3> grad_;
    std::array<Polynomial3, 6> hess_;  // xx, xy, xz, yy, yz, zz
};

}  // namespace anisomin
