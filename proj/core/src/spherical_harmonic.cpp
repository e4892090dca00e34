#include "anisomin/spherical_harmonic.hpp"

#include <cmath>
#include <cstdlib>

#include "anisomin/error.hpp"

namespace anisomin {

void Polynomial3::add(const Exponents& e, double coeff) {
    if (coeff == 0.0) return;
    auto [it, inserted] = terms_.emplace(e, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double Polynomial3::operator()(const Vec3& x) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        sum += c * std::pow(x.x(), e[0]) * std::pow(x.y(), e[1]) * std::pow(x.z(), e[2]);
    }
    return sum;
}

Polynomial3 Polynomial3::derivative(int axis) const {
    Polynomial3 out;
    for (const auto& [e, c] : terms_) {
        if (e[axis] == 0) continue;
        Exponents d = e;
        d[axis] -= 1;
        out.add(d, c * e[axis]);
    }
    return out;
}

Polynomial3 Polynomial3::operator*(const Polynomial3& other) const {
    Polynomial3 out;
    for (const auto& [e1, c1] : terms_) {
        for (const auto& [e2, c2] : other.terms_) {
            out.add({e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]}, c1 * c2);
        }
    }
    return out;
}

Polynomial3& Polynomial3::operator+=(const Polynomial3& other) {
    for (const auto& [e, c] : other.terms_) add(e, c);
    return *this;
}

Polynomial3 Polynomial3::scaled(double s) const {
    Polynomial3 out;
    for (const auto& [e, c] : terms_) out.add(e, c * s);
    return out;
}

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Re or Im of (x + i y)^m as a polynomial in x, y.
Polynomial3 complex_power_part(int m, bool imaginary) {
    Polynomial3 out;
    for (int k = 0; k <= m; ++k) {
        // C(m,k) x^(m-k) (i y)^k ; i^k is real for even k, imaginary for odd k.
        const bool term_imag = (k % 2) == 1;
        if (term_imag != imaginary) continue;
        const int quarter = (k / 2) % 2;  // i^k = (-1)^(k/2) (times i if odd)
        const double sign = quarter == 0 ? 1.0 : -1.0;
        out.add({m - k, k, 0}, sign * binomial(m, k));
    }
    return out;
}

// (x^2 + y^2 + z^2)^k
Polynomial3 r_squared_power(int k) {
    Polynomial3 r2;
    r2.add({2, 0, 0}, 1.0);
    r2.add({0, 2, 0}, 1.0);
    r2.add({0, 0, 2}, 1.0);
    Polynomial3 out;
    out.add({0, 0, 0}, 1.0);
    for (int i = 0; i < k; ++i) out = out * r2;
    return out;
}

}  // namespace

SphericalHarmonic::SphericalHarmonic(int l, int m) : l_(l), m_(m) {
    if (l < 0 || std::abs(m) > l) {
        throw Error(ErrorCode::InvalidSpec, "spherical harmonic requires l >= 0 and |m| <= l");
    }
    const int am = std::abs(m);

    // d^am/dt^am P_l(t) = sum_k a_k t^(l - 2k - am), from the explicit Legendre sum
    // P_l(t) = 2^-l sum_k (-1)^k C(l,k) C(2l-2k, l) t^(l-2k).
    // Homogenized with r: t^j r^(l-am-j) = z^j r^(2k).
    Polynomial3 legendre_part;
    for (int k = 0; 2 * k <= l; ++k) {
        const int power = l - 2 * k;
        if (power < am) continue;
        double coeff = std::pow(-1.0, k) * binomial(l, k) * binomial(2 * l - 2 * k, l) / std::pow(2.0, l);
        for (int d = 0; d < am; ++d) coeff *= (power - d);
        const int j = power - am;
        Polynomial3 zj;
        zj.add({0, 0, j}, coeff);
        legendre_part += zj * r_squared_power(k);
    }

    const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * factorial(l - am) / factorial(l + am));
    Polynomial3 azimuthal;
    if (m == 0) {
        azimuthal.add({0, 0, 0}, norm);
    } else {
        azimuthal = complex_power_part(am, m < 0).scaled(std::sqrt(2.0) * norm);
    }
    p_ = azimuthal * legendre_part;

    for (int a = 0; a < 3; ++a) grad_[a] = p_.derivative(a);
    hess_[0] = grad_[0].derivative(0);
    hess_[1] = grad_[0].derivative(1);
    hess_[2] = grad_[0].derivative(2);
    hess_[3] = grad_[1].derivative(1);
    hess_[4] = grad_[1].derivative(2);
    hess_[5] = grad_[2].derivative(2);
}

Vec3 SphericalHarmonic::poly_gradient(const Vec3& x) const {
    return {grad_[0](x), grad_[1](x), grad_[2](x)};
}

Mat3 SphericalHarmonic::poly_hessian(const Vec3& x) const {
    Mat3 h;
    h(0, 0) = hess_[0](x);
    h(0, 1) = h(1, 0) = hess_[1](x);
    h(0, 2) = h(2, 0) = hess_[2](x);
    h(1, 1) = hess_[3](x);
    h(1, 2) = h(2, 1) = hess_[4](x);
    h(2, 2) = hess_[5](x);
    return h;
}

}  // namespace anisomin
