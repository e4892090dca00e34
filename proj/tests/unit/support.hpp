#pragma once

#include <cmath>
#include <random>

#include "anisomin/types.hpp"

namespace testing_support {

inline anisomin::Vec3 random_unit(std::mt19937& rng) {
    std::normal_distribution<double> n;
    anisomin::Vec3 v(n(rng), n(rng), n(rng));
    return v.normalized();
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Composite Simpson on [a, b] with an even number of panels.
template <class F>
double simpson(F f, double a, double b, int panels = 2000) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace testing_support
