#include "anisomin/integrand.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "anisomin/error.hpp"
#include "anisomin/spherical_harmonic.hpp"

namespace anisomin {

namespace {

constexpr int kValidationSamples = 10000;
constexpr double kConvexityMargin = 1e-6;

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string_view token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        double v = 0.0;
        const auto* begin = token.data();
        const auto* end = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr != end || token.empty()) {
            throw Error(ErrorCode::InvalidSpec, "cannot parse number '" + std::string(token) + "'");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

Mat2 restrict_to_frame(const Mat3& h, const Vec3& e1, const Vec3& e2) {
    Mat2 a;
    a(0, 0) = e1.dot(h * e1);
    a(0, 1) = e1.dot(h * e2);
    a(1, 0) = a(0, 1);
    a(1, 1) = e2.dot(h * e2);
    return a;
}

Eigen::Vector2d tangent_eigenvalues(const IntegrandSpec& spec, const Vec3& nu) {
    const Mat2 a = hessian_A_gamma(spec, nu).matrix;
    Eigen::SelfAdjointEigenSolver<Mat2> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

void check_unit(const Vec3& nu) {
    if (std::abs(nu.norm() - 1.0) > 1e-12) {
        throw Error(ErrorCode::NonUnitNormal, "normal has length " + format_double(nu.norm()));
    }
}

void validate(const IntegrandSpec& spec) {
    for (const Vec3& nu : fibonacci_sphere(kValidationSamples)) {
        if (!(eval_gamma(spec, nu) > 0.0)) {
            throw Error(ErrorCode::InvalidSpec, "integrand is not positive on the validation sample");
        }
        if (tangent_eigenvalues(spec, nu)(0) < kConvexityMargin) {
            throw Error(ErrorCode::NonConvexIntegrand, "A_gamma is not positive definite at a sample normal");
        }
    }
}

}  // namespace

IntegrandSpec::IntegrandSpec(IntegrandFamily family) : family_(family) {
    if (const auto* sh = std::get_if<SphericalHarmonicFamily>(&family_)) {
        harmonic_ = std::make_shared<SphericalHarmonic>(sh->l, sh->m);
    }
}

IntegrandSpec IntegrandSpec::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidSpec, "const: c must be positive");
    IntegrandSpec spec(ConstantFamily{c});
    return spec;
}

IntegrandSpec IntegrandSpec::ellipsoid(double a, double b, double c) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0) || !std::isfinite(a + b + c)) {
        throw Error(ErrorCode::InvalidSpec, "ellipsoid: semi-axes must be positive");
    }
    IntegrandSpec spec(EllipsoidFamily{a, b, c});
    validate(spec);
    return spec;
}

IntegrandSpec IntegrandSpec::spherical_harmonic(int l, int m, double eps) {
    if (l < 1 || std::abs(m) > l) throw Error(ErrorCode::InvalidSpec, "sh: need l >= 1 and |m| <= l");
    if (!std::isfinite(eps)) throw Error(ErrorCode::InvalidSpec, "sh: eps must be finite");
    const double cap = spherical_harmonic_eps_cap(l, m);
    if (std::abs(eps) > cap) {
        throw Error(ErrorCode::InvalidSpec,
                    "sh: |eps| = " + format_double(std::abs(eps)) + " exceeds cap " + format_double(cap));
    }
    IntegrandSpec spec(SphericalHarmonicFamily{l, m, eps});
    validate(spec);
    return spec;
}

IntegrandSpec IntegrandSpec::parse(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw Error(ErrorCode::InvalidSpec, "expected <family>:<params>, got '" + std::string(text) + "'");
    }
    const std::string_view head = text.substr(0, colon);
    const std::vector<double> args = parse_number_list(text.substr(colon + 1));
    if (head == "const") {
        if (args.size() != 1) throw Error(ErrorCode::InvalidSpec, "const takes one parameter");
        return constant(args[0]);
    }
    if (head == "ellipsoid") {
        if (args.size() != 3) throw Error(ErrorCode::InvalidSpec, "ellipsoid takes three parameters");
        return ellipsoid(args[0], args[1], args[2]);
    }
    if (head == "sh") {
        if (args.size() != 3) throw Error(ErrorCode::InvalidSpec, "sh takes three parameters");
        if (args[0] != std::floor(args[0]) || args[1] != std::floor(args[1])) {
            throw Error(ErrorCode::InvalidSpec, "sh: l and m must be integers");
        }
        return spherical_harmonic(static_cast<int>(args[0]), static_cast<int>(args[1]), args[2]);
    }
    throw Error(ErrorCode::InvalidSpec, "unknown integrand family '" + std::string(head) + "'");
}

std::string IntegrandSpec::to_string() const {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) {
                return "const:" + format_double(f.c);
            } else if constexpr (std::is_same_v<T, EllipsoidFamily>) {
                return "ellipsoid:" + format_double(f.a) + "," + format_double(f.b) + "," + format_double(f.c);
            } else {
                return "sh:" + std::to_string(f.l) + "," + std::to_string(f.m) + "," + format_double(f.eps);
            }
        },
        family_);
}

double spherical_harmonic_eps_cap(int l, int m) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, double> cache;
    const auto key = std::make_pair(l, m);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }

    // A_gamma = I + eps * B with B the tangential Hessian of |x| Y(x/|x|);
    // gamma = 1 + eps * Y. Both stay positive while |eps| * max(|B|, |Y|) < 1.
    const SphericalHarmonic y(l, m);
    double worst = 0.0;
    for (const Vec3& nu : fibonacci_sphere(4000)) {
        const double p = y.poly(nu);
        const Vec3 gp = y.poly_gradient(nu);
        const Mat3 hp = y.poly_hessian(nu);
        const double k = 1.0 - l;
        // Hessian of f = P r^(1-l) at |x| = 1.
        const Mat3 hf = hp + k * (gp * nu.transpose() + nu * gp.transpose()) +
                        p * k * (Mat3::Identity() + (-l - 1.0) * nu * nu.transpose());
        const auto [e1, e2] = tangent_frame(nu);
        Eigen::SelfAdjointEigenSolver<Mat2> es(restrict_to_frame(hf, e1, e2), Eigen::EigenvaluesOnly);
        worst = std::max({worst, std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(1)), std::abs(p)});
    }
    const double cap = 0.9 / worst;
    std::lock_guard lock(mutex);
    cache.emplace(key, cap);
    return cap;
}

double eval_gamma(const IntegrandSpec& spec, const Vec3& nu) {
    check_unit(nu);
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) {
                return f.c;
            } else if constexpr (std::is_same_v<T, EllipsoidFamily>) {
                return std::sqrt(f.a * f.a * nu.x() * nu.x() + f.b * f.b * nu.y() * nu.y() +
                                 f.c * f.c * nu.z() * nu.z());
            } else {
                return 1.0 + f.eps * spec.harmonic()->poly(nu);
            }
        },
        spec.family());
}

GammaBarJet gamma_bar_jet(const IntegrandSpec& spec, const Vec3& x) {
    const double r = x.norm();
    if (r <= 1e-10) throw Error(ErrorCode::ZeroVector, "gamma_bar evaluated at the origin");
    const Vec3 xhat = x / r;
    GammaBarJet jet;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) {
                jet.value = f.c * r;
                jet.gradient = f.c * xhat;
                jet.hessian = f.c * (Mat3::Identity() - xhat * xhat.transpose()) / r;
            } else if constexpr (std::is_same_v<T, EllipsoidFamily>) {
                const Vec3 d2(f.a * f.a, f.b * f.b, f.c * f.c);
                const Vec3 d2x = d2.cwiseProduct(x);
                const double g = std::sqrt(x.dot(d2x));
                jet.value = g;
                jet.gradient = d2x / g;
                jet.hessian = Mat3(d2.asDiagonal()) / g - d2x * d2x.transpose() / (g * g * g);
            } else {
                // gamma_bar = r + eps * P(x) r^(1-l)
                const SphericalHarmonic& y = *spec.harmonic();
                const int l = y.degree();
                const double k = 1.0 - l;
                const double p = y.poly(x);
                const Vec3 gp = y.poly_gradient(x);
                const Mat3 hp = y.poly_hessian(x);
                const double rk = std::pow(r, k);
                const double rk1 = rk / r;       // r^(k-1)
                const double rk2 = rk1 / r;      // r^(k-2)
                const double rk4 = rk2 / (r * r);  // r^(k-4)
                const double fval = p * rk;
                const Vec3 fgrad = gp * rk + p * k * rk2 * x;
                const Mat3 fhess = hp * rk + k * rk2 * (gp * x.transpose() + x * gp.transpose()) +
                                   p * k * (rk2 * Mat3::Identity() + (k - 2.0) * rk4 * x * x.transpose());
                jet.value = r + f.eps * fval;
                jet.gradient = xhat + f.eps * fgrad;
                jet.hessian = (Mat3::Identity() - xhat * xhat.transpose()) / r + f.eps * fhess;
            }
        },
        spec.family());
    return jet;
}

double gamma_bar(const IntegrandSpec& spec, const Vec3& x) { return gamma_bar_jet(spec, x).value; }
Vec3 gamma_bar_gradient(const IntegrandSpec& spec, const Vec3& x) { return gamma_bar_jet(spec, x).gradient; }
Mat3 gamma_bar_hessian(const IntegrandSpec& spec, const Vec3& x) { return gamma_bar_jet(spec, x).hessian; }

std::pair<Vec3, Vec3> tangent_frame(const Vec3& nu) {
    // Seed with the coordinate axis least aligned with nu.
    Eigen::Index axis = 0;
    nu.cwiseAbs().minCoeff(&axis);
    const Vec3 seed = Vec3::Unit(axis);
    const Vec3 e1 = (seed - seed.dot(nu) * nu).normalized();
    const Vec3 e2 = nu.cross(e1);
    return {e1, e2};
}

TangentTensor hessian_A_gamma(const IntegrandSpec& spec, const Vec3& nu) {
    check_unit(nu);
    const auto [e1, e2] = tangent_frame(nu);
    return {restrict_to_frame(gamma_bar_hessian(spec, nu), e1, e2), e1, e2};
}

Mat2 hessian_A_gamma_in_frame(const IntegrandSpec& spec, const Vec3& nu, const Vec3& e1, const Vec3& e2) {
    check_unit(nu);
    return restrict_to_frame(gamma_bar_hessian(spec, nu), e1, e2);
}

Vec3 cahn_hoffman(const IntegrandSpec& spec, const Vec3& nu) {
    check_unit(nu);
    const double g = eval_gamma(spec, nu);
    const Mat3 tangential = Mat3::Identity() - nu * nu.transpose();
    Vec3 surface_gradient = Vec3::Zero();
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) {
                surface_gradient.setZero();
            } else if constexpr (std::is_same_v<T, EllipsoidFamily>) {
                // Extension q(x) = sqrt(x^T D^2 x); only its tangential part matters.
                const Vec3 d2(f.a * f.a, f.b * f.b, f.c * f.c);
                surface_gradient = tangential * (d2.cwiseProduct(nu) / g);
            } else {
                // Degree-0 extension Y(x/|x|): gradient at |x| = 1 is grad P - l P nu.
                const SphericalHarmonic& y = *spec.harmonic();
                surface_gradient = f.eps * (y.poly_gradient(nu) - y.degree() * y.poly(nu) * nu);
            }
        },
        spec.family());
    return surface_gradient + g * nu;
}

std::vector<Vec3> fibonacci_sphere(int count) {
    std::vector<Vec3> pts;
    pts.reserve(count);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / count;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * k;
        pts.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
    }
    return pts;
}

namespace {

// Pattern search on the sphere for the extremum of one tangential eigenvalue.
Vec3 polish_extremum(const IntegrandSpec& spec, Vec3 nu, double step, bool minimize, double& best) {
    auto score = [&](const Vec3& n) {
        const Eigen::Vector2d ev = tangent_eigenvalues(spec, n);
        return minimize ? ev(0) : -ev(1);
    };
    double current = score(nu);
    while (step > 1e-10) {
        bool improved = false;
        const auto [e1, e2] = tangent_frame(nu);
        for (int d = 0; d < 8; ++d) {
            const double t = d * kPi / 4.0;
            const Vec3 cand = (nu + step * (std::cos(t) * e1 + std::sin(t) * e2)).normalized();
            const double s = score(cand);
            if (s < current) {
                current = s;
                nu = cand;
                improved = true;
                break;
            }
        }
        if (!improved) step *= 0.5;
    }
    best = minimize ? current : -current;
    return nu;
}

}  // namespace

AnisotropyConstants anisotropy_constants(const IntegrandSpec& spec, int sample_count) {
    if (sample_count < 100) throw Error(ErrorCode::InvalidArgument, "anisotropy_constants needs >= 100 samples");
    std::vector<Vec3> sample = fibonacci_sphere(sample_count);
    for (int a = 0; a < 3; ++a) {
        sample.push_back(Vec3::Unit(a));
        sample.push_back(-Vec3::Unit(a));
    }

    struct Candidate {
        double value;
        std::size_t index;
    };
    std::vector<Candidate> lows, highs;
    lows.reserve(sample.size());
    highs.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const Eigen::Vector2d ev = tangent_eigenvalues(spec, sample[i]);
        lows.push_back({ev(0), i});
        highs.push_back({ev(1), i});
    }
    auto by_value = [](const Candidate& a, const Candidate& b) {
        return a.value < b.value || (a.value == b.value && a.index < b.index);
    };
    std::sort(lows.begin(), lows.end(), by_value);
    std::sort(highs.begin(), highs.end(), by_value);

    AnisotropyConstants k;
    k.lambda_gamma = lows.front().value;
    k.argmin = sample[lows.front().index];
    k.Lambda_gamma = highs.back().value;
    k.argmax = sample[highs.back().index];

    if (!spec.is_constant()) {
        const double spacing = std::sqrt(4.0 * kPi / sample_count);
        const std::size_t polish = std::min<std::size_t>(4, sample.size());
        for (std::size_t i = 0; i < polish; ++i) {
            double v = 0.0;
            const Vec3 nmin = polish_extremum(spec, sample[lows[i].index], spacing, true, v);
            if (v < k.lambda_gamma) {
                k.lambda_gamma = v;
                k.argmin = nmin;
            }
            const Vec3 nmax = polish_extremum(spec, sample[highs[highs.size() - 1 - i].index], spacing, false, v);
            if (v > k.Lambda_gamma) {
                k.Lambda_gamma = v;
                k.argmax = nmax;
            }
        }
    }

    if (k.lambda_gamma <= 1e-10) throw Error(ErrorCode::NonConvexIntegrand, "lambda_gamma <= 1e-10");
    const double ratio = k.Lambda_gamma / k.lambda_gamma;
    k.c_gamma = ratio * ratio * (ratio + 1.0 / ratio);
    k.c_prime_gamma = 2.0 * k.c_gamma / (k.lambda_gamma * k.lambda_gamma);
    return k;
}

void icosphere(int refinement, std::vector<Vec3>& vertices, std::vector<std::array<int, 3>>& faces) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& v : vertices) v.normalize();
    faces = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
             {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};

    for (int level = 0; level < refinement; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
            vertices.push_back((vertices[a] + vertices[b]).normalized());
            const int idx = static_cast<int>(vertices.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = mid(f[0], f[1]);
            const int bc = mid(f[1], f[2]);
            const int ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    for (auto& f : faces) {
        const Vec3 n = (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]);
        if (n.dot(vertices[f[0]] + vertices[f[1]] + vertices[f[2]]) < 0.0) std::swap(f[1], f[2]);
    }
}

WulffMesh wulff_mesh(const IntegrandSpec& spec, int refinement) {
    if (refinement < 0) throw Error(ErrorCode::InvalidArgument, "refinement must be >= 0");
    // Specs are validated on construction; re-check the margin so a non-injective xi is never meshed.
    if (anisotropy_constants(spec, 2000).lambda_gamma < kConvexityMargin) {
        throw Error(ErrorCode::NonConvexIntegrand, "Wulff shape needs a convex integrand");
    }
    WulffMesh mesh;
    icosphere(refinement, mesh.source_normals, mesh.faces);
    mesh.vertices.reserve(mesh.source_normals.size());
    for (const Vec3& nu : mesh.source_normals) mesh.vertices.push_back(cahn_hoffman(spec, nu));
    mesh.area = 0.0;
    for (const auto& f : mesh.faces) {
        mesh.area += 0.5 * (mesh.vertices[f[1]] - mesh.vertices[f[0]])
                               .cross(mesh.vertices[f[2]] - mesh.vertices[f[0]])
                               .norm();
    }
    return mesh;
}

bool WulffMesh::is_closed() const {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& f : faces) {
        for (int k = 0; k < 3; ++k) directed[{f[k], f[(k + 1) % 3]}] += 1;
    }
    for (const auto& [edge, count] : directed) {
        if (count != 1) return false;
        auto it = directed.find({edge.second, edge.first});
        if (it == directed.end() || it->second != 1) return false;
    }
    return true;
}

double WulffMesh::signed_volume() const {
    double vol = 0.0;
    for (const auto& f : faces) {
        vol += vertices[f[0]].dot(vertices[f[1]].cross(vertices[f[2]])) / 6.0;
    }
    return vol;
}

void write_obj(std::ostream& os, const WulffMesh& mesh) {
    os.precision(17);
    for (const Vec3& v : mesh.vertices) os << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& f : mesh.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

}  // namespace anisomin
