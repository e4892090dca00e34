#include "anisomin/surface.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "anisomin/error.hpp"

namespace anisomin {

SurfacePatch::SurfacePatch(std::shared_ptr<const Chart> chart, ParamRect domain, int nu, int nv,
                           bool periodic_u, int orientation, PatchTopology topology)
    : chart_(std::move(chart)),
      domain_(domain),
      nu_(nu),
      nv_(nv),
      periodic_u_(periodic_u),
      orientation_(orientation >= 0 ? 1 : -1),
      topology_(std::move(topology)) {
    if (!chart_) throw Error(ErrorCode::InvalidArgument, "patch needs a chart");
    if (nu_ < 3 || nv_ < 3) throw Error(ErrorCode::InvalidArgument, "patch grid must be at least 3x3");
    if (!(domain_.u1 > domain_.u0) || !(domain_.v1 > domain_.v0)) {
        throw Error(ErrorCode::InvalidArgument, "empty parameter rectangle");
    }
    hu_ = (domain_.u1 - domain_.u0) / (periodic_u_ ? nu_ : nu_ - 1);
    hv_ = (domain_.v1 - domain_.v0) / (nv_ - 1);
}

bool SurfacePatch::on_boundary(int i, int j) const noexcept {
    if (j == 0 || j == nv_ - 1) return true;
    if (!periodic_u_ && (i == 0 || i == nu_ - 1)) return true;
    return false;
}

Vec3 SurfacePatch::normal(double u, double v) const {
    const ChartJet j = chart_->jet(u, v);
    return (orientation_ * j.xu.cross(j.xv)).normalized();
}

std::vector<std::array<int, 3>> SurfacePatch::triangles() const {
    std::vector<std::array<int, 3>> tris;
    const int cells_u = periodic_u_ ? nu_ : nu_ - 1;
    tris.reserve(static_cast<std::size_t>(2 * cells_u * (nv_ - 1)));
    for (int j = 0; j + 1 < nv_; ++j) {
        for (int i = 0; i < cells_u; ++i) {
            const int ip = (i + 1) % nu_;
            const int a = node(i, j);
            const int b = node(ip, j);
            const int c = node(ip, j + 1);
            const int d = node(i, j + 1);
            tris.push_back({a, b, c});
            tris.push_back({a, c, d});
        }
    }
    return tris;
}

std::vector<double> SurfacePatch::parameter_weights() const {
    std::vector<double> w(static_cast<std::size_t>(node_count()));
    for (int j = 0; j < nv_; ++j) {
        const double wv = (j == 0 || j == nv_ - 1) ? 0.5 * hv_ : hv_;
        for (int i = 0; i < nu_; ++i) {
            const double wu = (!periodic_u_ && (i == 0 || i == nu_ - 1)) ? 0.5 * hu_ : hu_;
            w[node(i, j)] = wu * wv;
        }
    }
    return w;
}

void SurfacePatch::validate() const {
    for (int j = 0; j < nv_; ++j) {
        for (int i = 0; i < nu_; ++i) {
            const ChartJet jt = chart_->jet(u_at(i), v_at(j));
            if (!(jt.xu.cross(jt.xv).norm() > 1e-10)) {
                throw Error(ErrorCode::DegenerateImmersion, "|X_u x X_v| <= 1e-10 at node (" + std::to_string(i) +
                                                                ", " + std::to_string(j) + ")");
            }
        }
    }
}

SurfacePatch SurfacePatch::regridded(int nu, int nv) const {
    return SurfacePatch(chart_, domain_, nu, nv, periodic_u_, orientation_, topology_);
}

LocalFrame local_frame(const ChartJet& jet, int orientation) {
    LocalFrame f;
    const Vec3 n = jet.xu.cross(jet.xv);
    f.area_element = n.norm();
    if (!(f.area_element > 1e-10)) throw Error(ErrorCode::DegenerateImmersion, "|X_u x X_v| <= 1e-10");
    f.nu = (orientation >= 0 ? 1.0 : -1.0) * n / f.area_element;
    f.e1 = jet.xu.normalized();
    f.e2 = f.nu.cross(f.e1);
    f.jacobian.col(0) = jet.xu;
    f.jacobian.col(1) = jet.xv;
    f.metric = f.jacobian.transpose() * f.jacobian;
    return f;
}

double CurvatureField::sup_abs_H_gamma() const {
    double s = 0.0;
    for (const auto& n : nodes) s = std::max(s, std::abs(n.H_gamma));
    return s;
}

double CurvatureField::total_curvature() const {
    double s = 0.0;
    for (const auto& n : nodes) s += -n.K_sigma * n.area_weight;
    return s;
}

CurvatureField curvature_field(const SurfacePatch& patch, const IntegrandSpec& spec) {
    CurvatureField field;
    field.patch = std::make_shared<SurfacePatch>(patch);
    field.nodes.resize(static_cast<std::size_t>(patch.node_count()));
    const std::vector<double> weights = patch.parameter_weights();

    double scale = 0.0;
    for (int j = 0; j < patch.nv(); ++j) {
        for (int i = 0; i < patch.nu(); ++i) {
            const int k = patch.node(i, j);
            const ChartJet jet = patch.jet(patch.u_at(i), patch.v_at(j));
            LocalFrame frame;
            try {
                frame = local_frame(jet, patch.orientation());
            } catch (const Error&) {
                throw Error(ErrorCode::DegenerateImmersion,
                            "degenerate node (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            CurvatureNode& node = field.nodes[k];
            node.position = jet.x;
            node.nu = frame.nu;
            node.e1 = frame.e1;
            node.e2 = frame.e2;

            Mat2 h;
            h(0, 0) = jet.xuu.dot(frame.nu);
            h(0, 1) = h(1, 0) = jet.xuv.dot(frame.nu);
            h(1, 1) = jet.xvv.dot(frame.nu);
            Mat2 b;  // coordinates of X_u, X_v in (e1, e2)
            b << frame.e1.dot(jet.xu), frame.e1.dot(jet.xv), frame.e2.dot(jet.xu), frame.e2.dot(jet.xv);
            const Mat2 binv = b.inverse();
            Mat2 s = binv.transpose() * h * binv;
            s(0, 1) = s(1, 0) = 0.5 * (s(0, 1) + s(1, 0));
            node.S = s;
            node.A = hessian_A_gamma_in_frame(spec, frame.nu, frame.e1, frame.e2);

            node.H_gamma = (node.A * s).trace();
            node.K_sigma = s.determinant();
            node.K_gamma = node.A.determinant() * node.K_sigma;
            node.aniso_pairing = (node.A * s * s).trace();
            node.norm_A_sq = (s * s).trace();

            Eigen::SelfAdjointEigenSolver<Mat2> es(s);
            node.kappa1 = es.eigenvalues()(0);
            node.kappa2 = es.eigenvalues()(1);
            Vec2 d1 = es.eigenvectors().col(0);
            Vec2 d2 = es.eigenvectors().col(1);
            const double gap = node.kappa2 - node.kappa1;
            if (gap <= 1e-12 * std::max(1.0, std::abs(node.kappa2))) {
                d1 = Vec2::UnitX();
                d2 = Vec2::UnitY();
            }
            node.a1 = d1.dot(node.A * d1);
            node.a2 = d2.dot(node.A * d2);
            node.area_weight = weights[k] * frame.area_element;
            scale = std::max({scale, std::abs(node.kappa1), std::abs(node.kappa2)});
        }
    }
    // Flat up to rounding: curvature radius beyond 1e9 patch diameters.
    Vec3 lo = field.nodes.front().position, hi = lo;
    for (const auto& n : field.nodes) {
        lo = lo.cwiseMin(n.position);
        hi = hi.cwiseMax(n.position);
    }
    const double diameter = (hi - lo).norm();
    field.curvature_scale = scale * diameter > 1e-9 ? scale : 1.0;
    return field;
}

double anisotropic_energy(const SurfacePatch& patch, const IntegrandSpec& spec) {
    const std::vector<double> weights = patch.parameter_weights();
    double energy = 0.0;
    for (int j = 0; j < patch.nv(); ++j) {
        for (int i = 0; i < patch.nu(); ++i) {
            const ChartJet jet = patch.jet(patch.u_at(i), patch.v_at(j));
            const Vec3 n = patch.orientation() * jet.xu.cross(jet.xv);
            energy += weights[patch.node(i, j)] * gamma_bar(spec, n);
        }
    }
    return energy;
}

namespace {

// Fourth-order central difference along one grid direction, second order
// within two nodes of a non-periodic edge.
double grid_derivative(const std::vector<double>& f, const SurfacePatch& p, int i, int j, bool along_u) {
    const int n = along_u ? p.nu() : p.nv();
    const int idx = along_u ? i : j;
    const bool periodic = along_u && p.periodic_u();
    const double h = along_u ? p.hu() : p.hv();
    auto at = [&](int k) {
        if (periodic) k = ((k % n) + n) % n;
        return along_u ? f[p.node(k, j)] : f[p.node(i, k)];
    };
    if (periodic || (idx >= 2 && idx <= n - 3)) {
        return (-at(idx + 2) + 8.0 * at(idx + 1) - 8.0 * at(idx - 1) + at(idx - 2)) / (12.0 * h);
    }
    if (idx == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    if (idx == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    return (at(idx + 1) - at(idx - 1)) / (2.0 * h);
}

}  // namespace

FirstVariation first_variation_check(const SurfacePatch& patch, const IntegrandSpec& spec,
                                     const std::vector<double>& u_field, double dt) {
    if (u_field.size() != static_cast<std::size_t>(patch.node_count())) {
        throw Error(ErrorCode::InvalidArgument, "u_field size does not match the patch grid");
    }
    if (!(dt >= 1e-6 && dt <= 1e-2)) throw Error(ErrorCode::InvalidArgument, "dt must lie in [1e-6, 1e-2]");
    for (int k = 0; k < patch.node_count(); ++k) {
        if (patch.on_boundary(k) && std::abs(u_field[k]) > 1e-12) {
            throw Error(ErrorCode::BoundaryNotFixed, "variation does not vanish on the boundary");
        }
    }

    const std::vector<double> weights = patch.parameter_weights();
    const double o = patch.orientation();
    double e_plus = 0.0;
    double e_minus = 0.0;
    for (int j = 0; j < patch.nv(); ++j) {
        for (int i = 0; i < patch.nu(); ++i) {
            const int k = patch.node(i, j);
            const ChartJet jet = patch.jet(patch.u_at(i), patch.v_at(j));
            const Vec3 n = jet.xu.cross(jet.xv);
            const double len = n.norm();
            const Vec3 nhat = n / len;
            const Vec3 nu = o * nhat;
            const Vec3 n_u = jet.xuu.cross(jet.xv) + jet.xu.cross(jet.xuv);
            const Vec3 n_v = jet.xuv.cross(jet.xv) + jet.xu.cross(jet.xvv);
            const Vec3 nu_u = o * (n_u - nhat * nhat.dot(n_u)) / len;
            const Vec3 nu_v = o * (n_v - nhat * nhat.dot(n_v)) / len;
            const double f = u_field[k];
            const double fu = grid_derivative(u_field, patch, i, j, true);
            const double fv = grid_derivative(u_field, patch, i, j, false);
            for (int sgn : {1, -1}) {
                const double t = sgn * dt;
                const Vec3 yu = jet.xu + t * (fu * nu + f * nu_u);
                const Vec3 yv = jet.xv + t * (fv * nu + f * nu_v);
                const double e = weights[k] * gamma_bar(spec, o * yu.cross(yv));
                (sgn > 0 ? e_plus : e_minus) += e;
            }
        }
    }

    const CurvatureField field = curvature_field(patch, spec);
    double integral = 0.0;
    for (std::size_t k = 0; k < field.nodes.size(); ++k) {
        integral += field.nodes[k].H_gamma * u_field[k] * field.nodes[k].area_weight;
    }
    FirstVariation out;
    out.numeric_derivative = (e_plus - e_minus) / (2.0 * dt);
    out.minus_integral_Hu = -integral;
    out.discrepancy = out.numeric_derivative - out.minus_integral_Hu;
    return out;
}

std::vector<double> interior_bump(const SurfacePatch& patch, double extent) {
    auto bump = [extent](double s) {
        const double x = (s - 0.5) / (0.5 * extent);
        if (std::abs(x) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - x * x));
    };
    std::vector<double> out(static_cast<std::size_t>(patch.node_count()), 0.0);
    const ParamRect& d = patch.domain();
    for (int j = 0; j < patch.nv(); ++j) {
        const double sv = (patch.v_at(j) - d.v0) / (d.v1 - d.v0);
        for (int i = 0; i < patch.nu(); ++i) {
            const double su = (patch.u_at(i) - d.u0) / (d.u1 - d.u0);
            const double fu = patch.periodic_u() ? 1.0 : bump(su);
            out[patch.node(i, j)] = patch.on_boundary(i, j) ? 0.0 : fu * bump(sv);
        }
    }
    return out;
}

}  // namespace anisomin
