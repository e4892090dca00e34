#include "anisomin/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "anisomin/error.hpp"

namespace anisomin {

namespace {

SparseMatrix with_diagonal(const SparseMatrix& m, const Eigen::VectorXd& d) {
    SparseMatrix out = m;
    for (Eigen::Index i = 0; i < d.size(); ++i) out.coeffRef(i, i) += d(i);
    out.makeCompressed();
    return out;
}

SparseMatrix restrict_to(const SparseMatrix& m, const std::vector<int>& nodes) {
    std::vector<int> local(static_cast<std::size_t>(m.rows()), -1);
    for (std::size_t a = 0; a < nodes.size(); ++a) local[static_cast<std::size_t>(nodes[a])] = static_cast<int>(a);
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
        const int lc = local[static_cast<std::size_t>(c)];
        if (lc < 0) continue;
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
            const int lr = local[static_cast<std::size_t>(it.row())];
            if (lr >= 0) trips.emplace_back(lr, lc, it.value());
        }
    }
    SparseMatrix out(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(nodes.size()));
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& nodes) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t a = 0; a < nodes.size(); ++a) out(static_cast<Eigen::Index>(a)) = v(nodes[a]);
    return out;
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

SparseMatrix JacobiDiscretization::jacobi_matrix() const {
    return with_diagonal(stiffness, -(mass.array() * pairing.array()).matrix());
}

SparseMatrix JacobiDiscretization::comparison_matrix() const {
    const double w = 2.0 / (lambda_gamma * lambda_gamma);
    return with_diagonal(laplace_stiffness, (w * mass.array() * k_gamma.array()).matrix());
}

std::vector<int> JacobiDiscretization::interior_nodes() const {
    std::vector<int> out;
    for (std::size_t k = 0; k < dirichlet_mask.size(); ++k)
        if (!dirichlet_mask[k]) out.push_back(static_cast<int>(k));
    return out;
}

JacobiDiscretization assemble(const SurfacePatch& patch, const IntegrandSpec& spec, double potential_sign) {
    JacobiDiscretization disc;
    disc.patch = std::make_shared<SurfacePatch>(patch);
    disc.spec = spec;
    const AnisotropyConstants ac = anisotropy_constants(spec);
    disc.lambda_gamma = ac.lambda_gamma;
    disc.Lambda_gamma = ac.Lambda_gamma;

    const int n = patch.node_count();
    const CurvatureField field = curvature_field(patch, spec);
    disc.pairing.resize(n);
    disc.mass.resize(n);
    disc.k_gamma.resize(n);
    for (auto& c : disc.normals) c.resize(n);
    disc.dirichlet_mask.assign(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) {
        const CurvatureNode& node = field.nodes[static_cast<std::size_t>(k)];
        disc.pairing(k) = potential_sign * node.aniso_pairing;
        disc.k_gamma(k) = node.K_gamma;
        for (int a = 0; a < 3; ++a) disc.normals[a](k) = node.nu(a);
        disc.dirichlet_mask[static_cast<std::size_t>(k)] = patch.on_boundary(k) ? 1 : 0;
        disc.mass(k) = node.area_weight;
    }

    std::vector<Eigen::Triplet<double>> ks, ls;
    const int cells_u = patch.periodic_u() ? patch.nu() : patch.nu() - 1;
    ks.reserve(static_cast<std::size_t>(18 * cells_u * (patch.nv() - 1)));
    ls.reserve(ks.capacity());

    for (int j = 0; j + 1 < patch.nv(); ++j) {
        for (int i = 0; i < cells_u; ++i) {
            const int ip = (i + 1) % patch.nu();
            const int ids[4] = {patch.node(i, j), patch.node(ip, j), patch.node(ip, j + 1), patch.node(i, j + 1)};
            const Vec2 pts[4] = {{patch.u_at(i), patch.v_at(j)},
                                 {patch.u_at(i + 1), patch.v_at(j)},
                                 {patch.u_at(i + 1), patch.v_at(j + 1)},
                                 {patch.u_at(i), patch.v_at(j + 1)}};
            const int tri[2][3] = {{0, 1, 2}, {0, 2, 3}};
            for (const auto& t : tri) {
                const Vec2& pa = pts[t[0]];
                Mat2 e;
                e.col(0) = pts[t[1]] - pa;
                e.col(1) = pts[t[2]] - pa;
                const double area = 0.5 * std::abs(e.determinant());
                const Mat2 einv = e.inverse();
                Eigen::Matrix<double, 3, 2> grad;
                grad.row(1) = einv.row(0);
                grad.row(2) = einv.row(1);
                grad.row(0) = -grad.row(1) - grad.row(2);

                const Vec2 centroid = (pa + pts[t[1]] + pts[t[2]]) / 3.0;
                const LocalFrame frame = local_frame(patch.jet(centroid(0), centroid(1)), patch.orientation());
                const Mat3 h = gamma_bar_hessian(spec, frame.nu);
                const Mat2 ginv = frame.metric.inverse();
                const Mat2 jhj = frame.jacobian.transpose() * h * frame.jacobian;
                Mat2 c = frame.area_element * ginv * jhj * ginv;
                c = 0.5 * (c + c.transpose()).eval();
                const Mat2 c_lap = frame.area_element * ginv;
                const Eigen::Matrix3d kt = area * grad * c * grad.transpose();
                const Eigen::Matrix3d lt = area * grad * c_lap * grad.transpose();
                for (int a = 0; a < 3; ++a) {
                    for (int b = 0; b < 3; ++b) {
                        ks.emplace_back(ids[t[a]], ids[t[b]], kt(a, b));
                        ls.emplace_back(ids[t[a]], ids[t[b]], lt(a, b));
                    }
                }
            }
        }
    }
    disc.stiffness.resize(n, n);
    disc.stiffness.setFromTriplets(ks.begin(), ks.end());
    disc.laplace_stiffness.resize(n, n);
    disc.laplace_stiffness.setFromTriplets(ls.begin(), ls.end());
    return disc;
}

std::vector<int> domain_nodes(const SurfacePatch& patch, const ParamRect& d) {
    const double period = patch.domain().u1 - patch.domain().u0;
    const bool full_u = patch.periodic_u() && (d.u1 - d.u0) >= period - 1e-9;
    const double eu = 1e-9 * patch.hu(), ev = 1e-9 * patch.hv();
    std::vector<int> out;
    for (int j = 0; j < patch.nv(); ++j) {
        const double v = patch.v_at(j);
        if (!(v > d.v0 + ev && v < d.v1 - ev)) continue;
        for (int i = 0; i < patch.nu(); ++i) {
            if (patch.on_boundary(i, j)) continue;
            if (!full_u) {
                double u = patch.u_at(i);
                if (patch.periodic_u()) {
                    u = d.u0 + std::fmod(std::fmod(u - d.u0, period) + period, period);
                }
                if (!(u > d.u0 + eu && u < d.u1 - eu)) continue;
            }
            out.push_back(patch.node(i, j));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

DirichletSpectrum dirichlet_eigs(const JacobiDiscretization& disc, int k, const std::optional<ParamRect>& domain,
                                 OperatorKind kind) {
    DirichletSpectrum out;
    out.nodes = domain ? domain_nodes(*disc.patch, *domain) : disc.interior_nodes();
    const int n = static_cast<int>(out.nodes.size());
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "domain contains no interior nodes");
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");

    const SparseMatrix full = kind == OperatorKind::Jacobi ? disc.jacobi_matrix() : disc.comparison_matrix();
    const SparseMatrix a = restrict_to(full, out.nodes);
    const Eigen::VectorXd m = gather(disc.mass, out.nodes);

    // The stiffness part is positive semidefinite, so minus the largest
    // potential bounds the spectrum from below.
    Eigen::VectorXd potential = kind == OperatorKind::Jacobi
                                    ? gather(disc.pairing, out.nodes)
                                    : (-2.0 / (disc.lambda_gamma * disc.lambda_gamma) * gather(disc.k_gamma, out.nodes));
    const double top = std::max(0.0, potential.maxCoeff());
    const double shift = -top - 0.1 * (1.0 + top);

    int kk = std::min(k, n);
    EigenPairs pairs;
    while (true) {
        pairs = lowest_eigenpairs(a, m, kk, shift);
        const double scale = pairs.values.cwiseAbs().maxCoeff();
        out.tol_zero = 1e-8 * scale;
        if (kk == n || pairs.values(kk - 1) >= -out.tol_zero) break;
        kk = std::min(2 * kk, n);
    }
    out.k = kk;
    out.eigenvalues = pairs.values;
    out.eigenvectors = pairs.vectors;
    out.negative_count = static_cast<int>((pairs.values.array() < -out.tol_zero).count());
    out.inertia_count = count_eigenvalues_below(a, m, -out.tol_zero);
    return out;
}

JacobiResidual jacobi_field_residual(const JacobiDiscretization& disc, const Vec3& axis) {
    JacobiResidual res;
    res.axis = axis;
    const Eigen::VectorXd phi = axis(0) * disc.normals[0] + axis(1) * disc.normals[1] + axis(2) * disc.normals[2];
    const Eigen::VectorXd r = disc.jacobi_matrix() * phi;
    double num = 0.0, den = 0.0;
    for (int k : disc.interior_nodes()) {
        const double strong = r(k) / disc.mass(k);
        res.linf_residual = std::max(res.linf_residual, std::abs(strong));
        num += disc.mass(k) * strong * strong;
        den += disc.mass(k) * phi(k) * phi(k);
    }
    res.relative_residual = num == 0.0 ? 0.0 : std::sqrt(num / den);
    return res;
}

SpectralReport morse_index_exhaustion(const JacobiDiscretization& disc, const std::vector<ParamRect>& domains, int k) {
    if (domains.size() < 3) throw Error(ErrorCode::InvalidArgument, "exhaustion needs at least three domains");
    SpectralReport rep;
    rep.domains = domains;
    std::vector<int> previous;
    for (std::size_t d = 0; d < domains.size(); ++d) {
        const std::vector<int> nodes = domain_nodes(*disc.patch, domains[d]);
        if (d > 0 && !is_subset(previous, nodes)) {
            throw Error(ErrorCode::InvalidArgument, "exhaustion domains are not nested on the grid");
        }
        previous = nodes;
        const DirichletSpectrum s = dirichlet_eigs(disc, k, domains[d]);
        rep.eigenvalues.emplace_back(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
        rep.morse_index.push_back(s.negative_count);
        rep.inertia_index.push_back(s.inertia_count);
        if (d > 0 && rep.morse_index[d] < rep.morse_index[d - 1]) {
            throw Error(ErrorCode::SolverFailure, "Morse index decreased along nested domains");
        }
    }
    const std::size_t last = rep.morse_index.size() - 1;
    if (rep.morse_index[last] == rep.morse_index[last - 1]) rep.stabilized_index = rep.morse_index[last];
    for (int a = 0; a < 3; ++a) rep.jacobi_residuals.push_back(jacobi_field_residual(disc, Vec3::Unit(a)));
    return rep;
}

std::vector<ComparisonCounts> comparison_operator_counts(const JacobiDiscretization& disc,
                                                         const std::vector<ParamRect>& domains, int k) {
    std::vector<ComparisonCounts> out;
    for (const ParamRect& d : domains) {
        ComparisonCounts c;
        c.neg_L = dirichlet_eigs(disc, k, d, OperatorKind::Jacobi).negative_count;
        c.neg_Lgamma = dirichlet_eigs(disc, k, d, OperatorKind::Comparison).negative_count;
        out.push_back(c);
    }
    return out;
}

double q_form(const JacobiDiscretization& disc, const Eigen::VectorXd& u) {
    return u.dot(disc.stiffness * u) - (disc.mass.array() * disc.pairing.array() * u.array().square()).sum();
}

double q_gamma_form(const JacobiDiscretization& disc, const Eigen::VectorXd& u) {
    const double w = 2.0 / (disc.lambda_gamma * disc.lambda_gamma);
    return u.dot(disc.laplace_stiffness * u) + w * (disc.mass.array() * disc.k_gamma.array() * u.array().square()).sum();
}

double mass_norm_sq(const JacobiDiscretization& disc, const Eigen::VectorXd& u) {
    return (disc.mass.array() * u.array().square()).sum();
}

}  // namespace anisomin
