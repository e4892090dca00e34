#include "anisomin/graph_solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "anisomin/error.hpp"

namespace anisomin {

namespace {

struct Coefficients {
    double a11 = 1.0;
    double a12 = 0.0;
    double a22 = 1.0;
};

struct Stencil {
    double ux, uy, uxx, uxy, uyy;
};

Stencil stencil_at(const std::vector<double>& u, int nx, double hx, double hy, int i, int j) {
    auto at = [&](int a, int b) { return u[static_cast<std::size_t>(b * nx + a)]; };
    Stencil s;
    s.ux = (at(i + 1, j) - at(i - 1, j)) / (2.0 * hx);
    s.uy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * hy);
    s.uxx = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / (hx * hx);
    s.uyy = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / (hy * hy);
    s.uxy = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) / (4.0 * hx * hy);
    return s;
}

Coefficients coefficients(const IntegrandSpec& spec, double ux, double uy) {
    const Mat3 h = gamma_bar_hessian(spec, Vec3(-ux, -uy, 1.0));
    return {h(0, 0), 0.5 * (h(0, 1) + h(1, 0)), h(1, 1)};
}

void check_elliptic(const Coefficients& c, int i, int j) {
    const double tr = c.a11 + c.a22;
    const double disc = std::sqrt((c.a11 - c.a22) * (c.a11 - c.a22) + 4.0 * c.a12 * c.a12);
    if (!(0.5 * (tr - disc) >= 1e-10)) {
        throw Error(ErrorCode::EllipticityLoss,
                    "coefficient matrix not positive at node (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
}

double linf(const std::vector<double>& r) {
    double m = 0.0;
    for (double x : r) m = std::max(m, std::abs(x));
    return m;
}

// Frozen coefficients at every interior node; identity when `spec` is null.
std::vector<Coefficients> frozen(const std::vector<double>& u, const GraphProblem& p, const IntegrandSpec* spec) {
    std::vector<Coefficients> c(u.size());
    if (!spec) return c;
    const double hx = p.hx(), hy = p.hy();
    for (int j = 1; j + 1 < p.ny; ++j) {
        for (int i = 1; i + 1 < p.nx; ++i) {
            const Stencil s = stencil_at(u, p.nx, hx, hy, i, j);
            Coefficients& cc = c[static_cast<std::size_t>(j * p.nx + i)];
            cc = coefficients(*spec, s.ux, s.uy);
            check_elliptic(cc, i, j);
        }
    }
    return c;
}

std::vector<double> apply(const std::vector<double>& u, const GraphProblem& p, const std::vector<Coefficients>& c) {
    std::vector<double> r(u.size(), 0.0);
    const double hx = p.hx(), hy = p.hy();
    for (int j = 1; j + 1 < p.ny; ++j) {
        for (int i = 1; i + 1 < p.nx; ++i) {
            const std::size_t k = static_cast<std::size_t>(j * p.nx + i);
            const Stencil s = stencil_at(u, p.nx, hx, hy, i, j);
            r[k] = c[k].a11 * s.uxx + 2.0 * c[k].a12 * s.uxy + c[k].a22 * s.uyy;
        }
    }
    return r;
}

// Interior-to-interior matrix of the frozen operator (corrections vanish on the boundary).
Eigen::SparseMatrix<double> frozen_matrix(const GraphProblem& p, const std::vector<Coefficients>& c) {
    const int mx = p.nx - 2, my = p.ny - 2;
    const double hx = p.hx(), hy = p.hy();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(9 * mx * my));
    auto col = [&](int i, int j) { return (j - 1) * mx + (i - 1); };
    for (int j = 1; j + 1 < p.ny; ++j) {
        for (int i = 1; i + 1 < p.nx; ++i) {
            const Coefficients& cc = c[static_cast<std::size_t>(j * p.nx + i)];
            const int row = col(i, j);
            auto add = [&](int a, int b, double w) {
                if (a <= 0 || b <= 0 || a >= p.nx - 1 || b >= p.ny - 1 || w == 0.0) return;
                trips.emplace_back(row, col(a, b), w);
            };
            const double cx = cc.a11 / (hx * hx);
            const double cy = cc.a22 / (hy * hy);
            const double cxy = 2.0 * cc.a12 / (4.0 * hx * hy);
            add(i, j, -2.0 * cx - 2.0 * cy);
            add(i + 1, j, cx);
            add(i - 1, j, cx);
            add(i, j + 1, cy);
            add(i, j - 1, cy);
            add(i + 1, j + 1, cxy);
            add(i - 1, j - 1, cxy);
            add(i + 1, j - 1, -cxy);
            add(i - 1, j + 1, -cxy);
        }
    }
    Eigen::SparseMatrix<double> m(mx * my, mx * my);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

class CorrectionSolver {
public:
    explicit CorrectionSolver(const GraphProblem& p) : p_(p) {}

    // u + delta with delta solving L delta = -r on the interior.
    std::vector<double> step(const std::vector<double>& u, const std::vector<Coefficients>& c,
                             const std::vector<double>& r, double theta) {
        const Eigen::SparseMatrix<double> m = frozen_matrix(p_, c);
        if (!analyzed_) {
            lu_.analyzePattern(m);
            analyzed_ = true;
        }
        lu_.factorize(m);
        if (lu_.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "sparse LU factorisation failed");
        const int mx = p_.nx - 2;
        Eigen::VectorXd rhs(m.rows());
        for (int j = 1; j + 1 < p_.ny; ++j)
            for (int i = 1; i + 1 < p_.nx; ++i) rhs((j - 1) * mx + (i - 1)) = -r[static_cast<std::size_t>(j * p_.nx + i)];
        const Eigen::VectorXd delta = lu_.solve(rhs);
        if (lu_.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "sparse LU solve failed");
        std::vector<double> out = u;
        for (int j = 1; j + 1 < p_.ny; ++j)
            for (int i = 1; i + 1 < p_.nx; ++i) out[static_cast<std::size_t>(j * p_.nx + i)] += theta * delta((j - 1) * mx + (i - 1));
        return out;
    }

private:
    const GraphProblem& p_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    bool analyzed_ = false;
};

// Boundary values with a Coons-patch interior: exact for bilinear data.
std::vector<double> transfinite_guess(const GraphProblem& p) {
    std::vector<double> u(static_cast<std::size_t>(p.nx * p.ny));
    const double x0 = p.domain.u0, x1 = p.domain.u1, y0 = p.domain.v0, y1 = p.domain.v1;
    const auto& g = p.boundary_data;
    const double c00 = g(x0, y0), c10 = g(x1, y0), c01 = g(x0, y1), c11 = g(x1, y1);
    for (int j = 0; j < p.ny; ++j) {
        const double y = p.y_at(j);
        const double t = static_cast<double>(j) / (p.ny - 1);
        for (int i = 0; i < p.nx; ++i) {
            const double x = p.x_at(i);
            const double s = static_cast<double>(i) / (p.nx - 1);
            double v;
            if (p.on_boundary(i, j)) {
                v = g(x, y);
            } else {
                v = (1 - t) * g(x, y0) + t * g(x, y1) + (1 - s) * g(x0, y) + s * g(x1, y) -
                    ((1 - s) * (1 - t) * c00 + s * (1 - t) * c10 + (1 - s) * t * c01 + s * t * c11);
            }
            u[static_cast<std::size_t>(j * p.nx + i)] = v;
        }
    }
    return u;
}

}  // namespace

void GraphProblem::validate() const {
    if (nx < 8 || ny < 8) throw Error(ErrorCode::InvalidArgument, "graph grid must be at least 8x8");
    if (!(domain.u1 > domain.u0) || !(domain.v1 > domain.v0)) throw Error(ErrorCode::InvalidArgument, "empty domain");
    if (!boundary_data) throw Error(ErrorCode::InvalidArgument, "missing boundary data");
    if (!(damping > 0.0 && damping <= 1.0)) throw Error(ErrorCode::InvalidArgument, "damping must lie in (0, 1]");
    if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be positive");
}

std::vector<double> graph_residual(const std::vector<double>& u, const GraphProblem& problem) {
    if (u.size() != static_cast<std::size_t>(problem.nx * problem.ny)) {
        throw Error(ErrorCode::InvalidArgument, "field size does not match the grid");
    }
    return apply(u, problem, frozen(u, problem, &problem.spec));
}

std::vector<double> harmonic_extension(const GraphProblem& problem) {
    problem.validate();
    const std::vector<double> u = transfinite_guess(problem);
    const std::vector<Coefficients> id = frozen(u, problem, nullptr);
    CorrectionSolver solver(problem);
    return solver.step(u, id, apply(u, problem, id), 1.0);
}

GraphSolution solve_graph(const GraphProblem& problem, const std::optional<std::vector<double>>& u0) {
    problem.validate();
    GraphSolution sol;
    sol.domain = problem.domain;
    sol.nx = problem.nx;
    sol.ny = problem.ny;
    sol.integrand = problem.spec.to_string();

    std::vector<double> u;
    if (u0) {
        if (u0->size() != static_cast<std::size_t>(problem.nx * problem.ny)) {
            throw Error(ErrorCode::InvalidArgument, "initial field size does not match the grid");
        }
        u = *u0;
        for (int j = 0; j < problem.ny; ++j)
            for (int i = 0; i < problem.nx; ++i)
                if (problem.on_boundary(i, j)) u[static_cast<std::size_t>(j * problem.nx + i)] = problem.boundary_data(problem.x_at(i), problem.y_at(j));
    } else {
        u = harmonic_extension(problem);
    }

    std::vector<Coefficients> c = frozen(u, problem, &problem.spec);
    std::vector<double> r = apply(u, problem, c);
    double res = linf(r);
    sol.residual_history.push_back(res);

    CorrectionSolver solver(problem);
    double theta = problem.damping;
    while (sol.iterations < problem.max_iter) {
        const std::vector<double> trial = solver.step(u, c, r, theta);
        const std::vector<Coefficients> tc = frozen(trial, problem, &problem.spec);
        const std::vector<double> tr = apply(trial, problem, tc);
        const double tres = linf(tr);
        if (tres < res || tres <= problem.tol) {
            u = trial;
            c = tc;
            r = tr;
            res = tres;
            ++sol.iterations;
            sol.residual_history.push_back(res);
            if (res <= problem.tol) {
                sol.converged = true;
                break;
            }
        } else {
            theta *= 0.5;
            if (theta < 1.0 / 1024.0) break;
        }
    }
    sol.u = std::move(u);
    sol.residual_linf = res;
    return sol;
}

namespace {

// Nodal derivative fields on the interior nodes, bilinearly interpolated.
class GraphChart final : public Chart {
public:
    explicit GraphChart(const GraphSolution& s)
        : x0_(s.domain.u0 + s.hx()), y0_(s.domain.v0 + s.hy()), hx_(s.hx()), hy_(s.hy()), mx_(s.nx - 2), my_(s.ny - 2) {
        for (auto& f : fields_) f.resize(static_cast<std::size_t>(mx_ * my_));
        for (int j = 1; j + 1 < s.ny; ++j) {
            for (int i = 1; i + 1 < s.nx; ++i) {
                const Stencil st = stencil_at(s.u, s.nx, hx_, hy_, i, j);
                const std::size_t k = static_cast<std::size_t>((j - 1) * mx_ + (i - 1));
                fields_[0][k] = s.at(i, j);
                fields_[1][k] = st.ux;
                fields_[2][k] = st.uy;
                fields_[3][k] = st.uxx;
                fields_[4][k] = st.uxy;
                fields_[5][k] = st.uyy;
            }
        }
    }

    ChartJet jet(double x, double y) const override {
        const double fx = std::clamp((x - x0_) / hx_, 0.0, static_cast<double>(mx_ - 1));
        const double fy = std::clamp((y - y0_) / hy_, 0.0, static_cast<double>(my_ - 1));
        const int i = std::min(static_cast<int>(fx), mx_ - 2);
        const int j = std::min(static_cast<int>(fy), my_ - 2);
        const double s = fx - i, t = fy - j;
        double v[6];
        for (int f = 0; f < 6; ++f) {
            auto at = [&](int a, int b) { return fields_[f][static_cast<std::size_t>(b * mx_ + a)]; };
            v[f] = (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + (1 - s) * t * at(i, j + 1) +
                   s * t * at(i + 1, j + 1);
        }
        ChartJet jt;
        jt.x = {x, y, v[0]};
        jt.xu = {1.0, 0.0, v[1]};
        jt.xv = {0.0, 1.0, v[2]};
        jt.xuu = {0.0, 0.0, v[3]};
        jt.xuv = {0.0, 0.0, v[4]};
        jt.xvv = {0.0, 0.0, v[5]};
        return jt;
    }

private:
    double x0_, y0_, hx_, hy_;
    int mx_, my_;
    std::vector<double> fields_[6];
};

}  // namespace

SurfacePatch lift(const GraphSolution& solution) {
    if (!solution.converged) {
        throw Error(ErrorCode::NonConvergence,
                    "cannot lift an unconverged solution (residual " + std::to_string(solution.residual_linf) + ")");
    }
    if (solution.nx < 8 || solution.ny < 8) throw Error(ErrorCode::InvalidArgument, "graph grid too small");
    const double hx = solution.hx(), hy = solution.hy();
    const ParamRect inner{solution.domain.u0 + hx, solution.domain.u1 - hx, solution.domain.v0 + hy,
                          solution.domain.v1 - hy};
    PatchTopology topo;
    topo.name = "graph";
    // A graph over a rectangle has a genuine boundary: no side is an end.
    topo.side_end = {-1, -1, -1, -1};
    bool flat = true;
    for (double v : solution.u) flat = flat && v == solution.u.front();
    topo.planar = flat;
    return SurfacePatch(std::make_shared<GraphChart>(solution), inner, solution.nx - 2, solution.ny - 2, false, 1, topo);
}

double catenoid_graph_height(double x, double y) { return std::acosh(std::hypot(x, y)); }

BoundaryFunction parse_boundary(std::string_view text) {
    const std::size_t colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const std::size_t comma = rest.find(',');
            const std::string_view tok = rest.substr(0, comma);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                throw Error(ErrorCode::InvalidArgument, "bad boundary parameter '" + std::string(tok) + "'");
            }
            args.push_back(v);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    if (head == "zero" && args.empty()) return [](double, double) { return 0.0; };
    if (head == "linear" && args.size() == 3) {
        const double a = args[0], b = args[1], c = args[2];
        return [a, b, c](double x, double y) { return a * x + b * y + c; };
    }
    if (head == "catenoid" && args.empty()) return catenoid_graph_height;
    if (head == "sine" && args.size() == 1) {
        // Nonzero only on the lowest edge; the caller's domain fixes where that is.
        const double amp = args[0];
        return [amp](double x, double y) { return y == 0.0 ? amp * std::sin(2.0 * kPi * x) : 0.0; };
    }
    throw Error(ErrorCode::InvalidArgument, "unknown boundary data '" + std::string(text) + "'");
}

}  // namespace anisomin
