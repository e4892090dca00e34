#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anisomin/integrand.hpp"
#include "anisomin/surface.hpp"

namespace anisomin {

using BoundaryFunction = std::function<double(double x, double y)>;

/// Dirichlet problem for sum_ij gamma_bar_ij(-grad u, 1) u_ij = 0 on a rectangle.
/// Nodes are row-major with y as the slow index: k = j * nx + i.
struct GraphProblem {
    ParamRect domain{0.0, 1.0, 0.0, 1.0};
    int nx = 33;
    int ny = 33;
    BoundaryFunction boundary_data;
    IntegrandSpec spec = IntegrandSpec::constant(1.0);
    double tol = 1e-10;
    int max_iter = 200;
    double damping = 1.0;

    double hx() const { return (domain.u1 - domain.u0) / (nx - 1); }
    double hy() const { return (domain.v1 - domain.v0) / (ny - 1); }
    double x_at(int i) const { return domain.u0 + i * hx(); }
    double y_at(int j) const { return domain.v0 + j * hy(); }
    bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx - 1 || j == ny - 1; }

    // Throws InvalidArgument for grids below 8x8, a missing boundary function
    // or damping outside (0, 1].
    void validate() const;
};

struct GraphSolution {
    ParamRect domain;
    int nx = 0;
    int ny = 0;
    std::vector<double> u;
    double residual_linf = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;  // residual_linf after the initial guess and each accepted step
    std::string integrand;

    double hx() const { return (domain.u1 - domain.u0) / (nx - 1); }
    double hy() const { return (domain.v1 - domain.v0) / (ny - 1); }
    double at(int i, int j) const { return u[static_cast<std::size_t>(j * nx + i)]; }
};

/// Pointwise operator at interior nodes with central differences and the
/// four-point cross stencil for u_xy. Boundary entries are zero.
std::vector<double> graph_residual(const std::vector<double>& u, const GraphProblem& problem);

/// Discrete harmonic extension of the boundary data (same stencils, identity
/// coefficients).
std::vector<double> harmonic_extension(const GraphProblem& problem);

/// Frozen-coefficient iteration. Each step solves the linearised Dirichlet
/// problem for the correction with a sparse LU; the damping factor halves
/// whenever a step would raise the residual. Running out of iterations gives
/// converged = false with the best iterate. Throws EllipticityLoss.
GraphSolution solve_graph(const GraphProblem& problem, const std::optional<std::vector<double>>& u0 = std::nullopt);

/// Graph (x, y, u) over the interior nodes, where the discrete equation holds.
/// Derivatives come from the same central stencils, bilinearly interpolated
/// between nodes. Throws NonConvergence for an unconverged solution.
SurfacePatch lift(const GraphSolution& solution);

/// acosh(sqrt(x^2 + y^2)): the upper half of the unit catenoid as a graph.
double catenoid_graph_height(double x, double y);

/// `zero` | `linear:a,b,c` (a x + b y + c) | `catenoid` | `sine:A` (A sin(2 pi x)
/// along y = y0, zero elsewhere). Throws InvalidArgument.
BoundaryFunction parse_boundary(std::string_view text);

}  // namespace anisomin
