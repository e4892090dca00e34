#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "anisomin/eigensolver.hpp"
#include "anisomin/integrand.hpp"
#include "anisomin/surface.hpp"

namespace anisomin {

/// P1 elements on the triangulated parameter grid. Stiffness uses one-point
/// (centroid) quadrature; mass and potentials are lumped at the nodes.
struct JacobiDiscretization {
    std::shared_ptr<const SurfacePatch> patch;
    IntegrandSpec spec = IntegrandSpec::constant(1.0);
    SparseMatrix stiffness;          // int <A_gamma grad u, grad v>
    SparseMatrix laplace_stiffness;  // int <grad u, grad v>
    Eigen::VectorXd mass;            // lumped int u v
    Eigen::VectorXd pairing;         // <A_gamma S, S> per node
    Eigen::VectorXd k_gamma;         // K_gamma per node
    Eigen::VectorXd normals[3];      // nodal unit normal components
    std::vector<char> dirichlet_mask;
    double lambda_gamma = 1.0;
    double Lambda_gamma = 1.0;

    // stiffness - diag(mass * pairing)
    SparseMatrix jacobi_matrix() const;
    // laplace_stiffness + diag(mass * (2 / lambda^2) K_gamma)
    SparseMatrix comparison_matrix() const;
    // Dirichlet interior of the whole patch.
    std::vector<int> interior_nodes() const;
};

/// `potential_sign` = -1 flips the zeroth-order term (used by the self-test).
JacobiDiscretization assemble(const SurfacePatch& patch, const IntegrandSpec& spec, double potential_sign = 1.0);

/// Interior nodes of the parameter sub-rectangle, snapped to the grid. A
/// u-range spanning a full period of a periodic patch keeps every column.
std::vector<int> domain_nodes(const SurfacePatch& patch, const ParamRect& domain);

enum class OperatorKind { Jacobi, Comparison };

struct DirichletSpectrum {
    std::vector<int> nodes;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // rows follow `nodes`
    double tol_zero = 0.0;
    int negative_count = 0;        // eigenvalues below -tol_zero
    int inertia_count = 0;         // same count from LDL^T signs
    int k = 0;
};

/// Lowest k Dirichlet eigenpairs on `domain` (whole patch interior when
/// absent). k doubles while the k-th eigenvalue is still negative.
DirichletSpectrum dirichlet_eigs(const JacobiDiscretization& disc, int k,
                                 const std::optional<ParamRect>& domain = std::nullopt,
                                 OperatorKind kind = OperatorKind::Jacobi);

struct JacobiResidual {
    Vec3 axis = Vec3::UnitZ();
    double linf_residual = 0.0;
    double relative_residual = 0.0;
};

/// Weak residual of phi = <nu, axis> on interior rows, divided by the lumped mass.
JacobiResidual jacobi_field_residual(const JacobiDiscretization& disc, const Vec3& axis);

struct SpectralReport {
    std::vector<ParamRect> domains;
    std::vector<std::vector<double>> eigenvalues;
    std::vector<int> morse_index;
    std::vector<int> inertia_index;
    std::optional<int> stabilized_index;
    std::vector<JacobiResidual> jacobi_residuals;
};

/// Per-domain Morse index on nested domains (at least three). Throws
/// InvalidArgument when the node sets are not nested and SolverFailure if the
/// counts ever decrease.
SpectralReport morse_index_exhaustion(const JacobiDiscretization& disc, const std::vector<ParamRect>& domains,
                                      int k = 12);

struct ComparisonCounts {
    int neg_L = 0;
    int neg_Lgamma = 0;
};

std::vector<ComparisonCounts> comparison_operator_counts(const JacobiDiscretization& disc,
                                                         const std::vector<ParamRect>& domains, int k = 12);

// Quadratic forms on full nodal vectors.
double q_form(const JacobiDiscretization& disc, const Eigen::VectorXd& u);
double q_gamma_form(const JacobiDiscretization& disc, const Eigen::VectorXd& u);
double mass_norm_sq(const JacobiDiscretization& disc, const Eigen::VectorXd& u);

}  // namespace anisomin
