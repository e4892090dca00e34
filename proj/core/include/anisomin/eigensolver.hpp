#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace anisomin {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct EigenPairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns, mass-orthonormal, first significant entry positive
    int basis_size = 0;
};

/// Lowest k eigenpairs of A x = mu diag(mass) x for symmetric A and positive
/// mass. `lower_bound` must lie strictly below the spectrum: it is the shift of
/// the inverted operator. Block Krylov with full reorthogonalisation followed
/// by Rayleigh-Ritz on A. Throws SolverFailure.
EigenPairs lowest_eigenpairs(const SparseMatrix& A, const Eigen::VectorXd& mass, int k, double lower_bound);

/// Number of eigenvalues of A x = mu diag(mass) x strictly below `shift`,
/// read off the signs of an LDL^T factorisation (Sylvester's law of inertia).
int count_eigenvalues_below(const SparseMatrix& A, const Eigen::VectorXd& mass, double shift);

}  // namespace anisomin
