#include "anisomin/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "anisomin/error.hpp"

namespace anisomin {

namespace {

constexpr int kBlock = 4;
constexpr int kDenseLimit = 400;
constexpr int kMaxRestarts = 30;

void normalize_signs(Eigen::MatrixXd& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        const double big = v.col(c).cwiseAbs().maxCoeff();
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            if (std::abs(v(r, c)) > 1e-8 * big) {
                if (v(r, c) < 0.0) v.col(c) *= -1.0;
                break;
            }
        }
    }
}

EigenPairs dense_pairs(const SparseMatrix& b, const Eigen::VectorXd& dinv, int k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(b.toDense()));
    if (es.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "dense eigensolver failed");
    EigenPairs out;
    out.values = es.eigenvalues().head(k);
    out.vectors = dinv.asDiagonal() * es.eigenvectors().leftCols(k);
    out.basis_size = static_cast<int>(b.rows());
    return out;
}

}  // namespace

EigenPairs lowest_eigenpairs(const SparseMatrix& A, const Eigen::VectorXd& mass, int k, double lower_bound) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || mass.size() != n) throw Error(ErrorCode::InvalidArgument, "eigenproblem size mismatch");
    if (k < 1 || k > n) throw Error(ErrorCode::InvalidArgument, "k must lie in [1, n]");
    if ((mass.array() <= 0.0).any()) throw Error(ErrorCode::InvalidArgument, "mass must be positive");

    const Eigen::VectorXd dinv = mass.cwiseSqrt().cwiseInverse();
    SparseMatrix b = dinv.asDiagonal() * A * dinv.asDiagonal();
    b = 0.5 * (b + SparseMatrix(b.transpose()));

    EigenPairs out;
    if (n <= kDenseLimit) {
        out = dense_pairs(b, dinv, k);
        normalize_signs(out.vectors);
        return out;
    }

    SparseMatrix shifted = b;
    for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= lower_bound;
    Eigen::SimplicialLLT<SparseMatrix> llt(shifted);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::SolverFailure, "shift is not below the spectrum (Cholesky failed)");
    }

    const int max_basis = static_cast<int>(std::min<Eigen::Index>(n, std::max(10 * k + 60, 160)));
    Eigen::MatrixXd q(n, max_basis);
    Eigen::MatrixXd bq(n, max_basis);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(max_basis, max_basis);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal;
    auto random_vector = [&] {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
        return v;
    };

    Eigen::MatrixXd w(n, kBlock);
    for (int c = 0; c < kBlock; ++c) w.col(c) = random_vector();

    int m = 0;
    int restarts = 0;
    while (true) {
        const int start = m;
        for (int c = 0; c < kBlock && m < max_basis; ++c) {
            Eigen::VectorXd v = w.col(c);
            for (int attempt = 0; attempt < 3; ++attempt) {
                const double before = v.norm();
                for (int pass = 0; pass < 2 && m > 0; ++pass) v -= q.leftCols(m) * (q.leftCols(m).transpose() * v);
                const double after = v.norm();
                if (after > 1e-10 * before && after > 0.0) {
                    v /= after;
                    break;
                }
                v = random_vector();
                if (attempt == 2) throw Error(ErrorCode::SolverFailure, "Krylov basis breakdown");
            }
            q.col(m) = v;
            bq.col(m) = b * v;
            ++m;
        }
        g.block(0, start, m, m - start) = q.leftCols(m).transpose() * bq.middleCols(start, m - start);
        g.block(start, 0, m - start, start) = g.block(0, start, start, m - start).transpose();

        if (m >= std::min<Eigen::Index>(n, k + kBlock)) {
            Eigen::MatrixXd gm = g.topLeftCorner(m, m);
            gm = 0.5 * (gm + gm.transpose()).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm);
            const Eigen::MatrixXd s = es.eigenvectors().leftCols(k);
            const Eigen::VectorXd theta = es.eigenvalues().head(k);
            const Eigen::MatrixXd y = q.leftCols(m) * s;
            const Eigen::MatrixXd r = bq.leftCols(m) * s - y * theta.asDiagonal();
            Eigen::VectorXd excess(k);
            for (int c = 0; c < k; ++c) {
                excess(c) = r.col(c).norm() / (1e-9 * (std::abs(theta(c)) + std::abs(lower_bound) + 1.0));
            }
            if ((excess.array() <= 1.0).all()) {
                out.values = theta;
                out.vectors = dinv.asDiagonal() * y;
                out.basis_size = m;
                normalize_signs(out.vectors);
                return out;
            }
            if (m >= max_basis) {
                if (restarts == kMaxRestarts || max_basis == n) {
                    throw Error(ErrorCode::SolverFailure, "eigenpairs did not converge after " +
                                                              std::to_string(restarts) + " restarts");
                }
                // Thick restart: keep the leading Ritz vectors, then grow from
                // inverse iterates of the worst-converged ones.
                ++restarts;
                const int keep = std::min(m, k + 2 * kBlock);
                const Eigen::MatrixXd sk = es.eigenvectors().leftCols(keep);
                const Eigen::MatrixXd qk = q.leftCols(m) * sk;
                const Eigen::MatrixXd bqk = bq.leftCols(m) * sk;
                q.leftCols(keep) = qk;
                bq.leftCols(keep) = bqk;
                g.setZero();
                g.topLeftCorner(keep, keep) = es.eigenvalues().head(keep).asDiagonal();
                m = keep;
                std::vector<int> order(k);
                for (int c = 0; c < k; ++c) order[c] = c;
                std::sort(order.begin(), order.end(), [&](int a, int b2) { return excess(a) > excess(b2); });
                w.resize(n, kBlock);
                for (int c = 0; c < kBlock; ++c) w.col(c) = llt.solve(Eigen::VectorXd(qk.col(order[c % k])));
                continue;
            }
        }
        if (m >= max_basis) throw Error(ErrorCode::SolverFailure, "Krylov basis exhausted");
        w = llt.solve(q.middleCols(start, m - start));
        if (w.cols() < kBlock) {
            Eigen::MatrixXd full(n, kBlock);
            full.leftCols(w.cols()) = w;
            for (Eigen::Index c = w.cols(); c < kBlock; ++c) full.col(c) = random_vector();
            w = full;
        }
    }
}

int count_eigenvalues_below(const SparseMatrix& A, const Eigen::VectorXd& mass, double shift) {
    if (A.rows() != A.cols() || mass.size() != A.rows()) throw Error(ErrorCode::InvalidArgument, "size mismatch");
    SparseMatrix c = A;
    for (Eigen::Index i = 0; i < c.rows(); ++i) c.coeffRef(i, i) -= shift * mass(i);
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(c);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "LDL^T factorisation failed");
    const Eigen::VectorXd d = ldlt.vectorD();
    return static_cast<int>((d.array() < 0.0).count());
}

}  // namespace anisomin
