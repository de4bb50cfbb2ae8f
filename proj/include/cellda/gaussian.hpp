#ifndef CELLDA_GAUSSIAN_HPP
#define CELLDA_GAUSSIAN_HPP

#include <Eigen/Dense>
#include <vector>

#include "cellda/dataset.hpp"

namespace cellda {

// Cholesky factorization of a principal submatrix Sigma^(o), cached
// together with its log-determinant. o must be sorted.
struct SubsetWorkspace {
    std::vector<int> o;
    Eigen::LLT<Eigen::MatrixXd> chol;
    double logdet = 0.0;

    SubsetWorkspace(const Eigen::MatrixXd& sigma, std::vector<int> indices);

    // Solve Sigma^(o) y = b.
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return chol.solve(b); }
};

// Gather helpers.
Eigen::VectorXd subset(const Eigen::VectorXd& v, const std::vector<int>& idx);
Eigen::MatrixXd subset(const Eigen::MatrixXd& m, const std::vector<int>& idx);

// Partial squared Mahalanobis distance on the unflagged coordinates.
// Empty o(w) returns 0 by convention.
double partial_md2(const Eigen::VectorXd& x, const FlagVector& w,
                   const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma);
double partial_md2(const Eigen::VectorXd& x, const std::vector<int>& o,
                   const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma);

// log |Sigma^(o)|; empty o returns 0 by convention.
double subset_logdet(const Eigen::MatrixXd& sigma, const std::vector<int>& o);

struct ConditionalMoments {
    double xhat;  // conditional expectation of cell j
    double cvar;  // conditional variance C_j > 0
};

// Moments of x_j given x restricted to o_minus_j (which must not contain j).
// Empty conditioning set yields (mu_j, Sigma_jj).
ConditionalMoments conditional_moments(int j, const std::vector<int>& o_minus_j,
                                       const Eigen::VectorXd& mu,
                                       const Eigen::MatrixXd& sigma,
                                       const Eigen::VectorXd& x);

// For every j in o, the moments of x_j given the other coordinates of o.
// One factorization of Sigma^(o) serves all j via the precision matrix.
std::vector<ConditionalMoments> conditional_moments_all(
    const std::vector<int>& o, const Eigen::VectorXd& mu,
    const Eigen::MatrixXd& sigma, const Eigen::VectorXd& x);

// Multivariate normal log-density restricted to the unflagged coordinates.
// Empty o(w) returns 0 (density of an empty vector is 1).
double subset_normal_logpdf(const Eigen::VectorXd& x, const FlagVector& w,
                            const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma);

}  // namespace cellda

#endif
