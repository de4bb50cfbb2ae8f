#ifndef CELLDA_CONTAMINATION_HPP
#define CELLDA_CONTAMINATION_HPP

#include <Eigen/Dense>

#include "cellda/dataset.hpp"

namespace cellda {

struct ContaminationEstimate {
    Eigen::MatrixXd p;        // G x d
    Eigen::MatrixXd alpha;    // G x d
    Eigen::MatrixXi m_counts; // outlier flags, NA excluded
    Eigen::MatrixXd s_sums;   // sum |x - mu| over flagged cells
    Eigen::VectorXd tau;      // per class
};

// Bernoulli contamination probability: max(0.01, m / n_eff), capped below 1.
// n_eff excludes NA cells, which carry no evidence of contamination.
double estimate_p(int m, int n_eff);

// Default Laplace scale matching the 0.995 quantiles of the Laplace and
// normal distributions: (z_{0.995} / log 100) / sqrt((Sigma^-1)_jj).
double alpha_default(const Eigen::MatrixXd& sigma, int j);
Eigen::VectorXd alpha_defaults(const Eigen::MatrixXd& sigma);

// Weighted average of the default scale and the MLE S/m, with
// tau = min(1, n_g / 100). Returns alpha0 when m = 0.
double estimate_alpha(int m, double s, int n_g, double alpha0);

// Full (p, alpha) estimation for one class from its re-flagged training
// data. flags holds one FlagVector per training row.
void estimate_class_contamination(const Eigen::MatrixXd& values,
                                  const BoolMatrix& na,
                                  const Eigen::MatrixXi& flags_w,
                                  const Eigen::VectorXd& mu,
                                  const Eigen::MatrixXd& sigma,
                                  Eigen::VectorXd& p_out, Eigen::VectorXd& alpha_out);

}  // namespace cellda

#endif
