#ifndef CELLDA_CELLMCD_HPP
#define CELLDA_CELLMCD_HPP

#include <Eigen/Dense>
#include <vector>

#include "cellda/dataset.hpp"

namespace cellda {

struct CellMcdConfig {
    double h_fraction = 0.75;  // in (0.5, 1]
    double eig_floor = 1e-4;   // eigenvalue floor a, standardized scale
    double cutoff_prob = 0.99;
    int max_iter = 100;
    double tol = 1e-6;  // relative objective change
};

struct CellMcdFit {
    Eigen::VectorXd mu;     // original scale
    Eigen::MatrixXd sigma;  // original scale, SPD
    Eigen::MatrixXi W;      // n x d, 1 = unflagged, 0 = flagged or NA
    BoolMatrix na;
    std::vector<double> objective_trace;  // non-increasing
    Eigen::MatrixXd predicted_cells;      // conditional expectations for w = 0 cells
    Eigen::MatrixXd standardized_residuals;  // for flagged cells, 0 elsewhere
    Eigen::VectorXd std_loc;
    Eigen::VectorXd std_scale;
    int iterations = 0;
};

// Penalized negative log-likelihood: sum over rows of the observed Gaussian
// deviance plus sum_j q_j * (# flagged non-NA cells in column j).
double cellmcd_objective(const Eigen::MatrixXd& X, const Eigen::MatrixXi& W,
                         const BoolMatrix& na, const Eigen::VectorXd& mu,
                         const Eigen::MatrixXd& sigma, const Eigen::VectorXd& q);

// Alternating estimation of (mu, Sigma, W) for one class. Columns are
// standardized internally by median and MAD; a constant column is an error.
CellMcdFit cellmcd_fit_class(const DataSet& data, const CellMcdConfig& cfg);

// Same scheme with the center pinned to 0, for pooled LDA residuals.
CellMcdFit cellmcd_fit_pooled(const DataSet& residuals, const CellMcdConfig& cfg);

}  // namespace cellda

#endif
