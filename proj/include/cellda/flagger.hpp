#ifndef CELLDA_FLAGGER_HPP
#define CELLDA_FLAGGER_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cellda/dataset.hpp"
#include "cellda/gaussian.hpp"

namespace cellda {

// Record of one greedy flagging run on a single case.
struct FlagStep {
    int j;          // flagged column
    double delta;   // objective decrease at flag time, >= 0
    double xhat;    // conditional expectation at flag time
    double cvar;    // conditional variance at flag time
    double stdres;  // (x_j - xhat) / sqrt(cvar)
};

struct FlagTrace {
    std::vector<FlagStep> flagged_order;
    double final_md2 = 0.0;
};

struct FlagResult {
    FlagVector w;
    FlagTrace trace;
};

// Objective decrease from flagging the unflagged, non-NA cell j of x given
// the current flag vector w: log C + log 2pi + (x_j - xhat)^2 / C - q with
// q = chi2_{1,cutoff} + log 2pi + log C.
double flag_delta(const Eigen::VectorXd& x, const FlagVector& w, int j,
                  const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                  double cutoff_prob);

// Penalized single-case objective Q(w). The per-cell penalty q_j for
// flagged non-NA cells defaults to chi2_{1,cutoff} + log 2pi + log C_j with
// C_j the conditional variance of cell j given the unflagged set o(w);
// an explicit penalty vector overrides that.
double case_objective(const Eigen::VectorXd& x, const FlagVector& w,
                      const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                      double cutoff_prob,
                      const std::optional<Eigen::VectorXd>& q = std::nullopt);

// Greedy minimization of Q over flag vectors: repeatedly flag the cell with
// the largest delta while max delta >= 0 (ties to the lowest index). NA
// cells start at w = 0 and stay excluded.
FlagResult flag_case(const Eigen::VectorXd& x, const BoolVector& na,
                     const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                     double cutoff_prob);

}  // namespace cellda

#endif
