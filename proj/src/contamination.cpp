#include "cellda/contamination.hpp"

#include <cmath>

#include "cellda/errors.hpp"
#include "cellda/stats.hpp"

namespace cellda {

double estimate_p(int m, int n_eff) {
    if (n_eff <= 0) throw data_error("estimate_p: no non-NA cells in column");
    double p = std::max(0.01, static_cast<double>(m) / static_cast<double>(n_eff));
    // Keep log(1 - p) finite when every cell of a column got flagged.
    double cap = 1.0 - 1.0 / (2.0 * static_cast<double>(n_eff));
    return std::min(p, cap);
}

double alpha_default(const Eigen::MatrixXd& sigma, int j) {
    Eigen::MatrixXd prec =
        sigma.llt().solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
    double c = normal_quantile(0.995) / std::log(100.0);
    return c * std::sqrt(1.0 / prec(j, j));
}

Eigen::VectorXd alpha_defaults(const Eigen::MatrixXd& sigma) {
    Eigen::MatrixXd prec =
        sigma.llt().solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
    double c = normal_quantile(0.995) / std::log(100.0);
    Eigen::VectorXd out(sigma.rows());
    for (Eigen::Index j = 0; j < sigma.rows(); ++j)
        out[j] = c * std::sqrt(1.0 / prec(j, j));
    return out;
}

double estimate_alpha(int m, double s, int n_g, double alpha0) {
    if (m == 0) return alpha0;
    double tau = std::min(1.0, static_cast<double>(n_g) / 100.0);
    double mle = s / static_cast<double>(m);
    return (tau * alpha0 + static_cast<double>(m) * mle) / (tau + static_cast<double>(m));
}

void estimate_class_contamination(const Eigen::MatrixXd& values,
                                  const BoolMatrix& na,
                                  const Eigen::MatrixXi& flags_w,
                                  const Eigen::VectorXd& mu,
                                  const Eigen::MatrixXd& sigma,
                                  Eigen::VectorXd& p_out, Eigen::VectorXd& alpha_out) {
    const Eigen::Index n = values.rows(), d = values.cols();
    Eigen::VectorXd a0 = alpha_defaults(sigma);
    p_out.resize(d);
    alpha_out.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        int m = 0, n_eff = 0;
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (na(i, j)) continue;
            ++n_eff;
            if (flags_w(i, j) == 0) {
                ++m;
                s += std::abs(values(i, j) - mu[j]);
            }
        }
        p_out[j] = estimate_p(m, n_eff);
        alpha_out[j] = estimate_alpha(m, s, static_cast<int>(n), a0[j]);
    }
}

}  // namespace cellda
