#include "cellda/flagger.hpp"

#include <cmath>

#include "cellda/errors.hpp"
#include "cellda/stats.hpp"

namespace cellda {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

double flag_delta(const Eigen::VectorXd& x, const FlagVector& w, int j,
                  const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                  double cutoff_prob) {
    if (w.w[j] != 1) throw numeric_error("flag_delta: cell already flagged");
    std::vector<int> o_minus_j;
    for (int k = 0; k < w.d(); ++k)
        if (w.w[k] == 1 && k != j) o_minus_j.push_back(k);
    ConditionalMoments cm = conditional_moments(j, o_minus_j, mu, sigma, x);
    double r2 = (x[j] - cm.xhat) * (x[j] - cm.xhat) / cm.cvar;
    double q = chi2_quantile(cutoff_prob, 1) + kLog2Pi + std::log(cm.cvar);
    return std::log(cm.cvar) + kLog2Pi + r2 - q;
}

double case_objective(const Eigen::VectorXd& x, const FlagVector& w,
                      const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                      double cutoff_prob, const std::optional<Eigen::VectorXd>& q) {
    std::vector<int> o = w.observed();
    double obj = 0.0;
    if (!o.empty()) {
        SubsetWorkspace ws(sigma, o);
        Eigen::VectorXd r = subset(x, o) - subset(mu, o);
        obj = ws.logdet + static_cast<double>(o.size()) * kLog2Pi + r.dot(ws.solve(r));
    }
    double chi1 = chi2_quantile(cutoff_prob, 1);
    for (int j = 0; j < w.d(); ++j) {
        if (w.w[j] != 0 || w.na[j]) continue;  // NA carries no penalty
        if (q) {
            obj += (*q)[j];
        } else {
            ConditionalMoments cm = conditional_moments(j, o, mu, sigma, x);
            obj += chi1 + kLog2Pi + std::log(cm.cvar);
        }
    }
    return obj;
}

FlagResult flag_case(const Eigen::VectorXd& x, const BoolVector& na,
                     const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                     double cutoff_prob) {
    const int d = static_cast<int>(x.size());
    FlagResult res;
    res.w = FlagVector(d);
    for (int j = 0; j < d; ++j) {
        if (na[j]) {
            res.w.na[j] = true;
            res.w.w[j] = 0;
        }
    }
    const double chi1 = chi2_quantile(cutoff_prob, 1);

    std::vector<int> o = res.w.observed();
    while (!o.empty()) {
        // Fresh conditional moments of every candidate given the rest of o.
        std::vector<ConditionalMoments> cm;
        if (o.size() == 1) {
            cm.push_back({mu[o[0]], sigma(o[0], o[0])});
        } else {
            cm = conditional_moments_all(o, mu, sigma, x);
        }
        int best = -1;
        double best_delta = 0.0;
        ConditionalMoments best_cm{0.0, 1.0};
        for (size_t k = 0; k < o.size(); ++k) {
            double r2 = (x[o[k]] - cm[k].xhat) * (x[o[k]] - cm[k].xhat) / cm[k].cvar;
            double delta = r2 - chi1;  // q cancels the log C + log 2pi terms
            if (delta >= 0.0 && (best < 0 || delta > best_delta)) {
                best = static_cast<int>(k);
                best_delta = delta;
                best_cm = cm[k];
            }
        }
        if (best < 0) break;
        int j = o[static_cast<size_t>(best)];
        double stdres = (x[j] - best_cm.xhat) / std::sqrt(best_cm.cvar);
        res.trace.flagged_order.push_back({j, best_delta, best_cm.xhat, best_cm.cvar, stdres});
        res.w.w[j] = 0;
        o.erase(o.begin() + best);
    }
    res.trace.final_md2 = partial_md2(x, o, mu, sigma);
    return res;
}

}  // namespace cellda
