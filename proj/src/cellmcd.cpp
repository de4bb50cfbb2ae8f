#include "cellda/cellmcd.hpp"

#include <algorithm>
#include <cmath>

#include "cellda/errors.hpp"
#include "cellda/flagger.hpp"
#include "cellda/gaussian.hpp"
#include "cellda/stats.hpp"

namespace cellda {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

std::vector<int> observed_of_row(const Eigen::MatrixXi& W, Eigen::Index i) {
    std::vector<int> o;
    for (Eigen::Index j = 0; j < W.cols(); ++j)
        if (W(i, j) == 1) o.push_back(static_cast<int>(j));
    return o;
}

Eigen::MatrixXd clamp_eigenvalues(const Eigen::MatrixXd& sigma, double floor) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    if (es.eigenvalues().minCoeff() >= floor) return 0.5 * (sigma + sigma.transpose());
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(floor);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// One EM update of (mu, Sigma) treating W = 0 cells as missing.
void em_update(const Eigen::MatrixXd& X, const Eigen::MatrixXi& W, bool fixed_center,
               double eig_floor, Eigen::VectorXd& mu, Eigen::MatrixXd& sigma) {
    const Eigen::Index n = X.rows(), d = X.cols();
    Eigen::MatrixXd xhat(n, d);
    Eigen::MatrixXd bsum = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<int> o = observed_of_row(W, i);
        std::vector<int> m;
        for (int j = 0; j < d; ++j)
            if (W(i, j) == 0) m.push_back(j);
        if (o.empty()) {
            xhat.row(i) = mu.transpose();
            bsum += sigma;
            continue;
        }
        xhat.row(i) = X.row(i);
        if (m.empty()) continue;
        SubsetWorkspace ws(sigma, o);
        Eigen::VectorXd xi = X.row(i).transpose();
        Eigen::VectorXd r = subset(xi, o) - subset(mu, o);
        Eigen::MatrixXd cross(static_cast<Eigen::Index>(m.size()),
                              static_cast<Eigen::Index>(o.size()));
        for (size_t a = 0; a < m.size(); ++a)
            for (size_t b = 0; b < o.size(); ++b)
                cross(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    sigma(m[a], o[b]);
        Eigen::MatrixXd solved = ws.chol.solve(cross.transpose());  // |o| x |m|
        Eigen::VectorXd cond_mean = subset(mu, m) + solved.transpose() * r;
        Eigen::MatrixXd cond_cov = subset(sigma, m) - cross * solved;
        for (size_t a = 0; a < m.size(); ++a) {
            xhat(i, m[a]) = cond_mean[static_cast<Eigen::Index>(a)];
            for (size_t b = 0; b < m.size(); ++b)
                bsum(m[a], m[b]) += cond_cov(static_cast<Eigen::Index>(a),
                                             static_cast<Eigen::Index>(b));
        }
    }
    if (!fixed_center) mu = xhat.colwise().mean();
    Eigen::MatrixXd centered = xhat.rowwise() - mu.transpose();
    sigma = (centered.transpose() * centered + bsum) / static_cast<double>(n);
    sigma = clamp_eigenvalues(sigma, eig_floor);
}

// Column penalty weights from the current scatter: q_j uses the conditional
// variance of coordinate j given all others, 1 / (Sigma^-1)_jj.
Eigen::VectorXd penalty_vector(const Eigen::MatrixXd& sigma, double cutoff_prob) {
    Eigen::MatrixXd prec = sigma.llt().solve(
        Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
    double chi1 = chi2_quantile(cutoff_prob, 1);
    Eigen::VectorXd q(sigma.rows());
    for (Eigen::Index j = 0; j < sigma.rows(); ++j)
        q[j] = chi1 + kLog2Pi + std::log(1.0 / prec(j, j));
    return q;
}

struct WStepResult {
    Eigen::MatrixXi W;
    Eigen::MatrixXd delta;  // objective decrease recorded at flag time
};

WStepResult w_step(const Eigen::MatrixXd& X, const BoolMatrix& na,
                   const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                   double cutoff_prob) {
    const Eigen::Index n = X.rows(), d = X.cols();
    WStepResult res;
    res.W = Eigen::MatrixXi::Ones(n, d);
    res.delta = Eigen::MatrixXd::Zero(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        FlagResult fr = flag_case(X.row(i).transpose(), na.row(i).transpose(), mu, sigma,
                                  cutoff_prob);
        for (Eigen::Index j = 0; j < d; ++j) res.W(i, j) = fr.w.w[j];
        for (const FlagStep& st : fr.trace.flagged_order) res.delta(i, st.j) = st.delta;
    }
    return res;
}

// Enforce the per-column unflag constraint by unflagging, in each over-capped
// column, the flagged cells with smallest delta (ties: lowest row first).
void enforce_column_cap(Eigen::MatrixXi& W, const Eigen::MatrixXd& delta,
                        const BoolMatrix& na, int h) {
    const Eigen::Index n = W.rows(), d = W.cols();
    for (Eigen::Index j = 0; j < d; ++j) {
        int n_na = 0;
        std::vector<Eigen::Index> flagged;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (na(i, j)) {
                ++n_na;
            } else if (W(i, j) == 0) {
                flagged.push_back(i);
            }
        }
        int unflagged = static_cast<int>(n) - n_na - static_cast<int>(flagged.size());
        int required = std::max(1, h - n_na);
        if (unflagged >= required) continue;
        std::stable_sort(flagged.begin(), flagged.end(),
                         [&](Eigen::Index a, Eigen::Index b) {
                             return delta(a, j) < delta(b, j);
                         });
        for (Eigen::Index i : flagged) {
            if (unflagged >= required) break;
            W(i, j) = 1;
            ++unflagged;
        }
    }
}

struct Standardizer {
    Eigen::VectorXd loc;
    Eigen::VectorXd scale;
};

Standardizer standardize(const DataSet& data, bool fixed_center,
                         Eigen::MatrixXd& Z) {
    const Eigen::Index n = data.n(), d = data.d();
    Standardizer s;
    s.loc = Eigen::VectorXd::Zero(d);
    s.scale = Eigen::VectorXd::Ones(d);
    Z = data.values;
    for (Eigen::Index j = 0; j < d; ++j) {
        std::vector<double> col;
        for (Eigen::Index i = 0; i < n; ++i)
            if (!data.na(i, j)) col.push_back(data.values(i, j));
        if (col.empty())
            throw data_error("cellmcd: column " + std::to_string(j + 1) + " is all NA");
        double loc = fixed_center ? 0.0 : median(col);
        double scale = mad_scale(col, loc);
        if (scale <= 0.0)
            throw numeric_error("cellmcd: column " + std::to_string(j + 1) +
                                " has zero robust scale");
        s.loc[j] = loc;
        s.scale[j] = scale;
        for (Eigen::Index i = 0; i < n; ++i) Z(i, j) = (Z(i, j) - loc) / scale;
    }
    return s;
}

CellMcdFit fit_impl(const DataSet& data, const CellMcdConfig& cfg, bool fixed_center) {
    const Eigen::Index n = data.n(), d = data.d();
    if (n < 5) throw data_error("cellmcd: class too small (n < 5)");
    const int h = static_cast<int>(std::ceil(cfg.h_fraction * static_cast<double>(n)));

    Eigen::MatrixXd Z;
    Standardizer std_ = standardize(data, fixed_center, Z);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (data.na(i, j)) Z(i, j) = 0.0;  // value is ignored; keep it finite

    // Univariate initial flags plus NA zeros.
    const double zcut = std::sqrt(chi2_quantile(cfg.cutoff_prob, 1));
    Eigen::MatrixXi W = Eigen::MatrixXi::Ones(n, d);
    Eigen::MatrixXd init_delta = Eigen::MatrixXd::Zero(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (data.na(i, j)) {
                W(i, j) = 0;
            } else if (std::abs(Z(i, j)) > zcut) {
                W(i, j) = 0;
                init_delta(i, j) = Z(i, j) * Z(i, j) - zcut * zcut;
            }
        }
    }
    enforce_column_cap(W, init_delta, data.na, h);

    // Initial (mu, Sigma): EM passes with the initial W fixed.
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd zero_imputed = Z;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (W(i, j) == 0) zero_imputed(i, j) = 0.0;
    if (!fixed_center) mu = zero_imputed.colwise().mean();
    Eigen::MatrixXd centered = zero_imputed.rowwise() - mu.transpose();
    Eigen::MatrixXd sigma = centered.transpose() * centered / static_cast<double>(n);
    sigma = clamp_eigenvalues(sigma, cfg.eig_floor);
    for (int t = 0; t < 30; ++t) {
        Eigen::VectorXd mu_prev = mu;
        Eigen::MatrixXd sigma_prev = sigma;
        em_update(Z, W, fixed_center, cfg.eig_floor, mu, sigma);
        double ch = (sigma - sigma_prev).cwiseAbs().maxCoeff() +
                    (mu - mu_prev).cwiseAbs().maxCoeff();
        if (ch < 1e-4) break;
    }

    std::vector<double> trace;
    trace.push_back(cellmcd_objective(Z, W, data.na, mu, sigma,
                                      penalty_vector(sigma, cfg.cutoff_prob)));

    int iters = 0;
    for (int t = 0; t < cfg.max_iter; ++t) {
        WStepResult ws = w_step(Z, data.na, mu, sigma, cfg.cutoff_prob);
        enforce_column_cap(ws.W, ws.delta, data.na, h);
        Eigen::VectorXd mu_new = mu;
        Eigen::MatrixXd sigma_new = sigma;
        em_update(Z, ws.W, fixed_center, cfg.eig_floor, mu_new, sigma_new);
        double obj = cellmcd_objective(Z, ws.W, data.na, mu_new, sigma_new,
                                       penalty_vector(sigma_new, cfg.cutoff_prob));
        if (obj > trace.back() + 1e-9) break;  // reject the step, keep previous state
        double change = std::abs(trace.back() - obj);
        W = ws.W;
        mu = mu_new;
        sigma = sigma_new;
        trace.push_back(obj);
        ++iters;
        if (change < cfg.tol * std::max(1.0, std::abs(trace.back()))) break;
    }

    CellMcdFit fit;
    fit.W = W;
    fit.na = data.na;
    fit.objective_trace = std::move(trace);
    fit.iterations = iters;
    fit.std_loc = std_.loc;
    fit.std_scale = std_.scale;

    // Map back to the original scale.
    Eigen::MatrixXd D = std_.scale.asDiagonal();
    fit.mu = std_.loc + std_.scale.cwiseProduct(mu);
    fit.sigma = D * sigma * D;

    // Predicted cells and standardized residuals for w = 0 cells.
    fit.predicted_cells = data.values;
    fit.standardized_residuals = Eigen::MatrixXd::Zero(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<int> o = observed_of_row(W, i);
        for (Eigen::Index j = 0; j < d; ++j) {
            if (W(i, j) == 1) continue;
            ConditionalMoments cm =
                conditional_moments(static_cast<int>(j), o, mu, sigma, Z.row(i).transpose());
            fit.predicted_cells(i, j) = std_.loc[j] + std_.scale[j] * cm.xhat;
            if (!data.na(i, j))
                fit.standardized_residuals(i, j) = (Z(i, j) - cm.xhat) / std::sqrt(cm.cvar);
        }
    }
    return fit;
}

}  // namespace

double cellmcd_objective(const Eigen::MatrixXd& X, const Eigen::MatrixXi& W,
                         const BoolMatrix& na, const Eigen::VectorXd& mu,
                         const Eigen::MatrixXd& sigma, const Eigen::VectorXd& q) {
    const Eigen::Index n = X.rows(), d = X.cols();
    double obj = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<int> o = observed_of_row(W, i);
        bool all_na = true;
        for (Eigen::Index j = 0; j < d; ++j)
            if (!na(i, j)) all_na = false;
        if (o.empty()) {
            if (!all_na && W.cols() > 0) continue;  // empty-subset convention: 0
            continue;
        }
        SubsetWorkspace ws(sigma, o);
        Eigen::VectorXd xi = X.row(i).transpose();
        Eigen::VectorXd r = subset(xi, o) - subset(mu, o);
        obj += ws.logdet + static_cast<double>(o.size()) * kLog2Pi + r.dot(ws.solve(r));
    }
    for (Eigen::Index j = 0; j < d; ++j) {
        int flagged = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (W(i, j) == 0 && !na(i, j)) ++flagged;
        obj += q[j] * static_cast<double>(flagged);
    }
    return obj;
}

CellMcdFit cellmcd_fit_class(const DataSet& data, const CellMcdConfig& cfg) {
    return fit_impl(data, cfg, false);
}

CellMcdFit cellmcd_fit_pooled(const DataSet& residuals, const CellMcdConfig& cfg) {
    return fit_impl(residuals, cfg, true);
}

}  // namespace cellda
