#include "cellda/gaussian.hpp"

#include <cmath>

#include "cellda/errors.hpp"

namespace cellda {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

Eigen::VectorXd subset(const Eigen::VectorXd& v, const std::vector<int>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[idx[k]];
    return out;
}

Eigen::MatrixXd subset(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
    Eigen::Index s = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd out(s, s);
    for (Eigen::Index r = 0; r < s; ++r)
        for (Eigen::Index c = 0; c < s; ++c)
            out(r, c) = m(idx[static_cast<size_t>(r)], idx[static_cast<size_t>(c)]);
    return out;
}

SubsetWorkspace::SubsetWorkspace(const Eigen::MatrixXd& sigma, std::vector<int> indices)
    : o(std::move(indices)) {
    Eigen::MatrixXd sub = subset(sigma, o);
    chol.compute(sub);
    if (chol.info() != Eigen::Success)
        throw numeric_error("SubsetWorkspace: submatrix is not positive definite");
    logdet = 2.0 * chol.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double partial_md2(const Eigen::VectorXd& x, const std::vector<int>& o,
                   const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma) {
    if (o.empty()) return 0.0;
    SubsetWorkspace ws(sigma, o);
    Eigen::VectorXd r = subset(x, o) - subset(mu, o);
    return r.dot(ws.solve(r));
}

double partial_md2(const Eigen::VectorXd& x, const FlagVector& w,
                   const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma) {
    return partial_md2(x, w.observed(), mu, sigma);
}

double subset_logdet(const Eigen::MatrixXd& sigma, const std::vector<int>& o) {
    if (o.empty()) return 0.0;
    return SubsetWorkspace(sigma, o).logdet;
}

ConditionalMoments conditional_moments(int j, const std::vector<int>& o_minus_j,
                                       const Eigen::VectorXd& mu,
                                       const Eigen::MatrixXd& sigma,
                                       const Eigen::VectorXd& x) {
    if (o_minus_j.empty()) return {mu[j], sigma(j, j)};
    SubsetWorkspace ws(sigma, o_minus_j);
    Eigen::VectorXd cross(static_cast<Eigen::Index>(o_minus_j.size()));
    for (size_t k = 0; k < o_minus_j.size(); ++k)
        cross[static_cast<Eigen::Index>(k)] = sigma(j, o_minus_j[k]);
    Eigen::VectorXd solved = ws.solve(cross);
    Eigen::VectorXd r = subset(x, o_minus_j) - subset(mu, o_minus_j);
    double xhat = mu[j] + solved.dot(r);
    double cvar = sigma(j, j) - solved.dot(cross);
    if (!(cvar > 0.0))
        throw numeric_error("conditional_moments: nonpositive conditional variance");
    return {xhat, cvar};
}

std::vector<ConditionalMoments> conditional_moments_all(
    const std::vector<int>& o, const Eigen::VectorXd& mu,
    const Eigen::MatrixXd& sigma, const Eigen::VectorXd& x) {
    SubsetWorkspace ws(sigma, o);
    Eigen::Index s = static_cast<Eigen::Index>(o.size());
    Eigen::MatrixXd prec = ws.chol.solve(Eigen::MatrixXd::Identity(s, s));
    Eigen::VectorXd r = subset(x, o) - subset(mu, o);
    Eigen::VectorXd kr = prec * r;
    std::vector<ConditionalMoments> out(o.size());
    for (Eigen::Index k = 0; k < s; ++k) {
        double kjj = prec(k, k);
        double cvar = 1.0 / kjj;
        double resid = kr[k] / kjj;  // x_j - xhat_j
        out[static_cast<size_t>(k)] = {x[o[static_cast<size_t>(k)]] - resid, cvar};
    }
    return out;
}

double subset_normal_logpdf(const Eigen::VectorXd& x, const FlagVector& w,
                            const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma) {
    std::vector<int> o = w.observed();
    if (o.empty()) return 0.0;
    SubsetWorkspace ws(sigma, o);
    Eigen::VectorXd r = subset(x, o) - subset(mu, o);
    double md2 = r.dot(ws.solve(r));
    return -0.5 * (ws.logdet + static_cast<double>(o.size()) * kLog2Pi + md2);
}

}  // namespace cellda
