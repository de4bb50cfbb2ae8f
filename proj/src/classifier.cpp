#include "cellda/classifier.hpp"

#include <cmath>

#include "cellda/contamination.hpp"
#include "cellda/errors.hpp"
#include "cellda/gaussian.hpp"
#include "cellda/stats.hpp"

namespace cellda {

namespace {

CellMcdConfig mcd_config(const ModelConfig& cfg) {
    CellMcdConfig mc;
    mc.h_fraction = cfg.h_fraction;
    mc.eig_floor = cfg.eig_floor;
    mc.cutoff_prob = cfg.cell_cutoff;
    return mc;
}

// Re-flag every training case of one class against its class model and
// estimate (p, alpha) from the resulting flags.
void reflag_and_estimate(const DataSet& part, ClassModel& cls, double cutoff) {
    const Eigen::Index n = part.n(), d = part.d();
    Eigen::MatrixXi W(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        FlagResult fr = flag_case(part.values.row(i).transpose(),
                                  part.na.row(i).transpose(), cls.mu, cls.sigma, cutoff);
        for (Eigen::Index j = 0; j < d; ++j) W(i, j) = fr.w.w[j];
    }
    estimate_class_contamination(part.values, part.na, W, cls.mu, cls.sigma,
                                 cls.p, cls.alpha);
}

DiscriminantModel train_cell_impl(const DataSet& data, const ModelConfig& cfg,
                                  DiscriminantMode mode) {
    auto parts = split_by_class(data);
    Eigen::VectorXd pri = priors(data);

    DiscriminantModel model;
    model.mode = mode;
    model.config = cfg;
    model.col_names = data.col_names;
    model.label_names = data.label_names;
    model.classes.resize(parts.size());

    std::vector<CellMcdFit> fits(parts.size());
    for (size_t g = 0; g < parts.size(); ++g)
        fits[g] = cellmcd_fit_class(parts[g], mcd_config(cfg));

    Eigen::MatrixXd shared_sigma;
    if (mode == DiscriminantMode::LDA) {
        // Pooled scatter: cellMCD with fixed center 0 on stacked residuals.
        DataSet resid;
        resid.values.resize(data.n(), data.d());
        resid.na.resize(data.n(), data.d());
        Eigen::Index row = 0;
        for (size_t g = 0; g < parts.size(); ++g) {
            for (Eigen::Index i = 0; i < parts[g].n(); ++i, ++row) {
                resid.values.row(row) =
                    parts[g].values.row(i) - fits[g].mu.transpose();
                resid.na.row(row) = parts[g].na.row(i);
            }
        }
        shared_sigma = cellmcd_fit_pooled(resid, mcd_config(cfg)).sigma;
    }

    for (size_t g = 0; g < parts.size(); ++g) {
        ClassModel& cls = model.classes[g];
        cls.mu = fits[g].mu;
        cls.sigma = (mode == DiscriminantMode::LDA) ? shared_sigma : fits[g].sigma;
        cls.prior = pri[static_cast<Eigen::Index>(g)];
        cls.std_loc = fits[g].std_loc;
        cls.std_scale = fits[g].std_scale;
        reflag_and_estimate(parts[g], cls, cfg.cell_cutoff);
    }
    return model;
}

void require_complete(const DataSet& data, const char* what) {
    if (data.na.any()) throw data_error(std::string(what) + ": NA values not supported");
}

}  // namespace

DiscriminantModel train_cellqda(const DataSet& data, const ModelConfig& cfg) {
    return train_cell_impl(data, cfg, DiscriminantMode::QDA);
}

DiscriminantModel train_celllda(const DataSet& data, const ModelConfig& cfg) {
    return train_cell_impl(data, cfg, DiscriminantMode::LDA);
}

double robust_discriminant(const Eigen::VectorXd& x, const FlagVector& w,
                           const ClassModel& cls) {
    double val = std::log(cls.prior) + subset_normal_logpdf(x, w, cls.mu, cls.sigma);
    for (int j = 0; j < w.d(); ++j) {
        if (w.na[j]) continue;  // NA drops out of both sums
        if (w.w[j] == 1) {
            val += std::log1p(-cls.p[j]);
        } else {
            val += std::log(cls.p[j]);
            val += -std::abs(x[j] - cls.mu[j]) / cls.alpha[j] -
                   std::log(2.0 * cls.alpha[j]);
        }
    }
    return val;
}

PredictionResult predict(const Eigen::VectorXd& x, const BoolVector& na,
                         const DiscriminantModel& model) {
    const int G = model.num_classes();
    const int d = static_cast<int>(x.size());
    PredictionResult res;
    res.delta.resize(G);
    res.flags.resize(static_cast<size_t>(G));
    for (int g = 0; g < G; ++g) {
        FlagResult fr = flag_case(x, na, model.classes[static_cast<size_t>(g)].mu,
                                  model.classes[static_cast<size_t>(g)].sigma,
                                  model.config.cell_cutoff);
        res.flags[static_cast<size_t>(g)] = fr.w;
        res.delta[g] = robust_discriminant(x, fr.w, model.classes[static_cast<size_t>(g)]);
    }
    res.raw_label = 1;
    for (int g = 1; g < G; ++g)
        if (res.delta[g] > res.delta[res.raw_label - 1]) res.raw_label = g + 1;

    const FlagVector& ww = res.flags[static_cast<size_t>(res.raw_label - 1)];
    const ClassModel& win = model.classes[static_cast<size_t>(res.raw_label - 1)];
    res.md2_winner = partial_md2(x, ww, win.mu, win.sigma);

    res.label = res.raw_label;
    if (model.config.class0_enabled) {
        int m_count = 0;
        for (int j = 0; j < d; ++j) {
            if (ww.w[j] == 0 && (model.config.count_na_in_class0 || !ww.na[j])) ++m_count;
        }
        int df = ww.n_observed();
        bool case0 = 2 * m_count >= d;
        if (!case0 && df >= 1)
            case0 = res.md2_winner > chi2_quantile(model.config.case_cutoff, df);
        if (case0) res.label = 0;
    }
    return res;
}

std::vector<PredictionResult> predict_all(const DataSet& data,
                                          const DiscriminantModel& model) {
    std::vector<PredictionResult> out;
    out.reserve(static_cast<size_t>(data.n()));
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        PredictionResult r =
            predict(data.values.row(i).transpose(), data.na.row(i).transpose(), model);
        if (data.has_labels())
            r.pac = pac_from_deltas(r.delta, data.labels[static_cast<size_t>(i)]);
        out.push_back(std::move(r));
    }
    return out;
}

double pac_from_deltas(const Eigen::VectorXd& delta, int given_label) {
    const int G = static_cast<int>(delta.size());
    if (given_label < 1 || given_label > G)
        throw data_error("pac: given label out of range");
    double best_alt = -std::numeric_limits<double>::infinity();
    for (int g = 0; g < G; ++g)
        if (g + 1 != given_label) best_alt = std::max(best_alt, delta[g]);
    // PAC = ptilde / (pgiven + ptilde) = 1 / (1 + exp(dgiven - dalt)).
    double diff = delta[given_label - 1] - best_alt;
    if (diff > 0) return std::exp(-diff) / (1.0 + std::exp(-diff));
    return 1.0 / (1.0 + std::exp(diff));
}

double pac(const Eigen::VectorXd& x, const BoolVector& na, int given_label,
           const DiscriminantModel& model) {
    PredictionResult r = predict(x, na, model);
    return pac_from_deltas(r.delta, given_label);
}

DiscriminantModel classical_qda_train(const DataSet& data) {
    require_complete(data, "classical_qda_train");
    auto parts = split_by_class(data);
    Eigen::VectorXd pri = priors(data);
    DiscriminantModel model;
    model.mode = DiscriminantMode::QDA;
    model.config.class0_enabled = false;
    model.col_names = data.col_names;
    model.label_names = data.label_names;
    model.classes.resize(parts.size());
    for (size_t g = 0; g < parts.size(); ++g) {
        const Eigen::MatrixXd& X = parts[g].values;
        ClassModel& cls = model.classes[g];
        cls.mu = X.colwise().mean();
        Eigen::MatrixXd c = X.rowwise() - cls.mu.transpose();
        cls.sigma = c.transpose() * c / static_cast<double>(X.rows() - 1);
        cls.prior = pri[static_cast<Eigen::Index>(g)];
        cls.p = Eigen::VectorXd::Zero(data.d());
        cls.alpha = Eigen::VectorXd::Ones(data.d());
    }
    return model;
}

DiscriminantModel classical_lda_train(const DataSet& data) {
    require_complete(data, "classical_lda_train");
    DiscriminantModel model = classical_qda_train(data);
    model.mode = DiscriminantMode::LDA;
    // Empirical covariance of the pooled centered data.
    auto parts = split_by_class(data);
    Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(data.d(), data.d());
    for (size_t g = 0; g < parts.size(); ++g) {
        Eigen::MatrixXd c = parts[g].values.rowwise() - model.classes[g].mu.transpose();
        pooled += c.transpose() * c;
    }
    pooled /= static_cast<double>(data.n() - static_cast<Eigen::Index>(parts.size()));
    for (auto& cls : model.classes) cls.sigma = pooled;
    return model;
}

int classical_predict(const Eigen::VectorXd& x, const DiscriminantModel& model) {
    // The QDA discriminant; with a shared sigma the quadratic terms cancel,
    // so the argmax coincides with the LDA rule.
    int best = 1;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int g = 0; g < model.num_classes(); ++g) {
        const ClassModel& cls = model.classes[static_cast<size_t>(g)];
        Eigen::LLT<Eigen::MatrixXd> llt(cls.sigma);
        if (llt.info() != Eigen::Success)
            throw numeric_error("classical_predict: covariance not positive definite");
        double logdet =
            2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        Eigen::VectorXd r = x - cls.mu;
        double md2 = r.dot(llt.solve(r));
        double val = -0.5 * logdet - 0.5 * md2 + std::log(cls.prior);
        if (val > best_val) {
            best_val = val;
            best = g + 1;
        }
    }
    return best;
}

double classmap_cutoff_coord(double cutoff_prob) {
    return std::min(normal_quantile(0.5 * (1.0 + cutoff_prob)), 4.0);
}

std::vector<ClassMapRow> classmap_data(const DiscriminantModel& model,
                                       const DataSet& data, int g) {
    if (!data.has_labels()) throw data_error("classmap_data: labels required");
    const ClassModel& cls = model.classes[static_cast<size_t>(g - 1)];
    const int d = static_cast<int>(data.d());
    std::vector<ClassMapRow> rows;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        if (data.labels[static_cast<size_t>(i)] != g) continue;
        Eigen::VectorXd x = data.values.row(i).transpose();
        BoolVector na = data.na.row(i).transpose();
        FlagResult fr = flag_case(x, na, cls.mu, cls.sigma, model.config.cell_cutoff);
        double md2 = partial_md2(x, fr.w, cls.mu, cls.sigma);
        double p = chi2_cdf(md2, d);
        double axis = 0.0;
        if (p > 0.0)
            axis = std::min(normal_quantile(std::min(0.5 * (1.0 + p), 1.0 - 1e-16)), 4.0);
        PredictionResult pr = predict(x, na, model);
        bool flagged_any = false;
        for (int j = 0; j < d; ++j)
            if (fr.w.w[j] == 0 && !fr.w.na[j]) flagged_any = true;
        rows.push_back({static_cast<int>(i), g, pr.label, flagged_any, std::sqrt(md2),
                        axis, pac_from_deltas(pr.delta, g)});
    }
    return rows;
}

std::vector<CellMapEntry> cellmap_data(const DiscriminantModel& model,
                                       const DataSet& data, int g) {
    if (!data.has_labels()) throw data_error("cellmap_data: labels required");
    const ClassModel& cls = model.classes[static_cast<size_t>(g - 1)];
    const int d = static_cast<int>(data.d());
    std::vector<CellMapEntry> cells;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        if (data.labels[static_cast<size_t>(i)] != g) continue;
        Eigen::VectorXd x = data.values.row(i).transpose();
        BoolVector na = data.na.row(i).transpose();
        FlagResult fr = flag_case(x, na, cls.mu, cls.sigma, model.config.cell_cutoff);
        std::vector<double> stdres(static_cast<size_t>(d), 0.0);
        for (const FlagStep& st : fr.trace.flagged_order)
            stdres[static_cast<size_t>(st.j)] = st.stdres;
        for (int j = 0; j < d; ++j) {
            CellMapEntry e{static_cast<int>(i), j, CellStatus::Clean, 0.0};
            if (na[j]) {
                e.status = CellStatus::Na;
            } else if (fr.w.w[j] == 0) {
                e.stdres = stdres[static_cast<size_t>(j)];
                e.status = e.stdres > 0 ? CellStatus::High : CellStatus::Low;
            }
            cells.push_back(e);
        }
    }
    return cells;
}

}  // namespace cellda
