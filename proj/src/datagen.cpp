#include "cellda/datagen.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "cellda/classifier.hpp"
#include "cellda/errors.hpp"

namespace cellda {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

uint64_t Rng::below(uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

uint64_t substream_seed(uint64_t master, uint64_t rep, uint64_t cls, uint64_t split,
                        uint64_t purpose) {
    // splitmix64 finalizer over the combined key.
    uint64_t x = master;
    for (uint64_t v : {rep, cls, split, purpose}) {
        x += 0x9e3779b97f4a7c15ULL + v;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        x = x ^ (x >> 31);
    }
    return x;
}

std::string Scenario::id() const {
    std::ostringstream os;
    os << (mode == DiscriminantMode::QDA ? "qda" : "lda") << "_d" << d << "_n"
       << n_per_class << "_"
       << (correlation == CorrelationLevel::High ? "high" : "low") << "_train";
    auto name = [](ContaminationType t) {
        switch (t) {
            case ContaminationType::None: return "none";
            case ContaminationType::Cell: return "cell";
            case ContaminationType::Case: return "case";
            case ContaminationType::Mixed: return "mixed";
        }
        return "none";
    };
    os << name(train_contamination) << "_test" << name(test_contamination);
    return os.str();
}

Eigen::MatrixXd a_matrix(double c, int d) {
    if (!(c > 0.0 && c < 1.0)) throw data_error("a_matrix: c must be in (0,1)");
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = std::pow(-c, std::abs(i - j));
    return a;
}

std::vector<Eigen::VectorXd> class_means(int d) {
    std::vector<Eigen::VectorXd> mu(3, Eigen::VectorXd::Zero(d));
    mu[1] = Eigen::VectorXd::Ones(d);
    for (int j = 0; j < d; ++j) mu[2][j] = (j % 2 == 0) ? 2.0 : -2.0;
    return mu;
}

std::vector<Eigen::MatrixXd> class_scatters(const Scenario& scn) {
    std::vector<double> c = scn.correlation == CorrelationLevel::High
                                ? std::vector<double>{0.9, 0.8, 0.7}
                                : std::vector<double>{0.6, 0.4, 0.2};
    std::vector<Eigen::MatrixXd> sig;
    for (int g = 0; g < 3; ++g) {
        double cg = scn.mode == DiscriminantMode::LDA ? c[0] : c[static_cast<size_t>(g)];
        sig.push_back(a_matrix(cg, scn.d));
    }
    return sig;
}

namespace {

struct SplitData {
    Eigen::MatrixXd values;
    BoolMatrix cell_outliers;
    std::vector<int> labels;
    std::vector<int> case_outlier;  // 1 where the case was replaced
};

std::vector<uint64_t> sample_without_replacement(uint64_t pool, uint64_t k, Rng& rng) {
    std::vector<uint64_t> idx(pool);
    for (uint64_t i = 0; i < pool; ++i) idx[i] = i;
    for (uint64_t i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + rng.below(pool - i)]);
    idx.resize(k);
    return idx;
}

SplitData generate_split(const Scenario& scn, ContaminationType contam, int split_id,
                         const std::vector<Eigen::VectorXd>& mu,
                         const std::vector<Eigen::MatrixXd>& sigma) {
    const int G = 3;
    const int ng = scn.n_per_class;
    const int d = scn.d;
    SplitData out;
    out.values.resize(G * ng, d);
    out.cell_outliers = BoolMatrix::Constant(G * ng, d, false);
    out.labels.resize(static_cast<size_t>(G * ng));
    out.case_outlier.assign(static_cast<size_t>(G * ng), 0);

    double eps_cell = scn.eps_cell, eps_case = scn.eps_case;
    if (contam == ContaminationType::None || scn.gamma == 0.0) {
        eps_cell = eps_case = 0.0;
    } else if (contam == ContaminationType::Cell) {
        eps_case = 0.0;
    } else if (contam == ContaminationType::Case) {
        eps_cell = 0.0;
    }

    for (int g = 0; g < G; ++g) {
        Eigen::LLT<Eigen::MatrixXd> llt(sigma[static_cast<size_t>(g)]);
        Eigen::MatrixXd L = llt.matrixL();
        Rng draw(substream_seed(scn.seed, 0, static_cast<uint64_t>(g),
                                static_cast<uint64_t>(split_id), 0));
        Rng pick(substream_seed(scn.seed, 0, static_cast<uint64_t>(g),
                                static_cast<uint64_t>(split_id), 1));
        Rng redraw(substream_seed(scn.seed, 0, static_cast<uint64_t>(g),
                                  static_cast<uint64_t>(split_id), 2));

        const int base = g * ng;
        for (int i = 0; i < ng; ++i) {
            Eigen::VectorXd z(d);
            for (int j = 0; j < d; ++j) z[j] = draw.normal();
            out.values.row(base + i) =
                (mu[static_cast<size_t>(g)] + L * z).transpose();
            out.labels[static_cast<size_t>(base + i)] = g + 1;
        }

        // Casewise outliers: redrawn around mu_g + (gamma/2)(mu_g' - mu_g),
        // g' the next class in the cyclic order.
        int n_case = static_cast<int>(std::lround(eps_case * ng));
        if (n_case > 0) {
            int gn = (g + 1) % G;
            Eigen::VectorXd shifted =
                mu[static_cast<size_t>(g)] +
                0.5 * scn.gamma * (mu[static_cast<size_t>(gn)] - mu[static_cast<size_t>(g)]);
            for (uint64_t r : sample_without_replacement(static_cast<uint64_t>(ng),
                                                         static_cast<uint64_t>(n_case),
                                                         pick)) {
                Eigen::VectorXd z(d);
                for (int j = 0; j < d; ++j) z[j] = redraw.normal();
                out.values.row(base + static_cast<int>(r)) = (shifted + L * z).transpose();
                out.case_outlier[static_cast<size_t>(base + static_cast<int>(r))] = 1;
            }
        }

        // Cellwise outliers: replace random cells of regular cases by
        // mu_gj + gamma * sqrt(Sigma_jj).
        int n_cells = static_cast<int>(std::lround(eps_cell * ng * d));
        if (n_cells > 0) {
            std::vector<int> rows;
            for (int i = 0; i < ng; ++i)
                if (!out.case_outlier[static_cast<size_t>(base + i)]) rows.push_back(i);
            uint64_t pool = static_cast<uint64_t>(rows.size()) * static_cast<uint64_t>(d);
            for (uint64_t cell : sample_without_replacement(
                     pool, static_cast<uint64_t>(n_cells), pick)) {
                int i = rows[static_cast<size_t>(cell / static_cast<uint64_t>(d))];
                int j = static_cast<int>(cell % static_cast<uint64_t>(d));
                out.values(base + i, j) =
                    mu[static_cast<size_t>(g)][j] +
                    scn.gamma * std::sqrt(sigma[static_cast<size_t>(g)](j, j));
                out.cell_outliers(base + i, j) = true;
            }
        }
    }
    return out;
}

}  // namespace

GeneratedData generate(const Scenario& scn) {
    auto mu = class_means(scn.d);
    auto sigma = class_scatters(scn);

    SplitData tr = generate_split(scn, scn.train_contamination, 0, mu, sigma);
    SplitData te = generate_split(scn, scn.test_contamination, 1, mu, sigma);

    GeneratedData out;
    out.train = DataSet(tr.values);
    out.train.labels = tr.labels;
    out.train_cell_outliers = tr.cell_outliers;
    out.train_case_outliers = tr.case_outlier;

    out.test = DataSet(te.values);
    out.test.labels = te.labels;
    out.test_cell_outliers = te.cell_outliers;
    out.test_truth = te.labels;
    for (size_t i = 0; i < te.case_outlier.size(); ++i)
        if (te.case_outlier[i]) out.test_truth[i] = 0;
    return out;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                bool with_class0) {
    if (pred.size() != truth.size()) throw data_error("accuracy: length mismatch");
    if (pred.empty()) return 0.0;
    size_t correct = 0, total = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (!with_class0 && truth[i] == 0) continue;
        ++total;
        if (pred[i] == truth[i]) ++correct;
    }
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<SweepRow> run_sweep(const std::vector<Scenario>& grid,
                                const std::vector<std::string>& methods,
                                int replications) {
    std::vector<SweepRow> rows;
    for (const Scenario& base : grid) {
        std::map<std::string, double> sums;
        for (int rep = 0; rep < replications; ++rep) {
            Scenario scn = base;
            scn.seed = substream_seed(base.seed, static_cast<uint64_t>(rep), 77, 77);
            GeneratedData data = generate(scn);
            bool casewise_eval = scn.test_contamination == ContaminationType::Case;

            for (const std::string& method : methods) {
                std::vector<int> pred(static_cast<size_t>(data.test.n()));
                if (method == "cellQDA" || method == "cellLDA") {
                    ModelConfig cfg;
                    cfg.class0_enabled = casewise_eval;
                    DiscriminantModel model = method == "cellQDA"
                                                  ? train_cellqda(data.train, cfg)
                                                  : train_celllda(data.train, cfg);
                    auto res = predict_all(data.test, model);
                    for (size_t i = 0; i < res.size(); ++i) pred[i] = res[i].label;
                } else if (method == "CQDA" || method == "CLDA") {
                    DiscriminantModel model = method == "CQDA"
                                                  ? classical_qda_train(data.train)
                                                  : classical_lda_train(data.train);
                    for (Eigen::Index i = 0; i < data.test.n(); ++i)
                        pred[static_cast<size_t>(i)] = classical_predict(
                            data.test.values.row(i).transpose(), model);
                } else {
                    throw data_error("run_sweep: unknown method " + method);
                }
                double acc = accuracy(pred,
                                      casewise_eval ? data.test_truth : data.test.labels,
                                      casewise_eval);
                rows.push_back({method, base.id(), base.gamma, rep, acc});
                sums[method] += acc;
            }
        }
        for (const std::string& method : methods)
            rows.push_back({method, base.id(), base.gamma, -1,
                            sums[method] / static_cast<double>(replications)});
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "method,scenario_id,gamma,rep,accuracy\n";
    os.precision(17);
    for (const SweepRow& r : rows)
        os << r.method << "," << r.scenario_id << "," << r.gamma << "," << r.rep << ","
           << r.accuracy << "\n";
    return os.str();
}

}  // namespace cellda
