#ifndef CELLDA_DATASET_HPP
#define CELLDA_DATASET_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace cellda {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using BoolVector = Eigen::Matrix<bool, Eigen::Dynamic, 1>;

// n x d numeric matrix with an explicit missingness mask. A masked cell's
// stored value is ignored everywhere. Labels, when present, are dense
// integers 1..G; string labels are mapped at the I/O boundary and the
// dictionary kept in label_names.
struct DataSet {
    Eigen::MatrixXd values;              // n x d
    BoolMatrix na;                       // n x d, true = missing
    std::vector<int> labels;             // empty when unlabeled, else length n in 1..G
    std::vector<std::string> col_names;  // length d (may be empty)
    std::vector<std::string> label_names;  // dictionary, index g-1 -> original label

    DataSet() = default;
    DataSet(Eigen::MatrixXd vals, BoolMatrix mask)
        : values(std::move(vals)), na(std::move(mask)) {}
    explicit DataSet(Eigen::MatrixXd vals)
        : values(std::move(vals)), na(BoolMatrix::Constant(values.rows(), values.cols(), false)) {}

    Eigen::Index n() const { return values.rows(); }
    Eigen::Index d() const { return values.cols(); }
    bool has_labels() const { return !labels.empty(); }

    // Number of classes implied by the label set (max label).
    int num_classes() const;
};

// Per-case cell status: w[j] = 1 clean, 0 flagged or NA. The NA mask
// distinguishes the two zero causes.
struct FlagVector {
    Eigen::ArrayXi w;  // length d, values in {0,1}
    BoolVector na;     // length d

    FlagVector() = default;
    explicit FlagVector(Eigen::Index d)
        : w(Eigen::ArrayXi::Ones(d)), na(BoolVector::Constant(d, false)) {}

    Eigen::Index d() const { return w.size(); }

    // Indices of unflagged cells o(w), in increasing order.
    std::vector<int> observed() const;
    // Indices of flagged-or-NA cells m(w).
    std::vector<int> missing() const;
    int n_observed() const { return static_cast<int>(w.sum()); }
    int n_flagged() const { return static_cast<int>(w.size() - w.sum()); }
};

// Per-class parameters of the contamination model, on the original data
// scale. sigma is kept SPD with smallest eigenvalue >= the configured floor.
struct ClassModel {
    Eigen::VectorXd mu;       // length d
    Eigen::MatrixXd sigma;    // d x d SPD
    double prior = 0.0;       // in (0,1)
    Eigen::VectorXd p;        // per-feature contamination probabilities, in [0.01, 1)
    Eigen::VectorXd alpha;    // per-feature Laplace scales, > 0
    Eigen::VectorXd std_loc;    // standardizer used during estimation
    Eigen::VectorXd std_scale;
};

enum class DiscriminantMode { QDA, LDA };

struct ModelConfig {
    double cell_cutoff = 0.99;   // probability feeding q_gj
    double case_cutoff = 0.99;   // probability for the casewise MD^2 rule
    double eig_floor = 1e-4;     // eigenvalue floor a, standardized scale
    double h_fraction = 0.75;
    bool class0_enabled = true;
    bool count_na_in_class0 = true;  // whether NA cells count toward |m| >= d/2
};

struct DiscriminantModel {
    std::vector<ClassModel> classes;
    DiscriminantMode mode = DiscriminantMode::QDA;
    ModelConfig config;
    std::vector<std::string> col_names;
    std::vector<std::string> label_names;

    int num_classes() const { return static_cast<int>(classes.size()); }
    Eigen::Index d() const { return classes.empty() ? 0 : classes.front().mu.size(); }
};

// Row-disjoint partition by class label, preserving row order.
// Errors on missing labels or an empty class.
std::vector<DataSet> split_by_class(const DataSet& data);

// Estimated prior probabilities n_g / n.
Eigen::VectorXd priors(const DataSet& data);

}  // namespace cellda

#endif
