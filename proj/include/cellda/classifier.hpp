#ifndef CELLDA_CLASSIFIER_HPP
#define CELLDA_CLASSIFIER_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cellda/cellmcd.hpp"
#include "cellda/dataset.hpp"
#include "cellda/flagger.hpp"

namespace cellda {

struct PredictionResult {
    int label = 0;      // in {0, 1..G}; 0 = casewise outlier
    int raw_label = 0;  // argmax of the discriminant, in 1..G
    Eigen::VectorXd delta;          // per-class discriminant values
    std::vector<FlagVector> flags;  // per-class flag vectors
    double md2_winner = 0.0;        // partial MD^2 under the winning class
    double pac = -1.0;              // set when a given label is supplied
};

// Full cellQDA / cellLDA training: per-class cellMCD, training re-flagging,
// contamination parameter estimation, empirical priors.
DiscriminantModel train_cellqda(const DataSet& data, const ModelConfig& cfg = {});
DiscriminantModel train_celllda(const DataSet& data, const ModelConfig& cfg = {});

// Robust discriminant value of class g for (x, w_g); NA coordinates are
// dropped from both contamination sums.
double robust_discriminant(const Eigen::VectorXd& x, const FlagVector& w,
                           const ClassModel& cls);

PredictionResult predict(const Eigen::VectorXd& x, const BoolVector& na,
                         const DiscriminantModel& model);
std::vector<PredictionResult> predict_all(const DataSet& data,
                                          const DiscriminantModel& model);

// Probability of the Alternative Class against a given label.
double pac(const Eigen::VectorXd& x, const BoolVector& na, int given_label,
           const DiscriminantModel& model);
double pac_from_deltas(const Eigen::VectorXd& delta, int given_label);

// Classical baselines (means + empirical covariances). NA input is an error.
DiscriminantModel classical_qda_train(const DataSet& data);
DiscriminantModel classical_lda_train(const DataSet& data);
int classical_predict(const Eigen::VectorXd& x, const DiscriminantModel& model);

// Per-case diagnostic table for the classmap of one class.
struct ClassMapRow {
    int case_id;
    int given;
    int predicted;      // 0 allowed
    bool flagged_any;   // at least one flagged (non-NA) cell
    double md;          // sqrt of the own-class partial MD^2
    double axis_coord;  // normal-quantile spaced distance coordinate, in [0,4]
    double pac;
};
std::vector<ClassMapRow> classmap_data(const DiscriminantModel& model,
                                       const DataSet& data, int g);

// Coordinate of the 99% cutoff line on the classmap distance axis.
double classmap_cutoff_coord(double cutoff_prob = 0.99);

enum class CellStatus { Clean, High, Low, Na };

struct CellMapEntry {
    int row;
    int col;
    CellStatus status;
    double stdres;
};
// Per-cell diagnostic table for class g's rows of the dataset, re-flagged
// against the class model.
std::vector<CellMapEntry> cellmap_data(const DiscriminantModel& model,
                                       const DataSet& data, int g);

}  // namespace cellda

#endif
