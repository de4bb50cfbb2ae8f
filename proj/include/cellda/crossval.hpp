#ifndef CELLDA_CROSSVAL_HPP
#define CELLDA_CROSSVAL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cellda/dataset.hpp"

namespace cellda {

// Trains on a fold's training part and returns predicted labels for the
// held-out rows. All parameter estimation must happen inside the callback.
using FoldMethod =
    std::function<std::vector<int>(const DataSet& train, const DataSet& test)>;

struct CrossvalResult {
    std::vector<double> fold_accuracy;  // one per (rep, fold), row-major
    double mean = 0.0;
    double sd = 0.0;
    int folds = 0;
    int reps = 0;
};

// Stratified k-fold assignment: class proportions preserved within one case
// per class per fold. Returns fold index per row, in 0..k-1.
std::vector<int> stratified_folds(const std::vector<int>& labels, int k, uint64_t seed);

CrossvalResult cross_validate(const DataSet& data, int folds, int reps, uint64_t seed,
                              const FoldMethod& method);

std::string crossval_csv(const CrossvalResult& res);

}  // namespace cellda

#endif
