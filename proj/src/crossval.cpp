#include "cellda/crossval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cellda/datagen.hpp"
#include "cellda/errors.hpp"

namespace cellda {

std::vector<int> stratified_folds(const std::vector<int>& labels, int k, uint64_t seed) {
    if (k < 2) throw data_error("crossval: fold count must be >= 2");
    int G = 0;
    for (int lab : labels) G = std::max(G, lab);
    std::vector<int> fold(labels.size(), -1);
    Rng rng(seed);
    for (int g = 1; g <= G; ++g) {
        std::vector<size_t> idx;
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == g) idx.push_back(i);
        for (size_t i = 0; i + 1 < idx.size(); ++i)
            std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
        for (size_t i = 0; i < idx.size(); ++i)
            fold[idx[i]] = static_cast<int>(i % static_cast<size_t>(k));
    }
    return fold;
}

CrossvalResult cross_validate(const DataSet& data, int folds, int reps, uint64_t seed,
                              const FoldMethod& method) {
    if (!data.has_labels()) throw data_error("crossval: labels required");
    CrossvalResult res;
    res.folds = folds;
    res.reps = reps;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<int> assign =
            stratified_folds(data.labels, folds, substream_seed(seed, static_cast<uint64_t>(rep), 0, 0));
        for (int f = 0; f < folds; ++f) {
            DataSet train, test;
            std::vector<Eigen::Index> tr_rows, te_rows;
            for (Eigen::Index i = 0; i < data.n(); ++i)
                (assign[static_cast<size_t>(i)] == f ? te_rows : tr_rows).push_back(i);
            auto take = [&](const std::vector<Eigen::Index>& rows, DataSet& out) {
                out.values.resize(static_cast<Eigen::Index>(rows.size()), data.d());
                out.na.resize(static_cast<Eigen::Index>(rows.size()), data.d());
                for (size_t r = 0; r < rows.size(); ++r) {
                    out.values.row(static_cast<Eigen::Index>(r)) = data.values.row(rows[r]);
                    out.na.row(static_cast<Eigen::Index>(r)) = data.na.row(rows[r]);
                    out.labels.push_back(data.labels[static_cast<size_t>(rows[r])]);
                }
                out.col_names = data.col_names;
                out.label_names = data.label_names;
            };
            take(tr_rows, train);
            take(te_rows, test);
            std::vector<int> pred = method(train, test);
            res.fold_accuracy.push_back(accuracy(pred, test.labels, false));
        }
    }
    double sum = 0.0;
    for (double a : res.fold_accuracy) sum += a;
    res.mean = sum / static_cast<double>(res.fold_accuracy.size());
    double ss = 0.0;
    for (double a : res.fold_accuracy) ss += (a - res.mean) * (a - res.mean);
    res.sd = res.fold_accuracy.size() > 1
                 ? std::sqrt(ss / static_cast<double>(res.fold_accuracy.size() - 1))
                 : 0.0;
    return res;
}

std::string crossval_csv(const CrossvalResult& res) {
    std::ostringstream os;
    os.precision(17);
    os << "rep,fold,accuracy\n";
    for (size_t i = 0; i < res.fold_accuracy.size(); ++i)
        os << (i / static_cast<size_t>(res.folds)) << ","
           << (i % static_cast<size_t>(res.folds)) << "," << res.fold_accuracy[i] << "\n";
    os << "mean,," << res.mean << "\n";
    os << "sd,," << res.sd << "\n";
    return os.str();
}

}  // namespace cellda
