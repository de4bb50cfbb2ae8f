#include "cellda/dataset.hpp"

#include "cellda/errors.hpp"

namespace cellda {

int DataSet::num_classes() const {
    int g = 0;
    for (int lab : labels) g = std::max(g, lab);
    return g;
}

std::vector<int> FlagVector::observed() const {
    std::vector<int> o;
    for (int j = 0; j < w.size(); ++j)
        if (w[j] == 1) o.push_back(j);
    return o;
}

std::vector<int> FlagVector::missing() const {
    std::vector<int> m;
    for (int j = 0; j < w.size(); ++j)
        if (w[j] == 0) m.push_back(j);
    return m;
}

std::vector<DataSet> split_by_class(const DataSet& data) {
    if (!data.has_labels()) throw data_error("split_by_class: dataset has no labels");
    int G = data.num_classes();
    if (G < 2) throw data_error("split_by_class: need at least 2 classes");

    std::vector<std::vector<Eigen::Index>> rows(G);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        int g = data.labels[static_cast<size_t>(i)];
        if (g < 1 || g > G) throw data_error("split_by_class: label out of range");
        rows[g - 1].push_back(i);
    }
    std::vector<DataSet> out;
    out.reserve(G);
    for (int g = 0; g < G; ++g) {
        if (rows[g].empty())
            throw data_error("split_by_class: empty class " + std::to_string(g + 1));
        DataSet part;
        part.values.resize(static_cast<Eigen::Index>(rows[g].size()), data.d());
        part.na.resize(static_cast<Eigen::Index>(rows[g].size()), data.d());
        for (size_t r = 0; r < rows[g].size(); ++r) {
            part.values.row(static_cast<Eigen::Index>(r)) = data.values.row(rows[g][r]);
            part.na.row(static_cast<Eigen::Index>(r)) = data.na.row(rows[g][r]);
        }
        part.labels.assign(rows[g].size(), g + 1);
        part.col_names = data.col_names;
        part.label_names = data.label_names;
        out.push_back(std::move(part));
    }
    return out;
}

Eigen::VectorXd priors(const DataSet& data) {
    auto parts = split_by_class(data);
    Eigen::VectorXd pi(static_cast<Eigen::Index>(parts.size()));
    for (size_t g = 0; g < parts.size(); ++g)
        pi[static_cast<Eigen::Index>(g)] =
            static_cast<double>(parts[g].n()) / static_cast<double>(data.n());
    return pi;
}

}  // namespace cellda
