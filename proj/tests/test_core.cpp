#include <doctest.h>

#include "cellda/dataset.hpp"
#include "cellda/errors.hpp"

using namespace cellda;

namespace {
DataSet labeled(const std::vector<int>& labels, int d = 2) {
    DataSet ds(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), d));
    for (Eigen::Index i = 0; i < ds.n(); ++i) ds.values(i, 0) = static_cast<double>(i);
    ds.labels = labels;
    return ds;
}
}  // namespace

TEST_CASE("split_by_class partitions rows in order") {
    DataSet ds = labeled({1, 2, 1});
    auto parts = split_by_class(ds);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].n() == 2);
    CHECK(parts[0].values(0, 0) == 0.0);
    CHECK(parts[0].values(1, 0) == 2.0);
    CHECK(parts[1].n() == 1);
    CHECK(parts[1].values(0, 0) == 1.0);
    CHECK(parts[0].n() + parts[1].n() == ds.n());
}

TEST_CASE("split_by_class rejects degenerate inputs") {
    DataSet unlabeled(Eigen::MatrixXd::Zero(3, 2));
    CHECK_THROWS_AS(split_by_class(unlabeled), data_error);

    // All labels equal with a declared second class: empty class.
    DataSet ds = labeled({1, 1, 1});
    ds.labels.back() = 2;
    ds.labels.back() = 1;
    ds.label_names = {"a", "b"};
    CHECK_THROWS_AS(split_by_class(ds), data_error);  // G=1 from labels
}

TEST_CASE("split_by_class handles the paper's class sizes") {
    std::vector<int> labels;
    for (int g = 1; g <= 3; ++g) labels.insert(labels.end(), 200, g);
    auto parts = split_by_class(labeled(labels));
    REQUIRE(parts.size() == 3);
    for (const auto& p : parts) CHECK(p.n() == 200);
}

TEST_CASE("priors") {
    std::vector<int> labels;
    for (int g = 1; g <= 3; ++g) labels.insert(labels.end(), 200, g);
    Eigen::VectorXd pi = priors(labeled(labels));
    for (int g = 0; g < 3; ++g) CHECK(pi[g] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<int> skew(1, 1);
    skew.insert(skew.end(), 99, 2);
    Eigen::VectorXd pi2 = priors(labeled(skew));
    CHECK(pi2[0] == doctest::Approx(0.01));
    CHECK(pi2[1] == doctest::Approx(0.99));

    CHECK_THROWS_AS(priors(labeled({1, 1, 1})), data_error);
}

TEST_CASE("flag vector partitions indices") {
    FlagVector w(5);
    w.w[1] = 0;
    w.na[3] = true;
    w.w[3] = 0;
    CHECK(w.observed().size() + w.missing().size() == 5);
    CHECK(w.observed() == std::vector<int>{0, 2, 4});
    CHECK(w.missing() == std::vector<int>{1, 3});
}
