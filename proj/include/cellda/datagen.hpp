#ifndef CELLDA_DATAGEN_HPP
#define CELLDA_DATAGEN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cellda/dataset.hpp"

namespace cellda {

// Deterministic normal/uniform stream. Box-Muller on top of mt19937_64 so
// draws do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    double uniform();                 // in [0, 1)
    double normal();                  // standard normal
    uint64_t bits() { return engine_(); }
    // Uniform integer in [0, n).
    uint64_t below(uint64_t n);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Independent substream seed for (master, rep, class, split, purpose).
uint64_t substream_seed(uint64_t master, uint64_t rep, uint64_t cls, uint64_t split,
                        uint64_t purpose = 0);

enum class ContaminationType { None, Cell, Case, Mixed };
enum class CorrelationLevel { High, Low };

struct Scenario {
    int d = 5;
    int n_per_class = 200;
    DiscriminantMode mode = DiscriminantMode::QDA;
    CorrelationLevel correlation = CorrelationLevel::High;
    ContaminationType train_contamination = ContaminationType::Cell;
    ContaminationType test_contamination = ContaminationType::None;
    double gamma = 0.0;
    double eps_cell = 0.10;
    double eps_case = 0.10;
    uint64_t seed = 1;
    std::string id() const;
};

struct GeneratedData {
    DataSet train;
    DataSet test;
    BoolMatrix train_cell_outliers;  // truth mask of contaminated cells
    BoolMatrix test_cell_outliers;
    std::vector<int> train_case_outliers;  // 1 where the case was replaced
    std::vector<int> test_truth;  // labels with casewise outliers mapped to 0
};

// Correlation matrix with entries (-c)^{|i-j|}.
Eigen::MatrixXd a_matrix(double c, int d);

// mu1 = 0, mu2 = 1_d, mu3 = (2, -2, 2, -2, ...).
std::vector<Eigen::VectorXd> class_means(int d);

// Per-scenario class scatters (A09/A08/A07 or A06/A04/A02; in LDA mode all
// classes share the first matrix).
std::vector<Eigen::MatrixXd> class_scatters(const Scenario& scn);

GeneratedData generate(const Scenario& scn);

// Fraction of equal labels. with_class0 = false restricts to truth in 1..G.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                bool with_class0);

struct SweepRow {
    std::string method;
    std::string scenario_id;
    double gamma;
    int rep;  // -1 marks an aggregate row (mean over reps)
    double accuracy;
};

// Runs every (scenario, method, replication) cell of the grid. Methods:
// cellQDA, cellLDA, CQDA, CLDA. Casewise detection is active only when the
// test data contains casewise outliers, matching the evaluation protocol.
std::vector<SweepRow> run_sweep(const std::vector<Scenario>& grid,
                                const std::vector<std::string>& methods,
                                int replications);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace cellda

#endif
