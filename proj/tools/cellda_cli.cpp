#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "cellda/classifier.hpp"
#include "cellda/crossval.hpp"
#include "cellda/csv.hpp"
#include "cellda/datagen.hpp"
#include "cellda/errors.hpp"
#include "cellda/model_io.hpp"
#include "cellda/svg.hpp"

namespace {

struct Options {
    std::string input;
    std::string labels;
    std::string model;
    std::string out;
    uint64_t seed = 1;
    int folds = 5;
    int reps = 10;
    std::vector<std::string> na_tokens{"NA", ""};
    bool no_class0 = false;
    double cutoff = 0.99;
    double case_cutoff = 0.99;
    std::string mode = "qda";
    int class_id = 1;
    int dim = 5;
    int n_per_class = 100;
    double gamma = 8.0;
    std::string contamination = "cell";
    std::string test_contamination = "none";
    bool svg = false;
};

cellda::ModelConfig make_config(const Options& opt) {
    cellda::ModelConfig cfg;
    cfg.cell_cutoff = opt.cutoff;
    cfg.case_cutoff = opt.case_cutoff;
    cfg.class0_enabled = !opt.no_class0;
    return cfg;
}

cellda::DiscriminantModel train_model(const Options& opt) {
    cellda::DataSet data = cellda::read_csv(opt.input, opt.labels, opt.na_tokens);
    cellda::ModelConfig cfg = make_config(opt);
    return opt.mode == "lda" ? cellda::train_celllda(data, cfg)
                             : cellda::train_cellqda(data, cfg);
}

cellda::ContaminationType parse_contamination(const std::string& s) {
    if (s == "none") return cellda::ContaminationType::None;
    if (s == "cell") return cellda::ContaminationType::Cell;
    if (s == "case") return cellda::ContaminationType::Case;
    if (s == "mixed") return cellda::ContaminationType::Mixed;
    throw cellda::data_error("unknown contamination type: " + s);
}

int run(int argc, char** argv) {
    CLI::App app{"Cellwise robust discriminant analysis (cellQDA / cellLDA)"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd, bool need_input, bool need_labels) {
        auto* i = cmd->add_option("--input", opt.input, "input CSV file");
        if (need_input) i->required();
        auto* l = cmd->add_option("--labels", opt.labels, "label column name");
        if (need_labels) l->required();
        cmd->add_option("--out", opt.out, "output file path");
        cmd->add_option("--na-token", opt.na_tokens, "NA token (repeatable)");
        cmd->add_option("--seed", opt.seed, "random seed");
    };

    CLI::App* train = app.add_subcommand("train", "fit a cellQDA/cellLDA model");
    add_common(train, true, true);
    train->add_option("--mode", opt.mode, "qda or lda")
        ->check(CLI::IsMember({"qda", "lda"}));
    train->add_option("--cutoff", opt.cutoff, "cell cutoff probability");
    train->add_option("--case-cutoff", opt.case_cutoff, "casewise cutoff probability");
    train->add_flag("--no-class0", opt.no_class0, "disable casewise outlier class 0");
    train->add_option("--model", opt.model, "output model file")->required();

    CLI::App* predict = app.add_subcommand("predict", "predict labels for a CSV");
    add_common(predict, true, false);
    predict->add_option("--model", opt.model, "trained model file")->required();

    CLI::App* flag_cells =
        app.add_subcommand("flag-cells", "per-cell flag table for one class");
    add_common(flag_cells, true, true);
    flag_cells->add_option("--model", opt.model, "trained model file")->required();
    flag_cells->add_option("--class", opt.class_id, "class id (1..G)");
    flag_cells->add_flag("--svg", opt.svg, "also write an SVG rendering");

    CLI::App* simulate = app.add_subcommand("simulate", "run the simulation sweep");
    simulate->add_option("--out", opt.out, "output CSV path");
    simulate->add_option("--seed", opt.seed, "master seed");
    simulate->add_option("--dim", opt.dim, "dimension");
    simulate->add_option("--n-per-class", opt.n_per_class, "training cases per class");
    simulate->add_option("--reps", opt.reps, "replications per grid point");
    simulate->add_option("--gamma", opt.gamma, "largest gamma of the sweep");
    simulate->add_option("--mode", opt.mode, "qda or lda")
        ->check(CLI::IsMember({"qda", "lda"}));
    simulate->add_option("--train-contamination", opt.contamination,
                         "none|cell|case|mixed");
    simulate->add_option("--test-contamination", opt.test_contamination,
                         "none|cell|case");

    CLI::App* crossval = app.add_subcommand("crossval", "replicated stratified k-fold CV");
    add_common(crossval, true, true);
    crossval->add_option("--folds", opt.folds, "fold count (>= 2)");
    crossval->add_option("--reps", opt.reps, "replications");
    crossval->add_option("--mode", opt.mode, "qda or lda")
        ->check(CLI::IsMember({"qda", "lda"}));
    crossval->add_option("--cutoff", opt.cutoff, "cell cutoff probability");

    CLI::App* classmap = app.add_subcommand("classmap-data", "classmap table per class");
    add_common(classmap, true, true);
    classmap->add_option("--model", opt.model, "trained model file")->required();
    classmap->add_option("--class", opt.class_id, "class id (1..G)");
    classmap->add_flag("--svg", opt.svg, "also write an SVG rendering");

    CLI::App* cellmap = app.add_subcommand("cellmap-data", "cellmap table per class");
    add_common(cellmap, true, true);
    cellmap->add_option("--model", opt.model, "trained model file")->required();
    cellmap->add_option("--class", opt.class_id, "class id (1..G)");
    cellmap->add_flag("--svg", opt.svg, "also write an SVG rendering");

    CLI11_PARSE(app, argc, argv);

    auto emit = [&](const std::string& content) {
        if (opt.out.empty()) {
            std::cout << content;
        } else {
            cellda::write_file(opt.out, content);
        }
    };

    if (train->parsed()) {
        cellda::DiscriminantModel model = train_model(opt);
        cellda::save_model(model, opt.model);
        std::cout << "model written to " << opt.model << "\n";
    } else if (predict->parsed()) {
        cellda::DiscriminantModel model = cellda::load_model(opt.model);
        cellda::DataSet data = cellda::read_csv(opt.input, opt.labels, opt.na_tokens);
        emit(cellda::predictions_csv(cellda::predict_all(data, model)));
    } else if (flag_cells->parsed() || cellmap->parsed()) {
        cellda::DiscriminantModel model = cellda::load_model(opt.model);
        cellda::DataSet data = cellda::read_csv(opt.input, opt.labels, opt.na_tokens);
        auto cells = cellda::cellmap_data(model, data, opt.class_id);
        emit(cellda::cellmap_csv(cells, model.col_names));
        if (opt.svg && !opt.out.empty())
            cellda::write_file(opt.out + ".svg",
                               cellda::render_cellmap_svg(cells, model.col_names));
    } else if (simulate->parsed()) {
        std::vector<cellda::Scenario> grid;
        for (double g : {0.0, opt.gamma / 2.0, opt.gamma}) {
            cellda::Scenario scn;
            scn.d = opt.dim;
            scn.n_per_class = opt.n_per_class;
            scn.mode = opt.mode == "lda" ? cellda::DiscriminantMode::LDA
                                         : cellda::DiscriminantMode::QDA;
            scn.train_contamination = parse_contamination(opt.contamination);
            scn.test_contamination = parse_contamination(opt.test_contamination);
            if (scn.train_contamination == cellda::ContaminationType::Mixed) {
                scn.eps_cell = 0.05;
                scn.eps_case = 0.05;
            }
            scn.gamma = g;
            scn.seed = opt.seed;
            grid.push_back(scn);
        }
        std::vector<std::string> methods =
            opt.mode == "lda" ? std::vector<std::string>{"cellLDA", "CLDA"}
                              : std::vector<std::string>{"cellQDA", "CQDA"};
        emit(cellda::sweep_csv(cellda::run_sweep(grid, methods, opt.reps)));
    } else if (crossval->parsed()) {
        cellda::DataSet data = cellda::read_csv(opt.input, opt.labels, opt.na_tokens);
        cellda::ModelConfig cfg = make_config(opt);
        cfg.class0_enabled = false;  // accuracy over the given classes
        bool lda = opt.mode == "lda";
        auto method = [&](const cellda::DataSet& tr,
                          const cellda::DataSet& te) -> std::vector<int> {
            cellda::DiscriminantModel model =
                lda ? cellda::train_celllda(tr, cfg) : cellda::train_cellqda(tr, cfg);
            std::vector<int> pred;
            for (const auto& r : cellda::predict_all(te, model)) pred.push_back(r.label);
            return pred;
        };
        cellda::CrossvalResult res =
            cellda::cross_validate(data, opt.folds, opt.reps, opt.seed, method);
        emit(cellda::crossval_csv(res));
        std::cerr << "mean accuracy " << res.mean << " (sd " << res.sd << ")\n";
    } else if (classmap->parsed()) {
        cellda::DiscriminantModel model = cellda::load_model(opt.model);
        cellda::DataSet data = cellda::read_csv(opt.input, opt.labels, opt.na_tokens);
        auto rows = cellda::classmap_data(model, data, opt.class_id);
        emit(cellda::classmap_csv(rows));
        if (opt.svg && !opt.out.empty())
            cellda::write_file(opt.out + ".svg",
                               cellda::render_classmap_svg(rows, model.num_classes()));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cellda::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const cellda::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
