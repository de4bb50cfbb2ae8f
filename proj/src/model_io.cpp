#include "cellda/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cellda/errors.hpp"

namespace cellda {

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json a = json::array();  // row-major
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
    return a;
}

Eigen::MatrixXd mat_from_json(const json& a, Eigen::Index d) {
    Eigen::MatrixXd m(d, d);
    size_t k = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = a[k++].get<double>();
    return m;
}

}  // namespace

std::string serialize_model(const DiscriminantModel& model) {
    json j;
    j["schema_version"] = kModelSchemaVersion;
    j["mode"] = model.mode == DiscriminantMode::QDA ? "qda" : "lda";
    j["config"] = {{"cell_cutoff", model.config.cell_cutoff},
                   {"case_cutoff", model.config.case_cutoff},
                   {"eig_floor", model.config.eig_floor},
                   {"h_fraction", model.config.h_fraction},
                   {"class0_enabled", model.config.class0_enabled},
                   {"count_na_in_class0", model.config.count_na_in_class0}};
    j["col_names"] = model.col_names;
    j["label_names"] = model.label_names;
    j["classes"] = json::array();
    for (const ClassModel& c : model.classes) {
        json jc;
        jc["mu"] = vec_to_json(c.mu);
        jc["sigma"] = mat_to_json(c.sigma);
        jc["prior"] = c.prior;
        jc["p"] = vec_to_json(c.p);
        jc["alpha"] = vec_to_json(c.alpha);
        jc["std_loc"] = vec_to_json(c.std_loc);
        jc["std_scale"] = vec_to_json(c.std_scale);
        j["classes"].push_back(std::move(jc));
    }
    return j.dump(2);
}

DiscriminantModel deserialize_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw data_error(std::string("model file: invalid JSON: ") + e.what());
    }
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != kModelSchemaVersion)
        throw data_error("model file: unsupported schema version");

    DiscriminantModel model;
    model.mode = j["mode"].get<std::string>() == "lda" ? DiscriminantMode::LDA
                                                       : DiscriminantMode::QDA;
    const json& cfg = j["config"];
    model.config.cell_cutoff = cfg["cell_cutoff"].get<double>();
    model.config.case_cutoff = cfg["case_cutoff"].get<double>();
    model.config.eig_floor = cfg["eig_floor"].get<double>();
    model.config.h_fraction = cfg["h_fraction"].get<double>();
    model.config.class0_enabled = cfg["class0_enabled"].get<bool>();
    model.config.count_na_in_class0 = cfg["count_na_in_class0"].get<bool>();
    model.col_names = j["col_names"].get<std::vector<std::string>>();
    model.label_names = j["label_names"].get<std::vector<std::string>>();

    for (const json& jc : j["classes"]) {
        ClassModel c;
        c.mu = vec_from_json(jc["mu"]);
        c.sigma = mat_from_json(jc["sigma"], c.mu.size());
        c.prior = jc["prior"].get<double>();
        c.p = vec_from_json(jc["p"]);
        c.alpha = vec_from_json(jc["alpha"]);
        c.std_loc = vec_from_json(jc["std_loc"]);
        c.std_scale = vec_from_json(jc["std_scale"]);
        model.classes.push_back(std::move(c));
    }
    return model;
}

void save_model(const DiscriminantModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write model file: " + path);
    out << serialize_model(model);
}

DiscriminantModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

}  // namespace cellda
