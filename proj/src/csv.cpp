#include "cellda/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cellda/errors.hpp"

namespace cellda {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

DataSet parse_csv(const std::string& text, const std::string& label_col,
                  const std::vector<std::string>& na_tokens) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw data_error("csv: empty input");
    std::vector<std::string> header = split_line(line);
    for (auto& h : header) h = trim(h);
    {
        std::set<std::string> seen;
        for (const auto& h : header)
            if (!seen.insert(h).second)
                throw data_error("csv: duplicate header name '" + h + "'");
    }

    int label_idx = -1;
    if (!label_col.empty()) {
        auto it = std::find(header.begin(), header.end(), label_col);
        if (it == header.end())
            throw data_error("csv: label column '" + label_col + "' not found");
        label_idx = static_cast<int>(it - header.begin());
    }

    const size_t ncol = header.size();
    std::vector<std::vector<double>> values;
    std::vector<std::vector<bool>> mask;
    std::vector<std::string> raw_labels;
    auto is_na = [&](const std::string& s) {
        return std::find(na_tokens.begin(), na_tokens.end(), s) != na_tokens.end();
    };

    size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_line(line);
        if (fields.size() != ncol)
            throw data_error("csv: row " + std::to_string(lineno) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(ncol));
        std::vector<double> row;
        std::vector<bool> narow;
        for (size_t c = 0; c < ncol; ++c) {
            std::string cell = trim(fields[c]);
            if (static_cast<int>(c) == label_idx) {
                raw_labels.push_back(cell);
                continue;
            }
            if (is_na(cell)) {
                row.push_back(0.0);
                narow.push_back(true);
                continue;
            }
            try {
                size_t pos = 0;
                double v = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
                narow.push_back(false);
            } catch (const std::exception&) {
                throw data_error("csv: non-numeric cell '" + cell + "' at row " +
                                 std::to_string(lineno) + ", column '" + header[c] + "'");
            }
        }
        values.push_back(std::move(row));
        mask.push_back(std::move(narow));
    }
    if (values.empty()) throw data_error("csv: no data rows");

    const Eigen::Index n = static_cast<Eigen::Index>(values.size());
    const Eigen::Index d = static_cast<Eigen::Index>(values.front().size());
    DataSet ds;
    ds.values.resize(n, d);
    ds.na.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            ds.values(i, j) = values[static_cast<size_t>(i)][static_cast<size_t>(j)];
            ds.na(i, j) = mask[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    for (size_t c = 0; c < ncol; ++c)
        if (static_cast<int>(c) != label_idx) ds.col_names.push_back(header[c]);

    if (label_idx >= 0) {
        std::map<std::string, int> dict;
        for (const auto& lab : raw_labels) dict.emplace(lab, 0);
        int g = 0;
        for (auto& kv : dict) kv.second = ++g;
        ds.label_names.resize(static_cast<size_t>(g));
        for (const auto& kv : dict) ds.label_names[static_cast<size_t>(kv.second - 1)] = kv.first;
        for (const auto& lab : raw_labels) ds.labels.push_back(dict[lab]);
    }
    return ds;
}

DataSet read_csv(const std::string& path, const std::string& label_col,
                 const std::vector<std::string>& na_tokens) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), label_col, na_tokens);
}

std::string predictions_csv(const std::vector<PredictionResult>& results) {
    std::ostringstream os;
    os.precision(17);
    os << "label,raw_label,md2,pac,n_flags\n";
    for (const auto& r : results) {
        int n_flags = 0;
        if (r.raw_label >= 1 && static_cast<size_t>(r.raw_label) <= r.flags.size()) {
            const FlagVector& w = r.flags[static_cast<size_t>(r.raw_label - 1)];
            for (int j = 0; j < w.d(); ++j)
                if (w.w[j] == 0 && !w.na[j]) ++n_flags;
        }
        os << r.label << "," << r.raw_label << "," << r.md2_winner << ","
           << (r.pac >= 0 ? r.pac : -1.0) << "," << n_flags << "\n";
    }
    return os.str();
}

std::string classmap_csv(const std::vector<ClassMapRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "case_id,given,predicted,flagged_any,md,axis_coord,pac\n";
    for (const auto& r : rows)
        os << r.case_id << "," << r.given << "," << r.predicted << ","
           << (r.flagged_any ? 1 : 0) << "," << r.md << "," << r.axis_coord << ","
           << r.pac << "\n";
    return os.str();
}

std::string cellmap_csv(const std::vector<CellMapEntry>& cells,
                        const std::vector<std::string>& col_names) {
    std::ostringstream os;
    os.precision(17);
    os << "row,col,col_name,status,stdres\n";
    auto status_name = [](CellStatus s) {
        switch (s) {
            case CellStatus::Clean: return "clean";
            case CellStatus::High: return "high";
            case CellStatus::Low: return "low";
            case CellStatus::Na: return "na";
        }
        return "clean";
    };
    for (const auto& c : cells) {
        std::string name = static_cast<size_t>(c.col) < col_names.size()
                               ? col_names[static_cast<size_t>(c.col)]
                               : "col" + std::to_string(c.col + 1);
        os << c.row << "," << c.col << "," << name << "," << status_name(c.status)
           << "," << c.stdres << "\n";
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write file: " + path);
    out << content;
}

}  // namespace cellda
