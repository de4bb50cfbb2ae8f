#include "cellda/svg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cellda {

namespace {

const char* kClassColors[] = {"#e6194b", "#4363d8", "#3cb44b", "#f58231",
                              "#911eb4", "#46f0f0", "#f032e6", "#808000"};

std::string class_color(int label) {
    if (label == 0) return "#999999";
    return kClassColors[(label - 1) % 8];
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << v;
    return os.str();
}

// Blend white toward a full color by t in [0,1].
std::string blend(int r, int g, int b, double t) {
    auto ch = [&](int c) { return static_cast<int>(std::lround(255 + t * (c - 255))); };
    std::ostringstream os;
    os << "rgb(" << ch(r) << "," << ch(g) << "," << ch(b) << ")";
    return os.str();
}

}  // namespace

std::string render_classmap_svg(const std::vector<ClassMapRow>& rows, int num_classes,
                                double cutoff_prob) {
    const double W = 520, H = 420;
    const double x0 = 60, y0 = 30, plot_w = 400, plot_h = 340;
    auto px = [&](double axis) { return x0 + plot_w * (axis / 4.0); };
    auto py = [&](double pac) { return y0 + plot_h * (1.0 - pac); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
       << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    // Grey background in the lower half (PAC < 0.5): classifier agrees there.
    os << "<rect x=\"" << x0 << "\" y=\"" << py(0.5) << "\" width=\"" << plot_w
       << "\" height=\"" << plot_h / 2 << "\" fill=\"#eeeeee\"/>\n";
    os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << plot_w
       << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    double cut = classmap_cutoff_coord(cutoff_prob);
    os << "<line x1=\"" << px(cut) << "\" y1=\"" << y0 << "\" x2=\"" << px(cut)
       << "\" y2=\"" << y0 + plot_h << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
    os << "<text x=\"" << x0 - 40 << "\" y=\"" << py(0.0) << "\" font-size=\"11\">0</text>\n"
       << "<text x=\"" << x0 - 40 << "\" y=\"" << py(0.5) << "\" font-size=\"11\">0.5</text>\n"
       << "<text x=\"" << x0 - 40 << "\" y=\"" << py(1.0) + 10 << "\" font-size=\"11\">1</text>\n";
    os << "<text x=\"" << x0 + plot_w / 2 - 60 << "\" y=\"" << H - 10
       << "\" font-size=\"12\">distance to class center</text>\n";
    os << "<text x=\"14\" y=\"" << y0 + plot_h / 2
       << "\" font-size=\"12\" transform=\"rotate(-90 14 " << y0 + plot_h / 2
       << ")\">PAC</text>\n";

    for (const ClassMapRow& r : rows) {
        double x = px(std::clamp(r.axis_coord, 0.0, 4.0));
        double y = py(std::clamp(r.pac, 0.0, 1.0));
        std::string fill = class_color(r.predicted);
        std::string stroke = r.predicted == 0 ? "black" : "none";
        if (r.flagged_any) {
            os << "<polygon points=\"" << fmt(x) << "," << fmt(y - 5) << " "
               << fmt(x - 4.5) << "," << fmt(y + 4) << " " << fmt(x + 4.5) << ","
               << fmt(y + 4) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
               << "\"/>\n";
        } else {
            os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y)
               << "\" r=\"4\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
        }
    }
    // Legend.
    for (int g = 0; g <= num_classes; ++g) {
        double ly = y0 + 14 * g;
        os << "<rect x=\"" << x0 + plot_w + 8 << "\" y=\"" << ly
           << "\" width=\"10\" height=\"10\" fill=\"" << class_color(g) << "\"/>\n"
           << "<text x=\"" << x0 + plot_w + 22 << "\" y=\"" << ly + 9
           << "\" font-size=\"10\">" << (g == 0 ? std::string("class 0")
                                                : "class " + std::to_string(g))
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_cellmap_svg(const std::vector<CellMapEntry>& cells,
                               const std::vector<std::string>& col_names) {
    constexpr double kSaturation = 6.0;  // |stdres| at which color saturates
    std::map<int, int> row_pos;
    int ncol = 0;
    for (const CellMapEntry& c : cells) {
        row_pos.emplace(c.row, 0);
        ncol = std::max(ncol, c.col + 1);
    }
    int r = 0;
    for (auto& kv : row_pos) kv.second = r++;

    const double cell = 22, label_w = 60, header_h = 70;
    const double W = label_w + ncol * cell + 10;
    const double H = header_h + static_cast<double>(row_pos.size()) * cell + 10;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
       << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    for (int j = 0; j < ncol; ++j) {
        std::string name = static_cast<size_t>(j) < col_names.size()
                               ? col_names[static_cast<size_t>(j)]
                               : "col" + std::to_string(j + 1);
        double x = label_w + j * cell + cell / 2;
        os << "<text x=\"" << x << "\" y=\"" << header_h - 6
           << "\" font-size=\"10\" transform=\"rotate(-60 " << x << " "
           << header_h - 6 << ")\">" << name << "</text>\n";
    }
    for (const CellMapEntry& c : cells) {
        double x = label_w + c.col * cell;
        double y = header_h + row_pos[c.row] * cell;
        std::string fill;
        switch (c.status) {
            case CellStatus::Clean:
                fill = "#ffec8b";
                break;
            case CellStatus::Na:
                fill = "#cccccc";
                break;
            case CellStatus::High: {
                double t = std::min(std::abs(c.stdres) / kSaturation, 1.0);
                fill = blend(200, 0, 0, t);
                break;
            }
            case CellStatus::Low: {
                double t = std::min(std::abs(c.stdres) / kSaturation, 1.0);
                fill = blend(0, 0, 200, t);
                break;
            }
        }
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell - 2
           << "\" height=\"" << cell - 2 << "\" fill=\"" << fill
           << "\" stroke=\"#777777\"/>\n";
        if (c.col == 0)
            os << "<text x=\"4\" y=\"" << y + cell - 8 << "\" font-size=\"10\">row "
               << c.row << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace cellda
