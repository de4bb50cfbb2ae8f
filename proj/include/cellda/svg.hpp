#ifndef CELLDA_SVG_HPP
#define CELLDA_SVG_HPP

#include <string>
#include <vector>

#include "cellda/classifier.hpp"

namespace cellda {

// Static classmap: distance coordinate on x in [0,4], PAC on y in [0,1],
// light grey background below PAC = 0.5, vertical cutoff line at the 99%
// distance quantile. Circles for cases without flagged cells, triangles
// with at least one, black outline for class-0 assignments.
std::string render_classmap_svg(const std::vector<ClassMapRow>& rows, int num_classes,
                                double cutoff_prob = 0.99);

// Static cellmap grid: yellow for clean cells, red/blue for flagged cells
// with intensity proportional to |stdres|, saturated at |stdres| = 6;
// grey for NA.
std::string render_cellmap_svg(const std::vector<CellMapEntry>& cells,
                               const std::vector<std::string>& col_names);

}  // namespace cellda

#endif
