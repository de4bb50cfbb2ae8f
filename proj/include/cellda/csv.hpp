#ifndef CELLDA_CSV_HPP
#define CELLDA_CSV_HPP

#include <string>
#include <vector>

#include "cellda/classifier.hpp"
#include "cellda/dataset.hpp"

namespace cellda {

// Parses a rectangular CSV with header. Cells matching an NA token are
// masked; the label column (optional) is mapped to dense ids 1..G with the
// dictionary kept in label_names. Errors name the offending row/column.
DataSet read_csv(const std::string& path, const std::string& label_col = "",
                 const std::vector<std::string>& na_tokens = {"NA", ""});

DataSet parse_csv(const std::string& text, const std::string& label_col = "",
                  const std::vector<std::string>& na_tokens = {"NA", ""});

std::string predictions_csv(const std::vector<PredictionResult>& results);
std::string classmap_csv(const std::vector<ClassMapRow>& rows);
std::string cellmap_csv(const std::vector<CellMapEntry>& cells,
                        const std::vector<std::string>& col_names);

void write_file(const std::string& path, const std::string& content);

}  // namespace cellda

#endif
