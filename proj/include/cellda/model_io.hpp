#ifndef CELLDA_MODEL_IO_HPP
#define CELLDA_MODEL_IO_HPP

#include <string>

#include "cellda/dataset.hpp"

namespace cellda {

inline constexpr int kModelSchemaVersion = 1;

// JSON serialization of a trained model. Numbers survive a round trip
// bit-exactly (shortest round-trip float representation).
std::string serialize_model(const DiscriminantModel& model);
DiscriminantModel deserialize_model(const std::string& json_text);

void save_model(const DiscriminantModel& model, const std::string& path);
DiscriminantModel load_model(const std::string& path);

}  // namespace cellda

#endif
