// model.hpp
// Trained recognizer state and its model.json persistence.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "jawtap/dtw_knn.hpp"
#include "jawtap/noisegate.hpp"
#include "jawtap/segment.hpp"

namespace jawtap {

struct GestureModel {
    SvmModel svm;
    KnnModel knn;
    std::optional<double> activation_threshold;
    // Explicit gate thresholds; unset ones are calibrated per stream.
    std::optional<double> audio_energy_threshold;
    std::optional<double> gyro_y_threshold;
};

// {"svm": {weights, bias, mode}, "norm": {mean, std}, "templates": [{label, matrix}],
//  "knn": {band, mask}, "activation_threshold"?, "gate"?}
nlohmann::json to_json(const GestureModel& model);
GestureModel model_from_json(const nlohmann::json& j);

void save_model(const GestureModel& model, const std::filesystem::path& path);
GestureModel load_model(const std::filesystem::path& path);

}  // namespace jawtap
