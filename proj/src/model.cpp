#include "jawtap/model.hpp"

#include <fstream>

#include "jawtap/error.hpp"

namespace jawtap {

using nlohmann::json;

json to_json(const GestureModel& model) {
    json templates = json::array();
    for (const auto& t : model.knn.templates) {
        json rows = json::array();
        for (std::size_t r = 0; r < t.matrix.rows(); ++r) {
            auto row = t.matrix.row(r);
            rows.push_back(std::vector<double>(row.begin(), row.end()));
        }
        templates.push_back({{"label", to_string(t.label)}, {"matrix", rows}});
    }
    json j = {
        {"svm",
         {{"weights", model.svm.svm.weights}, {"bias", model.svm.svm.bias}, {"mode", to_string(model.svm.mode)},
          {"converged", model.svm.svm.converged}}},
        {"norm", {{"mean", model.svm.svm.norm.mean}, {"std", model.svm.svm.norm.std}}},
        {"templates", templates},
        {"knn", {{"band", model.knn.band ? json(*model.knn.band) : json(nullptr)}, {"mask", to_string(model.knn.mask)}}},
    };
    if (model.activation_threshold) j["activation_threshold"] = *model.activation_threshold;
    if (model.audio_energy_threshold || model.gyro_y_threshold) {
        json gate = json::object();
        if (model.audio_energy_threshold) gate["audio_energy_threshold"] = *model.audio_energy_threshold;
        if (model.gyro_y_threshold) gate["gyro_y_threshold"] = *model.gyro_y_threshold;
        j["gate"] = gate;
    }
    return j;
}

GestureModel model_from_json(const json& j) {
    try {
        GestureModel m;
        const auto& svm = j.at("svm");
        m.svm.mode = parse_feature_mode(svm.at("mode").get<std::string>());
        m.svm.svm.weights = svm.at("weights").get<std::vector<double>>();
        m.svm.svm.bias = svm.at("bias").get<double>();
        m.svm.svm.converged = svm.value("converged", true);
        m.svm.svm.norm.mean = j.at("norm").at("mean").get<std::vector<double>>();
        m.svm.svm.norm.std = j.at("norm").at("std").get<std::vector<double>>();
        const std::size_t d = feature_length(m.svm.mode);
        if (m.svm.svm.weights.size() != d || m.svm.svm.norm.mean.size() != d || m.svm.svm.norm.std.size() != d)
            throw Error(ErrorCode::ModeMismatch, "model vectors do not match feature mode " + to_string(m.svm.mode));
        for (double s : m.svm.svm.norm.std)
            if (!(s > 0.0)) throw Error(ErrorCode::InvariantViolation, "norm.std entries must be positive");

        std::vector<Template> templates;
        for (const auto& t : j.at("templates")) {
            const auto& rows = t.at("matrix");
            GyroMatrix mat(rows.size(), kGyroColumns);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                auto row = rows[r].get<std::vector<double>>();
                if (row.size() != kGyroColumns) throw Error(ErrorCode::ShapeMismatch, "template row must have 6 values");
                std::copy(row.begin(), row.end(), mat.row(r).begin());
            }
            templates.push_back({parse_label(t.at("label").get<std::string>()), std::move(mat)});
        }
        Band band;
        ChannelMask mask = ChannelMask::both();
        if (j.contains("knn")) {
            const auto& knn = j["knn"];
            if (knn.contains("band") && !knn["band"].is_null()) band = knn["band"].get<double>();
            if (knn.contains("mask")) mask = parse_channel_mask(knn["mask"].get<std::string>());
        }
        m.knn = fit(std::move(templates), band, mask);
        if (j.contains("activation_threshold")) m.activation_threshold = j["activation_threshold"].get<double>();
        if (j.contains("gate")) {
            const auto& g = j["gate"];
            if (g.contains("audio_energy_threshold")) m.audio_energy_threshold = g["audio_energy_threshold"].get<double>();
            if (g.contains("gyro_y_threshold")) m.gyro_y_threshold = g["gyro_y_threshold"].get<double>();
        }
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvariantViolation, std::string("model.json: ") + e.what());
    }
}

void save_model(const GestureModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    out << to_json(model).dump() << "\n";
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

GestureModel load_model(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingFile, path.string());
    std::ifstream in(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvariantViolation, std::string("model.json: ") + e.what());
    }
    return model_from_json(j);
}

}  // namespace jawtap
