#include "jawtap/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jawtap/error.hpp"
#include "jawtap/evalkit.hpp"
#include "jawtap/features.hpp"
#include "jawtap/model.hpp"
#include "jawtap/recognizer.hpp"
#include "jawtap/synth.hpp"

namespace jawtap::cli {

namespace {

// Bad flag values found after parsing still count as usage errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    TrainConfig train;
    RecognizerConfig rec;
    double match_window = 0.25;
};

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_optional(const nlohmann::json& j, const char* key, std::optional<double>& out) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) out.reset();
    else out = j.at(key).get<double>();
}

Settings load_settings(const std::string& path) {
    Settings s;
    if (path.empty()) return s;
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::MissingFile, "cannot open config " + path);
    try {
        const nlohmann::json j = nlohmann::json::parse(f);
        if (j.contains("mode")) s.train.mode = parse_feature_mode(j.at("mode").get<std::string>());
        read_optional(j, "band", s.train.band);
        if (j.contains("gate")) {
            const auto& g = j.at("gate");
            GateConfig& c = s.train.gate;
            read_optional(g, "audio_energy_threshold", c.audio_energy_threshold);
            read_optional(g, "gyro_y_threshold", c.gyro_y_threshold);
            read_if(g, "smoothing_width", c.smoothing_width);
            read_if(g, "peak_ratio", c.peak_ratio);
            read_if(g, "peak_chain_gap", c.peak_chain_gap);
            read_if(g, "refractory", c.refractory);
            read_if(g, "calibration_seconds", c.calibration_seconds);
            read_if(g, "audio_floor_factor", c.audio_floor_factor);
            read_if(g, "gyro_floor_factor", c.gyro_floor_factor);
            read_if(g, "gyro_min_threshold", c.gyro_min_threshold);
            c.validate();
        }
        if (j.contains("svm")) {
            const auto& v = j.at("svm");
            read_if(v, "C", s.train.svm.C);
            read_if(v, "tolerance", s.train.svm.tolerance);
            read_if(v, "max_passes", s.train.svm.max_passes);
        }
        if (j.contains("session")) {
            const auto& v = j.at("session");
            read_if(v, "hold_timeout", s.rec.hold_timeout);
            read_if(v, "release_factor", s.rec.release_factor);
            read_if(v, "release_lockout", s.rec.release_lockout);
            read_if(v, "release_guard", s.rec.release_guard);
            read_if(v, "activation_factor", s.train.activation_factor);
        }
        read_if(j, "match_window", s.match_window);
        s.train.match_window = s.match_window;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    s.rec.gate = s.train.gate;
    return s;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + path);
    f << text;
}

void emit_diagnostics(std::vector<Diagnostic> diags, bool verbose, std::ostream& err) {
    if (!verbose) return;
    for (const auto& d : diags) err << to_json_line(d) << "\n";
}

std::string events_text(const std::vector<GestureEvent>& events) {
    std::string s;
    for (const auto& e : events) s += to_json_line(e) + "\n";
    return s;
}

double parse_number(std::string_view field, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw Error(ErrorCode::InvariantViolation, "line " + std::to_string(line_no) + ": bad number '" +
                                                       std::string(field) + "'");
    return v;
}

// Lines "imu,t,gx_l,gy_l,gz_l,gx_r,gy_r,gz_r" and "audio,t,left,right"; '#' starts a comment.
void stream_stdin(Recognizer& rz, std::istream& in, std::ostream& events_out, bool verbose, std::ostream& err) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
            f.push_back(rest.substr(0, pos));
        f.push_back(rest);
        if (f[0] == "imu" && f.size() == 8) {
            ImuFrame fr;
            fr.t = parse_number(f[1], line_no);
            for (std::size_t k = 0; k < 3; ++k) {
                fr.gyro_left[k] = parse_number(f[2 + k], line_no);
                fr.gyro_right[k] = parse_number(f[5 + k], line_no);
            }
            rz.push_imu(fr);
        } else if (f[0] == "audio" && f.size() == 4) {
            AudioFrame fr;
            fr.t = parse_number(f[1], line_no);
            fr.left = static_cast<std::int16_t>(parse_number(f[2], line_no));
            fr.right = static_cast<std::int16_t>(parse_number(f[3], line_no));
            rz.push_audio(fr);
        } else {
            throw Error(ErrorCode::InvariantViolation, "line " + std::to_string(line_no) + ": unrecognized record");
        }
        events_out << events_text(rz.take_events()) << std::flush;
        emit_diagnostics(rz.take_diagnostics(), verbose, err);
    }
    rz.finish();
    events_out << events_text(rz.take_events());
    emit_diagnostics(rz.take_diagnostics(), verbose, err);
}

struct ClassifyOptions {
    std::string model, replay, events, config;
    bool realtime = false;
    bool verbose = false;
};

int classify(const ClassifyOptions& o, SessionMode mode, std::istream& in, std::ostream& out, std::ostream& err) {
    Settings s = load_settings(o.config);
    const GestureModel model = load_model(o.model);
    RecognizerConfig rc = s.rec;
    rc.mode = mode;
    rc.feature_mask = model.knn.mask;
    if (!o.replay.empty()) {
        const Recording rec = load_recording(o.replay);
        ReplayResult r = replay(model, rec, rc, o.realtime);
        write_text(o.events, events_text(r.events), out);
        emit_diagnostics(std::move(r.diagnostics), o.verbose, err);
        return 0;
    }
    Recognizer rz(model, rc);
    if (o.events.empty() || o.events == "-") {
        stream_stdin(rz, in, out, o.verbose, err);
    } else {
        std::ofstream f(o.events, std::ios::binary);
        if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + o.events);
        stream_stdin(rz, in, f, o.verbose, err);
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"jawtap: teeth-tap gesture recognition from ear gyroscopes and contact microphones"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Write a synthetic labeled recording directory");
    std::string synth_spec, synth_out;
    std::uint64_t seed = 0;
    std::size_t per_label = 5, noise_per_kind = 0;
    bool suppress_release = false;
    synth->add_option("--spec", synth_spec, "Dataset spec JSON (overrides the count flags)")->check(CLI::ExistingFile);
    synth->add_option("--seed", seed, "Random seed");
    synth->add_option("--per-label", per_label, "Instances of each of the 13 gestures");
    synth->add_option("--noise-per-kind", noise_per_kind, "Noise clips of each kind");
    synth->add_flag("--suppress-release", suppress_release, "Holds never release");
    synth->add_option("--out", synth_out, "Output directory")->required();

    // train
    auto* train = app.add_subcommand("train", "Train a model from an annotated recording");
    std::string train_data, train_out, train_config, train_mode, train_mask = "both";
    std::optional<double> train_band;
    train->add_option("--data", train_data, "Recording directory")->required();
    train->add_option("--out", train_out, "Model JSON path")->required();
    train->add_option("--mode", train_mode, "Feature layout: full or paper64");
    train->add_option("--band", train_band, "Sakoe-Chiba half-width in samples");
    train->add_option("--mask", train_mask, "Gyro channels: both, left or right");
    train->add_option("--config", train_config, "Config JSON")->check(CLI::ExistingFile);

    // classify / activate
    ClassifyOptions co, ao;
    auto* cls = app.add_subcommand("classify", "Recognize gestures from a replayed recording or stdin");
    cls->add_option("--model", co.model, "Model JSON")->required()->check(CLI::ExistingFile);
    cls->add_option("--replay", co.replay, "Recording directory; reads stdin lines when absent");
    cls->add_option("--events", co.events, "Event JSON lines output (default stdout)");
    cls->add_option("--config", co.config, "Config JSON")->check(CLI::ExistingFile);
    cls->add_flag("--realtime", co.realtime, "Pace the replay by its timestamps");
    cls->add_flag("--verbose", co.verbose, "Diagnostics as JSON lines on stderr");
    auto* act = app.add_subcommand("activate", "Report only activation gestures (confident back triples)");
    act->add_option("--model", ao.model, "Model JSON")->required()->check(CLI::ExistingFile);
    act->add_option("--replay", ao.replay, "Recording directory; reads stdin lines when absent");
    act->add_option("--events", ao.events, "Event JSON lines output (default stdout)");
    act->add_option("--config", ao.config, "Config JSON")->check(CLI::ExistingFile);
    act->add_flag("--realtime", ao.realtime, "Pace the replay by its timestamps");
    act->add_flag("--verbose", ao.verbose, "Diagnostics as JSON lines on stderr");

    // eval
    auto* ev = app.add_subcommand("eval", "Score a model or a train recording against a test recording");
    std::string ev_model, ev_train, ev_test, ev_out, ev_csv, ev_table, ev_config, ev_mask = "both", ev_group = "none";
    bool triple_as_double = false;
    auto* ev_model_opt = ev->add_option("--model", ev_model, "Model JSON")->check(CLI::ExistingFile);
    auto* ev_train_opt = ev->add_option("--train", ev_train, "Training recording directory (retrains per mask)");
    ev_model_opt->excludes(ev_train_opt);
    ev->add_option("--test", ev_test, "Test recording directory")->required();
    ev->add_option("--mask", ev_mask, "Gyro channels: both, left or right");
    ev->add_option("--group", ev_group, "Label grouping: none, manner3 or place4");
    ev->add_flag("--triple-as-double", triple_as_double, "Score back_triple as double under manner3");
    ev->add_option("--out", ev_out, "Report JSON path (default stdout)");
    ev->add_option("--csv", ev_csv, "Per-event CSV path");
    ev->add_option("--table", ev_table, "ASCII confusion table path ('-' for stdout)");
    ev->add_option("--config", ev_config, "Config JSON")->check(CLI::ExistingFile);

    // features
    auto* feat = app.add_subcommand("features", "Feature vector layout");
    bool describe = false;
    std::string feat_mode = "full";
    feat->add_flag("--describe", describe, "Print index -> name as JSON")->required();
    feat->add_option("--mode", feat_mode, "full or paper64");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) {
            DatasetSpec spec;
            if (!synth_spec.empty()) {
                std::ifstream f(synth_spec);
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(f);
                } catch (const nlohmann::json::exception& e) {
                    throw UsageError("spec " + synth_spec + ": " + e.what());
                }
                spec = dataset_spec_from_json(j);
            } else {
                spec = DatasetSpec::per_label(per_label);
                spec.noise_counts.fill(noise_per_kind);
                spec.suppress_hold_release = suppress_release;
            }
            const Recording rec = synth_dataset(spec, seed);
            save_recording(rec, synth_out);
            out << "wrote " << rec.annotations.size() << " annotations, " << rec.duration() << " s to " << synth_out
                << "\n";
            return 0;
        }
        if (train->parsed()) {
            Settings s = load_settings(train_config);
            if (!train_mode.empty()) s.train.mode = parse_feature_mode(train_mode);
            if (train_band) s.train.band = train_band;
            s.train.mask = parse_channel_mask(train_mask);
            const Recording rec = load_recording(train_data);
            const GestureModel model = train_model(rec, s.train);
            save_model(model, train_out);
            out << "trained " << model.knn.templates.size() << " templates"
                << (model.svm.svm.converged ? "" : " (svm did not converge)") << "\n";
            return 0;
        }
        if (cls->parsed()) return classify(co, SessionMode::FullVocabulary, in, out, err);
        if (act->parsed()) return classify(ao, SessionMode::ActivationOnly, in, out, err);
        if (ev->parsed()) {
            if (ev_model.empty() && ev_train.empty()) throw UsageError("eval needs --model or --train");
            Settings s = load_settings(ev_config);
            EvalConfig cfg;
            cfg.train = s.train;
            cfg.recognizer = s.rec;
            cfg.match_window = s.match_window;
            cfg.mask = parse_channel_mask(ev_mask);
            cfg.grouping = parse_grouping(ev_group);
            cfg.triple_as_double = triple_as_double;
            const Recording test = load_recording(ev_test);
            EvalReport report;
            if (!ev_model.empty()) {
                const GestureModel model = load_model(ev_model);
                cfg.recognizer.feature_mask = model.knn.mask;
                report = evaluate_model(model, test, cfg);
            } else {
                report = run_eval(load_recording(ev_train), test, cfg);
            }
            write_text(ev_out, report_json(report), out);
            if (!ev_csv.empty()) write_text(ev_csv, event_log_csv(report), out);
            if (!ev_table.empty()) write_text(ev_table, confusion_table(report), out);
            return 0;
        }
        if (feat->parsed()) {
            const FeatureMode mode = parse_feature_mode(feat_mode);
            nlohmann::json j = nlohmann::json::array();
            const auto names = feature_names(mode);
            for (std::size_t i = 0; i < names.size(); ++i) j.push_back({{"index", i}, {"name", names[i]}});
            out << j.dump(2) << "\n";
            return 0;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::InvalidArgument ? 1 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cin, std::cout, std::cerr); }

}  // namespace jawtap::cli
