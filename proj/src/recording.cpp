#include "jawtap/recording.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "jawtap/error.hpp"

namespace jawtap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kRateTolerance = 0.01;
constexpr double kDurationTolerance = 0.1;
constexpr const char* kImuHeader = "t,gx_l,gy_l,gz_l,gx_r,gy_r,gz_r";

void append_double(std::string& out, double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, end);
}

double parse_double(std::string_view field, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw Error(ErrorCode::InvariantViolation,
                    "imu.csv line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
    return v;
}

std::ifstream open_input(const fs::path& p, std::ios::openmode mode = std::ios::in) {
    if (!fs::exists(p)) throw Error(ErrorCode::MissingFile, p.string());
    std::ifstream in(p, mode);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + p.string());
    return in;
}

std::vector<std::int16_t> read_pcm(const fs::path& p) {
    auto in = open_input(p, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % 2 != 0) throw Error(ErrorCode::InvariantViolation, p.string() + ": odd byte count");
    std::vector<std::int16_t> out(bytes.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto lo = static_cast<std::uint16_t>(static_cast<unsigned char>(bytes[2 * i]));
        auto hi = static_cast<std::uint16_t>(static_cast<unsigned char>(bytes[2 * i + 1]));
        out[i] = static_cast<std::int16_t>(static_cast<std::uint16_t>(lo | (hi << 8)));
    }
    return out;
}

void write_pcm(const fs::path& p, const std::vector<std::int16_t>& samples) {
    std::string bytes(samples.size() * 2, '\0');
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto u = static_cast<std::uint16_t>(samples[i]);
        bytes[2 * i] = static_cast<char>(u & 0xff);
        bytes[2 * i + 1] = static_cast<char>(u >> 8);
    }
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + p.string());
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + p.string());
}

}  // namespace

void validate(const Recording& rec) {
    const auto& m = rec.meta;
    if (!(m.imu_rate_hz > 0.0) || !(m.audio_rate_hz > 0.0))
        throw Error(ErrorCode::InvariantViolation, "sample rates must be positive");
    for (std::size_t i = 1; i < rec.imu.size(); ++i)
        if (!(rec.imu[i].t > rec.imu[i - 1].t))
            throw Error(ErrorCode::NonMonotonicTimestamps, "imu frame " + std::to_string(i));
    for (const auto& f : rec.imu) {
        auto finite = [](const std::array<double, 3>& v) {
            return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
        };
        if (!std::isfinite(f.t) || !finite(f.gyro_left) || !finite(f.gyro_right))
            throw Error(ErrorCode::InvariantViolation, "non-finite imu value");
    }
    if (rec.audio_left.size() != rec.audio_right.size())
        throw Error(ErrorCode::InvariantViolation, "audio channels differ in length");

    if (rec.imu.size() >= 2) {
        double span = rec.imu.back().t - rec.imu.front().t;
        double est = static_cast<double>(rec.imu.size() - 1) / span;
        if (std::abs(est - m.imu_rate_hz) > kRateTolerance * m.imu_rate_hz)
            throw Error(ErrorCode::RateMismatch, "imu rate declared " + std::to_string(m.imu_rate_hz) +
                                                     " Hz, observed " + std::to_string(est) + " Hz");
    }
    if (!rec.imu.empty() || rec.audio_size() > 0) {
        if (std::abs(rec.imu_duration() - rec.audio_duration()) > kDurationTolerance)
            throw Error(ErrorCode::RateMismatch, "imu duration " + std::to_string(rec.imu_duration()) +
                                                     " s vs audio duration " +
                                                     std::to_string(rec.audio_duration()) + " s");
    }

    double prev_end = -std::numeric_limits<double>::infinity();
    for (const auto& a : rec.annotations) {
        if (!(a.t_start < a.t_end)) throw Error(ErrorCode::InvariantViolation, "annotation with t_start >= t_end");
        if (a.t_start < prev_end) throw Error(ErrorCode::InvariantViolation, "overlapping annotations");
        if (a.hold_duration) {
            auto* g = std::get_if<GestureLabel>(&a.label);
            if (!g || !g->is_hold() || *a.hold_duration < 0.0)
                throw Error(ErrorCode::InvariantViolation, "hold_duration on a non-hold annotation");
        }
        prev_end = a.t_end;
    }
}

Recording load_recording(const fs::path& dir) {
    Recording rec;

    {
        auto in = open_input(dir / "meta.json");
        json j;
        try {
            j = json::parse(in);
            rec.meta.imu_rate_hz = j.at("imu_rate_hz").get<double>();
            rec.meta.audio_rate_hz = j.at("audio_rate_hz").get<double>();
            rec.meta.subject = j.at("subject").get<std::string>();
            rec.meta.session = j.at("session").get<std::string>();
            rec.meta.gyro_units = j.value("gyro_units", std::string("deg/s"));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvariantViolation, std::string("meta.json: ") + e.what());
        }
    }

    {
        auto in = open_input(dir / "imu.csv");
        std::string line;
        if (!std::getline(in, line) || line.rfind(kImuHeader, 0) != 0)
            throw Error(ErrorCode::InvariantViolation, "imu.csv: missing header");
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::array<double, 7> v{};
            std::size_t pos = 0;
            for (std::size_t k = 0; k < 7; ++k) {
                std::size_t comma = line.find(',', pos);
                if ((k < 6) != (comma != std::string::npos))
                    throw Error(ErrorCode::InvariantViolation, "imu.csv line " + std::to_string(line_no) +
                                                                   ": expected 7 fields");
                std::string_view field(line.data() + pos, (k < 6 ? comma : line.size()) - pos);
                v[k] = parse_double(field, line_no);
                pos = comma + 1;
            }
            rec.imu.push_back({v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]}});
        }
    }

    rec.audio_left = read_pcm(dir / "audio_l.pcm");
    rec.audio_right = read_pcm(dir / "audio_r.pcm");

    {
        auto in = open_input(dir / "annotations.jsonl");
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                auto j = json::parse(line);
                Annotation a{parse_annotation_label(j.at("label").get<std::string>()),
                             j.at("t_start").get<double>(), j.at("t_end").get<double>(), std::nullopt};
                if (j.contains("hold_duration")) a.hold_duration = j["hold_duration"].get<double>();
                rec.annotations.push_back(a);
            } catch (const json::exception& e) {
                throw Error(ErrorCode::InvariantViolation, std::string("annotations.jsonl: ") + e.what());
            }
        }
    }

    validate(rec);
    return rec;
}

void save_recording(const Recording& rec, const fs::path& dir) {
    try {
        validate(rec);
    } catch (const Error& e) {
        // Whatever the defect, an invalid recording is never written.
        throw Error(ErrorCode::InvariantViolation, std::string("refusing to save: ") + e.what());
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

    json meta = {{"imu_rate_hz", rec.meta.imu_rate_hz},
                 {"audio_rate_hz", rec.meta.audio_rate_hz},
                 {"subject", rec.meta.subject},
                 {"session", rec.meta.session},
                 {"gyro_units", rec.meta.gyro_units}};
    write_text(dir / "meta.json", meta.dump(2) + "\n");

    std::string csv = std::string(kImuHeader) + "\n";
    csv.reserve(rec.imu.size() * 96);
    for (const auto& f : rec.imu) {
        append_double(csv, f.t);
        for (double v : f.gyro_left) csv.push_back(','), append_double(csv, v);
        for (double v : f.gyro_right) csv.push_back(','), append_double(csv, v);
        csv.push_back('\n');
    }
    write_text(dir / "imu.csv", csv);

    write_pcm(dir / "audio_l.pcm", rec.audio_left);
    write_pcm(dir / "audio_r.pcm", rec.audio_right);

    std::string lines;
    for (const auto& a : rec.annotations) {
        json j = {{"label", to_string(a.label)}, {"t_start", a.t_start}, {"t_end", a.t_end}};
        if (a.hold_duration) j["hold_duration"] = *a.hold_duration;
        lines += j.dump() + "\n";
    }
    write_text(dir / "annotations.jsonl", lines);
}

}  // namespace jawtap
