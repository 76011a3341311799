#include "mfpca/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mfpca {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& path, std::size_t line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_double(const std::string& path, std::size_t line, std::string_view field) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        fail_at(path, line, "expected a number, got '" + std::string(field) + "'");
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

json require_key(const json& j, const std::string& key, const std::string& context) {
    if (!j.contains(key))
        throw std::runtime_error(context + ": missing required key '" + key + "'");
    return j.at(key);
}

json parse_json_file(const std::string& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(path + ": invalid JSON");
    return j;
}

std::vector<std::pair<int, int>> ranges_from_json(const json& arr, const std::string& ctx) {
    if (!arr.is_array()) throw std::runtime_error(ctx + ": sample_ranges must be an array");
    std::vector<std::pair<int, int>> out;
    for (const json& r : arr) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() ||
            !r[1].is_number_integer())
            throw std::runtime_error(ctx + ": each range must be [start, end]");
        out.emplace_back(r[0].get<int>(), r[1].get<int>());
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void write_recording_csv(const SensorRecording& recording, const std::string& path) {
    std::ostringstream out;
    out << "time_s";
    for (const std::string& ch : recording.channels) out << ',' << ch;
    out << '\n';
    for (int t = 0; t < recording.samples.rows(); ++t) {
        out << format_double(t / recording.sample_rate_hz);
        for (int c = 0; c < recording.samples.cols(); ++c)
            out << ',' << format_double(recording.samples(t, c));
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

SensorRecording read_recording_csv(const std::string& path) {
    const std::string content = read_file(path);

    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t nl = content.find('\n', start);
        if (nl == std::string::npos) nl = content.size();
        std::string_view line{content.data() + start, nl - start};
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    if (lines.empty()) fail_at(path, 1, "empty file");
    const auto header = split_fields(lines[0]);
    if (header.empty() || header[0] != "time_s")
        fail_at(path, 1, "header must start with 'time_s'");
    if (header.size() < 2) fail_at(path, 1, "no channel columns in header");

    SensorRecording rec;
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i].empty()) fail_at(path, 1, "empty channel name in header");
        rec.channels.emplace_back(header[i]);
    }

    const int d = static_cast<int>(rec.channels.size());
    const int t_count = static_cast<int>(lines.size()) - 1;
    if (t_count < 1) fail_at(path, 2, "no sample rows");
    rec.samples = Matrix(t_count, d);
    std::vector<double> times(static_cast<std::size_t>(t_count));
    for (int t = 0; t < t_count; ++t) {
        const std::size_t line_no = static_cast<std::size_t>(t) + 2;
        const auto fields = split_fields(lines[static_cast<std::size_t>(t) + 1]);
        if (fields.size() != header.size())
            fail_at(path, line_no,
                    "expected " + std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
        times[static_cast<std::size_t>(t)] = parse_double(path, line_no, fields[0]);
        for (int c = 0; c < d; ++c)
            rec.samples(t, c) =
                parse_double(path, line_no, fields[static_cast<std::size_t>(c) + 1]);
    }

    if (t_count >= 2 && times[1] > times[0])
        rec.sample_rate_hz = 1.0 / (times[1] - times[0]);
    return rec;
}

void write_truth_json(const GroundTruth& truth, const std::string& path) {
    json j;
    j["schema"] = "mfpca-truth/1";
    j["anomalous"] = json::array();
    for (const ChannelTruth& ct : truth.anomalous) {
        json entry;
        entry["channel"] = ct.channel;
        entry["sample_ranges"] = json::array();
        for (const auto& [lo, hi] : ct.sample_ranges)
            entry["sample_ranges"].push_back({lo, hi});
        j["anomalous"].push_back(entry);
    }
    write_file_atomic(path, j.dump(2) + "\n");
}

GroundTruth read_truth_json(const std::string& path) {
    const json j = parse_json_file(path);
    if (require_key(j, "schema", path) != "mfpca-truth/1")
        throw std::runtime_error(path + ": unsupported schema");
    GroundTruth truth;
    for (const json& entry : require_key(j, "anomalous", path)) {
        ChannelTruth ct;
        ct.channel = require_key(entry, "channel", path).get<std::string>();
        ct.sample_ranges = ranges_from_json(require_key(entry, "sample_ranges", path), path);
        truth.anomalous.push_back(std::move(ct));
    }
    return truth;
}

void write_report_json(const CsdReport& report, const std::string& path) {
    json j;
    j["schema"] = "mfpca-report/1";
    j["mode"] = std::string(detect_mode_name(report.mode));
    j["method"] = std::string(report.method.name());
    j["channels"] = report.channels;
    j["segments"] = json::array();
    for (const SegmentSpan& s : report.segments) {
        json seg;
        seg["index"] = s.index;
        seg["start_sample"] = s.start_sample;
        seg["end_sample"] = s.end_sample;
        seg["start_s"] = s.start_s;
        seg["end_s"] = s.end_s;
        j["segments"].push_back(seg);
    }
    j["scores"] = json::array();
    j["flags"] = json::array();
    for (int s = 0; s < report.scores.rows(); ++s) {
        json score_row = json::array();
        json flag_row = json::array();
        for (int c = 0; c < report.scores.cols(); ++c) {
            score_row.push_back(report.scores(s, c));
            flag_row.push_back(
                static_cast<bool>(report.flags[static_cast<std::size_t>(s)]
                                              [static_cast<std::size_t>(c)]));
        }
        j["scores"].push_back(score_row);
        j["flags"].push_back(flag_row);
    }
    j["calibration"] = {{"mu", report.calibration.mu},
                        {"sigma", report.calibration.sigma},
                        {"alpha", report.calibration.alpha}};
    j["threshold"] = report.threshold;
    j["persistence"] = report.persistence;
    j["anomalous_channels"] = report.anomalous_channels;
    j["constant_channels"] = report.constant_channels;
    write_file_atomic(path, j.dump(2) + "\n");
}

CsdReport read_report_json(const std::string& path) {
    const json j = parse_json_file(path);
    if (require_key(j, "schema", path) != "mfpca-report/1")
        throw std::runtime_error(path + ": unsupported schema");

    CsdReport report;
    const std::string mode = require_key(j, "mode", path).get<std::string>();
    if (mode == "multi-sensor")
        report.mode = DetectMode::MultiSensor;
    else if (mode == "single-sensor")
        report.mode = DetectMode::SingleSensor;
    else
        throw std::runtime_error(path + ": unknown mode '" + mode + "'");
    report.method = pca_method_from_name(require_key(j, "method", path).get<std::string>());
    report.channels = require_key(j, "channels", path).get<std::vector<std::string>>();
    if (report.channels.empty()) throw std::runtime_error(path + ": no channels");

    const json segments = require_key(j, "segments", path);
    if (!segments.is_array() || segments.empty())
        throw std::runtime_error(path + ": segments must be a non-empty array");
    for (const json& seg : segments) {
        SegmentSpan span;
        span.index = require_key(seg, "index", path).get<int>();
        span.start_sample = require_key(seg, "start_sample", path).get<int>();
        span.end_sample = require_key(seg, "end_sample", path).get<int>();
        span.start_s = require_key(seg, "start_s", path).get<double>();
        span.end_s = require_key(seg, "end_s", path).get<double>();
        report.segments.push_back(span);
    }

    const json scores = require_key(j, "scores", path);
    const json flags = require_key(j, "flags", path);
    if (!scores.is_array() || scores.size() != report.segments.size())
        throw std::runtime_error(path + ": scores must have one row per segment");
    if (!flags.is_array() || flags.size() != scores.size())
        throw std::runtime_error(path + ": flags must mirror scores");
    report.scores = Matrix(static_cast<int>(report.segments.size()),
                           static_cast<int>(report.channels.size()));
    for (std::size_t s = 0; s < scores.size(); ++s) {
        const json& score_row = scores[s];
        const json& flag_row = flags[s];
        if (!score_row.is_array() || score_row.size() != report.channels.size() ||
            !flag_row.is_array() || flag_row.size() != report.channels.size())
            throw std::runtime_error(path + ": row width must match channel count");
        std::vector<bool> frow(report.channels.size());
        for (std::size_t c = 0; c < report.channels.size(); ++c) {
            if (!score_row[c].is_number())
                throw std::runtime_error(path + ": scores must be numbers");
            if (!flag_row[c].is_boolean())
                throw std::runtime_error(path + ": flags must be booleans");
            report.scores(static_cast<int>(s), static_cast<int>(c)) =
                score_row[c].get<double>();
            frow[c] = flag_row[c].get<bool>();
        }
        report.flags.push_back(std::move(frow));
    }

    const json cal = require_key(j, "calibration", path);
    report.calibration.mu = require_key(cal, "mu", path).get<double>();
    report.calibration.sigma = require_key(cal, "sigma", path).get<double>();
    report.calibration.alpha = require_key(cal, "alpha", path).get<double>();
    report.threshold = require_key(j, "threshold", path).get<double>();
    report.calibration.threshold = report.threshold;
    report.persistence = require_key(j, "persistence", path).get<int>();
    report.anomalous_channels =
        require_key(j, "anomalous_channels", path).get<std::vector<std::string>>();
    report.constant_channels =
        require_key(j, "constant_channels", path).get<std::vector<std::string>>();
    return report;
}

void write_roc_csv_file(const RocCurve& curve, const std::string& path) {
    std::ostringstream out;
    write_roc_csv(curve, out);
    write_file_atomic(path, out.str());
}

SynthConfig read_synth_config_json(const std::string& path) {
    const json j = parse_json_file(path);
    if (!j.is_object()) throw std::runtime_error(path + ": config must be a JSON object");
    SynthConfig config;
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("channels")) config.channels = j.at("channels").get<int>();
    if (j.contains("duration_samples"))
        config.duration_samples = j.at("duration_samples").get<int>();
    if (j.contains("sample_rate_hz"))
        config.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    if (j.contains("episodes")) {
        for (const json& e : j.at("episodes")) {
            ExposureEpisode ep;
            ep.start = require_key(e, "start", path).get<int>();
            ep.duration = require_key(e, "duration", path).get<int>();
            ep.amplitude = require_key(e, "amplitude", path).get<double>();
            config.episodes.push_back(ep);
        }
    }
    if (j.contains("random_episode_count"))
        config.random_episode_count = j.at("random_episode_count").get<int>();
    if (j.contains("base_amplitude"))
        config.base_amplitude = j.at("base_amplitude").get<double>();
    if (j.contains("response_time_constant"))
        config.response_time_constant = j.at("response_time_constant").get<double>();
    if (j.contains("noise_std")) config.noise_std = j.at("noise_std").get<double>();
    if (j.contains("obstructed_channel"))
        config.obstructed_channel = j.at("obstructed_channel").get<int>();
    if (j.contains("lag_factor")) config.lag_factor = j.at("lag_factor").get<double>();
    if (j.contains("spike_channel")) config.spike_channel = j.at("spike_channel").get<int>();
    if (j.contains("spike_rate")) config.spike_rate = j.at("spike_rate").get<double>();
    if (j.contains("spike_amplitude"))
        config.spike_amplitude = j.at("spike_amplitude").get<double>();
    if (j.contains("spike_span")) {
        const json& s = j.at("spike_span");
        if (!s.is_array() || s.size() != 2)
            throw std::runtime_error(path + ": spike_span must be [start, end]");
        config.spike_span = {s[0].get<int>(), s[1].get<int>()};
    }
    return config;
}

}  // namespace mfpca
