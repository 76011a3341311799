#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "mfpca/detect.hpp"
#include "mfpca/io.hpp"
#include "mfpca/synth.hpp"

using namespace mfpca;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "mfpca_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

CsdReport sample_report() {
    SynthConfig config;
    config.seed = 21;
    config.duration_samples = 2000;
    config.obstructed_channel = 1;
    const SensorRecording rec = generate(config);
    MultiSensorConfig dconfig{PcaMethod::l1_kernel(), 500, 3.0, 2, 1};
    return detect_multi_sensor(rec, dconfig, 0.05);
}

}  // namespace

TEST_CASE("format_double survives a parse round trip") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456.789, 0.0, -0.0, 1e17}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("recording csv round-trips samples bit-exactly") {
    SynthConfig config;
    config.seed = 17;
    config.channels = 3;
    config.duration_samples = 300;
    config.spike_channel = 2;
    const SensorRecording rec = generate(config);

    const auto path = temp_file("roundtrip.csv");
    write_recording_csv(rec, path.string());
    const SensorRecording back = read_recording_csv(path.string());

    CHECK(back.channels == rec.channels);
    CHECK(back.sample_rate_hz == rec.sample_rate_hz);
    CHECK(back.samples == rec.samples);
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST_CASE("csv errors carry line numbers") {
    const auto path = temp_file("bad.csv");

    write_text(path, "time_s,a,b\n0,1,2\n0.5,nope,4\n");
    try {
        read_recording_csv(path.string());
        FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
        CHECK(contains(e.what(), ":3:"));
        CHECK(contains(e.what(), "nope"));
    }

    write_text(path, "time_s,a,b\n0,1\n");
    try {
        read_recording_csv(path.string());
        FAIL("expected field count error");
    } catch (const std::runtime_error& e) {
        CHECK(contains(e.what(), ":2:"));
    }

    write_text(path, "stamp,a,b\n0,1,2\n");
    CHECK_THROWS_AS(read_recording_csv(path.string()), std::runtime_error);
    write_text(path, "");
    CHECK_THROWS_AS(read_recording_csv(path.string()), std::runtime_error);
}

TEST_CASE("csv sample rate is recovered from the time column") {
    const auto path = temp_file("rate.csv");
    write_text(path, "time_s,a,b\n0,1,2\n0.5,3,4\n1,5,6\n");
    const SensorRecording rec = read_recording_csv(path.string());
    CHECK(rec.sample_rate_hz == 2.0);
    CHECK(rec.samples(2, 1) == 6.0);
}

TEST_CASE("truth json round-trips") {
    GroundTruth truth;
    truth.anomalous.push_back({"s2", {{0, 4000}}});
    truth.anomalous.push_back({"s3", {{10, 12}, {55, 56}}});
    const auto path = temp_file("truth.json");
    write_truth_json(truth, path.string());
    const GroundTruth back = read_truth_json(path.string());
    REQUIRE(back.anomalous.size() == 2);
    CHECK(back.anomalous[0].channel == "s2");
    CHECK(back.anomalous[1].sample_ranges == truth.anomalous[1].sample_ranges);
}

TEST_CASE("report json round-trips and validates its schema") {
    const CsdReport report = sample_report();
    const auto path = temp_file("report.json");
    write_report_json(report, path.string());
    const CsdReport back = read_report_json(path.string());

    CHECK(back.mode == report.mode);
    CHECK(back.method.kind == report.method.kind);
    CHECK(back.channels == report.channels);
    CHECK(back.scores == report.scores);
    CHECK(back.flags == report.flags);
    CHECK(back.threshold == report.threshold);
    CHECK(back.calibration.mu == report.calibration.mu);
    CHECK(back.anomalous_channels == report.anomalous_channels);
    REQUIRE(back.segments.size() == report.segments.size());
    CHECK(back.segments[1].start_sample == report.segments[1].start_sample);
    CHECK(back.segments[1].end_s == report.segments[1].end_s);
}

TEST_CASE("report schema violations are rejected") {
    const auto path = temp_file("invalid_report.json");

    write_text(path, "{\"schema\":\"mfpca-report/2\"}");
    CHECK_THROWS_AS(read_report_json(path.string()), std::runtime_error);

    write_text(path, "not json at all");
    CHECK_THROWS_AS(read_report_json(path.string()), std::runtime_error);

    // Valid schema tag but a required key missing.
    write_text(path,
               "{\"schema\":\"mfpca-report/1\",\"mode\":\"multi-sensor\","
               "\"method\":\"regular\",\"channels\":[\"a\"]}");
    try {
        read_report_json(path.string());
        FAIL("expected missing-key error");
    } catch (const std::runtime_error& e) {
        CHECK(contains(e.what(), "segments"));
    }

    // Flag row width mismatch.
    write_text(path,
               "{\"schema\":\"mfpca-report/1\",\"mode\":\"multi-sensor\","
               "\"method\":\"regular\",\"channels\":[\"a\",\"b\"],"
               "\"segments\":[{\"index\":0,\"start_sample\":0,\"end_sample\":2,"
               "\"start_s\":0,\"end_s\":1}],"
               "\"scores\":[[1.0,2.0]],\"flags\":[[true]],"
               "\"calibration\":{\"mu\":0,\"sigma\":0,\"alpha\":3},"
               "\"threshold\":1,\"persistence\":2,"
               "\"anomalous_channels\":[],\"constant_channels\":[]}");
    CHECK_THROWS_AS(read_report_json(path.string()), std::runtime_error);
}

TEST_CASE("synth config json parses defaults and overrides") {
    const auto path = temp_file("synth.json");
    write_text(path, "{}");
    const SynthConfig defaults = read_synth_config_json(path.string());
    CHECK(defaults.channels == 3);
    CHECK(defaults.seed == 0);
    CHECK_FALSE(defaults.obstructed_channel.has_value());

    write_text(path,
               "{\"seed\":9,\"channels\":4,\"duration_samples\":800,"
               "\"episodes\":[{\"start\":10,\"duration\":50,\"amplitude\":0.7}],"
               "\"obstructed_channel\":1,\"lag_factor\":2.5,"
               "\"spike_channel\":3,\"spike_span\":[0,400]}");
    const SynthConfig cfg = read_synth_config_json(path.string());
    CHECK(cfg.seed == 9);
    CHECK(cfg.channels == 4);
    REQUIRE(cfg.episodes.size() == 1);
    CHECK(cfg.episodes[0].amplitude == 0.7);
    CHECK(cfg.obstructed_channel == 1);
    CHECK(cfg.spike_span == std::pair<int, int>{0, 400});

    write_text(path, "[1,2,3]");
    CHECK_THROWS_AS(read_synth_config_json(path.string()), std::runtime_error);
}
