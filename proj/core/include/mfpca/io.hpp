#pragma once

#include <string>

#include "mfpca/detect.hpp"
#include "mfpca/eval.hpp"
#include "mfpca/synth.hpp"

namespace mfpca {

// File formats are pinned byte-for-byte in docs/formats.md. All writers go
// through a temp-file-plus-rename so partially written files never appear.

// Shortest-exact decimal for a double (17 significant digits).
std::string format_double(double v);

void write_file_atomic(const std::string& path, const std::string& content);

// Recording CSV: header "time_s,<ch1>,...", one row per sample, LF endings.
void write_recording_csv(const SensorRecording& recording, const std::string& path);

// Throws std::runtime_error with "<path>:<line>: <message>" on malformed input.
SensorRecording read_recording_csv(const std::string& path);

// Ground-truth sidecar (schema mfpca-truth/1).
void write_truth_json(const GroundTruth& truth, const std::string& path);
GroundTruth read_truth_json(const std::string& path);

// Detection report (schema mfpca-report/1); reading validates the schema.
void write_report_json(const CsdReport& report, const std::string& path);
CsdReport read_report_json(const std::string& path);

void write_roc_csv_file(const RocCurve& curve, const std::string& path);

// Synth generator config (all keys optional except none; missing keys take
// the SynthConfig defaults).
SynthConfig read_synth_config_json(const std::string& path);

}  // namespace mfpca
