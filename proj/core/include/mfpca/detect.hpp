#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfpca/matrix.hpp"
#include "mfpca/pca.hpp"

namespace mfpca {

// Known anomalous channels with the sample ranges where the anomaly is live.
// Ranges are half-open [start, end).
struct ChannelTruth {
    std::string channel;
    std::vector<std::pair<int, int>> sample_ranges;
};

struct GroundTruth {
    std::vector<ChannelTruth> anomalous;
};

// Raw multichannel time series. samples is T x D, one column per channel.
struct SensorRecording {
    std::vector<std::string> channels;
    double sample_rate_hz = 2.0;
    Matrix samples;
    std::optional<GroundTruth> ground_truth;
};

struct NormalizedRecording {
    Matrix values;                       // per-channel min-max scaled to [-1, 1]
    std::vector<int> constant_channels;  // mapped to all zeros, cannot carry signal
};

// Min-max scales each channel independently over the whole recording to
// [-1, 1] (endpoints exact). Mean subtraction happens later, per segment.
NormalizedRecording normalize(const SensorRecording& recording);

// One segment of normalized data; every column mean-subtracted over the
// segment, so column means are 0 and entries stay within [-2, 2].
struct SegmentMatrix {
    Matrix values;  // N x D
    int segment_index = 0;
    int start_sample = 0;
    int end_sample = 0;
    double start_s = 0.0;
    double end_s = 0.0;
};

// Consecutive non-overlapping windows of segment_len samples. A trailing
// partial window shorter than segment_len/2 is dropped, otherwise kept.
std::vector<SegmentMatrix> segment(const Matrix& normalized, int segment_len,
                                   double sample_rate_hz);

// Projects every row of the segment onto the span of the first l basis
// vectors: X_hat = X V_l V_l^T.
Matrix reconstruct(const SegmentMatrix& seg, const PrincipalBasis& basis, int l);

// Cumulative squared difference sum_j (x_j - x_hat_j)^2, the anomaly score.
// Left-to-right accumulation.
double csd(std::span<const double> x, std::span<const double> x_hat);

struct ThresholdCalibration {
    double mu = 0.0;
    double sigma = 0.0;
    double alpha = 3.0;
    double threshold = 0.0;  // mu + alpha * sigma
};

// Sample mean and standard deviation (n-1 divisor) of clean-data scores.
ThresholdCalibration calibrate_threshold(std::span<const double> training_scores,
                                         double alpha = 3.0);

struct MultiSensorConfig {
    PcaMethod method;
    int segment_len = 500;
    double alpha = 3.0;
    int persistence = 2;  // consecutive flagged segments before a channel is anomalous
    int components = 1;   // reconstruction rank l
};

struct SingleSensorConfig {
    PcaMethod method;
    int window_len = 224;   // N samples per window
    int window_count = 5;   // L windows per covariance block
    int components = 1;     // reconstruction rank l
    double alpha = 3.0;
    int persistence = 2;
};

// Span covered by one scored segment (multi-sensor) or window (single-sensor).
struct SegmentSpan {
    int index = 0;
    int start_sample = 0;
    int end_sample = 0;
    double start_s = 0.0;
    double end_s = 0.0;
};

enum class DetectMode { MultiSensor, SingleSensor };

std::string_view detect_mode_name(DetectMode mode);

struct CsdReport {
    DetectMode mode = DetectMode::MultiSensor;
    PcaMethod method;
    std::vector<std::string> channels;
    std::vector<SegmentSpan> segments;
    Matrix scores;  // segments x channels, all >= 0
    std::vector<std::vector<bool>> flags;  // flags[s][c] == scores(s,c) > threshold
    ThresholdCalibration calibration;
    double threshold = 0.0;
    int persistence = 2;
    std::vector<std::string> anomalous_channels;  // flagged in >= persistence consecutive segments
    std::vector<std::string> constant_channels;

    bool any_flagged() const;
};

// CSD scores without thresholding; shared by detection and calibration.
struct ScoredSegments {
    std::vector<SegmentSpan> segments;
    Matrix scores;
    std::vector<int> constant_channels;
};

ScoredSegments score_multi_sensor(const SensorRecording& recording,
                                  const MultiSensorConfig& config);
ScoredSegments score_single_sensor(std::span<const double> channel, double sample_rate_hz,
                                   const SingleSensorConfig& config);

// Multi-sensor protocol: per segment, fit the chosen PCA on the N x D segment,
// reconstruct with rank l, score each channel by CSD against its
// reconstruction, flag scores above the threshold. The threshold comes either
// from an explicit value or from calibrating on a clean recording with the
// same method.
CsdReport detect_multi_sensor(const SensorRecording& recording,
                              const MultiSensorConfig& config, double threshold);
CsdReport detect_multi_sensor(const SensorRecording& recording,
                              const MultiSensorConfig& config,
                              const SensorRecording& calibration);

// Single-sensor protocol: consecutive blocks of L windows of N samples form
// N x L matrices; the L x L covariance's leading eigenvectors reconstruct the
// windows and each window is scored by CSD.
CsdReport detect_single_sensor(std::span<const double> channel, std::string_view channel_name,
                               double sample_rate_hz, const SingleSensorConfig& config,
                               double threshold);
CsdReport detect_single_sensor(std::span<const double> channel, std::string_view channel_name,
                               double sample_rate_hz, const SingleSensorConfig& config,
                               std::span<const double> calibration_channel);

}  // namespace mfpca
