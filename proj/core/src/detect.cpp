#include "mfpca/detect.hpp"

#include <cmath>
#include <stdexcept>

namespace mfpca {

namespace {

void check_recording(const SensorRecording& recording) {
    if (recording.samples.rows() < 1 || recording.samples.cols() < 1)
        throw std::invalid_argument("recording: empty sample matrix");
    if (static_cast<int>(recording.channels.size()) != recording.samples.cols())
        throw std::invalid_argument("recording: channel count does not match sample columns");
    if (!(recording.sample_rate_hz > 0.0))
        throw std::invalid_argument("recording: sample rate must be positive");
    if (!recording.samples.all_finite())
        throw std::invalid_argument("recording: non-finite samples");
}

std::vector<double> column_means(const Matrix& m) {
    std::vector<double> means(static_cast<std::size_t>(m.cols()), 0.0);
    for (int c = 0; c < m.cols(); ++c) {
        double sum = 0.0;
        for (int r = 0; r < m.rows(); ++r) sum += m(r, c);
        means[static_cast<std::size_t>(c)] = sum / m.rows();
    }
    return means;
}

std::vector<std::vector<bool>> apply_threshold(const Matrix& scores, double threshold) {
    std::vector<std::vector<bool>> flags(static_cast<std::size_t>(scores.rows()));
    for (int s = 0; s < scores.rows(); ++s) {
        auto& row = flags[static_cast<std::size_t>(s)];
        row.resize(static_cast<std::size_t>(scores.cols()));
        for (int c = 0; c < scores.cols(); ++c)
            row[static_cast<std::size_t>(c)] = scores(s, c) > threshold;
    }
    return flags;
}

// Channels flagged in >= persistence consecutive segments.
std::vector<std::string> persistent_channels(const std::vector<std::vector<bool>>& flags,
                                             const std::vector<std::string>& channels,
                                             int persistence) {
    std::vector<std::string> out;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        int run = 0;
        int best = 0;
        for (const auto& row : flags) {
            run = row[c] ? run + 1 : 0;
            best = std::max(best, run);
        }
        if (best >= persistence) out.push_back(channels[c]);
    }
    return out;
}

Matrix score_segments(const std::vector<SegmentMatrix>& segments, const PcaMethod& method,
                      int components) {
    if (segments.empty()) throw std::invalid_argument("detect: no segments to score");
    const int d = segments.front().values.cols();
    Matrix scores(static_cast<int>(segments.size()), d);
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const SegmentMatrix& seg = segments[s];
        const PrincipalBasis basis = fit(seg.values, method);
        const Matrix hat = reconstruct(seg, basis, components);
        for (int c = 0; c < d; ++c) {
            const std::vector<double> x = seg.values.col(c);
            const std::vector<double> xh = hat.col(c);
            scores(static_cast<int>(s), c) = csd(x, xh);
        }
    }
    return scores;
}

std::vector<double> flatten(const Matrix& m) {
    return m.data();
}

SegmentSpan span_of(const SegmentMatrix& seg) {
    return {seg.segment_index, seg.start_sample, seg.end_sample, seg.start_s, seg.end_s};
}

CsdReport assemble_report(DetectMode mode, const PcaMethod& method,
                          std::vector<std::string> channels, ScoredSegments scored,
                          const ThresholdCalibration& calibration, int persistence) {
    CsdReport report;
    report.mode = mode;
    report.method = method;
    report.channels = std::move(channels);
    report.segments = std::move(scored.segments);
    report.scores = std::move(scored.scores);
    report.calibration = calibration;
    report.threshold = calibration.threshold;
    report.persistence = persistence;
    report.flags = apply_threshold(report.scores, report.threshold);
    report.anomalous_channels =
        persistent_channels(report.flags, report.channels, persistence);
    for (int c : scored.constant_channels)
        report.constant_channels.push_back(report.channels[static_cast<std::size_t>(c)]);
    return report;
}

ThresholdCalibration explicit_threshold(double threshold, double alpha) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("detect: explicit threshold must be positive");
    // Encoded so that threshold == mu + alpha * sigma still holds.
    return {threshold, 0.0, alpha, threshold};
}

void check_multi_config(const MultiSensorConfig& config) {
    if (config.segment_len < 2)
        throw std::invalid_argument("detect: segment_len must be >= 2");
    if (config.persistence < 1)
        throw std::invalid_argument("detect: persistence must be >= 1");
    if (config.components < 1) throw std::invalid_argument("detect: components must be >= 1");
}

void check_single_config(const SingleSensorConfig& config) {
    if (config.window_len < 2) throw std::invalid_argument("detect: window_len must be >= 2");
    if (config.window_count < 1)
        throw std::invalid_argument("detect: window_count must be >= 1");
    if (config.components < 1) throw std::invalid_argument("detect: components must be >= 1");
    if (config.persistence < 1)
        throw std::invalid_argument("detect: persistence must be >= 1");
}

}  // namespace

std::string_view detect_mode_name(DetectMode mode) {
    return mode == DetectMode::MultiSensor ? "multi-sensor" : "single-sensor";
}

bool CsdReport::any_flagged() const {
    for (const auto& row : flags)
        for (bool f : row)
            if (f) return true;
    return false;
}

NormalizedRecording normalize(const SensorRecording& recording) {
    check_recording(recording);
    const Matrix& samples = recording.samples;
    NormalizedRecording out;
    out.values = Matrix(samples.rows(), samples.cols());
    for (int c = 0; c < samples.cols(); ++c) {
        double lo = samples(0, c);
        double hi = samples(0, c);
        for (int r = 1; r < samples.rows(); ++r) {
            lo = std::min(lo, samples(r, c));
            hi = std::max(hi, samples(r, c));
        }
        if (hi > lo) {
            const double range = hi - lo;
            for (int r = 0; r < samples.rows(); ++r)
                out.values(r, c) = 2.0 * (samples(r, c) - lo) / range - 1.0;
        } else {
            // Constant channel carries no signal; map to zeros and flag it.
            out.constant_channels.push_back(c);
        }
    }
    return out;
}

std::vector<SegmentMatrix> segment(const Matrix& normalized, int segment_len,
                                   double sample_rate_hz) {
    if (segment_len < 2) throw std::invalid_argument("segment: segment_len must be >= 2");
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("segment: sample rate must be positive");
    const int total = normalized.rows();
    if (2 * total < segment_len)
        throw std::invalid_argument("segment: recording shorter than half a segment");

    std::vector<std::pair<int, int>> bounds;
    int start = 0;
    while (start + segment_len <= total) {
        bounds.emplace_back(start, start + segment_len);
        start += segment_len;
    }
    const int remainder = total - start;
    if (2 * remainder >= segment_len) bounds.emplace_back(start, total);

    std::vector<SegmentMatrix> segments;
    segments.reserve(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const auto [lo, hi] = bounds[i];
        SegmentMatrix seg;
        seg.segment_index = static_cast<int>(i);
        seg.start_sample = lo;
        seg.end_sample = hi;
        seg.start_s = lo / sample_rate_hz;
        seg.end_s = hi / sample_rate_hz;
        seg.values = Matrix(hi - lo, normalized.cols());
        for (int r = lo; r < hi; ++r)
            for (int c = 0; c < normalized.cols(); ++c)
                seg.values(r - lo, c) = normalized(r, c);
        const std::vector<double> means = column_means(seg.values);
        for (int r = 0; r < seg.values.rows(); ++r)
            for (int c = 0; c < seg.values.cols(); ++c)
                seg.values(r, c) -= means[static_cast<std::size_t>(c)];
        segments.push_back(std::move(seg));
    }
    return segments;
}

Matrix reconstruct(const SegmentMatrix& seg, const PrincipalBasis& basis, int l) {
    if (l < 1) throw std::invalid_argument("reconstruct: l must be >= 1");
    if (l > static_cast<int>(basis.basis.eigenvectors.size()))
        throw std::invalid_argument("reconstruct: l exceeds available basis vectors");
    const Matrix& X = seg.values;
    const int d = X.cols();
    for (int k = 0; k < l; ++k)
        if (static_cast<int>(basis.basis.eigenvectors[static_cast<std::size_t>(k)].size()) != d)
            throw std::invalid_argument("reconstruct: basis dimension mismatch");

    // X_hat = X V_l V_l^T via the rank-l coordinates Y = X V_l.
    Matrix hat(X.rows(), d);
    for (int t = 0; t < X.rows(); ++t) {
        for (int k = 0; k < l; ++k) {
            const auto& v = basis.basis.eigenvectors[static_cast<std::size_t>(k)];
            double y = 0.0;
            for (int c = 0; c < d; ++c) y += X(t, c) * v[static_cast<std::size_t>(c)];
            for (int c = 0; c < d; ++c) hat(t, c) += y * v[static_cast<std::size_t>(c)];
        }
    }
    return hat;
}

double csd(std::span<const double> x, std::span<const double> x_hat) {
    if (x.size() != x_hat.size()) throw std::invalid_argument("csd: length mismatch");
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double diff = x[j] - x_hat[j];
        total += diff * diff;
    }
    return total;
}

ThresholdCalibration calibrate_threshold(std::span<const double> training_scores,
                                         double alpha) {
    if (training_scores.size() < 2)
        throw std::invalid_argument("calibrate_threshold: need at least 2 training scores");
    double sum = 0.0;
    for (double s : training_scores) sum += s;
    const double mu = sum / static_cast<double>(training_scores.size());
    double sq = 0.0;
    for (double s : training_scores) sq += (s - mu) * (s - mu);
    const double sigma = std::sqrt(sq / static_cast<double>(training_scores.size() - 1));
    return {mu, sigma, alpha, mu + alpha * sigma};
}

ScoredSegments score_multi_sensor(const SensorRecording& recording,
                                  const MultiSensorConfig& config) {
    check_multi_config(config);
    check_recording(recording);
    if (recording.samples.cols() < 2)
        throw std::invalid_argument("detect: multi-sensor protocol needs >= 2 channels");

    NormalizedRecording normalized = normalize(recording);
    std::vector<SegmentMatrix> segments =
        segment(normalized.values, config.segment_len, recording.sample_rate_hz);

    ScoredSegments out;
    out.constant_channels = std::move(normalized.constant_channels);
    out.segments.reserve(segments.size());
    for (const SegmentMatrix& seg : segments) out.segments.push_back(span_of(seg));
    out.scores = score_segments(segments, config.method, config.components);
    return out;
}

ScoredSegments score_single_sensor(std::span<const double> channel, double sample_rate_hz,
                                   const SingleSensorConfig& config) {
    check_single_config(config);
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("detect: sample rate must be positive");
    const int n = config.window_len;
    const int l_windows = config.window_count;
    const int block = n * l_windows;
    const int total = static_cast<int>(channel.size());
    if (total < block)
        throw std::invalid_argument("detect: channel shorter than one block of windows");

    SensorRecording as_recording;
    as_recording.channels = {"channel"};
    as_recording.sample_rate_hz = sample_rate_hz;
    as_recording.samples = Matrix(total, 1);
    for (int t = 0; t < total; ++t) as_recording.samples(t, 0) = channel[static_cast<std::size_t>(t)];
    NormalizedRecording normalized = normalize(as_recording);
    if (!normalized.constant_channels.empty())
        throw std::invalid_argument("detect: constant channel carries no signal");

    const int blocks = total / block;
    std::vector<SegmentMatrix> window_matrices;
    window_matrices.reserve(static_cast<std::size_t>(blocks));
    ScoredSegments out;
    out.scores = Matrix(blocks * l_windows, 1);

    for (int b = 0; b < blocks; ++b) {
        SegmentMatrix seg;
        seg.segment_index = b;
        seg.start_sample = b * block;
        seg.end_sample = (b + 1) * block;
        seg.start_s = seg.start_sample / sample_rate_hz;
        seg.end_s = seg.end_sample / sample_rate_hz;
        seg.values = Matrix(n, l_windows);
        for (int w = 0; w < l_windows; ++w)
            for (int t = 0; t < n; ++t)
                seg.values(t, w) = normalized.values(b * block + w * n + t, 0);
        const std::vector<double> means = column_means(seg.values);
        for (int t = 0; t < n; ++t)
            for (int w = 0; w < l_windows; ++w)
                seg.values(t, w) -= means[static_cast<std::size_t>(w)];

        const PrincipalBasis basis = fit(seg.values, config.method);
        const Matrix hat = reconstruct(seg, basis, config.components);
        for (int w = 0; w < l_windows; ++w) {
            const int window_index = b * l_windows + w;
            SegmentSpan span;
            span.index = window_index;
            span.start_sample = b * block + w * n;
            span.end_sample = span.start_sample + n;
            span.start_s = span.start_sample / sample_rate_hz;
            span.end_s = span.end_sample / sample_rate_hz;
            out.segments.push_back(span);
            out.scores(window_index, 0) = csd(seg.values.col(w), hat.col(w));
        }
    }
    return out;
}

CsdReport detect_multi_sensor(const SensorRecording& recording,
                              const MultiSensorConfig& config, double threshold) {
    ScoredSegments scored = score_multi_sensor(recording, config);
    return assemble_report(DetectMode::MultiSensor, config.method, recording.channels,
                           std::move(scored), explicit_threshold(threshold, config.alpha),
                           config.persistence);
}

CsdReport detect_multi_sensor(const SensorRecording& recording,
                              const MultiSensorConfig& config,
                              const SensorRecording& calibration) {
    const ScoredSegments training = score_multi_sensor(calibration, config);
    const std::vector<double> training_scores = flatten(training.scores);
    const ThresholdCalibration cal = calibrate_threshold(training_scores, config.alpha);
    ScoredSegments scored = score_multi_sensor(recording, config);
    return assemble_report(DetectMode::MultiSensor, config.method, recording.channels,
                           std::move(scored), cal, config.persistence);
}

CsdReport detect_single_sensor(std::span<const double> channel, std::string_view channel_name,
                               double sample_rate_hz, const SingleSensorConfig& config,
                               double threshold) {
    ScoredSegments scored = score_single_sensor(channel, sample_rate_hz, config);
    return assemble_report(DetectMode::SingleSensor, config.method,
                           {std::string(channel_name)}, std::move(scored),
                           explicit_threshold(threshold, config.alpha), config.persistence);
}

CsdReport detect_single_sensor(std::span<const double> channel, std::string_view channel_name,
                               double sample_rate_hz, const SingleSensorConfig& config,
                               std::span<const double> calibration_channel) {
    const ScoredSegments training =
        score_single_sensor(calibration_channel, sample_rate_hz, config);
    const ThresholdCalibration cal =
        calibrate_threshold(flatten(training.scores), config.alpha);
    ScoredSegments scored = score_single_sensor(channel, sample_rate_hz, config);
    return assemble_report(DetectMode::SingleSensor, config.method,
                           {std::string(channel_name)}, std::move(scored), cal,
                           config.persistence);
}

}  // namespace mfpca
