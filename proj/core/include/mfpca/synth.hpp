#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mfpca/detect.hpp"

namespace mfpca {

// One gas-exposure episode: the source is open from `start` for `duration`
// samples at the given concentration level.
struct ExposureEpisode {
    int start = 0;
    int duration = 0;
    double amplitude = 1.0;
};

// Seeded generator of correlated sensor waveforms with injectable anomalies.
// Every clean channel is the same exposure profile passed through the same
// first-order response plus independent noise. The obstructed channel uses a
// slower response (time constant scaled by lag_factor); the spike channel
// gets isolated positive impulses at Bernoulli(spike_rate) positions.
struct SynthConfig {
    std::uint64_t seed = 0;
    int channels = 3;
    int duration_samples = 4000;
    double sample_rate_hz = 2.0;

    std::vector<ExposureEpisode> episodes;  // empty: seeded random episodes
    int random_episode_count = 4;
    double base_amplitude = 1.0;
    double response_time_constant = 40.0;   // samples

    double noise_std = 0.01;

    std::optional<int> obstructed_channel;
    double lag_factor = 3.0;

    std::optional<int> spike_channel;
    double spike_rate = 0.02;
    double spike_amplitude = 1.0;
    std::optional<std::pair<int, int>> spike_span;  // [start, end) samples; default whole recording
};

// Deterministic for a fixed config: same seed, same bytes. Ground truth marks
// the obstructed channel over the whole recording and the spike channel over
// the actually injected spike positions.
SensorRecording generate(const SynthConfig& config);

}  // namespace mfpca
