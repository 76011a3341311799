#include "mfpca/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mfpca/rng.hpp"

namespace mfpca {

namespace {

// Stream ids for the seeded sub-generators (documented in docs/rng.md).
constexpr std::uint64_t kEpisodeStream = 1;
constexpr std::uint64_t kSpikeStream = 2;
constexpr std::uint64_t kNoiseStreamBase = 100;  // + channel index

void check_config(const SynthConfig& config) {
    if (config.channels < 1) throw std::invalid_argument("synth: channels must be >= 1");
    if (config.duration_samples < 1)
        throw std::invalid_argument("synth: duration_samples must be >= 1");
    if (!(config.sample_rate_hz > 0.0))
        throw std::invalid_argument("synth: sample rate must be positive");
    if (config.random_episode_count < 1)
        throw std::invalid_argument("synth: random_episode_count must be >= 1");
    if (!(config.response_time_constant >= 1.0))
        throw std::invalid_argument("synth: response_time_constant must be >= 1 sample");
    if (config.noise_std < 0.0) throw std::invalid_argument("synth: noise_std must be >= 0");
    if (config.obstructed_channel &&
        (*config.obstructed_channel < 0 || *config.obstructed_channel >= config.channels))
        throw std::invalid_argument("synth: obstructed_channel out of range");
    if (!(config.lag_factor >= 1.0))
        throw std::invalid_argument("synth: lag_factor must be >= 1");
    if (config.spike_channel &&
        (*config.spike_channel < 0 || *config.spike_channel >= config.channels))
        throw std::invalid_argument("synth: spike_channel out of range");
    if (config.spike_rate < 0.0 || config.spike_rate > 1.0)
        throw std::invalid_argument("synth: spike_rate must be in [0, 1]");
    if (!(config.spike_amplitude > 0.0))
        throw std::invalid_argument("synth: spike_amplitude must be positive");
    if (config.spike_span && config.spike_span->first > config.spike_span->second)
        throw std::invalid_argument("synth: spike_span start exceeds end");
    for (const ExposureEpisode& e : config.episodes)
        if (e.start < 0 || e.duration < 0)
            throw std::invalid_argument("synth: episode bounds must be non-negative");
}

std::vector<ExposureEpisode> random_episodes(const SynthConfig& config) {
    SplitMix64 rng(config.seed, kEpisodeStream);
    std::vector<ExposureEpisode> episodes;
    const int slot = config.duration_samples / config.random_episode_count;
    for (int k = 0; k < config.random_episode_count; ++k) {
        if (slot < 4) break;
        ExposureEpisode e;
        // Lid opens at a random offset in the slot, for a random duration,
        // at a random concentration, giving varied rise and fall responses.
        e.start = k * slot + static_cast<int>(rng.next_uniform01() * (slot / 4));
        e.duration = slot / 4 + static_cast<int>(rng.next_uniform01() * (slot / 2));
        e.amplitude = config.base_amplitude * (0.6 + 0.8 * rng.next_uniform01());
        episodes.push_back(e);
    }
    return episodes;
}

// Concentration level over time: highest amplitude among open episodes.
std::vector<double> exposure_profile(const SynthConfig& config,
                                     const std::vector<ExposureEpisode>& episodes) {
    std::vector<double> level(static_cast<std::size_t>(config.duration_samples), 0.0);
    for (const ExposureEpisode& e : episodes) {
        const int lo = std::min(e.start, config.duration_samples);
        const int hi = std::min(e.start + e.duration, config.duration_samples);
        for (int t = lo; t < hi; ++t)
            level[static_cast<std::size_t>(t)] =
                std::max(level[static_cast<std::size_t>(t)], e.amplitude);
    }
    return level;
}

// First-order sensor response to the exposure level.
std::vector<double> first_order_response(const std::vector<double>& level,
                                         double time_constant) {
    std::vector<double> r(level.size(), 0.0);
    double state = 0.0;
    for (std::size_t t = 0; t < level.size(); ++t) {
        state += (level[t] - state) / time_constant;
        r[t] = state;
    }
    return r;
}

std::vector<std::pair<int, int>> merge_positions(const std::vector<int>& positions) {
    std::vector<std::pair<int, int>> ranges;
    for (int p : positions) {
        if (!ranges.empty() && ranges.back().second == p)
            ranges.back().second = p + 1;
        else
            ranges.emplace_back(p, p + 1);
    }
    return ranges;
}

}  // namespace

SensorRecording generate(const SynthConfig& config) {
    check_config(config);

    const std::vector<ExposureEpisode> episodes =
        config.episodes.empty() ? random_episodes(config) : config.episodes;
    const std::vector<double> level = exposure_profile(config, episodes);
    const std::vector<double> clean =
        first_order_response(level, config.response_time_constant);
    std::vector<double> lagged;
    if (config.obstructed_channel)
        lagged = first_order_response(level,
                                      config.response_time_constant * config.lag_factor);

    SensorRecording rec;
    rec.sample_rate_hz = config.sample_rate_hz;
    rec.samples = Matrix(config.duration_samples, config.channels);
    for (int c = 0; c < config.channels; ++c) {
        rec.channels.push_back("s" + std::to_string(c + 1));
        const std::vector<double>& base =
            (config.obstructed_channel && *config.obstructed_channel == c) ? lagged : clean;
        for (int t = 0; t < config.duration_samples; ++t)
            rec.samples(t, c) = base[static_cast<std::size_t>(t)];
        if (config.noise_std > 0.0) {
            SplitMix64 noise(config.seed, kNoiseStreamBase + static_cast<std::uint64_t>(c));
            for (int t = 0; t < config.duration_samples; ++t)
                rec.samples(t, c) += config.noise_std * noise.next_gaussian();
        }
    }

    std::vector<int> spike_positions;
    if (config.spike_channel) {
        const int c = *config.spike_channel;
        const auto [span_lo, span_hi] =
            config.spike_span.value_or(std::pair<int, int>{0, config.duration_samples});
        const int lo = std::clamp(span_lo, 0, config.duration_samples);
        const int hi = std::clamp(span_hi, 0, config.duration_samples);
        SplitMix64 spikes(config.seed, kSpikeStream);
        for (int t = lo; t < hi; ++t) {
            if (spikes.next_uniform01() < config.spike_rate) {
                rec.samples(t, c) += config.spike_amplitude;
                spike_positions.push_back(t);
            }
        }
    }

    GroundTruth truth;
    if (config.obstructed_channel)
        truth.anomalous.push_back(
            {rec.channels[static_cast<std::size_t>(*config.obstructed_channel)],
             {{0, config.duration_samples}}});
    if (config.spike_channel && !spike_positions.empty()) {
        const std::string& name = rec.channels[static_cast<std::size_t>(*config.spike_channel)];
        // Same channel may be both obstructed and spiked; keep one entry.
        bool merged = false;
        for (ChannelTruth& ct : truth.anomalous) {
            if (ct.channel == name) {
                for (auto& r : merge_positions(spike_positions)) ct.sample_ranges.push_back(r);
                merged = true;
            }
        }
        if (!merged) truth.anomalous.push_back({name, merge_positions(spike_positions)});
    }
    if (!truth.anomalous.empty()) rec.ground_truth = std::move(truth);
    return rec;
}

}  // namespace mfpca
