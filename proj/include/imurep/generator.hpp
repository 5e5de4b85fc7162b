#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "imurep/evaluation.hpp"
#include "imurep/signal.hpp"

namespace imurep {

/// One exercise bout. A repetition is split into phases() equal parts; each
/// phase starts with a half-sine burst on top of gravity whose per-axis
/// amplitude is that phase's vector. A bout of n repetitions therefore holds
/// n * phases + 1 bursts, and repetition k spans burst k*phases to burst
/// (k+1)*phases.
struct PatternSpec {
    std::string label;
    double period_s = 1.0;
    int repetitions = 10;
    std::vector<Vec3> phases{{0.0, 0.0, 1.0}};  // g, one per phase
    double burst_fraction = 0.5;                 // burst width / phase length
    double noise_sd = 0.05;                      // g, per axis during the bout
    double rest_after_s = 4.0;
};

/// A span with no samples at all (sensor dropout).
struct Dropout {
    double start_s = 0.0;
    double end_s = 0.0;
};

struct GeneratorSpec {
    std::uint64_t seed = 1;
    double sample_rate_hz = 50.0;
    Vec3 gravity{0.0, 0.0, 1.0};
    double rest_noise_sd = 0.05;
    double lead_in_s = 2.0;
    std::vector<PatternSpec> patterns;
    std::vector<Dropout> dropouts;
};

/// Throws ConfigError on negative amplitudes, non-positive periods, etc.
void validate(const GeneratorSpec& spec);

struct GeneratedSession {
    double sample_rate_hz = 50.0;
    std::vector<AccelSample> samples;
    std::vector<TruthInterval> truth;
};

/// Deterministic per seed: same spec, same bytes.
GeneratedSession generate(const GeneratorSpec& spec);

GeneratorSpec parse_generator_spec(std::istream& in);
GeneratorSpec load_generator_spec(const std::filesystem::path& path);
void write_generator_spec(const GeneratorSpec& spec, std::ostream& out);

/// Five patterns shaped after common exercises: two sustained gait-like
/// cycles with more than 20 steps, three ~10-repetition bursts, the last
/// one tri-phasic. Dominant axes and periods differ between patterns.
GeneratorSpec exercise_session_spec(std::uint64_t seed, int repetitions = 10);

}  // namespace imurep
