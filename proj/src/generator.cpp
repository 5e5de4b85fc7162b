#include "imurep/generator.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>

#include <json.hpp>

#include "imurep/errors.hpp"
#include "imurep/templates.hpp"

namespace imurep {

void validate(const GeneratorSpec& spec) {
    if (!(spec.sample_rate_hz > 0.0)) throw ConfigError("sample_rate_hz must be positive");
    if (!(spec.rest_noise_sd >= 0.0)) throw ConfigError("rest_noise_sd must be non-negative");
    if (!(spec.lead_in_s >= 0.0)) throw ConfigError("lead_in_s must be non-negative");
    for (const auto& p : spec.patterns) {
        try {
            validate_label(p.label);
        } catch (const InputError& e) {
            throw ConfigError(e.what());
        }
        if (!(p.period_s > 0.0)) throw ConfigError(p.label + ": period_s must be positive");
        if (p.repetitions < 0) throw ConfigError(p.label + ": repetitions must be non-negative");
        if (p.phases.empty()) throw ConfigError(p.label + ": needs at least one phase");
        for (const auto& a : p.phases) {
            if (!(a.x >= 0.0 && a.y >= 0.0 && a.z >= 0.0)) {
                throw ConfigError(p.label + ": amplitudes must be non-negative");
            }
        }
        if (!(p.burst_fraction > 0.0 && p.burst_fraction <= 1.0)) {
            throw ConfigError(p.label + ": burst_fraction must lie in (0, 1]");
        }
        if (!(p.noise_sd >= 0.0)) throw ConfigError(p.label + ": noise_sd must be non-negative");
        if (!(p.rest_after_s >= 0.0)) throw ConfigError(p.label + ": rest_after_s must be non-negative");
    }
    for (const auto& d : spec.dropouts) {
        if (!(d.end_s > d.start_s && d.start_s >= 0.0)) {
            throw ConfigError("dropout must satisfy 0 <= start_s < end_s");
        }
    }
}

namespace {

struct Burst {
    double center_s;
    double width_s;
    Vec3 amplitude;
};

struct Bout {
    double start_s;
    double end_s;
    double noise_sd;
};

std::int64_t seconds_to_ms(double s) {
    return static_cast<std::int64_t>(std::llround(s * 1000.0));
}

}  // namespace

GeneratedSession generate(const GeneratorSpec& spec) {
    validate(spec);
    GeneratedSession session;
    session.sample_rate_hz = spec.sample_rate_hz;

    std::vector<Burst> bursts;
    std::vector<Bout> bouts;
    double t = spec.lead_in_s;
    for (const auto& p : spec.patterns) {
        const std::size_t phases = p.phases.size();
        const double phase_s = p.period_s / static_cast<double>(phases);
        const double width = p.burst_fraction * phase_s;
        const double first = t + width / 2.0;
        if (p.repetitions > 0) {
            const std::size_t n = static_cast<std::size_t>(p.repetitions) * phases + 1;
            for (std::size_t j = 0; j < n; ++j) {
                bursts.push_back({first + static_cast<double>(j) * phase_s, width,
                                  p.phases[j % phases]});
            }
            for (int k = 0; k < p.repetitions; ++k) {
                const double a = first + static_cast<double>(k) * p.period_s;
                session.truth.push_back(
                    {seconds_to_ms(a), seconds_to_ms(a + p.period_s), p.label});
            }
            const double end = bursts.back().center_s + width / 2.0;
            bouts.push_back({t, end, p.noise_sd});
            t = end;
        }
        t += p.rest_after_s;
    }
    const double total_s = t;

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto count = static_cast<std::size_t>(std::floor(total_s * spec.sample_rate_hz)) + 1;
    session.samples.reserve(count);
    std::size_t next_burst = 0;
    std::size_t bout = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double ts = static_cast<double>(i) / spec.sample_rate_hz;
        Vec3 a = spec.gravity;
        while (next_burst < bursts.size() &&
               bursts[next_burst].center_s + bursts[next_burst].width_s / 2.0 <= ts) {
            ++next_burst;
        }
        for (std::size_t b = next_burst; b < bursts.size(); ++b) {
            const Burst& burst = bursts[b];
            const double u = ts - burst.center_s;
            if (u <= -burst.width_s / 2.0) break;
            if (u >= burst.width_s / 2.0) continue;
            const double shape = std::cos(std::numbers::pi * u / burst.width_s);
            a.x += burst.amplitude.x * shape;
            a.y += burst.amplitude.y * shape;
            a.z += burst.amplitude.z * shape;
        }
        while (bout < bouts.size() && bouts[bout].end_s < ts) ++bout;
        const double sd = bout < bouts.size() && bouts[bout].start_s <= ts ? bouts[bout].noise_sd
                                                                           : spec.rest_noise_sd;
        // Always draw, so dropouts do not shift the noise of later samples.
        const double nx = gauss(rng), ny = gauss(rng), nz = gauss(rng);
        a.x += sd * nx;
        a.y += sd * ny;
        a.z += sd * nz;

        bool dropped = false;
        for (const auto& d : spec.dropouts) {
            if (ts >= d.start_s && ts < d.end_s) dropped = true;
        }
        if (dropped) continue;
        const auto t_ms = static_cast<std::int64_t>(
            std::llround(static_cast<double>(i) * 1000.0 / spec.sample_rate_hz));
        session.samples.push_back({t_ms, a});
    }
    return session;
}

namespace {

using nlohmann::json;

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw ConfigError("amplitude must be a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec_to_json(const Vec3& v) {
    return json::array({v.x, v.y, v.z});
}

}  // namespace

GeneratorSpec parse_generator_spec(std::istream& in) {
    GeneratorSpec spec;
    try {
        const json j = json::parse(in);
        spec.seed = j.value("seed", spec.seed);
        spec.sample_rate_hz = j.value("sample_rate_hz", spec.sample_rate_hz);
        if (j.contains("gravity")) spec.gravity = vec_from_json(j["gravity"]);
        spec.rest_noise_sd = j.value("rest_noise_sd", spec.rest_noise_sd);
        spec.lead_in_s = j.value("lead_in_s", spec.lead_in_s);
        for (const auto& jp : j.at("patterns")) {
            PatternSpec p;
            p.label = jp.at("label").get<std::string>();
            p.period_s = jp.value("period_s", p.period_s);
            p.repetitions = jp.value("repetitions", p.repetitions);
            if (jp.contains("phases")) {
                p.phases.clear();
                for (const auto& a : jp["phases"]) p.phases.push_back(vec_from_json(a));
            } else if (jp.contains("amplitude")) {
                p.phases = {vec_from_json(jp["amplitude"])};
            }
            p.burst_fraction = jp.value("burst_fraction", p.burst_fraction);
            p.noise_sd = jp.value("noise_sd", p.noise_sd);
            p.rest_after_s = jp.value("rest_after_s", p.rest_after_s);
            spec.patterns.push_back(std::move(p));
        }
        if (j.contains("dropouts")) {
            for (const auto& d : j["dropouts"]) {
                spec.dropouts.push_back({d.at("start_s").get<double>(), d.at("end_s").get<double>()});
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid generator spec: ") + e.what());
    }
    validate(spec);
    return spec;
}

GeneratorSpec load_generator_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open generator spec '" + path.string() + "'");
    return parse_generator_spec(in);
}

void write_generator_spec(const GeneratorSpec& spec, std::ostream& out) {
    json j;
    j["seed"] = spec.seed;
    j["sample_rate_hz"] = spec.sample_rate_hz;
    j["gravity"] = vec_to_json(spec.gravity);
    j["rest_noise_sd"] = spec.rest_noise_sd;
    j["lead_in_s"] = spec.lead_in_s;
    j["patterns"] = json::array();
    for (const auto& p : spec.patterns) {
        json jp;
        jp["label"] = p.label;
        jp["period_s"] = p.period_s;
        jp["repetitions"] = p.repetitions;
        jp["phases"] = json::array();
        for (const auto& a : p.phases) jp["phases"].push_back(vec_to_json(a));
        jp["burst_fraction"] = p.burst_fraction;
        jp["noise_sd"] = p.noise_sd;
        jp["rest_after_s"] = p.rest_after_s;
        j["patterns"].push_back(std::move(jp));
    }
    if (!spec.dropouts.empty()) {
        j["dropouts"] = json::array();
        for (const auto& d : spec.dropouts) {
            j["dropouts"].push_back({{"start_s", d.start_s}, {"end_s", d.end_s}});
        }
    }
    out << j.dump(2) << '\n';
}

GeneratorSpec exercise_session_spec(std::uint64_t seed, int repetitions) {
    GeneratorSpec s;
    s.seed = seed;
    s.patterns = {
        {"running", 0.8, repetitions, {{0.2, 0.3, 1.6}}, 0.7, 0.05, 4.0},
        {"walking", 1.0, repetitions, {{0.3, 0.2, 0.9}}, 0.5, 0.05, 4.0},
        {"jumping", 1.4, repetitions, {{0.2, 0.2, 2.5}}, 0.5, 0.05, 4.0},
        {"push-up", 1.8, repetitions, {{0.3, 1.4, 0.4}}, 0.5, 0.05, 4.0},
        {"sit-up", 3.0, repetitions, {{1.4, 0.1, 0.6}, {0.6, 0.1, 0.5}, {0.9, 0.1, 0.3}}, 0.7,
         0.05, 4.0},
    };
    return s;
}

}  // namespace imurep
