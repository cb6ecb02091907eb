#pragma once

#include "vblind/construction.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vblind {

struct RunConfig {
    std::size_t d = 2;
    Rational t = 0;
    Option option = Option::Capacity;
    std::vector<Direction> lines;
    int cycles = 2;
    std::optional<int> stages; // overrides cycles
    std::uint64_t max_pieces = 200000;
    PlanConfig plan; // growth, case_partition, band, steer, ramp, ramp_ratio, n_floor
    bool budget_set = false;
    int search_bound = 2;
    // Tried before the helper search when set.
    std::optional<HelperChoice> helpers;

    // analysis
    std::uint64_t seed = 42;
    int ball_samples = 1000;
    int wk_samples = 32;
    std::optional<double> energy_s; // default d-1

    // planes
    std::size_t plane_d = 0;
    std::size_t plane_k = 1;
    Rational plane_s = 0;
    std::vector<std::vector<Rational>> verticals;
    std::size_t max_planes = 256;

    int depth() const;
    ConstructionConfig construction() const;
};

// Flat "key = value" lines; '#' starts a comment. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& c);

// Canonical text: one key per line in fixed order, exact scalars.
std::string canonical_text(const RunConfig& c);
std::uint64_t config_hash(const RunConfig& c);
std::string hex64(std::uint64_t v);

Direction parse_direction(const std::string& text); // "1,2" or "(1,2)"
std::vector<Rational> parse_vector(const std::string& text);

} // namespace vblind
