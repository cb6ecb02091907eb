#pragma once

#include "vblind/direction.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vblind {

struct AngleData {
    Rational cos_sq;
    int alpha = 0;
    int M = 1; // alpha + 1
};

AngleData angle_alpha(const Direction& u, const Direction& v);

// user_index >= 0 for user lines; helper_index is 0 for e and i for e_i.
struct ScheduleEntry {
    DirectionRef line;
    int user_index = -1;
    int helper_index = -1;
    bool is_user() const { return user_index >= 0; }
};

struct HelperChoice {
    std::vector<Direction> hyperplane; // d-1 vectors spanning H
    Direction transversal;             // e
};

struct LineSchedule {
    std::size_t d = 0;
    int horizon = 0;
    std::vector<Direction> user_lines;
    HelperChoice helpers;
    // Index 0 is stage k = 1.
    std::vector<ScheduleEntry> entries;
    // Axis order of the initial cube: the axis at position i is dropped at stage i + 1.
    std::vector<int> axis_order;
    // Angle between the dropped (oldest) direction and l_k, index 0 is k = 1.
    std::vector<AngleData> angles;
    // Coefficients of the dropped direction in the basis (retained slabs
    // oldest first, l_k last). Retained position i belongs to stage k-d+1+i.
    std::vector<std::vector<Rational>> drop_coefficients;

    const ScheduleEntry& at(int k) const { return entries.at(static_cast<std::size_t>(k - 1)); }
    const AngleData& angle(int k) const { return angles.at(static_cast<std::size_t>(k - 1)); }
    // Direction dropped at stage k (an axis for k <= d, l_{k-d} afterwards).
    Direction dropped(int k) const;
    // Stages whose line equals the given direction.
    std::vector<int> occurrences(const Direction& line) const;
    int cycle_length() const { return static_cast<int>(2 * d * user_lines.size()); }
};

struct ScheduleOptions {
    // Tried in order before the search; rejected candidates are skipped.
    std::vector<HelperChoice> candidates;
    int search_bound = 2; // max |component| of enumerated helper vectors
};

LineSchedule build_schedule(const std::vector<Direction>& user_lines, std::size_t d, int horizon,
                            const ScheduleOptions& options = {});

// Exact checks of the LineSchedule invariants; returns a description of the
// first failure, or nullopt.
std::optional<std::string> check_schedule(const LineSchedule& s);

enum class Option { Capacity, MeasureZero, Unconstrained };
std::string to_string(Option o);
Option parse_option(const std::string& s);

struct PlanConfig {
    Rational growth = 2;
    bool case_partition = true;
    // Steering band for m_k/n_k around t at user-line stages after the ramp.
    Rational band = Rational(1, 12);
    bool steer = true;
    // log2 of the piece cap, used to keep steering within budget.
    double budget_bits = 64.0;
    // Stages k <= ramp use the relaxed ratio rule (or none when ramp_ratio is
    // false); -1 means d + 2.
    int ramp = -1;
    bool ramp_ratio = true;
    // Lower bound on every n_k.
    std::int64_t n_floor = 0;
};

struct LedgerState {
    std::vector<std::int64_t> n_prev; // n_{k-d} .. n_{k-1}, zeros for virtual stages
    std::int64_t a_prev = 0;
    Integer count_prev = 1; // piece count of stage k-1
    double m_prev() const { return log2_of(count_prev); }
};

struct StagePlan {
    int k = 0;
    std::int64_t n = 0;
    std::int64_t a = 0;
    bool steered = false;
};

int ramp_of(const LineSchedule& s, const PlanConfig& c);

StagePlan plan_parameters(const LineSchedule& schedule, const Rational& t, Option option, int k,
                          const LedgerState& state, const PlanConfig& config);

// Throws PlanInfeasible naming the first violated constraint.
void validate_parameters(const LineSchedule& schedule, const Rational& t, Option option, int k,
                         const LedgerState& state, const PlanConfig& config, std::int64_t n, std::int64_t a);

} // namespace vblind
