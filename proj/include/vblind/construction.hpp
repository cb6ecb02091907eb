#pragma once

#include "vblind/piece.hpp"
#include "vblind/schedule.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace vblind {

struct DyInterval {
    Dyadic lo;
    Dyadic hi;
    friend bool operator==(const DyInterval&, const DyInterval&) = default;
};

// I(h, j) = [h 2^{a-n} + j 2^{1-n}, same + 2^{-n}].
DyInterval interval(const Integer& h, std::int64_t j, std::int64_t n, std::int64_t a);

struct Stage {
    int k = 0;
    DirectionRef line; // null for the cube
    std::int64_t n = 0;
    std::int64_t a = 0;
    // Sorted by generating interval; j is the 1-based position.
    std::vector<Piece> pieces;
    std::map<std::int64_t, std::int64_t> per_parent_counts;
    std::int64_t id_base = 0;

    Integer count() const { return Integer(static_cast<unsigned long>(pieces.size())); }
    double m() const { return pieces.empty() ? 0.0 : std::log2(static_cast<double>(pieces.size())); }
    const Piece& by_id(std::int64_t global_id) const {
        return pieces.at(static_cast<std::size_t>(global_id - id_base));
    }
};

Stage initial_stage(const LineSchedule& schedule);

// Replaces slab drop_index of the parent by (new_line, iv); accepted iff the
// candidate's range on the dropped direction lies inside the dropped interval.
std::optional<Piece> full_crossing_child(const Piece& parent, const DirectionRef& new_line, const DyInterval& iv,
                                         std::size_t drop_index);

struct BuildLimits {
    std::uint64_t max_pieces = 200000;
};

// Always drops the oldest slab (position 0).
Stage build_stage(const Stage& prev, const DirectionRef& line, std::int64_t n, std::int64_t a,
                  std::int64_t id_base, const BuildLimits& limits = {});
void assign_mass(Stage& stage, const Stage& prev);

struct InjectivityCertificate {
    int k = 0;
    DirectionRef line;
    std::vector<std::pair<std::int64_t, DyInterval>> intervals; // sorted by lo
    bool certified = true;
    std::optional<std::pair<std::int64_t, std::int64_t>> violation;
};

InjectivityCertificate certify_injectivity(const Stage& stage);

// Checks on built stages; each returns a description of the first failure.
std::optional<std::string> check_ordering(const Stage& stage);
std::optional<std::string> check_nesting(const Stage& stage, const Stage& prev);
std::optional<std::string> check_congruence(const Stage& stage, std::size_t sample);
std::optional<std::string> check_projection_equals_interval(const Stage& stage);

struct LedgerRow {
    int k = 0;
    int line_index = 0;
    std::int64_t n = 0;
    std::int64_t a = 0;
    Integer count;
    double m = 0;
    std::int64_t min_children = 0;
    std::int64_t max_children = 0;
};

struct ConstructionConfig {
    Rational t = 0;
    Option option = Option::Capacity;
    PlanConfig plan;
    BuildLimits limits;
};

struct Construction {
    LineSchedule schedule;
    ConstructionConfig config;
    std::vector<Stage> stages; // stages[k], k = 0..K
    std::vector<StagePlan> plans; // plans[k-1]
    std::vector<InjectivityCertificate> certificates; // certificates[k-1]
    std::vector<LedgerRow> ledger;

    int depth() const { return static_cast<int>(stages.size()) - 1; }
    const Stage& deepest() const { return stages.back(); }
    // Ancestor of a stage-K piece at stage k.
    const Piece& ancestor(const Piece& p, int k) const;
};

// Index into the table [user lines..., e_1..e_{d-1}, e].
int line_index(const LineSchedule& s, int k);

LedgerState ledger_state(const Construction& c, int k);

// Builds stages 1..depth; errors carry the failing stage index.
Construction construct(const LineSchedule& schedule, const ConstructionConfig& config, int depth);

// For each user line, every deepest piece projects inside its ancestor's
// interval at the line's latest occurrence.
std::optional<std::string> check_persistence(const Construction& c);

} // namespace vblind
