#include "support.hpp"
#include "vblind/error.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace vblind;
using namespace vblind::testing;

namespace {

Integer det_rows(const std::vector<Direction>& rows) {
    IntMatrix m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    return determinant(m);
}

void expect_window_invariants(const LineSchedule& s) {
    const int d = static_cast<int>(s.d);
    for (int k = 1; k + d - 1 <= s.horizon; ++k) {
        std::vector<Direction> rows;
        for (int j = k; j < k + d; ++j) rows.push_back(*s.at(j).line);
        EXPECT_NE(det_rows(rows), 0) << "window at " << k;
    }
    for (int k = 1; k + d <= s.horizon; ++k) EXPECT_NE(dot(*s.at(k).line, *s.at(k + d).line), 0) << "lag at " << k;
}

} // namespace

TEST(Angle, Examples) {
    const auto par = angle_alpha(dir({1, 0}), dir({1, 0}));
    EXPECT_EQ(par.cos_sq, q(1));
    EXPECT_EQ(par.alpha, 0);
    const auto diag = angle_alpha(dir({1, 0}), dir({1, 1}));
    EXPECT_EQ(diag.cos_sq, q(1, 2));
    EXPECT_EQ(diag.alpha, 1);
    EXPECT_EQ(diag.M, 2);
    EXPECT_THROW(angle_alpha(dir({1, 0}), dir({0, 1})), Error);
}

TEST(Angle, AlphaIsSmallestAdmissible) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> c(-9, 9);
    for (int i = 0; i < 200; ++i) {
        const long u0 = c(rng), u1 = c(rng), v0 = c(rng), v1 = c(rng);
        if ((u0 == 0 && u1 == 0) || (v0 == 0 && v1 == 0) || u0 * v0 + u1 * v1 == 0) continue;
        const auto r = angle_alpha(dir({u0, u1}), dir({v0, v1}));
        EXPECT_GE(r.cos_sq * pow2(2 * r.alpha), 1);
        if (r.alpha > 0) EXPECT_LT(r.cos_sq * pow2(2 * (r.alpha - 1)), 1);
    }
}

TEST(Schedule, HelperCandidatePattern) {
    ScheduleOptions opts;
    opts.candidates.push_back({{dir({0, 1})}, dir({1, 1})});
    const auto s = build_schedule({dir({1, 0})}, 2, 8, opts);
    const std::vector<Direction> expect{dir({1, 0}), dir({0, 1}), dir({1, 1}), dir({0, 1}), dir({1, 0})};
    for (int k = 1; k <= 5; ++k) EXPECT_EQ(*s.at(k).line, expect[static_cast<std::size_t>(k - 1)]) << k;
    EXPECT_TRUE(s.at(1).is_user());
    EXPECT_EQ(s.at(3).helper_index, 0);
    EXPECT_EQ(s.at(2).helper_index, 1);
    expect_window_invariants(s);
}

TEST(Schedule, RejectsHyperplaneContainingUserLine) {
    ScheduleOptions opts;
    opts.candidates.push_back({{dir({0, 1})}, dir({1, 1})});
    opts.candidates.push_back({{dir({1, 0})}, dir({1, 1})});
    const auto s = build_schedule({dir({0, 1})}, 2, 8, opts);
    ASSERT_EQ(s.helpers.hyperplane.size(), 1u);
    EXPECT_EQ(s.helpers.hyperplane[0], dir({1, 0}));
    expect_window_invariants(s);
}

TEST(Schedule, ThreeDimensionalWindows) {
    const auto s = build_schedule({dir({1, 0, 0}), dir({0, 0, 1})}, 3, 24);
    expect_window_invariants(s);
    EXPECT_EQ(check_schedule(s), std::nullopt);
    EXPECT_EQ(s.occurrences(dir({1, 0, 0})), (std::vector<int>{1, 13}));
    EXPECT_EQ(s.occurrences(dir({0, 0, 1})), (std::vector<int>{7, 19}));
}

TEST(Schedule, PropertyRandomUserLines) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> c(-3, 3);
    int built = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = trial % 2 ? 3 : 2;
        std::vector<Direction> lines;
        for (int i = 0; i < 2; ++i) {
            std::vector<Integer> v(d);
            bool nz = false;
            for (auto& x : v) {
                x = c(rng);
                nz |= x != 0;
            }
            if (nz) lines.push_back(Direction::canonicalize(v));
        }
        if (lines.empty()) continue;
        const int horizon = static_cast<int>(2 * d * lines.size() * 2);
        try {
            const auto s = build_schedule(lines, d, horizon);
            ++built;
            expect_window_invariants(s);
            for (const auto& l : lines) EXPECT_GE(s.occurrences(l).size(), 2u);
            for (int k = 1; k <= s.horizon; ++k) {
                const auto a = angle_alpha(s.dropped(k), *s.at(k).line);
                EXPECT_EQ(a.alpha, s.angle(k).alpha);
            }
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ScheduleSearchExhausted) << e.what();
        }
    }
    EXPECT_GE(built, 20);
}

TEST(Schedule, ShortHorizonRejected) {
    EXPECT_THROW(build_schedule({dir({1, 2})}, 2, 3), Error);
    EXPECT_THROW(build_schedule({dir({1, 2, 3})}, 2, 8), Error);
}

TEST(Planner, FirstStageCapacity) {
    const auto s = build_schedule({dir({1, 0})}, 2, 8);
    PlanConfig cfg;
    LedgerState st;
    st.n_prev = {0, 0};
    const auto p = plan_parameters(s, q(0), Option::Capacity, 1, st, cfg);
    // a_1 > 1 and n_1 - a_1 >= alpha_1 + 1 with room for a child per parent.
    EXPECT_GE(p.a, 2);
    EXPECT_GE(p.n - p.a, s.angle(1).alpha + 1);
    EXPECT_NO_THROW(validate_parameters(s, q(0), Option::Capacity, 1, st, cfg, p.n, p.a));
    EXPECT_EQ(p.n, 6);
    EXPECT_EQ(p.a, 2);
}

TEST(Planner, Deterministic) {
    const auto s = build_schedule({dir({1, 2})}, 2, 8);
    PlanConfig cfg;
    LedgerState st;
    st.n_prev = {6, 13};
    st.a_prev = 3;
    st.count_prev = 40;
    const auto a = plan_parameters(s, q(1, 2), Option::Unconstrained, 3, st, cfg);
    const auto b = plan_parameters(s, q(1, 2), Option::Unconstrained, 3, st, cfg);
    EXPECT_EQ(a.n, b.n);
    EXPECT_EQ(a.a, b.a);
    EXPECT_NO_THROW(validate_parameters(s, q(1, 2), Option::Unconstrained, 3, st, cfg, a.n, a.a));
}

TEST(Planner, NonIncreasingRequestRejected) {
    const auto s = build_schedule({dir({1, 2})}, 2, 8);
    PlanConfig cfg;
    LedgerState st;
    st.n_prev = {6, 13};
    st.a_prev = 3;
    try {
        validate_parameters(s, q(0), Option::Capacity, 3, st, cfg, 13, 5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PlanInfeasible);
    }
}

TEST(Planner, OptionRatiosAfterRamp) {
    for (const auto& [t, option] : {std::pair{q(0), Option::Capacity}, std::pair{q(1), Option::MeasureZero},
                                    std::pair{q(1, 2), Option::MeasureZero}}) {
        const auto s = build_schedule({dir({1, 2})}, 2, 16);
        ConstructionConfig cfg;
        cfg.t = t;
        cfg.option = option;
        cfg.plan.growth = Rational(3, 2);
        cfg.plan.case_partition = false;
        cfg.plan.ramp_ratio = false;
        cfg.plan.budget_bits = 14;
        cfg.limits.max_pieces = 1 << 14;
        const auto c = construct(s, cfg, 8);
        const int ramp = ramp_of(s, cfg.plan);
        for (const auto& p : c.plans) {
            if (p.k <= ramp) continue;
            const Rational ratio(Rational(p.a) / Rational(p.n));
            if (option == Option::Capacity) EXPECT_LE(ratio + Rational(1, p.k), 1 - t) << p.k;
            else EXPECT_GE(ratio - Rational(1, p.k), 1 - t) << p.k;
        }
        for (std::size_t i = 1; i < c.plans.size(); ++i) {
            EXPECT_GT(c.plans[i].n, c.plans[i - 1].n);
            EXPECT_GT(c.plans[i].a, c.plans[i - 1].a);
        }
    }
}
