#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cardinal/lymph_node.hpp"
#include "support/test_support.hpp"

using namespace cardinal;

namespace {

DifferentiationParams base_params() {
    DifferentiationParams p;
    p.theta_ctl = 5.0;
    p.theta_th1 = 5.0;
    p.theta_th2 = 3.0;
    p.maturation_window = 3;
    p.clone_gain = 1.0;
    p.clone_cap = 32;
    p.memory_factor = 0.5;
    return p;
}

DendriticCellReport report(const std::string& antigen, double costim,
                           double il12, double il4) {
    DendriticCellReport r;
    r.antigen = antigen;
    r.costim = costim;
    r.il12 = il12;
    r.il4 = il4;
    return r;
}

NaiveTCell ready_naive(double a_ctl, double a_th1, double a_th2,
                       const DifferentiationParams& p) {
    NaiveTCell n;
    n.tcr = "a";
    n.a_ctl = a_ctl;
    n.a_th1 = a_th1;
    n.a_th2 = a_th2;
    n.theta_ctl = p.theta_ctl;
    n.theta_th1 = p.theta_th1;
    n.theta_th2 = p.theta_th2;
    n.created_at = 0;
    return n;
}

} // namespace

TEST_CASE("ensure_naive creates zeroed cells with base thresholds") {
    NaivePool pool;
    MemoryRegistry memory;
    const auto& cell = ensure_naive(pool, "a", 5, memory, base_params());
    CHECK(cell.a_ctl == 0.0);
    CHECK(cell.a_th1 == 0.0);
    CHECK(cell.a_th2 == 0.0);
    CHECK(cell.theta_ctl == doctest::Approx(5.0));
    CHECK(cell.theta_th2 == doctest::Approx(3.0));
    CHECK_FALSE(cell.is_memory);
    CHECK(cell.created_at == 5);
}

TEST_CASE("remembered antigens get scaled thresholds") {
    NaivePool pool;
    MemoryRegistry memory{"a"};
    const auto& cell = ensure_naive(pool, "a", 0, memory, base_params());
    CHECK(cell.is_memory);
    CHECK(cell.theta_ctl == doctest::Approx(2.5));
    CHECK(cell.theta_th1 == doctest::Approx(2.5));
    CHECK(cell.theta_th2 == doctest::Approx(1.5));
}

TEST_CASE("ensure_naive is idempotent") {
    NaivePool pool;
    MemoryRegistry memory;
    auto& first = ensure_naive(pool, "a", 0, memory, base_params());
    first.a_ctl = 4.0;
    const auto& again = ensure_naive(pool, "a", 9, memory, base_params());
    CHECK(pool.size() == 1);
    CHECK(again.a_ctl == doctest::Approx(4.0));
    CHECK(again.created_at == 0);
}

TEST_CASE("maturation accumulates the three channels") {
    auto naive = ready_naive(0, 0, 0, base_params());
    mature(naive, report("a", 2.0, 1.0, 0.0));
    CHECK(naive.a_ctl == doctest::Approx(2.0));
    CHECK(naive.a_th1 == doctest::Approx(1.0));
    CHECK(naive.a_th2 == doctest::Approx(0.0));

    auto other = ready_naive(3, 1, 4, base_params());
    mature(other, report("a", 0.0, 0.0, 0.0));
    CHECK(other.a_ctl == doctest::Approx(3.0));
    CHECK(other.a_th1 == doctest::Approx(1.0));
    CHECK(other.a_th2 == doctest::Approx(4.0));
}

TEST_CASE("maturation rejects a mismatched antigen") {
    auto naive = ready_naive(0, 0, 0, base_params());
    CHECK_THROWS_AS(mature(naive, report("b", 1, 0, 0)), std::logic_error);
}

TEST_CASE("differentiation emits a CTL sized by the overshoot") {
    const auto result = differentiate(ready_naive(7.0, 2.0, 2.0, base_params()),
                                      base_params(), 10);
    REQUIRE(result.effectors.size() == 1);
    CHECK(result.consumed);
    CHECK(result.effectors[0].cell_type == CellType::Ctl);
    CHECK(result.effectors[0].clones == 2);
    CHECK(result.effectors[0].antigen == "a");
    CHECK(result.effectors[0].is_local());
}

TEST_CASE("multiple exceeded thresholds emit one effector each") {
    const auto result = differentiate(ready_naive(6.0, 6.0, 4.0, base_params()),
                                      base_params(), 10);
    REQUIRE(result.effectors.size() == 3);
    CHECK(result.consumed);
    for (const auto& eff : result.effectors) CHECK(eff.clones == 1);
}

TEST_CASE("exact threshold does not differentiate") {
    const auto result = differentiate(ready_naive(5.0, 5.0, 3.0, base_params()),
                                      base_params(), 10);
    CHECK(result.effectors.empty());
    CHECK_FALSE(result.consumed);
}

TEST_CASE("immature cells wait for the window") {
    auto naive = ready_naive(9.0, 0.0, 0.0, base_params());
    naive.created_at = 4;
    CHECK(differentiate(naive, base_params(), 6).effectors.empty());
    CHECK(differentiate(naive, base_params(), 7).effectors.size() == 1);
}

TEST_CASE("clone counts respect the cap and stay positive") {
    auto p = base_params();
    p.clone_gain = 10.0;
    const auto result =
        differentiate(ready_naive(50.0, 0.0, 0.0, p), p, 10);
    REQUIRE(result.effectors.size() == 1);
    CHECK(result.effectors[0].clones == 32);
}

TEST_CASE("clone count is monotone in the activation value") {
    testsup::TestRng rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const double theta = rng.range(0.5, 8.0);
        const double gain = rng.range(0.2, 3.0);
        const double a = theta + rng.range(0.001, 10.0);
        const double higher = a + rng.range(0.0, 5.0);
        const int c1 = clones_for(a, theta, gain, 32);
        const int c2 = clones_for(higher, theta, gain, 32);
        CHECK(c1 >= 1);
        CHECK(c2 >= c1);
        CHECK(c2 <= 32);
    }
}

TEST_CASE("il4-only evidence can never produce a CTL") {
    auto params = base_params();
    NaivePool pool;
    MemoryRegistry memory;
    auto& naive = ensure_naive(pool, "quiet", 0, memory, params);
    for (int step = 0; step < 50; ++step)
        mature(naive, report("quiet", 0.0, 0.0, 1.0));
    const auto result = differentiate(naive, params, 50);
    for (const auto& eff : result.effectors)
        CHECK(eff.cell_type != CellType::Ctl);
    CHECK(naive.a_ctl == 0.0);
}

TEST_CASE("memory never differentiates later than baseline") {
    // Feed the same report sequence to a memory cell and a base cell and
    // compare first differentiation steps.
    testsup::TestRng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        auto params = base_params();
        params.memory_factor = rng.range(0.1, 0.9);
        NaivePool base_pool, mem_pool;
        MemoryRegistry none, remembered{"a"};
        ensure_naive(base_pool, "a", 0, none, params);
        ensure_naive(mem_pool, "a", 0, remembered, params);

        int base_step = -1, mem_step = -1;
        for (StepIndex step = 0; step < 40; ++step) {
            const auto r = report("a", rng.range(0.0, 0.6), rng.range(0.0, 0.6),
                                  rng.range(0.0, 0.6));
            if (base_step < 0) {
                mature(base_pool.at("a"), r);
                if (differentiate(base_pool.at("a"), params, step).consumed)
                    base_step = static_cast<int>(step);
            }
            if (mem_step < 0) {
                mature(mem_pool.at("a"), r);
                if (differentiate(mem_pool.at("a"), params, step).consumed)
                    mem_step = static_cast<int>(step);
            }
        }
        if (base_step >= 0) {
            REQUIRE(mem_step >= 0);
            CHECK(mem_step <= base_step);
        }
    }
}

TEST_CASE("unreinforced effectors decay and die") {
    EffectorMap effectors;
    effectors[{"a", CellType::Ctl}] = testsup::effector("a", CellType::Ctl, 3);
    effectors[{"b", CellType::Th2}] = testsup::effector("b", CellType::Th2, 1);
    effectors[{"c", CellType::Th1}] = testsup::effector("c", CellType::Th1, 5);

    decay_effectors(effectors, {"c"}, base_params());
    CHECK(effectors.at({"a", CellType::Ctl}).clones == 2);
    CHECK_FALSE(effectors.contains({"b", CellType::Th2}));
    CHECK(effectors.at({"c", CellType::Th1}).clones == 5);
}

TEST_CASE("clone history shifts at the end of each step") {
    EffectorMap effectors;
    auto eff = testsup::effector("a", CellType::Ctl, 6);
    eff.clones_hist = {2, 4};
    effectors[{"a", CellType::Ctl}] = eff;
    record_clone_history(effectors);
    CHECK(effectors.at({"a", CellType::Ctl}).clones_hist ==
          std::pair<int, int>{4, 6});

    // A fresh effector starts at (0,0); the first record gives (0, clones).
    EffectorMap fresh;
    fresh[{"a", CellType::Ctl}] = testsup::effector("a", CellType::Ctl, 5);
    record_clone_history(fresh);
    CHECK(fresh.at({"a", CellType::Ctl}).clones_hist ==
          std::pair<int, int>{0, 5});

    // Unchanged clone counts converge to (c, c).
    record_clone_history(fresh);
    CHECK(fresh.at({"a", CellType::Ctl}).clones_hist ==
          std::pair<int, int>{5, 5});
}
