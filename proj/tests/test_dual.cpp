#include <catch_amalgamated.hpp>

#include <cmath>

#include "slfv/analysis.hpp"
#include "slfv/dual.hpp"

using namespace slfv;

TEST_CASE("coverage queries agree with brute force on both index paths") {
    TorusDomain dom(2, 12.0);
    Rng rng(31);
    std::vector<Point> pts;
    for (int i = 0; i < 40; ++i) pts.push_back(rng.uniform_in_box(dom));
    DualSimulator sim(EventModel::fixed(1.0, 0.5, 0.0), dom, pts, rng);
    for (int trial = 0; trial < 300; ++trial) {
        const Point x = rng.uniform_in_box(dom);
        // r below the bucket side exercises the hash path, above it the scan
        const double r = trial % 2 == 0 ? rng.uniform(0.2, 1.9) : rng.uniform(2.1, 2.9);
        std::size_t brute = 0;
        for (const auto& p : pts)
            if (dom.distance_squared(p, x) <= r * r) ++brute;
        CHECK(sim.coverage_count(x, r) == brute);
    }
}

TEST_CASE("single particle: every accepted event covers it") {
    TorusDomain dom(1, 10.0);
    Rng rng(5);
    DualSimulator sim(EventModel::fixed(1.0, 0.3, 0.1), dom, {{5.0, 0, 0}}, rng);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::size_t> covered;
        const auto e = sim.propose_covering_event(covered);
        REQUIRE(covered.size() == 1);
        CHECK(dom.distance(sim.state().particles[covered[0]], e.center) <= e.radius + 1e-12);
    }
}

TEST_CASE("coincident pair: every accepted event covers both, rate matches the union") {
    // With two coincident particles every covering ball covers both, so the
    // acceptance probability is always 1/2 and the accepted stream runs at
    // the one-ball rate V_R (1+s).
    TorusDomain dom(1, 10.0);
    const auto model = EventModel::fixed(1.0, 1e-12, 0.1); // u ~ 0: no marks, frozen particles
    const double target_rate = 2.0 * 1.1;                  // V_R (1+s), d=1
    const double T = 2000.0;
    Rng rng(8);
    DualSimulator sim(model, dom, {{5.0, 0, 0}, {5.0, 0, 0}}, rng);
    long accepted = 0;
    while (sim.state().time < T) {
        std::vector<std::size_t> covered;
        sim.propose_covering_event(covered);
        if (sim.state().time > T) break;
        REQUIRE(covered.size() == 2);
        ++accepted;
    }
    const double se = std::sqrt(target_rate * T);
    CHECK(std::abs(static_cast<double>(accepted) - target_rate * T) <= 4.0 * se);
}

TEST_CASE("well separated pair: per-particle accepted event rate is V_R (1+s)") {
    TorusDomain dom(1, 20.0);
    const auto model = EventModel::fixed(1.0, 1e-12, 0.25);
    const double per_particle = 2.0 * 1.25;
    const double T = 1500.0;
    Rng rng(9);
    DualSimulator sim(model, dom, {{5.0, 0, 0}, {15.0, 0, 0}}, rng);
    long accepted = 0;
    while (sim.state().time < T) {
        std::vector<std::size_t> covered;
        sim.propose_covering_event(covered);
        if (sim.state().time > T) break;
        REQUIRE(covered.size() == 1); // separation > 2R
        ++accepted;
    }
    const double target = 2.0 * per_particle * T;
    const double se = std::sqrt(target);
    CHECK(std::abs(static_cast<double>(accepted) - target) <= 4.0 * se);
}

TEST_CASE("dual event transitions follow the mark rule") {
    TorusDomain dom(1, 10.0);
    Rng rng(13);
    ReproductionEvent e;
    e.center = {5.0, 0, 0};
    e.radius = 1.0;
    e.impact = 1.0; // every covered lineage is marked

    // one covered, neutral: relocation jump, count unchanged
    {
        DualSimulator sim(EventModel::fixed(1.0, 1.0, 0.0), dom, {{5.2, 0, 0}}, rng);
        e.kind = EventKind::neutral;
        sim.apply_dual_event(e, {0});
        CHECK(sim.state().count() == 1);
        CHECK(sim.state().jumps == 1);
        CHECK(dom.distance(sim.state().particles[0], e.center) <= 1.0 + 1e-12);
    }
    // one covered, selective: branch to two
    {
        DualSimulator sim(EventModel::fixed(1.0, 1.0, 1.0), dom, {{5.2, 0, 0}}, rng);
        e.kind = EventKind::selective;
        sim.apply_dual_event(e, {0});
        CHECK(sim.state().count() == 2);
        CHECK(sim.state().branches == 1);
        for (const auto& p : sim.state().particles)
            CHECK(dom.distance(p, e.center) <= 1.0 + 1e-12);
    }
    // two covered, neutral: coalescence to one
    {
        DualSimulator sim(EventModel::fixed(1.0, 1.0, 0.0), dom, {{5.2, 0, 0}, {4.8, 0, 0}}, rng);
        e.kind = EventKind::neutral;
        sim.apply_dual_event(e, {0, 1});
        CHECK(sim.state().count() == 1);
        CHECK(sim.state().coalescences == 1);
    }
    // two covered, selective: net count unchanged, one branch and one merge
    {
        DualSimulator sim(EventModel::fixed(1.0, 1.0, 1.0), dom, {{5.2, 0, 0}, {4.8, 0, 0}}, rng);
        e.kind = EventKind::selective;
        sim.apply_dual_event(e, {0, 1});
        CHECK(sim.state().count() == 2);
        CHECK(sim.state().branches == 1);
        CHECK(sim.state().coalescences == 1);
    }
}

TEST_CASE("no marks means no state change") {
    TorusDomain dom(1, 10.0);
    Rng rng(17);
    DualSimulator sim(EventModel::fixed(1.0, 1e-15, 0.0), dom, {{5.0, 0, 0}, {2.0, 0, 0}}, rng);
    const auto before = sim.state().particles;
    for (int i = 0; i < 500; ++i) {
        std::vector<std::size_t> covered;
        const auto e = sim.propose_covering_event(covered);
        sim.apply_dual_event(e, covered);
    }
    CHECK(sim.state().particles == before);
    CHECK(sim.state().jumps == 0);
}

TEST_CASE("neutral-only runs keep a single lineage") {
    TorusDomain dom(1, 10.0);
    Rng rng(19);
    DualSimulator sim(EventModel::fixed(1.0, 0.4, 0.0), dom, {{5.0, 0, 0}}, rng);
    auto traj = run_dual(sim, 50.0, {10.0, 25.0, 50.0});
    for (auto n : traj.particle_counts) CHECK(n == 1);
    CHECK(traj.branches == 0);
    CHECK(sim.state().jumps > 0);
}

TEST_CASE("the dual never goes extinct under branching and coalescing") {
    TorusDomain dom(1, 8.0);
    Rng rng(23);
    DualSimulator sim(EventModel::fixed(1.0, 0.8, 0.5), dom, {{4.0, 0, 0}}, rng);
    for (int i = 0; i < 4000; ++i) {
        std::vector<std::size_t> covered;
        const auto e = sim.propose_covering_event(covered);
        sim.apply_dual_event(e, covered);
        REQUIRE(sim.state().count() >= 1);
    }
    CHECK(sim.state().branches > 0);
    CHECK(sim.state().coalescences > 0);
}

TEST_CASE("neutral d=3 runs with separated lineages never merge") {
    // with s=0 the count can only drop at a shared-cover coalescence; in d=3
    // well-separated walkers never share an event over a short horizon
    TorusDomain dom(3, 12.0);
    Rng rng(47);
    std::vector<Point> init{{2.0, 2.0, 2.0}, {9.0, 9.0, 9.0}, {2.0, 9.0, 5.0}};
    DualSimulator sim(EventModel::fixed(1.0, 0.4, 0.0), dom, init, rng);
    auto traj = run_dual(sim, 20.0, {5.0, 10.0, 20.0});
    for (auto n : traj.particle_counts) CHECK(n == 3);
    CHECK(traj.coalescences == 0);
    CHECK(sim.state().jumps > 0);
}

TEST_CASE("marked-event rate of a single lineage is u V_R (1+s)") {
    Rng rng(29);
    const auto model = EventModel::fixed(1.0, 0.3, 0.1);
    SingleLineage lin(model, 1, rng);
    CHECK(lin.covering_rate() == Catch::Approx(2.0 * 1.1));
    const double T = 5000.0;
    long jumps = 0;
    while (true) {
        const auto j = lin.next_jump();
        if (j.time > T) break;
        ++jumps;
    }
    const double target = 0.3 * 2.0 * 1.1 * T;
    CHECK(std::abs(static_cast<double>(jumps) - target) <= 4.0 * std::sqrt(target));
}

TEST_CASE("single-lineage per-jump displacement variance is 2 R^2 / 3 in d=1") {
    // displacement = sum of two independent uniforms on [-R, R]:
    // per-coordinate variance R^2/3 + R^2/3
    Rng rng(37);
    const double R = 1.3;
    SingleLineage lin(EventModel::fixed(R, 0.5, 0.0), 1, rng);
    std::vector<double> disps;
    for (int i = 0; i < 200000; ++i) disps.push_back(lin.next_jump().displacement[0]);
    auto [var, se] = variance_and_se(disps);
    CHECK(std::abs(var - 2.0 * R * R / 3.0) <= 4.0 * se);
}

TEST_CASE("stable covering rate matches the size-biased mass") {
    Rng rng(41);
    const auto model = EventModel::stable(1.5, 0.5, 0.2);
    SingleLineage lin(model, 1, rng);
    // Lambda_1 = (1+s) V_1 / alpha, untruncated
    CHECK(lin.covering_rate() == Catch::Approx(1.2 * 2.0 / 1.5));
    for (int i = 0; i < 200; ++i) CHECK(lin.next_jump().radius >= 1.0);
}

TEST_CASE("first branch time is exponential with rate u s V_R") {
    const auto model = EventModel::fixed(1.0, 0.4, 0.3);
    // unscaled: marked selective events at rate u * s * V_R
    const double rate = 0.4 * 0.3 * 2.0;
    auto times = first_branch_times(model, 1, 1.0, 3000, 99);
    const double p = ks_test_exponential(times, rate);
    CHECK(p > 0.01);
    auto [mean, se] = mean_and_se(times);
    CHECK(std::abs(mean - 1.0 / rate) <= 4.0 * se);
}

TEST_CASE("rescaled dual plan") {
    const auto plan = rescaled_dual_config(EventModel::fixed(1.0, 0.5, 1.0), 1000);
    CHECK(plan.scaled_model.impact == Catch::Approx(0.05));
    CHECK(plan.scaled_model.selection == Catch::Approx(0.01));
    CHECK(plan.unscaled_horizon(2.0) == Catch::Approx(2000.0));
    CHECK(plan.params.space_factor() == Catch::Approx(0.1));
}

TEST_CASE("low impact freezes the dual over a fixed horizon") {
    // thinning by u: P(no jump by T) = exp(-u V_R (1+s) T) -> 1 as u -> 0
    Rng rng(43);
    long no_jump = 0;
    const long reps = 400;
    for (long i = 0; i < reps; ++i) {
        SingleLineage lin(EventModel::fixed(1.0, 1e-4, 0.0), 1, rng);
        if (lin.next_jump().time > 5.0) ++no_jump;
    }
    CHECK(no_jump >= reps - 5); // P(jump) ~ 1e-3 over T=5
}
