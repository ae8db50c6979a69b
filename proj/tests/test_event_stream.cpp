#include <catch_amalgamated.hpp>

#include <cmath>

#include "slfv/analysis.hpp"
#include "slfv/event_stream.hpp"
#include "slfv/quadrature.hpp"

using namespace slfv;

TEST_CASE("model validation") {
    CHECK_THROWS_AS(EventModel::fixed(0.0, 0.5, 0.0), config_error);
    CHECK_THROWS_AS(EventModel::fixed(1.0, 0.0, 0.0), config_error);
    CHECK_THROWS_AS(EventModel::fixed(1.0, 1.5, 0.0), config_error);
    CHECK_THROWS_AS(EventModel::fixed(1.0, 0.5, -0.1), config_error);
    CHECK_THROWS_AS(EventModel::stable(1.0, 0.5, 0.0), config_error);
    CHECK_THROWS_AS(EventModel::stable(2.0, 0.5, 0.0), config_error);
    CHECK_NOTHROW(EventModel::stable(1.5, 1.0, 2.0));
}

TEST_CASE("total event rate") {
    // fixed radius, s=0, L=10, d=1: L^d (1+s) = 10
    CHECK(total_event_rate(EventModel::fixed(1.0, 0.5, 0.0), TorusDomain(1, 10.0)) ==
          Catch::Approx(10.0));
    // fixed radius with selection, d=2: 100 * 1.05
    CHECK(total_event_rate(EventModel::fixed(1.0, 0.5, 0.05), TorusDomain(2, 10.0)) ==
          Catch::Approx(105.0));
    // stable: mass of mu is int_1^inf r^{-(d+alpha+1)} dr = 1/(d+alpha);
    // confirmed by quadrature
    const double alpha = 1.5;
    const double mass_quad =
        integrate([&](double r) { return std::pow(r, -(1.0 + alpha + 1.0)); }, 1.0, 5000.0, 1e-12) +
        std::pow(5000.0, -(1.0 + alpha)) / (1.0 + alpha);
    CHECK(mass_quad == Catch::Approx(1.0 / 2.5).epsilon(1e-9));
    CHECK(total_event_rate(EventModel::stable(alpha, 0.5, 0.0), TorusDomain(1, 10.0)) ==
          Catch::Approx(4.0));
}

TEST_CASE("stable radius inverse CDF") {
    CHECK(sample_stable_radius(1.5, 1, 0.5) == Catch::Approx(std::pow(2.0, 1.0 / 2.5)));
    CHECK(sample_stable_radius(1.5, 1, 0.999999) == Catch::Approx(1.0).margin(1e-4));
    CHECK_THROWS_AS(sample_stable_radius(1.5, 1, 0.0), input_error);
    CHECK_THROWS_AS(sample_stable_radius(1.5, 1, 1.0), input_error);
    // strictly decreasing in U
    double prev = sample_stable_radius(1.5, 1, 0.01);
    for (double u = 0.05; u < 1.0; u += 0.05) {
        const double r = sample_stable_radius(1.5, 1, u);
        CHECK(r < prev);
        prev = r;
    }
    // numeric root-find oracle: CDF(r) = 1 - r^{-(d+alpha)} inverted at u=0.5
    double lo = 1.0;
    double hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (1.0 - std::pow(mid, -2.5) < 0.5) lo = mid;
        else hi = mid;
    }
    CHECK(sample_stable_radius(1.5, 1, 0.5) == Catch::Approx(lo).margin(1e-8));
}

TEST_CASE("event marks: radii, impact, kinds") {
    TorusDomain dom(1, 10.0);
    Rng rng(11);
    const auto fixed = EventModel::fixed(1.0, 0.37, 0.2);
    for (int i = 0; i < 200; ++i) {
        const auto e = sample_event(fixed, dom, 1.0, rng);
        CHECK(e.radius == 1.0);
        CHECK(e.impact == 0.37);
        CHECK(dom.contains(e.center));
    }
    const auto stab = EventModel::stable(1.5, 0.2, 0.0);
    for (int i = 0; i < 200; ++i) {
        const auto e = sample_event(stab, dom, 1.0, rng);
        CHECK(e.radius >= 1.0);
        CHECK(e.kind == EventKind::neutral); // s = 0
    }
}

TEST_CASE("event count over a horizon is Poisson with the stated rate") {
    TorusDomain dom(1, 10.0);
    const auto model = EventModel::fixed(1.0, 0.5, 0.1);
    const double rate = total_event_rate(model, dom); // 11
    const double T = 0.7;
    const long runs = 10000;
    double count_acc = 0.0;
    double sel_acc = 0.0;
    double ev_acc = 0.0;
    for (long i = 0; i < runs; ++i) {
        Rng rng(derive_seed(42, static_cast<std::uint64_t>(i)));
        EventStream stream(model, dom, rng);
        long cnt = 0;
        long sel = 0;
        while (true) {
            const auto e = stream.next();
            if (e.time > T) break;
            ++cnt;
            if (e.kind == EventKind::selective) ++sel;
        }
        count_acc += static_cast<double>(cnt);
        sel_acc += static_cast<double>(sel);
        ev_acc += static_cast<double>(cnt);
    }
    const double mean_count = count_acc / runs;
    const double target = rate * T;
    const double se = std::sqrt(target / runs); // Poisson variance = mean
    CHECK(std::abs(mean_count - target) <= 4.0 * se);
    // selective fraction s/(1+s)
    const double frac = sel_acc / ev_acc;
    const double p = 0.1 / 1.1;
    const double se_frac = std::sqrt(p * (1.0 - p) / ev_acc);
    CHECK(std::abs(frac - p) <= 4.0 * se_frac);
}

TEST_CASE("Hill estimator recovers the radius tail index d+alpha") {
    const auto model = EventModel::stable(1.5, 0.5, 0.0);
    Rng rng(7);
    std::vector<double> radii;
    radii.reserve(1000000);
    for (long i = 0; i < 1000000; ++i) radii.push_back(model.sample_radius(rng, 1));
    const double hill = hill_estimator(radii, 20000);
    CHECK(std::abs(hill - 2.5) <= 0.1);
}

TEST_CASE("torus truncation caps radii and renormalizes rates") {
    TorusDomain dom(1, 10.0); // cap L/4 = 2.5
    const auto model = EventModel::stable(1.5, 0.5, 0.0);
    const auto capped = model.truncated_for(dom);
    REQUIRE(capped.max_radius.has_value());
    CHECK(*capped.max_radius == Catch::Approx(2.5));
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) {
        CHECK(capped.sample_radius(rng, 1) <= 2.5);
        CHECK(capped.sample_size_biased_radius(rng, 1) <= 2.5);
    }
    // truncated mu mass: (1 - rmax^{-(d+alpha)}) / (d+alpha)
    CHECK(capped.mu_mass(1) == Catch::Approx((1.0 - std::pow(2.5, -2.5)) / 2.5));
    // mean ball mass: V_1 (1 - rmax^{-alpha}) / alpha, confirmed by quadrature
    const double quad = integrate(
        [&](double r) { return 2.0 * r * std::pow(r, -3.5); }, 1.0, 2.5, 1e-12);
    CHECK(capped.mean_ball_mass(1) == Catch::Approx(quad).epsilon(1e-9));
    // fixed radius too large for the domain
    CHECK_THROWS_AS(EventModel::fixed(3.0, 0.5, 0.0).truncated_for(dom), config_error);
}
