#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "core/geometry.hpp"
#include "support/oracles.hpp"

using namespace sconv;

TEST_CASE("ball chords") {
    const Domain d = Domain::ball(2, {0.0, 0.0}, 1.0);
    auto parts = d.clip_line({0.0, 0.0}, {1.0, 0.0});
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].lo == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(parts[0].hi == doctest::Approx(1.0).epsilon(1e-12));

    // chord through (0.5, 0) vertical: half-length sqrt(1 - 0.25)
    parts = d.clip_line({0.5, 0.0}, {0.0, 1.0});
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].hi == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
    CHECK(parts[0].lo == doctest::Approx(-std::sqrt(0.75)).epsilon(1e-12));

    // outside the closure: empty
    CHECK(d.clip_line({2.0, 0.0}, {1.0, 0.0}).empty());
    // non-unit direction rejected
    CHECK_THROWS_AS(d.clip_line({0.0, 0.0}, {2.0, 0.0}), std::invalid_argument);
}

TEST_CASE("dumbbell line exits and re-enters through the neck region") {
    const Domain d = Domain::dumbbell();
    // a horizontal line above the neck but through both lobes
    const Vec2 x{-1.5, 0.5};
    const Vec2 z{1.0, 0.0};
    const auto parts = d.clip_line(x, z);
    CHECK(parts.size() == 2);

    const auto scanned = testsupport::scan_clip_line(d, x, z, -4.0, 8.0);
    REQUIRE(scanned.size() == parts.size());
    for (size_t i = 0; i < parts.size(); ++i) {
        CHECK(std::abs(parts[i].lo - scanned[i].lo) < 2e-4);
        CHECK(std::abs(parts[i].hi - scanned[i].hi) < 2e-4);
    }
}

TEST_CASE("connected component selection") {
    const std::vector<Interval> one = {{-1.0, 1.0}};
    const Interval c1 = connected_component(one, 0.0);
    CHECK(c1.lo == -1.0);
    CHECK(c1.hi == 1.0);

    const std::vector<Interval> two = {{-2.0, -0.5}, {-0.1, 0.3}};
    const Interval c2 = connected_component(two, 0.0);
    CHECK(c2.lo == -0.1);
    CHECK(c2.hi == 0.3);

    CHECK_THROWS_AS(connected_component(std::vector<Interval>{{-2.0, -0.5}}, 0.0),
                    std::invalid_argument);

    // dumbbell: the component through a lobe centre is shorter than the
    // full union along the same line
    const Domain d = Domain::dumbbell();
    const Vec2 x{-1.5, 0.5};
    const auto parts = d.clip_line(x, {1.0, 0.0});
    REQUIRE(parts.size() == 2);
    const Interval comp = connected_component(parts, 0.0);
    double union_len = 0.0;
    for (const auto& iv : parts) union_len += iv.length();
    CHECK(comp.length() < union_len);
    const auto scanned = testsupport::scan_clip_line(d, x, {1.0, 0.0}, -4.0, 8.0);
    CHECK(std::abs(comp.hi - scanned[0].hi) < 2e-4);
}

TEST_CASE("strictly convex domains always clip to a single interval") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const Domain ball = Domain::ball(2, {0.2, -0.1}, 1.3);
    const Domain ell = Domain::ellipse({0.0, 0.0}, 2.0, 0.7);
    CHECK(ball.strictly_convex());
    CHECK(ell.strictly_convex());
    CHECK_FALSE(Domain::square({0, 0}, 1.0).strictly_convex());
    CHECK_FALSE(Domain::dumbbell().strictly_convex());

    for (const Domain* d : {&ball, &ell}) {
        int checked = 0;
        while (checked < 10000) {
            const Vec2 p{2.0 * unit(rng), 2.0 * unit(rng)};
            if (!d->contains(p)) continue;
            const double th = M_PI * unit(rng);
            const auto parts = d->clip_line(p, {std::cos(th), std::sin(th)});
            REQUIRE(parts.size() == 1);
            CHECK(parts[0].contains(0.0));
            ++checked;
        }
    }
}

TEST_CASE("clip reflection: reversing the direction negates the intervals") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const Domain d = Domain::dumbbell();
    int checked = 0;
    while (checked < 500) {
        const Vec2 p{3.0 * unit(rng), unit(rng)};
        if (!d.contains(p)) continue;
        const double th = M_PI * unit(rng);
        const Vec2 z{std::cos(th), std::sin(th)};
        const auto fwd = d.clip_line(p, z);
        const auto bwd = d.clip_line(p, {-z.x, -z.y});
        REQUIRE(fwd.size() == bwd.size());
        const size_t n = fwd.size();
        for (size_t i = 0; i < n; ++i) {
            CHECK(fwd[i].lo == doctest::Approx(-bwd[n - 1 - i].hi).epsilon(1e-12));
            CHECK(fwd[i].hi == doctest::Approx(-bwd[n - 1 - i].lo).epsilon(1e-12));
        }
        ++checked;
    }
}

TEST_CASE("signed distance sign agrees with membership") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> span(-3.5, 3.5);
    const Domain domains[] = {Domain::ball(2, {0.1, 0.2}, 1.1),
                              Domain::ellipse({0, 0}, 1.5, 0.6),
                              Domain::square({0.3, -0.2}, 0.9), Domain::dumbbell()};
    for (const Domain& d : domains) {
        for (int i = 0; i < 10000; ++i) {
            const Vec2 p{span(rng), span(rng)};
            const double sd = d.signed_distance(p);
            if (std::abs(sd) < 1e-9) continue;  // on the boundary at tolerance
            CHECK(d.contains(p) == (sd > 0.0));
        }
    }
}

TEST_CASE("clip endpoints agree with a dense membership scan") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const Domain domains[] = {Domain::ellipse({0.1, 0.0}, 1.4, 0.8),
                              Domain::square({0.0, 0.0}, 1.0)};
    for (const Domain& d : domains) {
        int checked = 0;
        while (checked < 25) {
            const Vec2 p{1.2 * unit(rng), 0.9 * unit(rng)};
            if (!d.contains(p)) continue;
            const double th = M_PI * unit(rng);
            const Vec2 z{std::cos(th), std::sin(th)};
            const auto parts = d.clip_line(p, z);
            const auto scanned = testsupport::scan_clip_line(d, p, z, -4.0, 4.0);
            REQUIRE(parts.size() == scanned.size());
            for (size_t i = 0; i < parts.size(); ++i) {
                CHECK(std::abs(parts[i].lo - scanned[i].lo) < 2e-4);
                CHECK(std::abs(parts[i].hi - scanned[i].hi) < 2e-4);
            }
            ++checked;
        }
    }
}

TEST_CASE("direction sets") {
    const DirectionSet ds = DirectionSet::half_circle(64);
    CHECK(ds.size() == 64);
    CHECK(ds.angular_spacing() == doctest::Approx(M_PI / 64));
    for (int i = 0; i < ds.size(); ++i) {
        const Vec2 z = ds.at(i);
        CHECK(std::abs(std::hypot(z.x, z.y) - 1.0) < 1e-12);
        CHECK(ds.angle(i) == doctest::Approx(i * M_PI / 64));
        for (int j = i + 1; j < ds.size(); ++j) {
            const Vec2 w = ds.at(j);
            const double cosang = z.x * w.x + z.y * w.y;
            CHECK(std::abs(std::abs(cosang) - 1.0) > 1e-6);  // neither equal nor antipodal
        }
    }
    const DirectionSet axis = DirectionSet::axis();
    CHECK(axis.size() == 1);
    CHECK(axis.at(0).x == 1.0);
}

TEST_CASE("domain parsing") {
    CHECK(Domain::parse("ball:1.0").dim() == 2);
    CHECK(Domain::parse("interval:0,1").dim() == 1);
    CHECK(Domain::parse("ellipse:1.5,0.5").strictly_convex());
    CHECK_FALSE(Domain::parse("dumbbell").strictly_convex());
    CHECK(Domain::parse("square:0.5,0.5,1").contains({0.5, 0.5}));
    CHECK_THROWS_AS(Domain::parse("pentagon:1"), std::invalid_argument);
    CHECK_THROWS_AS(Domain::parse("ball:abc"), std::invalid_argument);
    CHECK_THROWS_AS(Domain::parse("ball:1,2"), std::invalid_argument);
    CHECK_THROWS_AS(Domain::parse("interval:1,0"), std::invalid_argument);

    // describe() re-parses to the same shape
    const Domain d = Domain::parse("dumbbell:1.5,1.0,0.2");
    const Domain d2 = Domain::parse(d.describe());
    CHECK(d2.contains({1.5, 0.0}));
    CHECK(d2.contains({0.0, 0.1}));
    CHECK_FALSE(d2.contains({0.0, 0.5}));
}

TEST_CASE("1-D domains clip on the axis") {
    const Domain d = Domain::parse("interval:0,1");
    const auto parts = d.clip_line({0.25, 0.0}, {1.0, 0.0});
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].lo == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(parts[0].hi == doctest::Approx(0.75).epsilon(1e-12));
}
