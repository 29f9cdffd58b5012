// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "jamloc/error.hpp"
#include "jamloc/localizers.hpp"

using namespace jamloc;

namespace {

AoaSample exact_sample(const Position3& uav, const Position3& jammer, double jsr = 10.0) {
    AoaSample s;
    s.reported_uav_position = uav;
    s.angles = angles_from_direction(jammer - uav);
    s.jsr_db = jsr;
    return s;
}

std::vector<AoaSample> exact_samples(const Position3& jammer, int n, Rng& rng) {
    const Box area{{0, 0, 5}, {100, 100, 25}};
    std::vector<AoaSample> out;
    for (int i = 0; i < n; ++i) out.push_back(exact_sample(area.sample(rng), jammer));
    return out;
}

AoaSample perturbed(AoaSample s, double angle_std_rad, Rng& rng) {
    std::normal_distribution<double> e(0.0, angle_std_rad);
    s.angles = {wrap_azimuth(s.angles.azimuth + e(rng)), clamp_elevation(s.angles.elevation + e(rng))};
    return s;
}

double objective(const Position3& p, std::span<const AoaSample> samples) {
    double f = 0.0;
    for (const auto& s : samples) {
        const auto [o1, o2] = orthogonal_vectors(s.angles);
        const Position3 d = p - s.reported_uav_position;
        f += dot(o1, d) * dot(o1, d) + dot(o2, d) * dot(o2, d);
    }
    return f;
}

}  // namespace

TEST_CASE("least squares recovers the jammer from exact bearings") {
    const Position3 j{50, 47, 15};
    const std::vector<AoaSample> two{exact_sample({10, 10, 10}, j), exact_sample({90, 20, 20}, j)};
    CHECK(distance(lse(two).position, j) < 1e-9);
    CHECK(lse(two).work == 4);

    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const Box jammer_area{{40, 40, 12}, {60, 60, 18}};
        const Position3 truth = jammer_area.sample(rng);
        const auto samples = exact_samples(truth, 8, rng);
        REQUIRE(distance(lse(samples).position, truth) < 1e-9);
        REQUIRE(distance(wlse(samples, 2.0).position, truth) < 1e-9);
        std::vector<double> w(16);
        std::uniform_real_distribution<double> u(0.1, 10.0);
        for (double& x : w) x = u(rng);
        REQUIRE(distance(weighted_least_squares(samples, w).position, truth) < 1e-9);
    }
}

TEST_CASE("degenerate geometry is reported") {
    const Position3 j{50, 50, 15};
    const Position3 uav{10, 10, 10};
    const std::vector<AoaSample> same{exact_sample(uav, j), exact_sample(uav, j), exact_sample(uav, j)};
    CHECK_THROWS_AS(lse(same), SingularGeometryError);
    CHECK_THROWS_AS(wlse(same, 2.0), SingularGeometryError);

    // Collinear UAVs along the bearing line.
    const Position3 dir = (j - uav) * (1.0 / distance(j, uav));
    const std::vector<AoaSample> line{exact_sample(uav, j), exact_sample(uav + dir * 5.0, j)};
    CHECK_THROWS_AS(lse(line), SingularGeometryError);

    CHECK_THROWS_AS(lse(std::vector<AoaSample>{exact_sample(uav, j)}), ConfigError);
}

TEST_CASE("constraint system layout") {
    const Position3 j{50, 50, 15};
    const std::vector<AoaSample> s{exact_sample({10, 10, 10}, j), exact_sample({80, 20, 5}, j),
                                   exact_sample({30, 90, 25}, j)};
    const ConstraintSystem sys = build_constraint_system(s);
    REQUIRE(sys.a.rows() == 6);
    for (int i = 0; i < 3; ++i) {
        const auto [o1, o2] = orthogonal_vectors(s[i].angles);
        CHECK(sys.a(i, 0) == o1.x);
        CHECK(sys.a(3 + i, 2) == o2.z);
        CHECK(sys.b(i) == doctest::Approx(dot(o1, s[i].reported_uav_position)));
        // Both constraints hold at the true position.
        CHECK(std::abs(dot(o1, j) - sys.b(i)) < 1e-9);
        CHECK(std::abs(dot(o2, j) - sys.b(3 + i)) < 1e-9);
    }
}

TEST_CASE("least squares matches a brute-force grid minimizer") {
    Rng rng(2024);
    const double cell = 0.05;
    for (int trial = 0; trial < 20; ++trial) {
        const Position3 truth = Box{{40, 40, 12}, {60, 60, 18}}.sample(rng);
        std::vector<AoaSample> s;
        std::uniform_real_distribution<double> jitter(-0.35, 0.35), range(10.0, 30.0), height(5.0, 25.0);
        for (int i = 0; i < 3; ++i) {
            const double heading = i * 2.0 * std::numbers::pi / 3.0 + jitter(rng);
            const double r = range(rng);
            const Position3 uav{truth.x + r * std::cos(heading), truth.y + r * std::sin(heading), height(rng)};
            s.push_back(perturbed(exact_sample(uav, truth), deg_to_rad(0.3), rng));
        }
        const Position3 est = lse(s).position;
        REQUIRE(std::abs(est.x - truth.x) < 1.9);
        REQUIRE(std::abs(est.y - truth.y) < 1.9);
        REQUIRE(std::abs(est.z - truth.z) < 1.9);

        Position3 best = truth;
        double best_f = objective(truth, s);
        for (int ix = -40; ix <= 40; ++ix) {
            for (int iy = -40; iy <= 40; ++iy) {
                for (int iz = -40; iz <= 40; ++iz) {
                    const Position3 p{truth.x + ix * cell, truth.y + iy * cell, truth.z + iz * cell};
                    const double f = objective(p, s);
                    if (f < best_f) {
                        best_f = f;
                        best = p;
                    }
                }
            }
        }
        CHECK(std::abs(best.x - est.x) <= cell);
        CHECK(std::abs(best.y - est.y) <= cell);
        CHECK(std::abs(best.z - est.z) <= cell);
    }
}

TEST_CASE("least squares ignores sample order") {
    Rng rng(5);
    const Position3 truth{52, 44, 14};
    std::vector<AoaSample> s;
    for (const auto& e : exact_samples(truth, 12, rng)) s.push_back(perturbed(e, deg_to_rad(2.0), rng));
    const Position3 ref = lse(s).position;
    for (int k = 0; k < 20; ++k) {
        std::shuffle(s.begin(), s.end(), rng);
        REQUIRE(distance(lse(s).position, ref) < 1e-9);
    }
}

TEST_CASE("JSR weights") {
    const std::vector<double> equal{7.0, 7.0, 7.0};
    for (double w : wlse_weights(equal, 2.0)) CHECK(w == doctest::Approx(1.0));

    const std::vector<double> j{20.0, 10.0};
    const auto w = wlse_weights(j, 2.0);
    REQUIRE(w.size() == 4);
    CHECK(w[0] / w[1] == doctest::Approx(std::pow(10.0, 5.0 - 2.5)));
    CHECK(w[2] == w[0]);
    CHECK(w[3] == w[1]);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(4.0));

    // No overflow at extreme JSR.
    const std::vector<double> extreme{4000.0, 3990.0};
    for (double x : wlse_weights(extreme, 2.0)) CHECK(std::isfinite(x));
}

TEST_CASE("uniform JSR makes WLSE identical to LSE") {
    Rng rng(6);
    const Position3 truth{45, 55, 16};
    std::vector<AoaSample> s;
    for (const auto& e : exact_samples(truth, 10, rng)) s.push_back(perturbed(e, deg_to_rad(3.0), rng));
    CHECK(distance(wlse(s, 2.0).position, lse(s).position) < 1e-12);
}

TEST_CASE("weight scaling leaves WLSE unchanged") {
    Rng rng(7);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Position3 truth = Box{{40, 40, 12}, {60, 60, 18}}.sample(rng);
        std::vector<AoaSample> s;
        for (const auto& e : exact_samples(truth, 10, rng)) s.push_back(perturbed(e, deg_to_rad(2.0), rng));
        std::vector<double> w(20), w2(20);
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = u(rng);
            w2[i] = 7.3 * w[i];
        }
        REQUIRE(distance(weighted_least_squares(s, w).position, weighted_least_squares(s, w2).position) < 1e-10);
    }
}

TEST_CASE("WLSE beats LSE when low-JSR samples are the noisy ones") {
    Rng rng(8);
    int wins = 0;
    const int seeds = 500;
    for (int trial = 0; trial < seeds; ++trial) {
        const Position3 truth = Box{{40, 40, 12}, {60, 60, 18}}.sample(rng);
        std::vector<AoaSample> s;
        int k = 0;
        for (auto e : exact_samples(truth, 8, rng)) {
            if (k++ < 2) {
                e.jsr_db = -10.0;
                s.push_back(perturbed(e, deg_to_rad(5.0), rng));
            } else {
                e.jsr_db = 20.0;
                s.push_back(perturbed(e, deg_to_rad(0.2), rng));
            }
        }
        if (distance(wlse(s, 2.0).position, truth) < distance(lse(s).position, truth)) ++wins;
    }
    CHECK(wins >= seeds * 8 / 10);
}

TEST_CASE("pruning schedule") {
    Rng rng(9);
    const Position3 truth{50, 50, 15};
    auto samples = exact_samples(truth, 10, rng);
    for (auto& s : samples) s = perturbed(s, deg_to_rad(1.0), rng);

    SpgdTrace trace;
    const Estimate e = spgd(samples, SpgdParams{}, &trace);
    const std::vector<int> expected{10, 7, 5, 4, 3, 3, 3, 3, 3, 3};
    CHECK(trace.active_per_iteration == expected);
    CHECK(e.samples_used == 3);
    CHECK(e.work == 44);
    CHECK(trace.iterates.size() == 10);

    // Floor: nothing is removed once only three remain.
    const std::vector<AoaSample> three(samples.begin(), samples.begin() + 3);
    CHECK(prune_step(truth, three, 0.3).size() == 3);
    // Zero rate disables pruning.
    CHECK(prune_step(truth, samples, 0.0).size() == 10);
    // n_r is at least one.
    CHECK(prune_step(truth, std::span(samples).first(5), 0.1).size() == 4);
}

TEST_CASE("equal scores prune the lowest indices") {
    const Position3 j{50, 50, 15};
    const std::vector<AoaSample> same(6, exact_sample({10, 20, 10}, j));
    const auto keep = prune_step({0, 0, 0}, same, 0.3);
    CHECK(keep == std::vector<std::size_t>{1, 2, 3, 4, 5});
}

TEST_CASE("a gross outlier is pruned first") {
    Rng rng(10);
    const Position3 truth{50, 50, 15};
    auto samples = exact_samples(truth, 9, rng);
    for (auto& s : samples) s = perturbed(s, deg_to_rad(0.5), rng);
    AoaSample bad = exact_sample({20, 70, 10}, truth);
    bad.angles.azimuth = wrap_azimuth(bad.angles.azimuth + 1.2);
    samples.insert(samples.begin() + 4, bad);

    const auto keep = prune_step(truth + Position3{0.5, -0.3, 0.2}, samples, 0.3);
    CHECK(keep.size() == 7);
    CHECK(std::find(keep.begin(), keep.end(), std::size_t{4}) == keep.end());
    CHECK(bearing_misfit(truth, exact_sample({1, 2, 3}, truth)) < 1e-12);
}

TEST_CASE("SPGD without pruning converges on exact bearings") {
    Rng rng(11);
    SpgdParams p;
    p.iterations = 1000;
    p.decay = 0.995;
    p.pruning_rate = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Position3 truth = Box{{40, 40, 12}, {60, 60, 18}}.sample(rng);
        const auto samples = exact_samples(truth, 8, rng);
        const Estimate e = spgd(samples, p);
        REQUIRE(distance(e.position, truth) < 1e-3);
        REQUIRE(e.samples_used == 8);
    }
}

TEST_CASE("SPGD moves toward the jammer from the centroid") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const Position3 truth = Box{{40, 40, 12}, {60, 60, 18}}.sample(rng);
        const auto samples = exact_samples(truth, 20, rng);
        Position3 centroid;
        for (const auto& s : samples) centroid += s.reported_uav_position;
        centroid = centroid * (1.0 / samples.size());
        REQUIRE(distance(spgd(samples, SpgdParams{}).position, truth) < distance(centroid, truth));
    }
}

TEST_CASE("SPGD input checks and work bound") {
    const Position3 j{50, 50, 15};
    const std::vector<AoaSample> two{exact_sample({0, 0, 5}, j), exact_sample({100, 0, 5}, j)};
    CHECK_THROWS_AS(spgd(two, SpgdParams{}), ConfigError);
    SpgdParams bad;
    bad.decay = 0.0;
    Rng rng(13);
    const auto samples = exact_samples(j, 40, rng);
    CHECK_THROWS_AS(spgd(samples, bad), ConfigError);

    const Estimate e = spgd(samples, SpgdParams{});
    CHECK(e.work <= 40.0 * (1.0 - std::pow(0.7, 10)) / 0.3 + 10.0);
    CHECK(lse(samples).work == 80);

    // Iterating from a UAV position is harmless.
    std::vector<AoaSample> stacked(3, exact_sample({50, 50, 5}, j));
    stacked[1] = exact_sample({40, 50, 5}, j);
    stacked[2] = exact_sample({60, 50, 5}, j);
    stacked.push_back(exact_sample({50, 50, 5}, j));
    CHECK(is_finite(spgd(stacked, SpgdParams{}).position));
}
