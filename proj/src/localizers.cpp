// SPDX-License-Identifier: Apache-2.0
#include "jamloc/localizers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "jamloc/error.hpp"

namespace jamloc {

namespace {

constexpr double kMinReciprocalCondition = 1e-12;

void require_samples(std::span<const AoaSample> samples, std::size_t minimum, const char* who) {
    if (samples.size() < minimum) {
        throw ConfigError(std::string(who) + ": at least " + std::to_string(minimum) + " samples are required");
    }
}

Position3 solve_normal_equations(const Eigen::Matrix3d& normal, const Eigen::Vector3d& rhs) {
    if (!normal.allFinite() || !rhs.allFinite()) throw SingularGeometryError("non-finite constraint system");
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(normal, Eigen::EigenvaluesOnly);
    const double hi = eig.eigenvalues().maxCoeff();
    const double lo = eig.eigenvalues().minCoeff();
    if (!(hi > 0.0) || lo / hi < kMinReciprocalCondition) {
        throw SingularGeometryError("bearing geometry is rank deficient (reciprocal condition " +
                                    std::to_string(hi > 0.0 ? lo / hi : 0.0) + ")");
    }
    const Eigen::Vector3d p = normal.ldlt().solve(rhs);
    return {p.x(), p.y(), p.z()};
}

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::LSE: return "LSE";
        case Method::WLSE: return "WLSE";
        case Method::SPGD: return "SPGD";
    }
    return "?";
}

void SpgdParams::validate() const {
    if (iterations < 1) throw ConfigError("spgd.iterations must be >= 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("spgd.learning_rate must be > 0");
    if (!(decay > 0.0 && decay <= 1.0)) throw ConfigError("spgd.decay must lie in (0, 1]");
    if (!(pruning_rate >= 0.0 && pruning_rate < 1.0)) throw ConfigError("spgd.pruning_rate must lie in [0, 1)");
}

ConstraintSystem build_constraint_system(std::span<const AoaSample> samples) {
    const auto n = static_cast<Eigen::Index>(samples.size());
    ConstraintSystem sys{Eigen::MatrixX3d(2 * n, 3), Eigen::VectorXd(2 * n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const AoaSample& s = samples[static_cast<std::size_t>(i)];
        const auto [o1, o2] = orthogonal_vectors(s.angles);
        sys.a.row(i) << o1.x, o1.y, o1.z;
        sys.a.row(n + i) << o2.x, o2.y, o2.z;
        sys.b(i) = dot(o1, s.reported_uav_position);
        sys.b(n + i) = dot(o2, s.reported_uav_position);
    }
    return sys;
}

Estimate lse(std::span<const AoaSample> samples) {
    require_samples(samples, 2, "lse");
    const ConstraintSystem sys = build_constraint_system(samples);
    const Eigen::Matrix3d normal = sys.a.transpose() * sys.a;
    const Eigen::Vector3d rhs = sys.a.transpose() * sys.b;
    return {solve_normal_equations(normal, rhs), Method::LSE, static_cast<int>(samples.size()),
            static_cast<long>(sys.a.rows())};
}

std::vector<double> wlse_weights(std::span<const double> jsr_db, double path_loss_exponent) {
    if (!(path_loss_exponent > 0.0)) throw ConfigError("wlse_weights: path loss exponent must be > 0");
    const std::size_t n = jsr_db.size();
    std::vector<double> w(2 * n);
    if (n == 0) return w;
    // 10^(J/(2 n_p)) evaluated relative to the largest exponent so that extreme JSR cannot overflow.
    const double top = *std::max_element(jsr_db.begin(), jsr_db.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::pow(10.0, (jsr_db[i] - top) / (2.0 * path_loss_exponent));
        w[n + i] = w[i];
        sum += 2.0 * w[i];
    }
    const double target = static_cast<double>(2 * n);
    for (double& x : w) x *= target / sum;
    return w;
}

Estimate weighted_least_squares(std::span<const AoaSample> samples, std::span<const double> row_weights) {
    require_samples(samples, 2, "wlse");
    if (row_weights.size() != 2 * samples.size()) throw ConfigError("wlse: need exactly 2N row weights");
    for (double w : row_weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("wlse: row weights must be finite and > 0");
    }
    const ConstraintSystem sys = build_constraint_system(samples);
    const Eigen::Map<const Eigen::VectorXd> w(row_weights.data(), static_cast<Eigen::Index>(row_weights.size()));
    const Eigen::Matrix3d normal = sys.a.transpose() * w.asDiagonal() * sys.a;
    const Eigen::Vector3d rhs = sys.a.transpose() * w.asDiagonal() * sys.b;
    return {solve_normal_equations(normal, rhs), Method::WLSE, static_cast<int>(samples.size()),
            static_cast<long>(sys.a.rows())};
}

Estimate wlse(std::span<const AoaSample> samples, double path_loss_exponent) {
    std::vector<double> jsr;
    jsr.reserve(samples.size());
    for (const auto& s : samples) jsr.push_back(s.jsr_db);
    return weighted_least_squares(samples, wlse_weights(jsr, path_loss_exponent));
}

double bearing_misfit(const Position3& p, const AoaSample& s) {
    const Position3 v = p - s.reported_uav_position;
    const double r = norm(v);
    if (!(r > 0.0)) return 0.0;
    return norm(v * (1.0 / r) - direction_from_angles(s.angles));
}

std::vector<std::size_t> prune_step(const Position3& p, std::span<const AoaSample> active, double pruning_rate) {
    const std::size_t n = active.size();
    std::vector<std::size_t> keep(n);
    std::iota(keep.begin(), keep.end(), std::size_t{0});
    if (pruning_rate <= 0.0 || n == 0) return keep;

    const auto n_remove = std::max<std::size_t>(static_cast<std::size_t>(std::floor(static_cast<double>(n) * pruning_rate)), 1);
    if (n < n_remove + 3) return keep;

    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) score[i] = bearing_misfit(p, active[i]);
    std::vector<std::size_t> order = keep;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

    std::vector<bool> drop(n, false);
    for (std::size_t k = 0; k < n_remove; ++k) drop[order[k]] = true;
    std::erase_if(keep, [&](std::size_t i) { return drop[i]; });
    return keep;
}

Estimate spgd(std::span<const AoaSample> samples, const SpgdParams& params, SpgdTrace* trace) {
    require_samples(samples, 3, "spgd");
    params.validate();

    std::vector<AoaSample> active(samples.begin(), samples.end());
    std::vector<Position3> bearings;
    bearings.reserve(active.size());
    for (const auto& s : active) bearings.push_back(direction_from_angles(s.angles));

    Position3 p{};
    for (const auto& s : active) p += s.reported_uav_position;
    p *= 1.0 / static_cast<double>(active.size());

    double rate = params.learning_rate;
    long evaluations = 0;
    for (int k = 0; k < params.iterations; ++k) {
        Position3 g{};
        for (std::size_t i = 0; i < active.size(); ++i) {
            const Position3 v = p - active[i].reported_uav_position;
            const double r = norm(v);
            // p on top of a UAV: the target collapses onto p, contributing nothing this step.
            if (r > 0.0) g += active[i].reported_uav_position + bearings[i] * r - p;
        }
        evaluations += static_cast<long>(active.size());
        if (trace) trace->active_per_iteration.push_back(static_cast<int>(active.size()));

        p += g * (rate / static_cast<double>(active.size()));
        rate *= params.decay;
        if (trace) trace->iterates.push_back(p);

        const std::vector<std::size_t> keep = prune_step(p, active, params.pruning_rate);
        if (keep.size() != active.size()) {
            std::vector<AoaSample> next_samples;
            std::vector<Position3> next_bearings;
            next_samples.reserve(keep.size());
            next_bearings.reserve(keep.size());
            for (std::size_t i : keep) {
                next_samples.push_back(active[i]);
                next_bearings.push_back(bearings[i]);
            }
            active = std::move(next_samples);
            bearings = std::move(next_bearings);
        }
    }
    return {p, Method::SPGD, static_cast<int>(active.size()), evaluations};
}

}  // namespace jamloc
