// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <span>
#include <string_view>
#include <vector>

#include "jamloc/geometry.hpp"
#include "jamloc/sensing.hpp"

namespace jamloc {

enum class Method { LSE, WLSE, SPGD };

inline constexpr Method kAllMethods[] = {Method::LSE, Method::WLSE, Method::SPGD};

std::string_view method_name(Method m);

struct Estimate {
    Position3 position;
    Method method = Method::LSE;
    /// Samples contributing to the final position (after pruning for SPGD).
    int samples_used = 0;
    /// Work counter: constraint rows for LSE/WLSE, per-sample gradient evaluations for SPGD.
    long work = 0;
};

struct SpgdParams {
    int iterations = 10;
    double learning_rate = 1.0;
    double decay = 0.7;
    double pruning_rate = 0.3;

    void validate() const;
};

/// Stacked bearing constraints: rows 0..N-1 are o1_n^T, rows N..2N-1 are o2_n^T, built from the
/// measured angles; b holds o_in^T p_n for the reported UAV positions.
struct ConstraintSystem {
    Eigen::MatrixX3d a;
    Eigen::VectorXd b;
};

ConstraintSystem build_constraint_system(std::span<const AoaSample> samples);

/// Ordinary least squares over the stacked constraints.
/// Throws ConfigError for fewer than 2 samples, SingularGeometryError when the normal matrix has
/// reciprocal condition number below 1e-12.
Estimate lse(std::span<const AoaSample> samples);

/// Per-row JSR weights 10^(J/(2 n_p)) for J = [jsr..., jsr...], normalized to sum to 2N.
std::vector<double> wlse_weights(std::span<const double> jsr_db, double path_loss_exponent);

/// Weighted least squares with caller-supplied row weights (length 2N, all > 0).
Estimate weighted_least_squares(std::span<const AoaSample> samples, std::span<const double> row_weights);

/// JSR-weighted least squares.
Estimate wlse(std::span<const AoaSample> samples, double path_loss_exponent);

/// Misfit of sample n against a candidate position: |unit(p - p_n) - m_n| where m_n is the
/// measured bearing. Zero when p lies on the measured ray.
double bearing_misfit(const Position3& p, const AoaSample& s);

/// Indices (into `active`) of the samples the pruning step keeps. Removes the
/// n_r = max(floor(N * rate), 1) worst-fitting samples, only when at least 3 remain; ties go to the
/// lowest index. A rate of 0 disables pruning.
std::vector<std::size_t> prune_step(const Position3& p, std::span<const AoaSample> active, double pruning_rate);

struct SpgdTrace {
    std::vector<Position3> iterates;
    std::vector<int> active_per_iteration;  // sample count used for the gradient at each iteration
};

/// Gradient descent toward the per-sample ray targets with sample pruning.
///
/// Starting from the centroid of the reported UAV positions, each iteration moves the estimate by
/// the learning rate times the mean of (t_n - p), where t_n = p_n + m_n * |p - p_n| is the point on
/// measured ray n at the current range. The learning rate then decays geometrically and the worst
/// fitting samples are pruned (see prune_step).
///
/// The mean replaces a plain sum of the per-sample terms: a sum scales the step with N and
/// diverges at learning rate 1 for realistic sample counts.
///
/// Throws ConfigError for fewer than 3 samples or invalid params.
Estimate spgd(std::span<const AoaSample> samples, const SpgdParams& params, SpgdTrace* trace = nullptr);

}  // namespace jamloc
