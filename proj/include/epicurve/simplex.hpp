#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace epicurve {

struct SimplexOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// Stop once every vertex lies within this relative distance of the best one.
    double relative_tolerance = 1e-8;
    std::size_t max_iterations = 2000;
};

struct SimplexResult {
    std::vector<double> point;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

/**
 * Nelder-Mead downhill simplex minimization.
 *
 * The initial simplex is `start` plus one vertex per coordinate displaced by
 * `steps[j]`. Fully deterministic: ties between vertices keep their previous
 * order, and NaN objective values rank worst.
 */
SimplexResult minimize_simplex(const Objective& objective, const std::vector<double>& start,
                               const std::vector<double>& steps,
                               const SimplexOptions& options = {});

} // namespace epicurve
