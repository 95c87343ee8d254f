#include "epicurve/simplex.hpp"

#include "epicurve/error.hpp"

#include <algorithm>
#include <cmath>

namespace epicurve {

namespace {

struct Vertex {
    std::vector<double> x;
    double f = 0.0;
};

bool better(double a, double b)
{
    if (std::isnan(a))
        return false;
    if (std::isnan(b))
        return true;
    return a < b;
}

std::vector<double> combine(const std::vector<double>& base, const std::vector<double>& toward,
                            double coefficient)
{
    std::vector<double> out(base.size());
    for (std::size_t j = 0; j < base.size(); ++j)
        out[j] = base[j] + coefficient * (toward[j] - base[j]);
    return out;
}

double relative_diameter(const std::vector<Vertex>& simplex)
{
    const auto& best = simplex.front().x;
    double diameter = 0.0;
    for (std::size_t v = 1; v < simplex.size(); ++v) {
        for (std::size_t j = 0; j < best.size(); ++j) {
            const double scale = std::max(1.0, std::abs(best[j]));
            diameter = std::max(diameter, std::abs(simplex[v].x[j] - best[j]) / scale);
        }
    }
    return diameter;
}

} // namespace

SimplexResult minimize_simplex(const Objective& objective, const std::vector<double>& start,
                               const std::vector<double>& steps, const SimplexOptions& options)
{
    const std::size_t n = start.size();
    if (n == 0 || steps.size() != n)
        throw Error(ErrorKind::InvalidParams, "simplex: start and steps must have equal, non-zero size");

    SimplexResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        return objective(x);
    };

    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({start, eval(start)});
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> x = start;
        x[j] += steps[j];
        simplex.push_back({x, eval(x)});
    }

    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return better(a.f, b.f); });
    };
    order();

    while (result.iterations < options.max_iterations) {
        if (relative_diameter(simplex) < options.relative_tolerance) {
            result.converged = true;
            break;
        }
        ++result.iterations;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t j = 0; j < n; ++j)
                centroid[j] += simplex[v].x[j] / static_cast<double>(n);

        Vertex& worst = simplex.back();
        const double second_worst = simplex[n - 1].f;

        Vertex reflected{combine(centroid, worst.x, -options.reflection), 0.0};
        reflected.f = eval(reflected.x);

        if (better(reflected.f, simplex.front().f)) {
            Vertex expanded{combine(centroid, worst.x, -options.expansion), 0.0};
            expanded.f = eval(expanded.x);
            worst = better(expanded.f, reflected.f) ? std::move(expanded) : std::move(reflected);
        } else if (better(reflected.f, second_worst)) {
            worst = std::move(reflected);
        } else {
            // Contract toward whichever of the reflected/worst points is better.
            const bool outside = better(reflected.f, worst.f);
            const auto& anchor = outside ? reflected.x : worst.x;
            Vertex contracted{combine(centroid, anchor, options.contraction), 0.0};
            contracted.f = eval(contracted.x);
            const double bar = outside ? reflected.f : worst.f;
            if (better(contracted.f, bar) || contracted.f == bar) {
                worst = std::move(contracted);
            } else {
                const auto best = simplex.front().x;
                for (std::size_t v = 1; v <= n; ++v) {
                    simplex[v].x = combine(best, simplex[v].x, options.shrink);
                    simplex[v].f = eval(simplex[v].x);
                }
            }
        }
        order();
    }
    if (!result.converged && relative_diameter(simplex) < options.relative_tolerance)
        result.converged = true;

    result.point = simplex.front().x;
    result.value = simplex.front().f;
    return result;
}

} // namespace epicurve
