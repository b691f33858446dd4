#pragma once

#include <cstdint>
#include <vector>

#include "aht/background.hpp"
#include "aht/field.hpp"

namespace aht {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

/// Equal-weight point sample of a map: source lattice points in [0,2pi)^2 and
/// their images in R^2 (values are genuinely non-periodic, so no wrapping).
struct SampledMap {
    std::vector<Vec2> points;
    std::vector<Vec2> values;
    std::size_t size() const { return points.size(); }
};

/// Optimal permutation for the quadratic cost sum_i |x_i - v_{pi(i)}|^2.
struct AssignmentPlan {
    std::vector<int> perm;   // source i -> value index perm[i]
    double total_cost = 0.0;

    double recompute_cost(const SampledMap& m) const;
};

/// Samples y0 = A x + grad phi + z0 at every stride-th lattice point per axis.
/// stride must divide n.
SampledMap sample_map(const VectorField& z0, const BackgroundMap& bg, int stride);

/// Exact optimal assignment by shortest augmenting paths (Jonker-Volgenant
/// style) with a dual-feasibility certificate checked before returning.
/// Guarded at 4096 samples.
AssignmentPlan assignment_exact(const SampledMap& m);

/// Exhaustive minimum over permutations; testing oracle, guarded at 8.
AssignmentPlan brute_force_assignment(const SampledMap& m);

struct SinkhornResult {
    std::vector<Vec2> barycentric_map;  // coupling-weighted image of each source
    double transport_cost = 0.0;  // <C, P> without the entropy term, scaled to the
                                  // same total units as AssignmentPlan::total_cost
    double marginal_error = 0.0;  // max row/col marginal violation, relative to 1/N
    int iterations = 0;
    bool converged = false;
};

/// Entropic OT on the squared-distance kernel, log-domain scaling iterations
/// until the marginal violation drops below tol or max_iters is hit.
/// Non-convergence is flagged, not thrown.
SinkhornResult sinkhorn(const SampledMap& m, double epsilon, int max_iters, double tol);

/// Root-mean-square pointwise distance between two equally long value lists.
double map_error(const std::vector<Vec2>& flow_values, const std::vector<Vec2>& plan_values);

/// Values of y = A x + grad phi + z at the same points sample_map(stride)
/// uses; pairs a converged flow state with an AssignmentPlan for map_error.
std::vector<Vec2> map_values_at_samples(const VectorField& z, const BackgroundMap& bg,
                                        int stride);

// CSV serialization: samples as `i,x1,x2,v1,v2`, plans as `i,pi_i`.
void write_sampled_map_csv(const std::string& path, const SampledMap& m);
SampledMap read_sampled_map_csv(const std::string& path);
void write_plan_csv(const std::string& path, const AssignmentPlan& plan);
AssignmentPlan read_plan_csv(const std::string& path);

}  // namespace aht
