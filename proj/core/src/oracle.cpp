#include "aht/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "aht/errors.hpp"

namespace aht {

namespace {

double sq_dist(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double plan_cost(const SampledMap& m, const std::vector<int>& perm) {
    double c = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        c += sq_dist(m.points[i], m.values[static_cast<std::size_t>(perm[i])]);
    return c;
}

}  // namespace

double AssignmentPlan::recompute_cost(const SampledMap& m) const {
    return plan_cost(m, perm);
}

SampledMap sample_map(const VectorField& z0, const BackgroundMap& bg, int stride) {
    if (z0.grid() != bg.grid()) throw Error("sample_map: grid mismatch");
    const int n = z0.grid().n();
    if (stride < 1 || n % stride != 0)
        throw SizingError("sample_map: stride " + std::to_string(stride) +
                          " does not divide n = " + std::to_string(n));
    SampledMap m;
    for (int i2 = 0; i2 < n; i2 += stride) {
        for (int i1 = 0; i1 < n; i1 += stride) {
            m.points.push_back({z0.grid().coord(i1), z0.grid().coord(i2)});
            double y1, y2;
            bg.ystar_at(i1, i2, y1, y2);
            m.values.push_back({y1 + z0.comp(0).at(i1, i2), y2 + z0.comp(1).at(i1, i2)});
        }
    }
    return m;
}

std::vector<Vec2> map_values_at_samples(const VectorField& z, const BackgroundMap& bg,
                                        int stride) {
    return sample_map(z, bg, stride).values;
}

AssignmentPlan assignment_exact(const SampledMap& m) {
    const std::size_t n = m.size();
    if (n == 0) throw Error("assignment_exact: empty sample");
    if (m.points.size() != m.values.size())
        throw Error("assignment_exact: point/value count mismatch");
    if (n > 4096)
        throw GuardError("assignment_exact: " + std::to_string(n) +
                         " samples exceeds the 4096 cost guard");

    // Dense cost matrix.
    std::vector<double> C(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            C[i * n + j] = sq_dist(m.points[i], m.values[j]);

    // Shortest augmenting paths with dual updates (Jonker-Volgenant style).
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n, 0.0), v(n, 0.0), shortest(n);
    std::vector<int> col4row(n, -1), row4col(n, -1), path(n, -1), remaining(n);
    std::vector<char> SR(n), SC(n);

    for (std::size_t cur_row = 0; cur_row < n; ++cur_row) {
        std::fill(SR.begin(), SR.end(), 0);
        std::fill(SC.begin(), SC.end(), 0);
        std::fill(shortest.begin(), shortest.end(), kInf);
        std::iota(remaining.begin(), remaining.end(), 0);
        std::size_t num_remaining = n;

        double min_val = 0.0;
        int sink = -1;
        std::size_t i = cur_row;
        while (sink == -1) {
            SR[i] = 1;
            std::size_t best_it = 0;
            double lowest = kInf;
            for (std::size_t it = 0; it < num_remaining; ++it) {
                const int j = remaining[it];
                const double r = min_val + C[i * n + j] - u[i] - v[static_cast<std::size_t>(j)];
                if (r < shortest[static_cast<std::size_t>(j)]) {
                    shortest[static_cast<std::size_t>(j)] = r;
                    path[static_cast<std::size_t>(j)] = static_cast<int>(i);
                }
                const double sj = shortest[static_cast<std::size_t>(j)];
                if (sj < lowest || (sj == lowest && row4col[static_cast<std::size_t>(j)] == -1)) {
                    lowest = sj;
                    best_it = it;
                }
            }
            min_val = lowest;
            const int j = remaining[best_it];
            if (row4col[static_cast<std::size_t>(j)] == -1)
                sink = j;
            else
                i = static_cast<std::size_t>(row4col[static_cast<std::size_t>(j)]);
            SC[static_cast<std::size_t>(j)] = 1;
            remaining[best_it] = remaining[--num_remaining];
        }

        u[cur_row] += min_val;
        for (std::size_t k = 0; k < n; ++k) {
            if (SR[k] && k != cur_row)
                u[k] += min_val - shortest[static_cast<std::size_t>(col4row[k])];
            if (SC[k]) v[k] -= min_val - shortest[k];
        }

        int j = sink;
        while (true) {
            const int pi = path[static_cast<std::size_t>(j)];
            row4col[static_cast<std::size_t>(j)] = pi;
            std::swap(col4row[static_cast<std::size_t>(pi)], j);
            if (pi == static_cast<int>(cur_row)) break;
        }
    }

    // Dual feasibility certifies optimality: u_i + v_j <= C_ij everywhere,
    // equality on assigned pairs.
    double scale = 1.0;
    for (double c : C) scale = std::max(scale, std::abs(c));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (u[i] + v[j] > C[i * n + j] + 1e-9 * scale)
                throw Error("assignment_exact: optimality certificate failed");

    AssignmentPlan plan;
    plan.perm = col4row;
    plan.total_cost = plan_cost(m, plan.perm);
    return plan;
}

AssignmentPlan brute_force_assignment(const SampledMap& m) {
    const std::size_t n = m.size();
    if (n == 0) throw Error("brute_force_assignment: empty sample");
    if (n > 8)
        throw GuardError("brute_force_assignment: " + std::to_string(n) +
                         " samples exceeds the 8-point guard");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    AssignmentPlan best;
    best.perm = perm;
    best.total_cost = plan_cost(m, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        const double c = plan_cost(m, perm);
        if (c < best.total_cost) {
            best.total_cost = c;
            best.perm = perm;
        }
    }
    return best;
}

SinkhornResult sinkhorn(const SampledMap& m, double epsilon, int max_iters, double tol) {
    const std::size_t n = m.size();
    if (n == 0) throw Error("sinkhorn: empty sample");
    if (!(epsilon > 0.0)) throw Error("sinkhorn: epsilon must be positive");

    std::vector<double> C(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            C[i * n + j] = sq_dist(m.points[i], m.values[j]);

    // Log-domain alternating scaling with uniform marginals a = b = 1/n;
    // log-sum-exp keeps tiny epsilon well below kernel underflow.
    const double loga = -std::log(static_cast<double>(n));
    std::vector<double> f(n, 0.0), g(n, 0.0), row_sum(n), col_sum(n);

    auto lse_over_j = [&](std::size_t i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            mx = std::max(mx, (g[j] - C[i * n + j]) / epsilon + loga);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += std::exp((g[j] - C[i * n + j]) / epsilon + loga - mx);
        return mx + std::log(s);
    };
    auto lse_over_i = [&](std::size_t j) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            mx = std::max(mx, (f[i] - C[i * n + j]) / epsilon + loga);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += std::exp((f[i] - C[i * n + j]) / epsilon + loga - mx);
        return mx + std::log(s);
    };

    SinkhornResult res;
    auto marginal_error = [&]() {
        std::fill(row_sum.begin(), row_sum.end(), 0.0);
        std::fill(col_sum.begin(), col_sum.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double p =
                    std::exp((f[i] + g[j] - C[i * n + j]) / epsilon + 2.0 * loga);
                row_sum[i] += p;
                col_sum[j] += p;
            }
        }
        double err = 0.0;
        const double target = 1.0 / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k)
            err = std::max({err, std::abs(row_sum[k] - target), std::abs(col_sum[k] - target)});
        return err * static_cast<double>(n);  // relative to uniform weight
    };

    int it = 0;
    for (; it < max_iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) f[i] = -epsilon * lse_over_j(i);
        for (std::size_t j = 0; j < n; ++j) g[j] = -epsilon * lse_over_i(j);
        res.marginal_error = marginal_error();
        if (res.marginal_error < tol) {
            res.converged = true;
            ++it;
            break;
        }
    }
    res.iterations = it;

    res.barycentric_map.assign(n, Vec2{});
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double wsum = 0.0, bx = 0.0, by = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double p = std::exp((f[i] + g[j] - C[i * n + j]) / epsilon + 2.0 * loga);
            wsum += p;
            bx += p * m.values[j].x;
            by += p * m.values[j].y;
            cost += p * C[i * n + j];
        }
        res.barycentric_map[i] = {bx / wsum, by / wsum};
    }
    res.transport_cost = cost * static_cast<double>(n);  // unit weight per source
    return res;
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void write_sampled_map_csv(const std::string& path, const SampledMap& m) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << "i,x1,x2,v1,v2\n";
    for (std::size_t i = 0; i < m.size(); ++i)
        out << i << ',' << fmt17(m.points[i].x) << ',' << fmt17(m.points[i].y) << ','
            << fmt17(m.values[i].x) << ',' << fmt17(m.values[i].y) << '\n';
}

SampledMap read_sampled_map_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "i,x1,x2,v1,v2")
        throw IoError("sampled map csv: unexpected header in " + path);
    SampledMap m;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        long i;
        char c;
        Vec2 p, v;
        ls >> i >> c >> p.x >> c >> p.y >> c >> v.x >> c >> v.y;
        if (!ls) throw IoError("sampled map csv: malformed row in " + path);
        m.points.push_back(p);
        m.values.push_back(v);
    }
    return m;
}

void write_plan_csv(const std::string& path, const AssignmentPlan& plan) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << "i,pi_i\n";
    for (std::size_t i = 0; i < plan.perm.size(); ++i)
        out << i << ',' << plan.perm[i] << '\n';
}

AssignmentPlan read_plan_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "i,pi_i")
        throw IoError("plan csv: unexpected header in " + path);
    AssignmentPlan plan;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        long i;
        char c;
        int pi;
        ls >> i >> c >> pi;
        if (!ls) throw IoError("plan csv: malformed row in " + path);
        plan.perm.push_back(pi);
    }
    return plan;
}

double map_error(const std::vector<Vec2>& flow_values, const std::vector<Vec2>& plan_values) {
    if (flow_values.size() != plan_values.size())
        throw Error("map_error: list length mismatch");
    if (flow_values.empty()) throw Error("map_error: empty lists");
    double acc = 0.0;
    for (std::size_t i = 0; i < flow_values.size(); ++i)
        acc += sq_dist(flow_values[i], plan_values[i]);
    return std::sqrt(acc / static_cast<double>(flow_values.size()));
}

}  // namespace aht
