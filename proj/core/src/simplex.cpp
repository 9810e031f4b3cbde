#include "aoilab/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace aoilab {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-8;

struct Tableau {
    int m, total;                       // rows, columns excluding rhs
    std::vector<std::vector<double>> a; // m x (total+1), last column = rhs
    std::vector<double> z;              // reduced-cost row, size total+1 (last = -objective value)
    std::vector<int> basis;             // column index basic in each row
    int iterations = 0;

    void pivot(int row, int col) {
        auto& pr = a[row];
        const double inv = 1.0 / pr[col];
        for (int j = 0; j <= total; ++j) pr[j] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            const double f = a[i][col];
            if (std::fabs(f) < kPivotTol) {
                a[i][col] = 0.0;
                continue;
            }
            auto& ri = a[i];
            for (int j = 0; j <= total; ++j) ri[j] -= f * pr[j];
            ri[col] = 0.0;
        }
        const double f = z[col];
        if (std::fabs(f) > 0.0) {
            for (int j = 0; j <= total; ++j) z[j] -= f * pr[j];
            z[col] = 0.0;
        }
        basis[row] = col;
        ++iterations;
    }

    // Bland's rule: entering = smallest eligible column with negative reduced
    // cost; leaving = min ratio, ties broken by smallest basis column.
    SimplexStatus run(const std::vector<char>& eligible, int max_iter) {
        while (iterations < max_iter) {
            int enter = -1;
            for (int j = 0; j < total; ++j) {
                if (eligible[j] && z[j] < -1e-9) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return SimplexStatus::kOptimal;
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (a[i][enter] > kPivotTol) {
                    const double ratio = a[i][total] / a[i][enter];
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return SimplexStatus::kUnbounded;
            pivot(leave, enter);
        }
        throw std::runtime_error("solve_simplex: iteration limit reached");
    }
};

}  // namespace

SimplexResult solve_simplex(const SimplexProblem& problem) {
    const int m = static_cast<int>(problem.rows.size());
    const int n = static_cast<int>(problem.objective.size());
    if (static_cast<int>(problem.rhs.size()) != m || static_cast<int>(problem.relations.size()) != m)
        throw std::invalid_argument("solve_simplex: inconsistent problem dimensions");
    int n_slack = 0;
    for (char r : problem.relations) {
        if (r == '<')
            ++n_slack;
        else if (r != '=')
            throw std::invalid_argument("solve_simplex: relations must be '<' or '='");
    }
    Tableau t;
    t.m = m;
    t.total = n + n_slack + m;  // originals, slacks, artificials
    t.a.assign(m, std::vector<double>(t.total + 1, 0.0));
    t.basis.assign(m, -1);

    int slack_at = n;
    for (int i = 0; i < m; ++i) {
        const double sign = problem.rhs[i] < 0.0 ? -1.0 : 1.0;
        if (static_cast<int>(problem.rows[i].size()) != n)
            throw std::invalid_argument("solve_simplex: row width mismatch");
        for (int j = 0; j < n; ++j) t.a[i][j] = sign * problem.rows[i][j];
        if (problem.relations[i] == '<') {
            t.a[i][slack_at] = sign;
            ++slack_at;
        }
        t.a[i][n + n_slack + i] = 1.0;  // artificial
        t.a[i][t.total] = sign * problem.rhs[i];
        t.basis[i] = n + n_slack + i;
    }

    // phase 1: minimize sum of artificials
    t.z.assign(t.total + 1, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= t.total; ++j)
            if (j < n + n_slack || j == t.total) t.z[j] -= t.a[i][j];
    std::vector<char> eligible(t.total, 1);
    const int max_iter = 10000 + 200 * (t.total + m);
    const SimplexStatus s1 = t.run(eligible, max_iter);
    if (s1 == SimplexStatus::kUnbounded) throw std::runtime_error("solve_simplex: phase 1 unbounded");
    if (-t.z[t.total] > kFeasTol) return {SimplexStatus::kInfeasible, 0.0, {}, t.iterations};
    // drive leftover artificials out of the basis where possible
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] >= n + n_slack) {
            int col = -1;
            for (int j = 0; j < n + n_slack; ++j)
                if (std::fabs(t.a[i][j]) > kPivotTol) {
                    col = j;
                    break;
                }
            if (col >= 0) t.pivot(i, col);
            // otherwise the row is redundant; its artificial stays basic at zero
        }
    }

    // phase 2: real objective, artificial columns frozen
    for (int j = n + n_slack; j < t.total; ++j) eligible[j] = 0;
    t.z.assign(t.total + 1, 0.0);
    for (int j = 0; j < n; ++j) t.z[j] = problem.objective[j];
    for (int i = 0; i < m; ++i) {
        const int b = t.basis[i];
        if (b < n && std::fabs(problem.objective[b]) > 0.0) {
            const double c = problem.objective[b];
            for (int j = 0; j <= t.total; ++j) t.z[j] -= c * t.a[i][j];
        }
    }
    const SimplexStatus s2 = t.run(eligible, max_iter);
    if (s2 == SimplexStatus::kUnbounded) return {SimplexStatus::kUnbounded, 0.0, {}, t.iterations};

    SimplexResult result;
    result.status = SimplexStatus::kOptimal;
    result.iterations = t.iterations;
    result.solution.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < n) result.solution[t.basis[i]] = t.a[i][t.total];
    double value = 0.0;
    for (int j = 0; j < n; ++j) value += problem.objective[j] * result.solution[j];
    result.value = value;
    return result;
}

}  // namespace aoilab
