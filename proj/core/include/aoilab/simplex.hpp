#pragma once

#include <vector>

namespace aoilab {

// Minimize c'x subject to row constraints (<= or ==) and x >= 0.
struct SimplexProblem {
    std::vector<double> objective;           // n
    std::vector<std::vector<double>> rows;   // m x n
    std::vector<double> rhs;                 // m
    std::vector<char> relations;             // m entries, '<' or '='
};

enum class SimplexStatus { kOptimal, kInfeasible, kUnbounded };

struct SimplexResult {
    SimplexStatus status = SimplexStatus::kInfeasible;
    double value = 0.0;
    std::vector<double> solution;
    int iterations = 0;
};

// Two-phase dense tableau simplex with Bland's anti-cycling rule.
SimplexResult solve_simplex(const SimplexProblem& problem);

}  // namespace aoilab
