#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace aoilab {

// Gaussian tail probability Q(x) = P(Z > x) for Z ~ N(0,1).
double q_function(double x);

// Inverse of q_function on (0,1). Rational approximation plus one Newton
// refinement; absolute error below 1e-12 on [1e-8, 1 - 1e-8].
double q_inverse(double p);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Laguerre rule for integrals of f(x) e^{-x} on [0, inf), i.e.
// expectations under Exp(1).
QuadratureRule gauss_laguerre(int n);

// Monotone piecewise-cubic interpolation (Fritsch-Carlson slopes). Preserves
// monotonicity of the data; evaluation outside [x.front(), x.back()] clamps
// to the end intervals' cubics.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;

  private:
    std::vector<double> x_, y_, d_;
};

// FNV-1a 64-bit, used for config/scenario digests.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace aoilab
