#include "aoilab/mathutil.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace aoilab {

double q_function(double x) { return 0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0); }

namespace {

// Wichura's PPND16 (algorithm AS 241): inverse standard normal CDF.
double inverse_normal_cdf(double p) {
    const double q = p - 0.5;
    double r;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r + 6.7265770927008700853e4) * r +
                    4.5921953931549871457e4) *
                        r +
                    1.3731693765509461125e4) *
                       r +
                   1.9715909503065514427e3) *
                      r +
                  1.3314166789178437745e2) *
                     r +
                 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r + 3.9307895800092710610e4) * r +
                    2.1213794301586595867e4) *
                        r +
                    5.3941960214247511077e3) *
                       r +
                   6.8718700749205790830e2) *
                      r +
                  4.2313330701600911252e1) *
                     r +
                 1.0);
    }
    r = q < 0.0 ? p : 1.0 - p;
    if (r <= 0.0) throw std::invalid_argument("inverse_normal_cdf: p outside (0,1)");
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r +
                     1.27045825245236838258e0) *
                        r +
                    3.64784832476320460504e0) *
                       r +
                   5.76949722146069140550e0) *
                      r +
                  4.63033784615654529590e0) *
                     r +
                 1.42343711074968357734e0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r +
                     1.48103976427480074590e-1) *
                        r +
                    6.89767334985100004550e-1) *
                       r +
                   1.67638483018380384940e0) *
                      r +
                  2.05319162663775882187e0) *
                     r +
                 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r +
                     2.65321895265761230930e-2) *
                        r +
                    2.96560571828504891230e-1) *
                       r +
                   1.78482653991729133580e0) *
                      r +
                  5.46378491116411436990e0) *
                     r +
                 6.65790464350110377720e0) /
                (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r +
                     7.86869131145613259100e-4) *
                        r +
                    1.48753612908506148525e-2) *
                       r +
                   1.36929880922735805310e-1) *
                      r +
                  5.99832206555887937690e-1) *
                     r +
                 1.0);
    }
    return q < 0.0 ? -value : value;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("q_inverse: argument must lie in (0,1)");
    double z = -inverse_normal_cdf(p);
    // one Newton step on Q(z) = p
    z += (q_function(z) - p) / normal_pdf(z);
    return z;
}

QuadratureRule gauss_laguerre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_laguerre: order must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double k = i - 1;
            z += ((1.0 + 2.55 * k) / (1.9 * k)) * (z - rule.nodes[i - 2]);
        }
        double pn = 0.0, pn1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Laguerre recurrence: (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}
            pn = 1.0;
            pn1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double pn2 = pn1;
                pn1 = pn;
                pn = ((2.0 * k + 1.0 - z) * pn1 - k * pn2) / (k + 1.0);
            }
            const double deriv = n * (pn - pn1) / z;
            const double dz = pn / deriv;
            z -= dz;
            if (std::fabs(dz) <= 1e-14 * std::max(1.0, std::fabs(z))) break;
        }
        rule.nodes[i] = z;
        // weight: x / ((n+1)^2 L_{n+1}(x)^2); L_{n+1} from one more recurrence step
        const double lnp1 = ((2.0 * n + 1.0 - z) * pn - n * pn1) / (n + 1.0);
        rule.weights[i] = z / ((n + 1.0) * (n + 1.0) * lnp1 * lnp1);
    }
    return rule;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need >= 2 points with matching sizes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("MonotoneCubic: abscissae must be strictly increasing");
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto endpoint = [&](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0)
            d = 0.0;
        else if (d0 * d1 < 0.0 && std::fabs(d) > 3.0 * std::fabs(d0))
            d = 3.0 * d0;
        return d;
    };
    if (n == 2) {
        d_[0] = d_[1] = delta[0];
    } else {
        d_[0] = endpoint(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
}

double MonotoneCubic::operator()(double x) const {
    const std::size_t n = x_.size();
    std::size_t i = 0;
    if (x >= x_[n - 2]) {
        i = n - 2;
    } else if (x > x_[0]) {
        std::size_t lo = 0, hi = n - 2;
        while (lo < hi) {
            const std::size_t mid = (lo + hi + 1) / 2;
            if (x_[mid] <= x)
                lo = mid;
            else
                hi = mid - 1;
        }
        i = lo;
    }
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const char c : data) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

}  // namespace aoilab
