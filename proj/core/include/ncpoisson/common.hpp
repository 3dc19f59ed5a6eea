#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ncpoisson {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

constexpr double kPi = 3.14159265358979323846;

/// (-1)^e for possibly negative exponents.
inline int parity_sign(long e)
{
    return (e % 2 == 0) ? 1 : -1;
}

/// Residual relative to the size of the quantities entering an identity.
/// The scale is clamped at 1 so that identities between small objects are
/// judged absolutely.
inline double rel_residual(double err, double scale)
{
    return err / std::max(1.0, scale);
}

/// Deterministic random source for every seeded check in the workbench.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double gaussian() { return normal_(gen_); }
    Complex cgaussian() { return Complex(normal_(gen_), normal_(gen_)); }
    double uniform(double a, double b)
    {
        return a + (b - a) * unit_(gen_);
    }
    int uniform_int(int lo, int hi) // inclusive bounds
    {
        return std::uniform_int_distribution<int>(lo, hi)(gen_);
    }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

/// Halton low-discrepancy sequence value (index >= 0) in [0,1).
inline double halton(int index, int base)
{
    double f = 1.0, r = 0.0;
    int i = index + 1;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

/// Quasi-random sample points in [-1,1]^dim, deterministic across runs.
inline std::vector<RealVector> halton_points(int dim, int count)
{
    static const int bases[] = {2, 3, 5, 7, 11, 13, 17, 19};
    std::vector<RealVector> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        RealVector x(dim);
        for (int d = 0; d < dim; ++d)
            x[d] = 2.0 * halton(k, bases[d % 8]) - 1.0;
        pts.push_back(x);
    }
    return pts;
}

} // namespace ncpoisson
