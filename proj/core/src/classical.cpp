#include "ncpoisson/classical.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace ncpoisson {

double partial(const ScalarField& f, const RealVector& x, int i, double h)
{
    RealVector xp = x, xm = x, xp2 = x, xm2 = x;
    xp[i] += h;
    xm[i] -= h;
    xp2[i] += 2 * h;
    xm2[i] -= 2 * h;
    return (-f(xp2) + 8 * f(xp) - 8 * f(xm) + f(xm2)) / (12 * h);
}

double second_partial(const ScalarField& f, const RealVector& x, int i, int j, double h)
{
    if (i == j) {
        RealVector xp = x, xm = x, xp2 = x, xm2 = x;
        xp[i] += h;
        xm[i] -= h;
        xp2[i] += 2 * h;
        xm2[i] -= 2 * h;
        return (-f(xp2) + 16 * f(xp) - 30 * f(x) + 16 * f(xm) - f(xm2)) / (12 * h * h);
    }
    // nested 4th-order stencils; symmetric in (i,j) by construction
    auto dj = [&](const RealVector& y) { return partial(f, y, j, h); };
    RealVector xp = x, xm = x, xp2 = x, xm2 = x;
    xp[i] += h;
    xm[i] -= h;
    xp2[i] += 2 * h;
    xm2[i] -= 2 * h;
    return (-dj(xp2) + 8 * dj(xp) - 8 * dj(xm) + dj(xm2)) / (12 * h);
}

RealVector gradient(const ScalarField& f, const RealVector& x, double h)
{
    RealVector g(x.size());
    for (int i = 0; i < x.size(); ++i)
        g[i] = partial(f, x, i, h);
    return g;
}

double poisson_bracket(const ScalarField& f, const ScalarField& g, const BivectorField& lambda,
                       const RealVector& x, double h)
{
    RealMatrix L = lambda(x);
    if (L.rows() != x.size() || L.cols() != x.size())
        throw std::invalid_argument("bivector dimension mismatch");
    RealVector gf = gradient(f, x, h);
    RealVector gg = gradient(g, x, h);
    return gf.dot(L * gg);
}

double schouten_jacobiator(const BivectorField& lambda, int i, int j, int k,
                           const RealVector& x, double h)
{
    int d = static_cast<int>(x.size());
    if (i < 0 || j < 0 || k < 0 || i >= d || j >= d || k >= d)
        throw std::invalid_argument("schouten_jacobiator: index out of range");
    auto entry = [&lambda](int a, int b) {
        return [&lambda, a, b](const RealVector& y) { return lambda(y)(a, b); };
    };
    RealMatrix L = lambda(x);
    double sum = 0.0;
    for (int a = 0; a < d; ++a) {
        sum += L(a, i) * partial(entry(j, k), x, a, h);
        sum += L(a, j) * partial(entry(k, i), x, a, h);
        sum += L(a, k) * partial(entry(i, j), x, a, h);
    }
    return sum;
}

VectorField hamiltonian_vector_field(const ScalarField& f, const BivectorField& lambda, double h)
{
    return [f, lambda, h](const RealVector& x) -> RealVector {
        RealMatrix L = lambda(x);
        RealVector gf = gradient(f, x, h);
        return L.transpose() * gf; // X^j = sum_i L^{ij} d_i f
    };
}

Trajectory integrate_flow(const VectorField& X, const RealVector& x0, double T, double dt,
                          const ScalarField* conserved)
{
    if (dt <= 0)
        throw std::invalid_argument("integrate_flow: dt must be positive");
    long steps = std::max(1l, std::lround(T / dt));
    dt = T / steps; // land exactly on T
    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);

    RealVector x = x0;
    double q0 = conserved ? (*conserved)(x0) : 0.0;
    double drift = 0.0;
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    for (long s = 0; s < steps; ++s) {
        RealVector k1 = X(x);
        RealVector k2 = X(x + 0.5 * dt * k1);
        RealVector k3 = X(x + 0.5 * dt * k2);
        RealVector k4 = X(x + dt * k3);
        x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
        if (!x.allFinite())
            throw std::runtime_error("integrate_flow: non-finite state encountered");
        traj.times.push_back((s + 1) * dt);
        traj.states.push_back(x);
        if (conserved)
            drift = std::max(drift, std::abs((*conserved)(x) - q0));
    }
    traj.conserved_drift = conserved ? drift / std::max(1.0, std::abs(q0)) : 0.0;
    return traj;
}

RealMatrix hessian_with_connection(const ScalarField& f, const ChristoffelField& gamma,
                                   const RealVector& x, double h)
{
    int d = static_cast<int>(x.size());
    std::vector<RealMatrix> G = gamma(x);
    if (static_cast<int>(G.size()) != d)
        throw std::invalid_argument("christoffel array has wrong size");
    for (int k = 0; k < d; ++k)
        if ((G[k] - G[k].transpose()).norm() > 1e-9 * std::max(1.0, G[k].norm()))
            throw std::invalid_argument("connection has torsion");

    RealVector gf = gradient(f, x, h);
    RealMatrix H(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            double v = second_partial(f, x, i, j, h);
            for (int k = 0; k < d; ++k)
                v -= G[k](i, j) * gf[k];
            H(i, j) = v;
            H(j, i) = v;
        }
    return H;
}

double classical_pi1(const ScalarField& f, const ScalarField& g, const BivectorField& lambda,
                     const ChristoffelField& gamma, const RealVector& x, double h)
{
    RealMatrix L = lambda(x);
    RealMatrix a = hessian_with_connection(f, gamma, x, h);
    RealMatrix b = hessian_with_connection(g, gamma, x, h);
    // L^{ij} L^{kl} a_{ik} b_{jl} = sum_{jl} (L^T a L)_{jl} b_{jl}
    return (L.transpose() * a * L).cwiseProduct(b).sum();
}

ClassicalJacobiFit classical_jacobi_fit(const ScalarField& f, const ScalarField& g,
                                        const ScalarField& w, const BivectorField& lambda,
                                        const ChristoffelField& gamma,
                                        const std::vector<RealVector>& points, double h)
{
    ScalarField gw_bracket = [&](const RealVector& x) { return poisson_bracket(g, w, lambda, x, h); };
    ScalarField fg_bracket = [&](const RealVector& x) { return poisson_bracket(f, g, lambda, x, h); };
    ScalarField fg = [&](const RealVector& x) { return f(x) * g(x); };
    ScalarField gw = [&](const RealVector& x) { return g(x) * w(x); };

    std::vector<double> lhs(points.size()), rhs(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        const RealVector& x = points[p];
        lhs[p] = poisson_bracket(f, gw_bracket, lambda, x, h) -
                 poisson_bracket(fg_bracket, w, lambda, x, h);
        rhs[p] = f(x) * classical_pi1(g, w, lambda, gamma, x, h) -
                 classical_pi1(fg, w, lambda, gamma, x, h) +
                 classical_pi1(f, gw, lambda, gamma, x, h) -
                 classical_pi1(f, g, lambda, gamma, x, h) * w(x);
    }

    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        num += rhs[p] * lhs[p];
        den += rhs[p] * rhs[p];
    }
    double c = den > 0 ? num / den : 0.0;

    double worst = 0.0, scale = 1.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        worst = std::max(worst, std::abs(lhs[p] - c * rhs[p]));
        scale = std::max({scale, std::abs(lhs[p]), std::abs(c * rhs[p])});
    }
    return {c, rel_residual(worst, scale)};
}

ChristoffelField flat_connection(int dim)
{
    return [dim](const RealVector&) {
        return std::vector<RealMatrix>(dim, RealMatrix::Zero(dim, dim));
    };
}

ScalarField polynomial_field(const nlohmann::json& definition)
{
    int dim = definition.at("dim").get<int>();
    struct Term
    {
        double coeff;
        std::vector<int> powers;
    };
    std::vector<Term> terms;
    for (const auto& t : definition.at("terms")) {
        Term term;
        term.coeff = t.at("coeff").get<double>();
        term.powers = t.at("powers").get<std::vector<int>>();
        if (static_cast<int>(term.powers.size()) != dim)
            throw std::invalid_argument("polynomial term has wrong number of powers");
        terms.push_back(std::move(term));
    }
    return [terms](const RealVector& x) {
        double v = 0.0;
        for (const auto& t : terms) {
            double m = t.coeff;
            for (std::size_t i = 0; i < t.powers.size(); ++i)
                m *= std::pow(x[static_cast<int>(i)], t.powers[i]);
            v += m;
        }
        return v;
    };
}

ClassicalSystem make_system(const std::string& name, const nlohmann::json* user_config)
{
    if (name == "canonical2d" || name == "harmonic") {
        BivectorField lambda = [](const RealVector&) {
            RealMatrix L(2, 2);
            L << 0, 1, -1, 0;
            return L;
        };
        ScalarField h = [](const RealVector& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
        return {name, 2, lambda, h, h};
    }
    if (name == "so3star") {
        // Lie-Poisson structure on so(3)*: L^{ij} = eps_{ijk} x_k
        BivectorField lambda = [](const RealVector& x) {
            RealMatrix L(3, 3);
            L << 0, x[2], -x[1],
                -x[2], 0, x[0],
                 x[1], -x[0], 0;
            return L;
        };
        ScalarField h = [](const RealVector& x) { return x[2]; };
        ScalarField casimir = [](const RealVector& x) { return x.squaredNorm(); };
        return {name, 3, lambda, h, casimir};
    }
    if (name == "zero2d") {
        BivectorField lambda = [](const RealVector&) {
            RealMatrix L(2, 2);
            L << 0, 1, -1, 0;
            return L;
        };
        ScalarField h = [](const RealVector&) { return 0.0; };
        return {name, 2, lambda, h, h};
    }
    if (name == "userpolynomial") {
        if (!user_config)
            throw std::invalid_argument("userpolynomial needs a JSON configuration");
        int dim = user_config->at("dim").get<int>();
        if (dim % 2 != 0)
            throw std::invalid_argument("userpolynomial: dim must be even (canonical structure)");
        BivectorField lambda = [dim](const RealVector&) {
            RealMatrix L = RealMatrix::Zero(dim, dim);
            for (int i = 0; i + 1 < dim; i += 2) {
                L(i, i + 1) = 1;
                L(i + 1, i) = -1;
            }
            return L;
        };
        ScalarField h = polynomial_field(*user_config);
        return {name, dim, lambda, h, h};
    }
    throw std::invalid_argument("unknown classical system: " + name);
}

} // namespace ncpoisson
