#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpoisson/classical.hpp"

#include <nlohmann/json.hpp>

using namespace ncpoisson;

namespace {

int levi_civita(int i, int j, int k)
{
    if (i == j || j == k || i == k)
        return 0;
    if ((i == 0 && j == 1 && k == 2) || (i == 1 && j == 2 && k == 0) ||
        (i == 2 && j == 0 && k == 1))
        return 1;
    return -1;
}

} // namespace

TEST_CASE("canonical bracket values")
{
    ClassicalSystem can = make_system("canonical2d");
    ScalarField x1 = [](const RealVector& x) { return x[0]; };
    ScalarField x2 = [](const RealVector& x) { return x[1]; };
    ScalarField f = [](const RealVector& x) { return std::sin(x[0]) * x[1]; };

    for (const auto& x : halton_points(2, 20)) {
        CHECK(poisson_bracket(x1, x2, can.lambda, x) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(poisson_bracket(f, f, can.lambda, x)) < 1e-12);
    }
}

TEST_CASE("so(3)* bracket against the epsilon-tensor oracle")
{
    ClassicalSystem so3 = make_system("so3star");
    ScalarField coord[3] = {[](const RealVector& x) { return x[0]; },
                            [](const RealVector& x) { return x[1]; },
                            [](const RealVector& x) { return x[2]; }};
    for (const auto& x : halton_points(3, 30))
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double expect = 0.0;
                for (int k = 0; k < 3; ++k)
                    expect += levi_civita(i, j, k) * x[k];
                CHECK(std::abs(poisson_bracket(coord[i], coord[j], so3.lambda, x) - expect) <
                      1e-9);
            }
}

TEST_CASE("schouten jacobiator")
{
    // constant bivector in 4 dimensions
    Rng rng(19);
    RealMatrix L0 = RealMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            L0(i, j) = rng.gaussian();
            L0(j, i) = -L0(i, j);
        }
    BivectorField constant = [L0](const RealVector&) { return L0; };
    for (const auto& x : halton_points(4, 20))
        CHECK(std::abs(schouten_jacobiator(constant, 0, 1, 2, x)) < 1e-12);

    // any 2d bivector is Poisson; the only triples repeat an index
    BivectorField planar = [](const RealVector& x) {
        RealMatrix L(2, 2);
        L << 0, x[0], -x[0], 0;
        return L;
    };
    for (const auto& x : halton_points(2, 20))
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    CHECK(std::abs(schouten_jacobiator(planar, i, j, k, x)) < 1e-9);

    // so(3)*: compare the finite-difference cyclic sum with the exact one
    // computed from d_a Lambda^{jk} = eps_{jka}
    ClassicalSystem so3 = make_system("so3star");
    for (const auto& x : halton_points(3, 20))
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double exact = 0.0;
                    RealMatrix L = so3.lambda(x);
                    for (int a = 0; a < 3; ++a)
                        exact += L(a, i) * levi_civita(j, k, a) +
                                 L(a, j) * levi_civita(k, i, a) +
                                 L(a, k) * levi_civita(i, j, a);
                    double fd = schouten_jacobiator(so3.lambda, i, j, k, x);
                    CHECK(std::abs(fd - exact) < 1e-9);
                    CHECK(std::abs(exact) < 1e-12); // it is a Poisson bivector
                }

    CHECK_THROWS_AS(schouten_jacobiator(planar, 0, 1, 5, RealVector::Zero(2)),
                    std::invalid_argument);
}

TEST_CASE("hamiltonian vector field")
{
    ClassicalSystem can = make_system("canonical2d");
    ScalarField h = [](const RealVector& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
    VectorField X = hamiltonian_vector_field(h, can.lambda);
    for (const auto& x : halton_points(2, 20)) {
        RealVector v = X(x);
        CHECK(std::abs(v[0] + x[1]) < 1e-10); // X_h = (-x2, x1)
        CHECK(std::abs(v[1] - x[0]) < 1e-10);
        // X_f f = 0
        CHECK(std::abs(gradient(h, x).dot(v)) < 1e-10);
    }

    ScalarField constant = [](const RealVector&) { return 3.5; };
    VectorField Z = hamiltonian_vector_field(constant, can.lambda);
    for (const auto& x : halton_points(2, 5))
        CHECK(Z(x).norm() < 1e-10);
}

TEST_CASE("flows")
{
    ClassicalSystem sys = make_system("harmonic");
    VectorField X = hamiltonian_vector_field(sys.hamiltonian, sys.lambda);
    RealVector x0(2);
    x0 << 1.0, 0.0;
    Trajectory tr = integrate_flow(X, x0, 2.0 * kPi, 1e-3, &*sys.casimir);
    CHECK((tr.states.back() - x0).norm() < 1e-8);
    CHECK(tr.conserved_drift < 1e-8);

    // zero field: constant trajectory
    VectorField zero = [](const RealVector& x) { return RealVector::Zero(x.size()); };
    Trajectory tz = integrate_flow(zero, x0, 1.0, 1e-2);
    CHECK((tz.states.back() - x0).norm() == 0.0);

    // so(3)* rotation about the x3 axis: exact solution is a rotation
    ClassicalSystem so3 = make_system("so3star");
    VectorField Xs = hamiltonian_vector_field(so3.hamiltonian, so3.lambda);
    RealVector y0(3);
    y0 << 0.6, 0.3, 0.8;
    double T = 1.25;
    Trajectory ts = integrate_flow(Xs, y0, T, 1e-3, &*so3.casimir);
    RealVector expect(3);
    expect << y0[0] * std::cos(T) + y0[1] * std::sin(T),
        -y0[0] * std::sin(T) + y0[1] * std::cos(T), y0[2];
    CHECK((ts.states.back() - expect).norm() < 1e-8);
    CHECK(ts.conserved_drift < 1e-8);

    // non-finite states are reported
    VectorField blow = [](const RealVector& x) {
        RealVector v(x.size());
        v.setConstant(std::numeric_limits<double>::infinity());
        return v;
    };
    CHECK_THROWS_AS(integrate_flow(blow, x0, 1.0, 0.5), std::runtime_error);
    CHECK_THROWS_AS(integrate_flow(zero, x0, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("hessian with connection")
{
    ChristoffelField flat = flat_connection(2);
    ScalarField f = [](const RealVector& x) { return x[0] * x[1]; };
    RealVector x0(2);
    x0 << 0.4, -0.3;
    RealMatrix H = hessian_with_connection(f, flat, x0);
    CHECK(std::abs(H(0, 1) - 1.0) < 1e-9);
    CHECK(std::abs(H(0, 0)) < 1e-9);
    CHECK((H - H.transpose()).norm() < 1e-9);

    ScalarField lin = [](const RealVector& x) { return 2.0 * x[0] - x[1]; };
    CHECK(hessian_with_connection(lin, flat, x0).norm() < 1e-9);

    // constant Gamma^1_11 = c against the substituted formula 2 - 2 c x1
    double c = 0.7;
    ChristoffelField gamma = [c](const RealVector&) {
        std::vector<RealMatrix> G(2, RealMatrix::Zero(2, 2));
        G[0](0, 0) = c;
        return G;
    };
    ScalarField fq = [](const RealVector& x) { return x[0] * x[0]; };
    for (const auto& x : halton_points(2, 10)) {
        RealMatrix Hq = hessian_with_connection(fq, gamma, x);
        CHECK(std::abs(Hq(0, 0) - (2.0 - c * 2.0 * x[0])) < 1e-8);
    }

    // torsion triggers an error
    ChristoffelField torsion = [](const RealVector&) {
        std::vector<RealMatrix> G(2, RealMatrix::Zero(2, 2));
        G[0](0, 1) = 1.0; // asymmetric
        return G;
    };
    CHECK_THROWS_AS(hessian_with_connection(f, torsion, x0), std::invalid_argument);
}

TEST_CASE("hessian pairing")
{
    ClassicalSystem can = make_system("canonical2d");
    ChristoffelField flat = flat_connection(2);
    RealVector x0(2);
    x0 << 0.2, 0.1;

    ScalarField lin = [](const RealVector& x) { return x[0] + 2.0 * x[1]; };
    ScalarField g = [](const RealVector& x) { return std::sin(x[0]) * x[1]; };
    CHECK(std::abs(classical_pi1(lin, g, can.lambda, flat, x0)) < 1e-8);

    ScalarField fq = [](const RealVector& x) { return 0.5 * x[0] * x[0]; };
    ScalarField gq = [](const RealVector& x) { return 0.5 * x[1] * x[1]; };
    CHECK(std::abs(classical_pi1(fq, gq, can.lambda, flat, x0) - 1.0) < 1e-9);
}

TEST_CASE("jacobi witness fit finds the -1/2 normalization")
{
    ClassicalSystem can = make_system("canonical2d");
    ChristoffelField flat = flat_connection(2);
    ScalarField f = [](const RealVector& x) { return std::sin(x[0]) + x[1] * x[1]; };
    ScalarField g = [](const RealVector& x) { return x[0] * std::cos(x[1]); };
    ScalarField w = [](const RealVector& x) { return std::exp(0.2 * x[0]) * x[1]; };
    auto fit = classical_jacobi_fit(f, g, w, can.lambda, flat, halton_points(2, 30));
    CHECK(std::abs(fit.fitted_constant + 0.5) < 1e-4);
    CHECK(fit.residual < 1e-6);
}

TEST_CASE("bracket leibniz and 4th-order convergence")
{
    ClassicalSystem can = make_system("canonical2d");
    ScalarField f = [](const RealVector& x) { return std::sin(x[0]) + x[1] * x[1]; };
    ScalarField g = [](const RealVector& x) { return x[0] * x[1]; };
    ScalarField w = [](const RealVector& x) { return std::cos(x[1]); };
    ScalarField gw = [&](const RealVector& x) { return g(x) * w(x); };
    double worst = 0.0;
    for (const auto& x : halton_points(2, 30)) {
        double lhs = poisson_bracket(f, gw, can.lambda, x);
        double rhs = poisson_bracket(f, g, can.lambda, x) * w(x) +
                     g(x) * poisson_bracket(f, w, can.lambda, x);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst < 1e-8);

    ScalarField fe = [](const RealVector& x) { return std::exp(0.3 * x[0]) * std::sin(x[1]); };
    ScalarField ge = [](const RealVector& x) { return std::cos(2 * x[0]) + std::pow(x[1], 3); };
    auto exact = [](const RealVector& x) {
        double d1f = 0.3 * std::exp(0.3 * x[0]) * std::sin(x[1]);
        double d2f = std::exp(0.3 * x[0]) * std::cos(x[1]);
        double d1g = -2 * std::sin(2 * x[0]);
        double d2g = 3 * x[1] * x[1];
        return d1f * d2g - d2f * d1g;
    };
    auto max_err = [&](double h) {
        double m = 0.0;
        for (const auto& x : halton_points(2, 15))
            m = std::max(m, std::abs(poisson_bracket(fe, ge, can.lambda, x, h) - exact(x)));
        return m;
    };
    CHECK(max_err(0.05) / max_err(0.025) >= 8.0);
}

TEST_CASE("user polynomial system")
{
    nlohmann::json spec = {
        {"dim", 2},
        {"terms",
         {{{"coeff", 0.5}, {"powers", {2, 0}}}, {{"coeff", 0.5}, {"powers", {0, 2}}}}},
    };
    ClassicalSystem sys = make_system("userpolynomial", &spec);
    RealVector x(2);
    x << 1.0, 2.0;
    CHECK(sys.hamiltonian(x) == doctest::Approx(2.5));

    CHECK_THROWS_AS(make_system("nosuchsystem"), std::invalid_argument);
    CHECK_THROWS_AS(make_system("userpolynomial"), std::invalid_argument);
}

TEST_CASE("dimension mismatch")
{
    ClassicalSystem can = make_system("canonical2d");
    ScalarField f = [](const RealVector& x) { return x[0]; };
    RealVector x3(3);
    x3 << 1, 2, 3;
    CHECK_THROWS_AS(poisson_bracket(f, f, can.lambda, x3), std::invalid_argument);
}
