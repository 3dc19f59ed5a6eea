#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpoisson/poisson.hpp"
#include "ncpoisson/torus.hpp"

using namespace ncpoisson;

TEST_CASE("cocycle check")
{
    auto m2 = matrix_algebra(2);
    Rng rng(61);

    CHECK(check_leibniz(Cochain::multiplication(m2)) < 1e-14);
    CHECK(check_leibniz(differential(Cochain::random(m2, 1, rng))) < 1e-13);

    // generic 2-cochains are far from cocycles (seeded draw, residual
    // recorded here)
    Cochain garbage = Cochain::random(m2, 2, rng);
    double res = check_leibniz(garbage);
    CHECK(res > 0.1);
}

TEST_CASE("jacobi witness checks")
{
    auto m2 = matrix_algebra(2);
    Rng rng(67);

    CHECK(check_jacobi_witness(Cochain::multiplication(m2), Cochain(m2, 2)) < 1e-14);

    // torus witness at small truncation, restricted to safe triples
    TorusEmbedding emb = embed_as_finite_algebra(0.41421356237309503, 3);
    CHECK(emb.jacobi_residual_safe() < 1e-10);

    // adding a coboundary to the witness does not change the residual; on
    // the truncated algebra the shift cochain must be mode-preserving
    // (diagonal), so that b(b(eta)) = 0 sees only exact products
    {
        Cochain eta(*emb.algebra, 1);
        for (int i = 0; i < emb.algebra->dim(); ++i)
            eta.set_coeff({i}, i, rng.cgaussian());
        Cochain shift = differential(eta);
        double before = emb.jacobi_residual_safe();
        double after = check_jacobi_witness(
            emb.pi, emb.pi1 + shift,
            [&emb](int i, int j, int k) { return emb.safe_triple(i, j, k); });
        CHECK(std::abs(before - after) < 1e-12);
    }

    // on an exactly associative algebra any shift cochain works
    {
        Cochain mu = Cochain::multiplication(m2);
        Cochain shift = differential(Cochain::random(m2, 1, rng));
        CHECK(std::abs(check_jacobi_witness(mu, Cochain(m2, 2) + shift) -
                       check_jacobi_witness(mu, Cochain(m2, 2))) < 1e-12);
    }
}

TEST_CASE("jacobi defect equals -1/2 of the self bracket")
{
    auto m2 = matrix_algebra(2);
    Rng rng(71);
    Cochain pi = Cochain::random(m2, 2, rng); // any 2-cochain
    Cochain J = jacobi_defect(pi);
    Cochain diff = J + gerstenhaber(pi, pi) * Complex(0.5);
    CHECK(rel_residual(diff.sup_norm(), J.sup_norm()) < 1e-13);
}

TEST_CASE("witness solving")
{
    auto m2 = matrix_algebra(2);
    Rng rng(73);

    auto sol = solve_jacobi_witness(Cochain::multiplication(m2));
    REQUIRE(sol.witness.has_value());
    CHECK(sol.witness->sup_norm() < 1e-10); // minimum-norm witness of zero
    CHECK(sol.residual < 1e-12);

    Cochain pi = differential(Cochain::random(m2, 1, rng));
    auto sol2 = solve_jacobi_witness(pi);
    CHECK(sol2.residual < 1e-9);
    CHECK(sol2.witness.has_value());

    Cochain bad = Cochain::random(m2, 2, rng);
    CHECK_THROWS_AS(solve_jacobi_witness(bad), std::invalid_argument);
}

TEST_CASE("hamiltonian derivation")
{
    auto m2 = matrix_algebra(2);
    Rng rng(79);

    // multiplication: X_c = 0 for central c
    Cochain mu = Cochain::multiplication(m2);
    Cochain X = hamiltonian_derivation(mu, m2.unit());
    CHECK(X.sup_norm() < 1e-14);

    // coboundary structure: X_1 is the inner derivation by eta(1)/2
    Cochain eta = Cochain::random(m2, 1, rng);
    Cochain pi = differential(eta);
    Cochain X1 = hamiltonian_derivation(pi, m2.unit());
    Vector eta1 = eta.evaluate({m2.unit()}).coeffs();
    Matrix expect = 0.5 * m2.inner_derivation_matrix(eta1);
    CHECK((cochain_as_matrix(X1) - expect).norm() < 1e-12);
    // in particular it vanishes as an outer derivation
    CHECK(m2.solve_inner_derivation(cochain_as_matrix(X1)).residual < 1e-12);

    // non-central input is rejected
    CHECK_THROWS_AS(hamiltonian_derivation(pi, m2.basis_element(1)), std::invalid_argument);

    // torus: X of the unit vanishes
    TorusEmbedding emb = embed_as_finite_algebra(0.6180339887498949, 1);
    Cochain Xt = hamiltonian_derivation(emb.pi, emb.algebra->unit());
    CHECK(Xt.sup_norm() < 1e-14);
}

TEST_CASE("center bracket")
{
    auto ct3 = truncated_polynomial_algebra(3);

    // P(f,g) = (t f')(t g')
    Cochain pi(ct3, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i + j < 3)
                pi.set_coeff({i, j}, i + j, Complex(i * j));
    CHECK(check_leibniz(pi) < 1e-14);

    AlgebraElement t = ct3.basis_element(1);
    AlgebraElement t2 = ct3.basis_element(2);
    AlgebraElement br = center_bracket(pi, t, t2);

    // cross-check against the direct antisymmetrization
    AlgebraElement direct =
        (pi.evaluate({t, t2}) - pi.evaluate({t2, t})) * Complex(0.5);
    CHECK((br - direct).norm() < 1e-14);
    // symmetric structure: everything brackets to zero
    CHECK(br.norm() < 1e-14);

    CHECK(center_bracket(pi, t, t).norm() < 1e-14);

    auto m2 = matrix_algebra(2);
    Cochain mu2 = Cochain::multiplication(m2);
    CHECK(center_bracket(mu2, m2.unit(), m2.unit()).norm() < 1e-14);
    CHECK_THROWS_AS(center_bracket(mu2, m2.basis_element(1), m2.unit()),
                    std::invalid_argument);
}

TEST_CASE("proposition residuals")
{
    auto m2 = matrix_algebra(2);
    Rng rng(83);

    PoissonStructure mu{Cochain::multiplication(m2), std::nullopt};
    auto rep = check_proposition(mu, m2.unit(), m2.unit());
    CHECK(rep.lie_derivative_coboundary < 1e-12);
    CHECK(rep.bracket_compatibility < 1e-12);
    CHECK(rep.center_jacobi < 1e-12);

    PoissonStructure pb{differential(Cochain::random(m2, 1, rng)), std::nullopt};
    auto rep2 = check_proposition(pb, m2.unit(), m2.unit());
    CHECK(rep2.lie_derivative_coboundary < 1e-9);
    CHECK(rep2.bracket_compatibility < 1e-9);
    CHECK(rep2.center_jacobi < 1e-9);

    auto cs3 = s3_group_algebra();
    PoissonStructure ps{differential(Cochain::random(cs3, 1, rng)), std::nullopt};
    auto basis = cs3.center();
    REQUIRE(basis.size() == 3);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            auto r = check_proposition(ps, basis[i], basis[j]);
            CHECK(r.lie_derivative_coboundary < 1e-9);
            CHECK(r.bracket_compatibility < 1e-9);
            CHECK(r.center_jacobi < 1e-9);
        }
}
