#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpoisson/hochschild.hpp"

#include <nlohmann/json.hpp>
#include <Eigen/SVD>

using namespace ncpoisson;

namespace {

// Brute-force differential via element arithmetic only; the production
// implementation contracts tensors, this one multiplies algebra elements.
Cochain brute_force_differential(const Cochain& c)
{
    const StructureConstantAlgebra& A = c.algebra();
    int d = A.dim();
    int k = c.degree();
    Cochain out(A, k + 1);
    std::vector<int> idx(k + 1, 0);
    std::size_t tuples = out.tuple_count();
    for (std::size_t flat = 0; flat < tuples; ++flat) {
        std::size_t rem = flat;
        for (int t = k; t >= 0; --t) {
            idx[t] = static_cast<int>(rem % d);
            rem /= d;
        }
        std::vector<AlgebraElement> args;
        for (int t = 0; t <= k; ++t)
            args.push_back(A.basis_element(idx[t]));

        AlgebraElement acc = multiply(args[0], c.evaluate({args.begin() + 1, args.end()}));
        for (int i = 1; i <= k; ++i) {
            std::vector<AlgebraElement> sub;
            for (int t = 0; t < i - 1; ++t)
                sub.push_back(args[t]);
            sub.push_back(multiply(args[i - 1], args[i]));
            for (int t = i + 1; t <= k; ++t)
                sub.push_back(args[t]);
            acc = acc + c.evaluate(sub) * Complex(parity_sign(i));
        }
        std::vector<AlgebraElement> head(args.begin(), args.end() - 1);
        acc = acc + multiply(c.evaluate(head), args[k]) * Complex(parity_sign(k + 1));

        for (int j = 0; j < d; ++j)
            out.tensor()[static_cast<Eigen::Index>(flat) * d + j] = acc.coeffs()[j];
    }
    return out;
}

int eidx(int n, int a, int b) { return a * n + b; }

} // namespace

TEST_CASE("degree-0 differential is the commutator map")
{
    auto m2 = matrix_algebra(2);
    AlgebraElement e11 = m2.basis_element(eidx(2, 0, 0));
    AlgebraElement e12 = m2.basis_element(eidx(2, 0, 1));

    Cochain b0 = differential(Cochain::from_element(e11));
    // (b e11)(x) = x e11 - e11 x; on e12 this is -e12
    AlgebraElement v = b0.evaluate({e12});
    AlgebraElement expect = multiply(e12, e11) - multiply(e11, e12);
    CHECK((v - expect).norm() < 1e-14);
    CHECK((v + e12).norm() < 1e-14);
}

TEST_CASE("differential agrees with the element-arithmetic oracle")
{
    auto m2 = matrix_algebra(2);
    Rng rng(23);
    for (int deg = 0; deg <= 2; ++deg) {
        Cochain c = Cochain::random(m2, deg, rng);
        Cochain fast = differential(c);
        Cochain slow = brute_force_differential(c);
        CHECK(rel_residual((fast - slow).sup_norm(), fast.sup_norm()) < 1e-13);
    }
}

TEST_CASE("b squared vanishes and multiplication is a cocycle")
{
    for (int which = 0; which < 2; ++which) {
        auto A = which == 0 ? matrix_algebra(2) : truncated_polynomial_algebra(3);
        Rng rng(31 + which);
        for (int deg = 0; deg <= 3; ++deg) {
            Cochain c = Cochain::random(A, deg, rng);
            Cochain bc = differential(c);
            CHECK(rel_residual(differential(bc).sup_norm(), bc.sup_norm()) < 1e-12);
        }
        Cochain mu = Cochain::multiplication(A);
        CHECK(differential(mu).sup_norm() < 1e-13);
    }
}

TEST_CASE("pre-Lie product edge degrees")
{
    auto m2 = matrix_algebra(2);
    Rng rng(37);

    // X * a = X(a) for a derivation-degree cochain and a degree-0 cochain
    Cochain X = Cochain::random(m2, 1, rng);
    AlgebraElement a = m2.random_element(rng);
    Cochain Xa = pre_lie(X, Cochain::from_element(a));
    CHECK(Xa.degree() == 0);
    CHECK((m2.element(Xa.tensor()) - X.evaluate({a})).norm() < 1e-13);

    // a * X is the empty insertion sum
    Cochain aX = pre_lie(Cochain::from_element(a), X);
    CHECK(aX.degree() == 0);
    CHECK(aX.sup_norm() == 0.0);

    // mu * mu is the associator
    Cochain mu = Cochain::multiplication(m2);
    CHECK(pre_lie(mu, mu).sup_norm() < 1e-13);

    CHECK_THROWS_AS(pre_lie(Cochain::from_element(a), Cochain::from_element(a)),
                    std::invalid_argument);
}

TEST_CASE("gerstenhaber bracket identities")
{
    auto m2 = matrix_algebra(2);
    Rng rng(41);

    // [P,P] = 2 P*P, cross-checked against direct nested evaluation
    Cochain P = Cochain::random(m2, 2, rng);
    Cochain lhs = gerstenhaber(P, P);
    CHECK(rel_residual((lhs - pre_lie(P, P) * Complex(2.0)).sup_norm(), lhs.sup_norm()) <
          1e-13);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                auto ei = m2.basis_element(i), ej = m2.basis_element(j),
                     ek = m2.basis_element(k);
                AlgebraElement direct =
                    (P.evaluate({P.evaluate({ei, ej}), ek}) -
                     P.evaluate({ei, P.evaluate({ej, ek})})) *
                    Complex(2.0);
                worst = std::max(worst, (lhs.evaluate({ei, ej, ek}) - direct).norm());
            }
    CHECK(rel_residual(worst, lhs.sup_norm()) < 1e-13);

    // [P,c] for degree-0 c evaluates to P(c,a) - P(a,c)
    AlgebraElement c = m2.random_element(rng);
    Cochain br = gerstenhaber(P, Cochain::from_element(c));
    CHECK(br.degree() == 1);
    for (int i = 0; i < 4; ++i) {
        auto ei = m2.basis_element(i);
        AlgebraElement expect = P.evaluate({c, ei}) - P.evaluate({ei, c});
        CHECK((br.evaluate({ei}) - expect).norm() < 1e-12);
    }

    // graded antisymmetry and the odd-degree self-bracket
    for (int t = 0; t < 6; ++t) {
        int u = rng.uniform_int(0, 3), v = rng.uniform_int(0, 3);
        if (u == 0 && v == 0)
            u = 2;
        Cochain U = Cochain::random(m2, u, rng);
        Cochain V = Cochain::random(m2, v, rng);
        Cochain uv = gerstenhaber(U, V);
        Cochain vu = gerstenhaber(V, U) * Complex(parity_sign(long(u - 1) * (v - 1)));
        CHECK(rel_residual((uv + vu).sup_norm(), uv.sup_norm()) < 1e-13);
    }
    Cochain U1 = Cochain::random(m2, 1, rng);
    CHECK(gerstenhaber(U1, U1).sup_norm() < 1e-13);
    Cochain U3 = Cochain::random(m2, 3, rng);
    CHECK(rel_residual(gerstenhaber(U3, U3).sup_norm(), U3.sup_norm()) < 1e-13);
}

TEST_CASE("coboundary solving")
{
    auto m2 = matrix_algebra(2);
    Rng rng(47);

    // constructed coboundaries are recovered
    for (int deg = 1; deg <= 2; ++deg) {
        Cochain c0 = Cochain::random(m2, deg, rng);
        Cochain w = differential(c0);
        auto sol = solve_coboundary(w);
        REQUIRE(sol.witness.has_value());
        CHECK(sol.residual < 1e-10);
        CHECK(rel_residual((differential(*sol.witness) - w).sup_norm(), w.sup_norm()) <
              1e-9);
    }

    // zero cochain: zero witness
    auto zsol = solve_coboundary(Cochain(m2, 2));
    REQUIRE(zsol.witness.has_value());
    CHECK(zsol.witness->sup_norm() == 0.0);
    CHECK(zsol.residual == 0.0);

    // any 2-cocycle over M2 is a coboundary (H^2 = 0): project a random
    // 2-cochain onto the kernel of b_2 and solve
    Matrix b2 = differential_matrix(m2, 2);
    Eigen::BDCSVD<Matrix> svd(b2, Eigen::ComputeFullV);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > svd.singularValues()[0] * 1e-9)
            ++rank;
    Cochain raw = Cochain::random(m2, 2, rng);
    Vector coef = svd.matrixV().rightCols(svd.matrixV().cols() - rank).adjoint() * raw.tensor();
    Vector cocycle = svd.matrixV().rightCols(svd.matrixV().cols() - rank) * coef;
    Cochain z(m2, 2, cocycle);
    CHECK((b2 * z.tensor()).norm() < 1e-9); // really a cocycle
    auto sol = solve_coboundary(z);
    CHECK(sol.residual < 1e-9);
    CHECK(sol.witness.has_value());

    CHECK_THROWS_AS(solve_coboundary(Cochain::from_element(m2.unit())),
                    std::invalid_argument);
}

TEST_CASE("cohomology dimensions")
{
    auto m2 = matrix_algebra(2);
    CHECK(cohomology_dimension(m2, 0) == 1);
    CHECK(cohomology_dimension(m2, 1) == 0);
    CHECK(cohomology_dimension(m2, 2) == 0);

    auto ct3 = truncated_polynomial_algebra(3);
    CHECK(cohomology_dimension(ct3, 0) == 3);
    // derivations p(t) d/dt with p(0) = 0, none of them inner
    CHECK(cohomology_dimension(ct3, 1) == 2);

    // size guard
    auto m3 = matrix_algebra(3);
    CHECK(cohomology_dimension(m3, 1) == 0);
    CHECK_THROWS_AS(cohomology_dimension(m3, 2), std::invalid_argument);
    CHECK_THROWS_AS(cohomology_dimension(m2, 4), std::invalid_argument);
}

TEST_CASE("cochain json round trip")
{
    auto m2 = matrix_algebra(2);
    Rng rng(53);
    Cochain c = Cochain::random(m2, 2, rng);
    nlohmann::json j = c.to_json();
    CHECK(j["degree"] == 2);
    Cochain back = Cochain::from_json(j, m2);
    CHECK((back - c).sup_norm() == 0.0);
}
