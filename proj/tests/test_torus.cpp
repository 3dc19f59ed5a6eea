#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpoisson/torus.hpp"

#include <nlohmann/json.hpp>

using namespace ncpoisson;

namespace {
const double kTheta = 0.6180339887498949;
}

TEST_CASE("defining relation and unit")
{
    int N = 8;
    TorusElement U = TorusElement::u(kTheta, N);
    TorusElement V = TorusElement::v(kTheta, N);

    TorusElement vu = multiply(V, U);
    Complex phase = std::exp(Complex(0.0, 2.0 * kPi * kTheta));
    CHECK(std::abs(vu.coeff(1, 1) - phase) < 1e-15);
    CHECK(vu.exact());

    TorusElement one = TorusElement::unit(kTheta, N);
    Rng rng(5);
    TorusElement a = TorusElement::random(kTheta, N, 3, rng);
    CHECK((multiply(one, a) - a).sup_norm() < 1e-15);
    CHECK((multiply(a, one) - a).sup_norm() < 1e-15);
}

TEST_CASE("truncation clears the exactness flag")
{
    int N = 4;
    TorusElement a = TorusElement::monomial(kTheta, N, 3, 0);
    TorusElement b = TorusElement::monomial(kTheta, N, 2, 0);
    TorusElement ab = multiply(a, b); // mode 5 falls outside
    CHECK_FALSE(ab.exact());
    CHECK(ab.sup_norm() == 0.0);

    TorusElement c = TorusElement::monomial(kTheta, N, 1, 1);
    CHECK(multiply(c, c).exact());
}

TEST_CASE("associativity on safe supports")
{
    int N = 9;
    Rng rng(7);
    for (int t = 0; t < 10; ++t) {
        TorusElement a = TorusElement::random(kTheta, N, 3, rng);
        TorusElement b = TorusElement::random(kTheta, N, 3, rng);
        TorusElement c = TorusElement::random(kTheta, N, 3, rng);
        TorusElement lhs = multiply(multiply(a, b), c);
        TorusElement rhs = multiply(a, multiply(b, c));
        CHECK(lhs.exact());
        CHECK(rhs.exact());
        CHECK(rel_residual((lhs - rhs).sup_norm(), lhs.sup_norm()) < 1e-12);
    }
}

TEST_CASE("derivations")
{
    int N = 8;
    TorusElement U = TorusElement::u(kTheta, N);
    TorusElement d1u = delta1(U);
    CHECK(std::abs(d1u.coeff(1, 0) - Complex(0.0, 2.0 * kPi)) < 1e-15);
    CHECK(delta1(TorusElement::unit(kTheta, N)).sup_norm() == 0.0);

    Rng rng(9);
    TorusElement a = TorusElement::random(kTheta, N, 4, rng);
    CHECK((delta1(delta2(a)) - delta2(delta1(a))).sup_norm() < 1e-13);

    // Leibniz over the twisted product on safe supports
    TorusElement b = TorusElement::random(kTheta, N, 4, rng);
    TorusElement lhs = delta1(multiply(a, b));
    TorusElement rhs = multiply(delta1(a), b) + multiply(a, delta1(b));
    CHECK(rel_residual((lhs - rhs).sup_norm(), lhs.sup_norm()) < 1e-13);
}

TEST_CASE("canonical poisson structure values")
{
    int N = 6;
    TorusElement U = TorusElement::u(kTheta, N);
    TorusElement V = TorusElement::v(kTheta, N);
    TorusElement UV = multiply(U, V);

    // P(U,V) = (2 pi i)^2 UV = -4 pi^2 UV
    TorusElement p = canonical_poisson(U, V);
    CHECK((p + UV * Complex(4.0 * kPi * kPi)).sup_norm() < 1e-12);

    // P1(U,V) = -1/2 (2 pi i)^2 (2 pi i)^2 UV = -8 pi^4 UV
    TorusElement w = canonical_witness(U, V);
    CHECK(rel_residual((w + UV * Complex(8.0 * std::pow(kPi, 4))).sup_norm(),
                       8.0 * std::pow(kPi, 4)) < 1e-14);

    Rng rng(11);
    TorusElement a = TorusElement::random(kTheta, N, 2, rng);
    CHECK(canonical_poisson(TorusElement::unit(kTheta, N), a).sup_norm() == 0.0);
    CHECK(canonical_witness(TorusElement::unit(kTheta, N), a).sup_norm() == 0.0);
}

TEST_CASE("cocycle and jacobi identities on random safe triples")
{
    int N = 12;
    Rng rng(13);
    for (int t = 0; t < 10; ++t) {
        TorusElement a1 = TorusElement::random(kTheta, N, N / 3, rng);
        TorusElement a2 = TorusElement::random(kTheta, N, N / 3, rng);
        TorusElement a3 = TorusElement::random(kTheta, N, N / 3, rng);

        TorusElement r = multiply(a1, canonical_poisson(a2, a3)) -
                         canonical_poisson(multiply(a1, a2), a3) +
                         canonical_poisson(a1, multiply(a2, a3)) -
                         multiply(canonical_poisson(a1, a2), a3);
        CHECK(rel_residual(r.sup_norm(), canonical_poisson(a2, a3).sup_norm()) < 1e-12);
    }
    for (int t = 0; t < 10; ++t) {
        TorusElement a1 = TorusElement::random(kTheta, N, N / 4, rng);
        TorusElement a2 = TorusElement::random(kTheta, N, N / 4, rng);
        TorusElement a3 = TorusElement::random(kTheta, N, N / 4, rng);
        TorusElement lhs = canonical_poisson(a1, canonical_poisson(a2, a3)) -
                           canonical_poisson(canonical_poisson(a1, a2), a3);
        TorusElement rhs = multiply(a1, canonical_witness(a2, a3)) -
                           canonical_witness(multiply(a1, a2), a3) +
                           canonical_witness(a1, multiply(a2, a3)) -
                           multiply(canonical_witness(a1, a2), a3);
        CHECK(rel_residual((lhs - rhs).sup_norm(), lhs.sup_norm()) < 1e-10);
    }
}

TEST_CASE("seminorms")
{
    int N = 8;
    TorusElement U = TorusElement::u(kTheta, N);
    TorusElement V = TorusElement::v(kTheta, N);
    CHECK(seminorm(U, 0) == doctest::Approx(1.0));
    CHECK(seminorm(multiply(U, V), 1) == doctest::Approx(2.0));
    CHECK(seminorm(TorusElement(kTheta, N), 5) == 0.0);
    CHECK_THROWS_AS(seminorm(U, -1), std::invalid_argument);
}

TEST_CASE("parameter mismatches are rejected")
{
    TorusElement a(kTheta, 4);
    TorusElement b(kTheta, 5);
    TorusElement c(0.25, 4);
    CHECK_THROWS_AS(multiply(a, b), std::invalid_argument);
    CHECK_THROWS_AS(multiply(a, c), std::invalid_argument);
    CHECK_THROWS_AS(a + b, std::invalid_argument);
}

TEST_CASE("json round trip")
{
    int N = 5;
    Rng rng(17);
    TorusElement a = TorusElement::random(kTheta, N, 3, rng);
    nlohmann::json j = a.to_json();
    TorusElement back = TorusElement::from_json(j, kTheta, N);
    CHECK((back - a).sup_norm() == 0.0);
}

TEST_CASE("delta1 is a derivation of the truncated algebra")
{
    // the diagonal mode action commutes with the truncation, so the
    // Leibniz identity holds on every basis pair, dropped modes included
    TorusEmbedding emb = embed_as_finite_algebra(kTheta, 2);
    int dim = emb.algebra->dim();
    int side = 2 * emb.n_small + 1;
    Matrix d1 = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        d1(i, i) = Complex(0.0, 2.0 * kPi * (i / side - emb.n_small));
    auto chk = emb.algebra->is_derivation(d1, 1e-12);
    CHECK(chk.is_derivation);
    CHECK(chk.residual < 1e-12);
}

TEST_CASE("finite embedding")
{
    CHECK_THROWS_AS(embed_as_finite_algebra(kTheta, 4), std::invalid_argument);
    CHECK_THROWS_AS(embed_as_finite_algebra(kTheta, 0), std::invalid_argument);

    // theta = 0: the truncated product is commutative, the whole algebra
    // is central
    TorusEmbedding flat = embed_as_finite_algebra(0.0, 1);
    CHECK(flat.algebra->center().size() == 9);

    // irrational theta: only scalars commute on safe supports
    TorusEmbedding emb = embed_as_finite_algebra(std::sqrt(2.0) - 1.0, 3);
    CHECK(emb.central_safe_dimension(1, 2) == 1);

    // safe-triple residuals reproduce the canonical identities
    CHECK(emb.leibniz_residual_safe() < 1e-12);
    CHECK(emb.jacobi_residual_safe() < 1e-10);

    // cross-check one safe basis pair against the torus-native operation
    int side = 2 * emb.n_small + 1;
    auto to_modes = [&](int idx) {
        return std::pair<int, int>(idx / side - emb.n_small, idx % side - emb.n_small);
    };
    int iu = (1 + emb.n_small) * side + (0 + emb.n_small); // U
    int iv = (0 + emb.n_small) * side + (1 + emb.n_small); // V
    auto [nu, mu] = to_modes(iu);
    auto [nv, mv] = to_modes(iv);
    TorusElement tu = TorusElement::monomial(emb.theta, emb.n_small, nu, mu);
    TorusElement tv = TorusElement::monomial(emb.theta, emb.n_small, nv, mv);
    TorusElement want = canonical_poisson(tu, tv);
    Vector got = emb.pi.value_on_basis(static_cast<std::size_t>(iu) * side * side + iv);
    double worst = 0.0;
    for (int n = -emb.n_small; n <= emb.n_small; ++n)
        for (int m = -emb.n_small; m <= emb.n_small; ++m) {
            int k = (n + emb.n_small) * side + (m + emb.n_small);
            worst = std::max(worst, std::abs(got[k] - want.coeff(n, m)));
        }
    CHECK(worst < 1e-12);
}
