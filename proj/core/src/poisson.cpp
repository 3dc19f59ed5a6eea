#include "ncpoisson/poisson.hpp"

#include <cmath>

namespace ncpoisson {

namespace {

constexpr double kCentralTol = 1e-10;

// P evaluated with a general coefficient vector in one slot and a basis
// index in the other; P2 is the tensor of a 2-cochain.
Vector eval_left(const Cochain& P2, const Vector& a, int j)
{
    int d = P2.algebra().dim();
    Vector out = Vector::Zero(d);
    for (int m = 0; m < d; ++m)
        if (a[m] != Complex(0.0))
            out += a[m] * P2.value_on_basis(static_cast<std::size_t>(m) * d + j);
    return out;
}

Vector eval_right(const Cochain& P2, int i, const Vector& a)
{
    int d = P2.algebra().dim();
    Vector out = Vector::Zero(d);
    for (int m = 0; m < d; ++m)
        if (a[m] != Complex(0.0))
            out += a[m] * P2.value_on_basis(static_cast<std::size_t>(i) * d + m);
    return out;
}

// Four-term coboundary combination of a 2-cochain on a basis triple:
// a_i w(e_j,e_k) - w(e_i e_j, e_k) + w(e_i, e_j e_k) - w(e_i,e_j) a_k.
Vector coboundary_terms(const Cochain& w, int i, int j, int k, double& scale)
{
    const StructureConstantAlgebra& A = w.algebra();
    int d = A.dim();
    Vector t1 = A.left_matrix(i) * w.value_on_basis(static_cast<std::size_t>(j) * d + k);
    Vector t2 = Vector::Zero(d), t3 = Vector::Zero(d);
    for (int m = 0; m < d; ++m) {
        Complex cij = A.structure_constant(i, j, m);
        if (cij != Complex(0.0))
            t2 += cij * w.value_on_basis(static_cast<std::size_t>(m) * d + k);
        Complex cjk = A.structure_constant(j, k, m);
        if (cjk != Complex(0.0))
            t3 += cjk * w.value_on_basis(static_cast<std::size_t>(i) * d + m);
    }
    Vector t4 = A.right_matrix(k) * w.value_on_basis(static_cast<std::size_t>(i) * d + j);
    scale = std::max({t1.norm(), t2.norm(), t3.norm(), t4.norm()});
    return t1 - t2 + t3 - t4;
}

} // namespace

double check_leibniz(const Cochain& pi, const TripleFilter& filter)
{
    if (pi.degree() != 2)
        throw std::invalid_argument("check_leibniz expects a 2-cochain");
    int d = pi.algebra().dim();
    double worst = 0.0, scale = 1.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                if (filter && !filter(i, j, k))
                    continue;
                double s;
                Vector r = coboundary_terms(pi, i, j, k, s);
                worst = std::max(worst, r.norm());
                scale = std::max(scale, s);
            }
    return rel_residual(worst, scale);
}

double check_jacobi_witness(const Cochain& pi, const Cochain& pi1, const TripleFilter& filter)
{
    if (pi.degree() != 2 || pi1.degree() != 2)
        throw std::invalid_argument("check_jacobi_witness expects 2-cochains");
    if (&pi.algebra() != &pi1.algebra())
        throw std::invalid_argument("mismatched algebras");
    int d = pi.algebra().dim();
    double worst = 0.0, scale = 1.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                if (filter && !filter(i, j, k))
                    continue;
                Vector inner = pi.value_on_basis(static_cast<std::size_t>(j) * d + k);
                Vector lhs = eval_right(pi, i, inner);
                Vector outer = pi.value_on_basis(static_cast<std::size_t>(i) * d + j);
                lhs -= eval_left(pi, outer, k);
                double s;
                Vector rhs = coboundary_terms(pi1, i, j, k, s);
                worst = std::max(worst, (lhs - rhs).norm());
                scale = std::max({scale, s, lhs.norm()});
            }
    return rel_residual(worst, scale);
}

Cochain jacobi_defect(const Cochain& pi)
{
    const StructureConstantAlgebra& A = pi.algebra();
    int d = A.dim();
    Cochain J(A, 3);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                Vector inner = pi.value_on_basis(static_cast<std::size_t>(j) * d + k);
                Vector v = eval_right(pi, i, inner);
                Vector outer = pi.value_on_basis(static_cast<std::size_t>(i) * d + j);
                v -= eval_left(pi, outer, k);
                std::size_t flat = (static_cast<std::size_t>(i) * d + j) * d + k;
                J.tensor().segment(static_cast<Eigen::Index>(flat) * d, d) = v;
            }
    return J;
}

CoboundarySolve solve_jacobi_witness(const Cochain& pi, double tol)
{
    double leib = check_leibniz(pi);
    if (leib > 1e-10)
        throw std::invalid_argument("solve_jacobi_witness: pi fails the cocycle identity, residual = " +
                                    std::to_string(leib));
    Cochain J = jacobi_defect(pi);

    // internal sign consistency: J = -1/2 [pi,pi]
    Cochain diff = J + gerstenhaber(pi, pi) * Complex(0.5);
    double consistency = rel_residual(diff.sup_norm(), J.sup_norm());
    if (consistency > 1e-12)
        throw std::logic_error("jacobi defect disagrees with -1/2 [pi,pi]");

    return solve_coboundary(J, tol);
}

Matrix cochain_as_matrix(const Cochain& x)
{
    if (x.degree() != 1)
        throw std::invalid_argument("cochain_as_matrix expects a 1-cochain");
    int d = x.algebra().dim();
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        m.col(i) = x.value_on_basis(static_cast<std::size_t>(i));
    return m;
}

Cochain hamiltonian_derivation(const Cochain& pi, const AlgebraElement& c)
{
    const StructureConstantAlgebra& A = pi.algebra();
    if (&c.algebra() != &A)
        throw std::invalid_argument("mismatched algebras");
    if (A.centrality_residual(c.coeffs()) > kCentralTol)
        throw std::invalid_argument("hamiltonian_derivation: element is not central");

    int d = A.dim();
    Cochain X(A, 1);
    for (int i = 0; i < d; ++i) {
        Vector v = 0.5 * (eval_left(pi, c.coeffs(), i) - eval_right(pi, i, c.coeffs()));
        X.tensor().segment(static_cast<Eigen::Index>(i) * d, d) = v;
    }

    auto check = A.is_derivation(cochain_as_matrix(X), 1e-9);
    if (!check.is_derivation)
        throw std::logic_error("hamiltonian derivation fails the Leibniz test, residual = " +
                               std::to_string(check.residual));
    return X;
}

AlgebraElement center_bracket(const Cochain& pi, const AlgebraElement& c,
                              const AlgebraElement& e)
{
    const StructureConstantAlgebra& A = pi.algebra();
    if (&c.algebra() != &A || &e.algebra() != &A)
        throw std::invalid_argument("mismatched algebras");
    if (A.centrality_residual(c.coeffs()) > kCentralTol ||
        A.centrality_residual(e.coeffs()) > kCentralTol)
        throw std::invalid_argument("center_bracket: inputs must be central");

    auto bracket = [&](const Vector& x, const Vector& y) {
        Vector pxy = Vector::Zero(A.dim());
        Vector pyx = Vector::Zero(A.dim());
        for (int i = 0; i < A.dim(); ++i) {
            if (y[i] != Complex(0.0))
                pxy += y[i] * eval_left(pi, x, i);
            if (x[i] != Complex(0.0))
                pyx += x[i] * eval_left(pi, y, i);
        }
        return Vector(0.5 * (pxy - pyx));
    };

    Vector ce = bracket(c.coeffs(), e.coeffs());
    Vector ec = bracket(e.coeffs(), c.coeffs());

    double scale = std::max(ce.norm(), ec.norm());
    if (rel_residual((ce + ec).norm(), scale) > 1e-12)
        throw std::logic_error("center bracket is not antisymmetric");
    if (A.centrality_residual(ce) > 1e-9)
        throw std::logic_error("center bracket left the center");
    return A.element(ce);
}

PropositionReport check_proposition(const PoissonStructure& P, const AlgebraElement& c,
                                    const AlgebraElement& e)
{
    const StructureConstantAlgebra& A = P.pi.algebra();
    Cochain Xc = hamiltonian_derivation(P.pi, c);
    Cochain Xe = hamiltonian_derivation(P.pi, e);

    PropositionReport rep{};

    // (i) [X_c, pi] is a coboundary
    Cochain lx_pi = gerstenhaber(Xc, P.pi);
    rep.lie_derivative_coboundary = solve_coboundary(lx_pi, 1e-9).residual;

    // (ii) [X_c, X_e] + X_{c,e} inner
    AlgebraElement ce = center_bracket(P.pi, c, e);
    Cochain Xce = hamiltonian_derivation(P.pi, ce);
    Matrix D = cochain_as_matrix(Xc) * cochain_as_matrix(Xe) -
               cochain_as_matrix(Xe) * cochain_as_matrix(Xc) + cochain_as_matrix(Xce);
    rep.bracket_compatibility = A.solve_inner_derivation(D).residual;

    // (iii) Jacobi for {.,.} on a center basis
    auto basis = A.center();
    double worst = 0.0, scale = 1.0;
    auto raw_bracket = [&](const AlgebraElement& x, const AlgebraElement& y) {
        Vector pxy = Vector::Zero(A.dim()), pyx = Vector::Zero(A.dim());
        for (int i = 0; i < A.dim(); ++i) {
            if (y.coeffs()[i] != Complex(0.0))
                pxy += y.coeffs()[i] * eval_left(P.pi, x.coeffs(), i);
            if (x.coeffs()[i] != Complex(0.0))
                pyx += x.coeffs()[i] * eval_left(P.pi, y.coeffs(), i);
        }
        return A.element(0.5 * (pxy - pyx));
    };
    for (const auto& a : basis)
        for (const auto& b : basis)
            for (const auto& g : basis) {
                AlgebraElement j1 = raw_bracket(a, raw_bracket(b, g));
                AlgebraElement j2 = raw_bracket(b, raw_bracket(g, a));
                AlgebraElement j3 = raw_bracket(g, raw_bracket(a, b));
                Vector sum = j1.coeffs() + j2.coeffs() + j3.coeffs();
                worst = std::max(worst, sum.norm());
                scale = std::max({scale, j1.norm(), j2.norm(), j3.norm()});
            }
    rep.center_jacobi = rel_residual(worst, scale);
    return rep;
}

} // namespace ncpoisson
