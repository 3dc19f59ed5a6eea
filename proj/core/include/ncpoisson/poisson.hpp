#pragma once

#include "ncpoisson/hochschild.hpp"

#include <functional>
#include <optional>

namespace ncpoisson {

/// Restriction predicate on basis triples, used by truncated models whose
/// product is only exact on bounded supports. Empty = all triples.
using TripleFilter = std::function<bool(int, int, int)>;

/// Noncommutative Poisson structure: a 2-cochain satisfying the cocycle
/// (Leibniz) identity, with an optional 2-cochain witnessing that its
/// Jacobi defect is a coboundary.
struct PoissonStructure
{
    Cochain pi;
    std::optional<Cochain> pi1;
};

/// Sup over (filtered) basis triples of the cocycle identity
///   a1 P(a2,a3) - P(a1 a2, a3) + P(a1, a2 a3) - P(a1,a2) a3,
/// relative to the size of the four terms.
double check_leibniz(const Cochain& pi, const TripleFilter& filter = {});

/// Sup over (filtered) basis triples of
///   P(a1,P(a2,a3)) - P(P(a1,a2),a3) - [the coboundary of pi1],
/// i.e. the Jacobi defect of pi against the witness pi1.
double check_jacobi_witness(const Cochain& pi, const Cochain& pi1,
                            const TripleFilter& filter = {});

/// The Jacobi defect J(a1,a2,a3) = P(a1,P(a2,a3)) - P(P(a1,a2),a3) as a
/// 3-cochain. Coefficientwise equal to -1/2 [pi,pi].
Cochain jacobi_defect(const Cochain& pi);

/// Solve b(pi1) = J for a minimum-norm witness. Requires pi to pass the
/// cocycle check first; a large residual means pi is not Poisson.
CoboundarySolve solve_jacobi_witness(const Cochain& pi, double tol = 1e-9);

/// Hamiltonian derivation X_c = 1/2 [pi, c] of a central element c,
/// returned as a 1-cochain; X_c(a) = 1/2 (P(c,a) - P(a,c)). Checks that c
/// is central and that the result passes the Leibniz test.
Cochain hamiltonian_derivation(const Cochain& pi, const AlgebraElement& c);

/// Bracket on the center: {c,e} = X_c(e). Checks centrality of the inputs
/// and of the result, and antisymmetry against {e,c}.
AlgebraElement center_bracket(const Cochain& pi, const AlgebraElement& c,
                              const AlgebraElement& e);

/// The three properties of a Hamiltonian derivation pair, reported as
/// residuals:
///  (i)  [X_c, pi] is a 2-coboundary (the Lie derivative of pi along X_c
///       vanishes at the cohomology level),
///  (ii) [X_c, X_e] + X_{c,e} is an inner derivation,
///  (iii) {.,.} satisfies the Jacobi identity on a basis of the center.
struct PropositionReport
{
    double lie_derivative_coboundary;
    double bracket_compatibility;
    double center_jacobi;
};

PropositionReport check_proposition(const PoissonStructure& P, const AlgebraElement& c,
                                    const AlgebraElement& e);

/// 1-cochain as a matrix acting on coefficient vectors.
Matrix cochain_as_matrix(const Cochain& x);

} // namespace ncpoisson
