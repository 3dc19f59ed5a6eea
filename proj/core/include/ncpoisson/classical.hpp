#pragma once

#include "ncpoisson/common.hpp"

#include <nlohmann/json_fwd.hpp>
#include <functional>
#include <optional>
#include <string>

namespace ncpoisson {

/// Pointwise-callable fields; all derivatives are 4th-order central
/// differences with a configurable step.
using ScalarField = std::function<double(const RealVector&)>;
using VectorField = std::function<RealVector(const RealVector&)>;
using BivectorField = std::function<RealMatrix(const RealVector&)>;
/// x -> Gamma[k](i,j), the Christoffel symbols of a torsion-free connection.
using ChristoffelField = std::function<std::vector<RealMatrix>(const RealVector&)>;

constexpr double kDefaultFdStep = 1e-3;

double partial(const ScalarField& f, const RealVector& x, int i, double h = kDefaultFdStep);
double second_partial(const ScalarField& f, const RealVector& x, int i, int j,
                      double h = kDefaultFdStep);
RealVector gradient(const ScalarField& f, const RealVector& x, double h = kDefaultFdStep);

/// {f,g}(x) = sum_ij Lambda^{ij} d_i f d_j g.
double poisson_bracket(const ScalarField& f, const ScalarField& g, const BivectorField& lambda,
                       const RealVector& x, double h = kDefaultFdStep);

/// The cyclic obstruction
///   sum_a (L^{ai} d_a L^{jk} + L^{aj} d_a L^{ki} + L^{ak} d_a L^{ij});
/// Lambda is Poisson iff this vanishes for all index triples.
double schouten_jacobiator(const BivectorField& lambda, int i, int j, int k,
                           const RealVector& x, double h = kDefaultFdStep);

/// X_f^j = sum_i Lambda^{ij} d_i f, so that X_f g = {f,g}.
VectorField hamiltonian_vector_field(const ScalarField& f, const BivectorField& lambda,
                                     double h = kDefaultFdStep);

struct Trajectory
{
    std::vector<double> times;
    std::vector<RealVector> states;
    double conserved_drift = 0.0; // max |Q(x_t) - Q(x_0)| / max(1, |Q(x_0)|)
};

/// Classical fixed-step 4th-order one-step integration of dx/dt = X(x).
Trajectory integrate_flow(const VectorField& X, const RealVector& x0, double T, double dt,
                          const ScalarField* conserved = nullptr);

/// (nabla^2 f)_ij = d_i d_j f - sum_k Gamma^k_ij d_k f; requires a
/// torsion-free (symmetric) connection and returns a symmetric matrix.
RealMatrix hessian_with_connection(const ScalarField& f, const ChristoffelField& gamma,
                                   const RealVector& x, double h = kDefaultFdStep);

/// The pairing Lambda^{ij} Lambda^{kl} (nabla^2 f)_{ik} (nabla^2 g)_{jl}.
double classical_pi1(const ScalarField& f, const ScalarField& g, const BivectorField& lambda,
                     const ChristoffelField& gamma, const RealVector& x,
                     double h = kDefaultFdStep);

/// Compares the Jacobi defect {f,{g,w}} - {{f,g},w} against the
/// coboundary combination of classical_pi1, fitting the witness
/// normalization constant by least squares over the sample points (the
/// expected fit is -1/2).
struct ClassicalJacobiFit
{
    double fitted_constant;
    double residual; // with the fitted constant, relative sup over samples
};

ClassicalJacobiFit classical_jacobi_fit(const ScalarField& f, const ScalarField& g,
                                        const ScalarField& w, const BivectorField& lambda,
                                        const ChristoffelField& gamma,
                                        const std::vector<RealVector>& points,
                                        double h = kDefaultFdStep);

ChristoffelField flat_connection(int dim);

/// Named classical systems for the CLI: canonical2d, harmonic, so3star,
/// userpolynomial (coefficients supplied as JSON).
struct ClassicalSystem
{
    std::string name;
    int dim;
    BivectorField lambda;
    ScalarField hamiltonian;
    std::optional<ScalarField> casimir; // conserved quantity for flow demos
};

ClassicalSystem make_system(const std::string& name,
                            const nlohmann::json* user_config = nullptr);

/// Polynomial from {"dim": d, "terms": [{"coeff": c, "powers": [e_1..e_d]}]}.
ScalarField polynomial_field(const nlohmann::json& definition);

} // namespace ncpoisson
