#pragma once

#include "ncpoisson/algebra.hpp"

#include <nlohmann/json_fwd.hpp>
#include <optional>

namespace ncpoisson {

/// Hochschild k-cochain on a structure-constant algebra, stored as the
/// dense coefficient tensor T with
///   c(e_{i1},...,e_{ik}) = sum_j T[i1,...,ik][j] e_j,
/// flattened tuple-major with the output index j fastest. A degree-0
/// cochain is an algebra element.
class Cochain
{
public:
    Cochain(const StructureConstantAlgebra& algebra, int degree);
    Cochain(const StructureConstantAlgebra& algebra, int degree, Vector tensor);

    static Cochain from_element(const AlgebraElement& a);
    /// The multiplication 2-cochain mu(a,b) = ab.
    static Cochain multiplication(const StructureConstantAlgebra& algebra);
    static Cochain random(const StructureConstantAlgebra& algebra, int degree, Rng& rng);

    const StructureConstantAlgebra& algebra() const { return *algebra_; }
    int degree() const { return degree_; }
    const Vector& tensor() const { return tensor_; }
    Vector& tensor() { return tensor_; }
    Eigen::Index tensor_size() const { return tensor_.size(); }

    /// Number of basis tuples dim^degree.
    std::size_t tuple_count() const;

    Complex coeff(const std::vector<int>& tuple, int j) const;
    void set_coeff(const std::vector<int>& tuple, int j, Complex v);

    /// Value on a basis tuple as a coefficient vector over the output index.
    Vector value_on_basis(std::size_t flat_tuple) const;

    AlgebraElement evaluate(const std::vector<AlgebraElement>& args) const;

    double sup_norm() const { return tensor_.size() ? tensor_.cwiseAbs().maxCoeff() : 0.0; }

    Cochain operator+(const Cochain& o) const;
    Cochain operator-(const Cochain& o) const;
    Cochain operator*(Complex s) const;

    nlohmann::json to_json() const;
    static Cochain from_json(const nlohmann::json& j, const StructureConstantAlgebra& algebra);

private:
    const StructureConstantAlgebra* algebra_;
    int degree_;
    Vector tensor_;
};

/// Hochschild differential b : C^k -> C^{k+1},
///   (bc)(a_1,..,a_{k+1}) = a_1 c(a_2,..,a_{k+1})
///     + sum_{i=1..k} (-1)^i c(a_1,.., a_i a_{i+1}, .., a_{k+1})
///     + (-1)^{k+1} c(a_1,..,a_k) a_{k+1}.
/// The trailing sign is the one that makes b∘b = 0, b(mu) = 0 and
/// ker(b_0) the center.
Cochain differential(const Cochain& c);

/// Pre-Lie product U*V of cochains of degrees u >= 1 and v >= 0:
///   (U*V)(a_1,..,a_{u+v-1}) =
///     sum_{i=1..u} (-1)^{(i-1)(v-1)} U(a_1,..,a_{i-1}, V(a_i,..,a_{i+v-1}), ..).
/// For u = 0 the sum is empty: the zero cochain of degree v-1 is returned
/// (v >= 1); u = v = 0 is rejected.
Cochain pre_lie(const Cochain& U, const Cochain& V);

/// Gerstenhaber bracket [U,V] = U*V - (-1)^{(u-1)(v-1)} V*U.
Cochain gerstenhaber(const Cochain& U, const Cochain& V);

struct CoboundarySolve
{
    std::optional<Cochain> witness; // minimum-norm c with b(c) ~ w
    double residual;                // relative to |w|
};

/// Least-squares solve of b(c) = w over C^{k-1}. Returns a witness when the
/// residual is within tol, otherwise only the attained residual.
CoboundarySolve solve_coboundary(const Cochain& w, double tol = 1e-9);

/// Matrix of b_k on coefficient space (columns indexed by C^k entries).
Matrix differential_matrix(const StructureConstantAlgebra& algebra, int k);

/// dim H^k(A,A) via rank-revealing factorizations with singular value
/// cutoff 1e-9 * sigma_max. Guarded: k <= 3 and the b_k matrix must stay
/// under 2e5 entries.
int cohomology_dimension(const StructureConstantAlgebra& algebra, int k);

} // namespace ncpoisson
