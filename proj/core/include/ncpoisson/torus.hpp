#pragma once

#include "ncpoisson/hochschild.hpp"

#include <nlohmann/json_fwd.hpp>
#include <memory>

namespace ncpoisson {

/// Element of the truncated noncommutative two-torus: finitely supported
/// Fourier coefficients a_{nm} over modes (n,m) in [-N,N]^2, representing
/// sum a_{nm} U^n V^m with V U = e^{2 pi i theta} U V. The exactness flag
/// records whether any product has dropped modes outside the box.
class TorusElement
{
public:
    TorusElement(double theta, int truncation);

    static TorusElement unit(double theta, int truncation);
    static TorusElement u(double theta, int truncation);
    static TorusElement v(double theta, int truncation);
    static TorusElement monomial(double theta, int truncation, int n, int m,
                                 Complex coeff = Complex(1.0));
    /// Dense random coefficients on modes with |n|+|m| <= max_radius.
    static TorusElement random(double theta, int truncation, int max_radius, Rng& rng);

    double theta() const { return theta_; }
    int truncation() const { return N_; }
    bool exact() const { return exact_; }
    int support_radius() const { return support_radius_; }

    Complex coeff(int n, int m) const { return coeffs_[index(n, m)]; }
    void set_coeff(int n, int m, Complex v);

    double sup_norm() const;

    TorusElement operator+(const TorusElement& o) const;
    TorusElement operator-(const TorusElement& o) const;
    TorusElement operator*(Complex s) const;

    nlohmann::json to_json() const;
    static TorusElement from_json(const nlohmann::json& j, double theta, int truncation);

    friend TorusElement multiply(const TorusElement& a, const TorusElement& b);
    friend TorusElement delta1(const TorusElement& a);
    friend TorusElement delta2(const TorusElement& a);

private:
    int index(int n, int m) const
    {
        int side = 2 * N_ + 1;
        return (n + N_) * side + (m + N_);
    }
    void refresh_support_radius();
    void check_compatible(const TorusElement& o) const;

    double theta_;
    int N_;
    Vector coeffs_; // (2N+1)^2, row-major over (n, m)
    bool exact_ = true;
    int support_radius_ = 0;
};

/// Twisted product: (U^n V^m)(U^n' V^m') = e^{2 pi i theta m n'} U^{n+n'} V^{m+m'}.
TorusElement multiply(const TorusElement& a, const TorusElement& b);

/// The two canonical derivations delta1(U^nV^m) = 2 pi i n U^nV^m,
/// delta2(U^nV^m) = 2 pi i m U^nV^m.
TorusElement delta1(const TorusElement& a);
TorusElement delta2(const TorusElement& a);

/// Canonical Poisson structure P(a,b) = delta1(a) delta2(b).
TorusElement canonical_poisson(const TorusElement& a, const TorusElement& b);

/// Its Jacobi witness P1(a,b) = -1/2 delta1^2(a) delta2^2(b). The -1/2 is
/// the normalization under which the Jacobi defect of P equals the
/// coboundary of P1 (pinned by the residual tests).
TorusElement canonical_witness(const TorusElement& a, const TorusElement& b);

/// Seminorm p_k(a) = sup (|n|+|m|)^k |a_{nm}|.
double seminorm(const TorusElement& a, int k);

/// The truncated torus as a structure-constant algebra (dimension
/// (2*n_small+1)^2). The truncated product is associative only away from
/// the mode boundary, so the algebra is built without the associativity
/// check, and generic identity checks must be restricted to safe triples:
/// basis triples whose support radii sum to at most n_small.
struct TorusEmbedding
{
    std::unique_ptr<StructureConstantAlgebra> algebra;
    Cochain pi;   // canonical Poisson structure, truncated to the box
    Cochain pi1;  // its witness, truncated to the box
    double theta;
    int n_small;

    int radius_of(int basis_index) const;
    bool safe_triple(int i, int j, int k) const;

    /// Cocycle / Jacobi-witness residuals over safe triples only.
    double leibniz_residual_safe() const;
    double jacobi_residual_safe() const;

    /// Dimension of {x supported on radius <= x_radius : [x, e_j] = 0 for
    /// all e_j with radius <= probe_radius}. Requires
    /// x_radius + probe_radius <= n_small so every commutator is exact.
    int central_safe_dimension(int x_radius, int probe_radius) const;
};

/// Build the embedding; n_small <= 3.
TorusEmbedding embed_as_finite_algebra(double theta, int n_small);

} // namespace ncpoisson
