#pragma once

#include "ncpoisson/common.hpp"

#include <nlohmann/json_fwd.hpp>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncpoisson {

class AlgebraElement;

/// Finite-dimensional unital associative algebra over C, described by a
/// basis e_0..e_{d-1} and structure constants c[i][j][k] with
/// e_i e_j = sum_k c[i][j][k] e_k.
struct AlgebraOptions
{
    bool check_associativity = true;
    double tolerance = 1e-12; // relative, applied to the associator
};

class StructureConstantAlgebra
{
public:
    using Options = AlgebraOptions;

    StructureConstantAlgebra(int dim,
                             std::vector<std::string> basis_labels,
                             std::vector<Complex> structure_constants, // flat [i][j][k]
                             Vector unit_vector,
                             Options options = Options());

    int dim() const { return dim_; }
    const std::string& label(int i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    Complex structure_constant(int i, int j, int k) const
    {
        return c_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
    }
    const Vector& unit_coeffs() const { return unit_; }

    /// Left/right multiplication by basis vectors as matrices acting on
    /// coefficient vectors: L[i](k,j) = c[i][j][k], R[i](k,j) = c[j][i][k].
    const Matrix& left_matrix(int i) const { return left_[i]; }
    const Matrix& right_matrix(int i) const { return right_[i]; }

    Vector multiply_coeffs(const Vector& a, const Vector& b) const;

    AlgebraElement element(Vector coeffs) const;
    AlgebraElement basis_element(int i) const;
    AlgebraElement zero() const;
    AlgebraElement unit() const;
    AlgebraElement random_element(Rng& rng) const;

    /// Max associator norm over basis triples, relative to the structure
    /// constant scale.
    double associativity_residual() const;

    /// Basis of the center {x : xe_j = e_jx for all j}, computed as the
    /// null space of the stacked commutator maps. The unit always lies in
    /// the returned span.
    std::vector<AlgebraElement> center() const;

    struct DerivationCheck
    {
        bool is_derivation;
        double residual; // sup over basis pairs, relative
    };
    /// Leibniz test for a linear map given as a dim x dim matrix on
    /// coefficients.
    DerivationCheck is_derivation(const Matrix& d, double tol = 1e-9) const;

    /// Matrix of x -> [a,x] on coefficients.
    Matrix inner_derivation_matrix(const Vector& a) const;

    struct InnerFit
    {
        Vector generator;   // minimum-norm a with ad_a ~ d
        double residual;    // relative
    };
    /// Least-squares fit of a linear map by an inner derivation. The
    /// minimum-norm solve discards the central (trivially acting) part of
    /// the generator.
    InnerFit solve_inner_derivation(const Matrix& d) const;

    /// Max commutator residual of x against all basis elements.
    double centrality_residual(const Vector& x) const;

private:
    int dim_;
    std::vector<std::string> labels_;
    std::vector<Complex> c_;
    Vector unit_;
    std::vector<Matrix> left_, right_;
};

class AlgebraElement
{
public:
    AlgebraElement(const StructureConstantAlgebra* algebra, Vector coeffs)
        : algebra_(algebra), coeffs_(std::move(coeffs))
    {
        if (!algebra_ || coeffs_.size() != algebra_->dim())
            throw std::invalid_argument("AlgebraElement: coefficient length does not match algebra dim");
    }

    const StructureConstantAlgebra& algebra() const { return *algebra_; }
    const Vector& coeffs() const { return coeffs_; }
    double norm() const { return coeffs_.norm(); }

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(Complex s) const;

private:
    const StructureConstantAlgebra* algebra_;
    Vector coeffs_;
};

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b);

/// Full matrix algebra M_n(C) with basis E_{ab} ordered row-major.
StructureConstantAlgebra matrix_algebra(int n);

/// Group algebra C[G] from a multiplication table g_i g_j = g_{table[i][j]}.
StructureConstantAlgebra group_algebra(const std::vector<std::vector<int>>& table,
                                       std::vector<std::string> labels = {});

/// C[S_3], table generated by composing the six permutations of {0,1,2}
/// in lexicographic order.
StructureConstantAlgebra s3_group_algebra();

/// Commutative truncated polynomial algebra C[t]/(t^k), basis 1, t, .., t^{k-1}.
StructureConstantAlgebra truncated_polynomial_algebra(int k);

/// Loader for the JSON algebra format
/// {"dim": n, "labels": [...], "c": nested arrays, "unit": [...]}.
/// Entries of "c"/"unit" are numbers (real) or [re, im] pairs.
StructureConstantAlgebra algebra_from_json(const nlohmann::json& j);
nlohmann::json algebra_to_json(const StructureConstantAlgebra& a);

} // namespace ncpoisson
