#include "ncpoisson/algebra.hpp"

#include <nlohmann/json.hpp>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ncpoisson {

StructureConstantAlgebra::StructureConstantAlgebra(int dim,
                                                   std::vector<std::string> basis_labels,
                                                   std::vector<Complex> structure_constants,
                                                   Vector unit_vector,
                                                   Options options)
    : dim_(dim),
      labels_(std::move(basis_labels)),
      c_(std::move(structure_constants)),
      unit_(std::move(unit_vector))
{
    if (dim_ <= 0)
        throw std::invalid_argument("algebra dim must be positive");
    if (c_.size() != static_cast<std::size_t>(dim_) * dim_ * dim_)
        throw std::invalid_argument("structure constant tensor has wrong size");
    if (unit_.size() != dim_)
        throw std::invalid_argument("unit vector has wrong size");
    if (labels_.empty()) {
        labels_.resize(dim_);
        for (int i = 0; i < dim_; ++i)
            labels_[i] = "e" + std::to_string(i);
    }
    if (static_cast<int>(labels_.size()) != dim_)
        throw std::invalid_argument("label count does not match dim");

    left_.resize(dim_);
    right_.resize(dim_);
    for (int i = 0; i < dim_; ++i) {
        left_[i] = Matrix::Zero(dim_, dim_);
        right_[i] = Matrix::Zero(dim_, dim_);
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k) {
                left_[i](k, j) = structure_constant(i, j, k);
                right_[i](k, j) = structure_constant(j, i, k);
            }
    }

    if (options.check_associativity) {
        double res = associativity_residual();
        if (res > options.tolerance)
            throw std::invalid_argument("structure constants are not associative, residual = " +
                                        std::to_string(res));
    }

    // unit law
    double unit_res = 0.0;
    for (int j = 0; j < dim_; ++j) {
        Vector ej = Vector::Zero(dim_);
        ej[j] = 1.0;
        unit_res = std::max(unit_res, (multiply_coeffs(unit_, ej) - ej).norm());
        unit_res = std::max(unit_res, (multiply_coeffs(ej, unit_) - ej).norm());
    }
    if (rel_residual(unit_res, 1.0) > 1e-10)
        throw std::invalid_argument("unit vector does not satisfy the unit law");
}

Vector StructureConstantAlgebra::multiply_coeffs(const Vector& a, const Vector& b) const
{
    Vector out = Vector::Zero(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (a[i] == Complex(0.0))
            continue;
        out += a[i] * (left_[i] * b);
    }
    return out;
}

AlgebraElement StructureConstantAlgebra::element(Vector coeffs) const
{
    return AlgebraElement(this, std::move(coeffs));
}

AlgebraElement StructureConstantAlgebra::basis_element(int i) const
{
    Vector v = Vector::Zero(dim_);
    v[i] = 1.0;
    return element(std::move(v));
}

AlgebraElement StructureConstantAlgebra::zero() const
{
    return element(Vector::Zero(dim_));
}

AlgebraElement StructureConstantAlgebra::unit() const
{
    return element(unit_);
}

AlgebraElement StructureConstantAlgebra::random_element(Rng& rng) const
{
    Vector v(dim_);
    for (int i = 0; i < dim_; ++i)
        v[i] = rng.cgaussian();
    return element(std::move(v));
}

double StructureConstantAlgebra::associativity_residual() const
{
    double scale = 0.0;
    for (const Complex& x : c_)
        scale = std::max(scale, std::abs(x));
    scale = scale * scale * dim_;

    double worst = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            Vector ei = Vector::Zero(dim_), ej = Vector::Zero(dim_);
            ei[i] = 1.0;
            ej[j] = 1.0;
            Vector ij = multiply_coeffs(ei, ej);
            for (int k = 0; k < dim_; ++k) {
                Vector ek = Vector::Zero(dim_);
                ek[k] = 1.0;
                Vector lhs = multiply_coeffs(ij, ek);
                Vector rhs = multiply_coeffs(ei, multiply_coeffs(ej, ek));
                worst = std::max(worst, (lhs - rhs).norm());
            }
        }
    return rel_residual(worst, scale);
}

std::vector<AlgebraElement> StructureConstantAlgebra::center() const
{
    // Stack the maps x -> [x, e_j] into one (dim*dim) x dim matrix and
    // take its null space.
    Matrix stacked(dim_ * dim_, dim_);
    for (int j = 0; j < dim_; ++j)
        stacked.middleRows(j * dim_, dim_) = right_[j] - left_[j];

    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cutoff = (sv.size() > 0 ? sv[0] : 0.0) * 1e-9;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff)
            ++rank;

    std::vector<AlgebraElement> basis;
    for (int i = rank; i < dim_; ++i)
        basis.push_back(element(svd.matrixV().col(i)));
    return basis;
}

StructureConstantAlgebra::DerivationCheck
StructureConstantAlgebra::is_derivation(const Matrix& d, double tol) const
{
    if (d.rows() != dim_ || d.cols() != dim_)
        throw std::invalid_argument("is_derivation: matrix must be dim x dim");
    double worst = 0.0;
    double scale = std::max(1.0, d.norm());
    for (int i = 0; i < dim_; ++i) {
        Vector ei = Vector::Zero(dim_);
        ei[i] = 1.0;
        Vector dei = d * ei;
        for (int j = 0; j < dim_; ++j) {
            Vector ej = Vector::Zero(dim_);
            ej[j] = 1.0;
            Vector prod = multiply_coeffs(ei, ej);
            Vector lhs = d * prod;
            Vector rhs = multiply_coeffs(dei, ej) + multiply_coeffs(ei, d * ej);
            worst = std::max(worst, (lhs - rhs).norm());
        }
    }
    double res = rel_residual(worst, scale);
    return {res <= tol, res};
}

Matrix StructureConstantAlgebra::inner_derivation_matrix(const Vector& a) const
{
    Matrix ad = Matrix::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        if (a[i] != Complex(0.0))
            ad += a[i] * (left_[i] - right_[i]);
    return ad;
}

StructureConstantAlgebra::InnerFit
StructureConstantAlgebra::solve_inner_derivation(const Matrix& d) const
{
    // vec(ad_a) is linear in a; assemble the (dim*dim) x dim system.
    Matrix sys(dim_ * dim_, dim_);
    for (int k = 0; k < dim_; ++k) {
        Matrix ad = left_[k] - right_[k];
        sys.col(k) = Eigen::Map<const Vector>(ad.data(), dim_ * dim_);
    }
    Vector rhs = Eigen::Map<const Vector>(d.data(), dim_ * dim_);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sys);
    Vector a = cod.solve(rhs); // minimum-norm: orthogonal to ker(ad), so no
                               // central component in the generator
    double res = (sys * a - rhs).norm();
    return {a, rel_residual(res, rhs.norm())};
}

double StructureConstantAlgebra::centrality_residual(const Vector& x) const
{
    double worst = 0.0;
    Matrix ad = inner_derivation_matrix(x);
    for (int j = 0; j < dim_; ++j) {
        Vector ej = Vector::Zero(dim_);
        ej[j] = 1.0;
        worst = std::max(worst, (ad * ej).norm());
    }
    return rel_residual(worst, x.norm());
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const
{
    if (algebra_ != &o.algebra())
        throw std::invalid_argument("mismatched algebras");
    return AlgebraElement(algebra_, coeffs_ + o.coeffs_);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const
{
    if (algebra_ != &o.algebra())
        throw std::invalid_argument("mismatched algebras");
    return AlgebraElement(algebra_, coeffs_ - o.coeffs_);
}

AlgebraElement AlgebraElement::operator*(Complex s) const
{
    return AlgebraElement(algebra_, coeffs_ * s);
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b)
{
    if (&a.algebra() != &b.algebra())
        throw std::invalid_argument("mismatched algebras");
    return AlgebraElement(&a.algebra(), a.algebra().multiply_coeffs(a.coeffs(), b.coeffs()));
}

AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b)
{
    return multiply(a, b) - multiply(b, a);
}

StructureConstantAlgebra matrix_algebra(int n)
{
    if (n <= 0)
        throw std::invalid_argument("matrix_algebra: n must be positive");
    int dim = n * n;
    auto idx = [n](int a, int b) { return a * n + b; };
    std::vector<Complex> c(static_cast<std::size_t>(dim) * dim * dim, Complex(0.0));
    std::vector<std::string> labels(dim);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            labels[idx(a, b)] = "E" + std::to_string(a + 1) + std::to_string(b + 1);
            for (int cc = 0; cc < n; ++cc)
                for (int dd = 0; dd < n; ++dd)
                    if (b == cc)
                        c[(static_cast<std::size_t>(idx(a, b)) * dim + idx(cc, dd)) * dim +
                          idx(a, dd)] = 1.0;
        }
    Vector unit = Vector::Zero(dim);
    for (int a = 0; a < n; ++a)
        unit[idx(a, a)] = 1.0;
    return StructureConstantAlgebra(dim, std::move(labels), std::move(c), std::move(unit));
}

StructureConstantAlgebra group_algebra(const std::vector<std::vector<int>>& table,
                                       std::vector<std::string> labels)
{
    int dim = static_cast<int>(table.size());
    std::vector<Complex> c(static_cast<std::size_t>(dim) * dim * dim, Complex(0.0));
    for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(table[i].size()) != dim)
            throw std::invalid_argument("group table is not square");
        for (int j = 0; j < dim; ++j) {
            int k = table[i][j];
            if (k < 0 || k >= dim)
                throw std::invalid_argument("group table entry out of range");
            c[(static_cast<std::size_t>(i) * dim + j) * dim + k] = 1.0;
        }
    }
    // identity = the row index acting as identity on the left
    int id = -1;
    for (int i = 0; i < dim; ++i) {
        bool ok = true;
        for (int j = 0; j < dim; ++j)
            ok = ok && table[i][j] == j && table[j][i] == j;
        if (ok) {
            id = i;
            break;
        }
    }
    if (id < 0)
        throw std::invalid_argument("group table has no identity");
    Vector unit = Vector::Zero(dim);
    unit[id] = 1.0;
    return StructureConstantAlgebra(dim, std::move(labels), std::move(c), std::move(unit));
}

StructureConstantAlgebra s3_group_algebra()
{
    // All permutations of {0,1,2} in lexicographic order; composition
    // (p*q)(x) = p(q(x)).
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> a = {0, 1, 2};
    do {
        perms.push_back(a);
    } while (std::next_permutation(a.begin(), a.end()));

    auto find = [&perms](const std::array<int, 3>& p) {
        for (std::size_t i = 0; i < perms.size(); ++i)
            if (perms[i] == p)
                return static_cast<int>(i);
        return -1;
    };

    std::vector<std::vector<int>> table(6, std::vector<int>(6));
    std::vector<std::string> labels(6);
    for (int i = 0; i < 6; ++i) {
        labels[i] = "(" + std::to_string(perms[i][0]) + std::to_string(perms[i][1]) +
                    std::to_string(perms[i][2]) + ")";
        for (int j = 0; j < 6; ++j) {
            std::array<int, 3> comp;
            for (int x = 0; x < 3; ++x)
                comp[x] = perms[i][perms[j][x]];
            table[i][j] = find(comp);
        }
    }
    return group_algebra(table, std::move(labels));
}

StructureConstantAlgebra truncated_polynomial_algebra(int k)
{
    if (k <= 0)
        throw std::invalid_argument("truncated_polynomial_algebra: k must be positive");
    std::vector<Complex> c(static_cast<std::size_t>(k) * k * k, Complex(0.0));
    std::vector<std::string> labels(k);
    for (int i = 0; i < k; ++i) {
        labels[i] = i == 0 ? "1" : (i == 1 ? "t" : "t^" + std::to_string(i));
        for (int j = 0; j < k; ++j)
            if (i + j < k)
                c[(static_cast<std::size_t>(i) * k + j) * k + (i + j)] = 1.0;
    }
    Vector unit = Vector::Zero(k);
    unit[0] = 1.0;
    return StructureConstantAlgebra(k, std::move(labels), std::move(c), std::move(unit));
}

namespace {

Complex parse_complex(const nlohmann::json& v)
{
    if (v.is_array()) {
        if (v.size() != 2)
            throw std::invalid_argument("complex entries must be [re, im]");
        return Complex(v[0].get<double>(), v[1].get<double>());
    }
    return Complex(v.get<double>(), 0.0);
}

} // namespace

StructureConstantAlgebra algebra_from_json(const nlohmann::json& j)
{
    int dim = j.at("dim").get<int>();
    std::vector<std::string> labels;
    if (j.contains("labels"))
        labels = j.at("labels").get<std::vector<std::string>>();
    const auto& cj = j.at("c");
    std::vector<Complex> c;
    c.reserve(static_cast<std::size_t>(dim) * dim * dim);
    for (int i = 0; i < dim; ++i)
        for (int jj = 0; jj < dim; ++jj)
            for (int k = 0; k < dim; ++k)
                c.push_back(parse_complex(cj.at(i).at(jj).at(k)));
    Vector unit(dim);
    for (int i = 0; i < dim; ++i)
        unit[i] = parse_complex(j.at("unit").at(i));
    return StructureConstantAlgebra(dim, std::move(labels), std::move(c), std::move(unit));
}

nlohmann::json algebra_to_json(const StructureConstantAlgebra& a)
{
    nlohmann::json j;
    j["dim"] = a.dim();
    j["labels"] = a.labels();
    nlohmann::json c = nlohmann::json::array();
    for (int i = 0; i < a.dim(); ++i) {
        nlohmann::json ci = nlohmann::json::array();
        for (int jj = 0; jj < a.dim(); ++jj) {
            nlohmann::json cij = nlohmann::json::array();
            for (int k = 0; k < a.dim(); ++k) {
                Complex v = a.structure_constant(i, jj, k);
                cij.push_back({v.real(), v.imag()});
            }
            ci.push_back(cij);
        }
        c.push_back(ci);
    }
    j["c"] = c;
    nlohmann::json u = nlohmann::json::array();
    for (int i = 0; i < a.dim(); ++i)
        u.push_back({a.unit_coeffs()[i].real(), a.unit_coeffs()[i].imag()});
    j["unit"] = u;
    return j;
}

} // namespace ncpoisson
