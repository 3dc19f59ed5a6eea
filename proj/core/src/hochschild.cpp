#include "ncpoisson/hochschild.hpp"

#include <nlohmann/json.hpp>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>

namespace ncpoisson {

namespace {

std::size_t ipow(int base, int exp)
{
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i)
        r *= static_cast<std::size_t>(base);
    return r;
}

// Guard against runaway tensor sizes (b of a degree-4 cochain over M_3 is
// the largest thing the workbench ever touches).
constexpr std::size_t kMaxTensorEntries = 20'000'000;

} // namespace

Cochain::Cochain(const StructureConstantAlgebra& algebra, int degree)
    : algebra_(&algebra), degree_(degree)
{
    if (degree < 0)
        throw std::invalid_argument("cochain degree must be >= 0");
    std::size_t n = ipow(algebra.dim(), degree) * algebra.dim();
    if (n > kMaxTensorEntries)
        throw std::invalid_argument("cochain tensor too large");
    tensor_ = Vector::Zero(static_cast<Eigen::Index>(n));
}

Cochain::Cochain(const StructureConstantAlgebra& algebra, int degree, Vector tensor)
    : Cochain(algebra, degree)
{
    if (tensor.size() != tensor_.size())
        throw std::invalid_argument("cochain tensor has wrong size");
    tensor_ = std::move(tensor);
}

Cochain Cochain::from_element(const AlgebraElement& a)
{
    return Cochain(a.algebra(), 0, a.coeffs());
}

Cochain Cochain::multiplication(const StructureConstantAlgebra& algebra)
{
    Cochain mu(algebra, 2);
    int d = algebra.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                mu.tensor_[(static_cast<Eigen::Index>(i) * d + j) * d + k] =
                    algebra.structure_constant(i, j, k);
    return mu;
}

Cochain Cochain::random(const StructureConstantAlgebra& algebra, int degree, Rng& rng)
{
    Cochain c(algebra, degree);
    for (Eigen::Index i = 0; i < c.tensor_.size(); ++i)
        c.tensor_[i] = rng.cgaussian();
    return c;
}

std::size_t Cochain::tuple_count() const
{
    return ipow(algebra_->dim(), degree_);
}

Complex Cochain::coeff(const std::vector<int>& tuple, int j) const
{
    std::size_t flat = 0;
    for (int t : tuple)
        flat = flat * algebra_->dim() + static_cast<std::size_t>(t);
    return tensor_[static_cast<Eigen::Index>(flat * algebra_->dim() + j)];
}

void Cochain::set_coeff(const std::vector<int>& tuple, int j, Complex v)
{
    std::size_t flat = 0;
    for (int t : tuple)
        flat = flat * algebra_->dim() + static_cast<std::size_t>(t);
    tensor_[static_cast<Eigen::Index>(flat * algebra_->dim() + j)] = v;
}

Vector Cochain::value_on_basis(std::size_t flat_tuple) const
{
    int d = algebra_->dim();
    return tensor_.segment(static_cast<Eigen::Index>(flat_tuple) * d, d);
}

AlgebraElement Cochain::evaluate(const std::vector<AlgebraElement>& args) const
{
    if (static_cast<int>(args.size()) != degree_)
        throw std::invalid_argument("evaluate: argument count must equal cochain degree");
    int d = algebra_->dim();
    Vector cur = tensor_;
    for (const AlgebraElement& arg : args) {
        if (&arg.algebra() != algebra_)
            throw std::invalid_argument("mismatched algebras");
        Eigen::Index stride = cur.size() / d;
        Vector next = Vector::Zero(stride);
        for (int i = 0; i < d; ++i) {
            Complex a = arg.coeffs()[i];
            if (a != Complex(0.0))
                next += a * cur.segment(i * stride, stride);
        }
        cur = std::move(next);
    }
    return algebra_->element(cur);
}

Cochain Cochain::operator+(const Cochain& o) const
{
    if (algebra_ != o.algebra_ || degree_ != o.degree_)
        throw std::invalid_argument("cochain mismatch");
    return Cochain(*algebra_, degree_, tensor_ + o.tensor_);
}

Cochain Cochain::operator-(const Cochain& o) const
{
    if (algebra_ != o.algebra_ || degree_ != o.degree_)
        throw std::invalid_argument("cochain mismatch");
    return Cochain(*algebra_, degree_, tensor_ - o.tensor_);
}

Cochain Cochain::operator*(Complex s) const
{
    return Cochain(*algebra_, degree_, tensor_ * s);
}

nlohmann::json Cochain::to_json() const
{
    nlohmann::json j;
    j["degree"] = degree_;
    nlohmann::json t = nlohmann::json::array();
    for (Eigen::Index i = 0; i < tensor_.size(); ++i)
        t.push_back({tensor_[i].real(), tensor_[i].imag()});
    j["tensor"] = t;
    return j;
}

Cochain Cochain::from_json(const nlohmann::json& j, const StructureConstantAlgebra& algebra)
{
    int degree = j.at("degree").get<int>();
    Cochain c(algebra, degree);
    const auto& t = j.at("tensor");
    if (static_cast<Eigen::Index>(t.size()) != c.tensor_.size())
        throw std::invalid_argument("cochain tensor has wrong size for this algebra");
    for (Eigen::Index i = 0; i < c.tensor_.size(); ++i)
        c.tensor_[i] = Complex(t.at(i).at(0).get<double>(), t.at(i).at(1).get<double>());
    return c;
}

Cochain differential(const Cochain& c)
{
    const StructureConstantAlgebra& A = c.algebra();
    int d = A.dim();
    int k = c.degree();
    Cochain out(A, k + 1);

    std::vector<int> idx(k + 1, 0);
    std::vector<int> sub(std::max(k, 0), 0);
    const std::size_t out_tuples = out.tuple_count();
    for (std::size_t flat = 0; flat < out_tuples; ++flat) {
        // decode the output tuple
        std::size_t rem = flat;
        for (int t = k; t >= 0; --t) {
            idx[t] = static_cast<int>(rem % d);
            rem /= d;
        }

        Vector acc = Vector::Zero(d);

        // a_1 c(a_2,..,a_{k+1})
        {
            std::size_t sflat = 0;
            for (int t = 1; t <= k; ++t)
                sflat = sflat * d + idx[t];
            acc += A.left_matrix(idx[0]) * c.value_on_basis(sflat);
        }

        // (-1)^i c(a_1,.., a_i a_{i+1}, .., a_{k+1})
        for (int a = 1; a <= k; ++a) {
            int s = a - 1; // slot receiving the product
            // flat index of the sub-tuple with 0 in slot s; slot stride:
            std::size_t base = 0;
            for (int t = 0; t < k; ++t) {
                int v;
                if (t < s)
                    v = idx[t];
                else if (t == s)
                    v = 0;
                else
                    v = idx[t + 1];
                base = base * d + v;
            }
            std::size_t stride = ipow(d, k - 1 - s);
            Vector term = Vector::Zero(d);
            for (int m = 0; m < d; ++m) {
                Complex w = A.structure_constant(idx[s], idx[s + 1], m);
                if (w != Complex(0.0))
                    term += w * c.value_on_basis(base + m * stride);
            }
            acc += static_cast<double>(parity_sign(a)) * term;
        }

        // (-1)^{k+1} c(a_1,..,a_k) a_{k+1}
        {
            std::size_t sflat = 0;
            for (int t = 0; t < k; ++t)
                sflat = sflat * d + idx[t];
            acc += static_cast<double>(parity_sign(k + 1)) *
                   (A.right_matrix(idx[k]) * c.value_on_basis(sflat));
        }

        out.tensor().segment(static_cast<Eigen::Index>(flat) * d, d) = acc;
    }
    return out;
}

Cochain pre_lie(const Cochain& U, const Cochain& V)
{
    if (&U.algebra() != &V.algebra())
        throw std::invalid_argument("mismatched algebras");
    const StructureConstantAlgebra& A = U.algebra();
    int d = A.dim();
    int u = U.degree(), v = V.degree();
    if (u == 0 && v == 0)
        throw std::invalid_argument("pre_lie undefined for two degree-0 cochains");
    int w = u + v - 1;
    Cochain out(A, w);
    if (u == 0)
        return out; // empty insertion sum

    std::vector<int> idx(w, 0);
    const std::size_t out_tuples = out.tuple_count();
    for (std::size_t flat = 0; flat < out_tuples; ++flat) {
        std::size_t rem = flat;
        for (int t = w - 1; t >= 0; --t) {
            idx[t] = static_cast<int>(rem % d);
            rem /= d;
        }

        Vector acc = Vector::Zero(d);
        for (int s = 0; s < u; ++s) { // V inserted in slot s (0-based)
            // value of V on the consumed sub-tuple idx[s .. s+v-1]
            std::size_t vflat = 0;
            for (int t = 0; t < v; ++t)
                vflat = vflat * d + idx[s + t];
            Vector vval = V.value_on_basis(vflat);

            // U tuple: idx[0..s-1], j, idx[s+v..w-1]
            std::size_t base = 0;
            for (int t = 0; t < u; ++t) {
                int val;
                if (t < s)
                    val = idx[t];
                else if (t == s)
                    val = 0;
                else
                    val = idx[t + v - 1];
                base = base * d + val;
            }
            std::size_t stride = ipow(d, u - 1 - s);
            Vector term = Vector::Zero(d);
            for (int j = 0; j < d; ++j)
                if (vval[j] != Complex(0.0))
                    term += vval[j] * U.value_on_basis(base + j * stride);
            acc += static_cast<double>(parity_sign(static_cast<long>(s) * (v - 1))) * term;
        }
        out.tensor().segment(static_cast<Eigen::Index>(flat) * d, d) = acc;
    }
    return out;
}

Cochain gerstenhaber(const Cochain& U, const Cochain& V)
{
    int u = U.degree(), v = V.degree();
    if (u == 0 && v == 0)
        throw std::invalid_argument("gerstenhaber undefined for two degree-0 cochains");
    double sign = parity_sign(static_cast<long>(u - 1) * (v - 1));
    return pre_lie(U, V) - pre_lie(V, U) * sign;
}

Matrix differential_matrix(const StructureConstantAlgebra& A, int k)
{
    int d = A.dim();
    std::size_t rows = ipow(d, k + 1) * d;
    std::size_t cols = ipow(d, k) * d;
    Matrix B = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));

    std::vector<int> idx(k + 1, 0);
    const std::size_t out_tuples = ipow(d, k + 1);
    for (std::size_t flat = 0; flat < out_tuples; ++flat) {
        std::size_t rem = flat;
        for (int t = k; t >= 0; --t) {
            idx[t] = static_cast<int>(rem % d);
            rem /= d;
        }
        Eigen::Index row0 = static_cast<Eigen::Index>(flat) * d;

        // a_1 c(a_2..): col tuple (idx[1..k]), weight L[idx0](l, j)
        {
            std::size_t sflat = 0;
            for (int t = 1; t <= k; ++t)
                sflat = sflat * d + idx[t];
            const Matrix& L = A.left_matrix(idx[0]);
            for (int l = 0; l < d; ++l)
                for (int j = 0; j < d; ++j)
                    B(row0 + l, static_cast<Eigen::Index>(sflat) * d + j) += L(l, j);
        }

        for (int a = 1; a <= k; ++a) {
            int s = a - 1;
            std::size_t base = 0;
            for (int t = 0; t < k; ++t) {
                int v = (t < s) ? idx[t] : (t == s ? 0 : idx[t + 1]);
                base = base * d + v;
            }
            std::size_t stride = ipow(d, k - 1 - s);
            double sign = parity_sign(a);
            for (int m = 0; m < d; ++m) {
                Complex w = A.structure_constant(idx[s], idx[s + 1], m);
                if (w == Complex(0.0))
                    continue;
                Eigen::Index col0 = static_cast<Eigen::Index>(base + m * stride) * d;
                for (int l = 0; l < d; ++l)
                    B(row0 + l, col0 + l) += sign * w;
            }
        }

        {
            std::size_t sflat = 0;
            for (int t = 0; t < k; ++t)
                sflat = sflat * d + idx[t];
            const Matrix& R = A.right_matrix(idx[k]);
            double sign = parity_sign(k + 1);
            for (int l = 0; l < d; ++l)
                for (int j = 0; j < d; ++j)
                    B(row0 + l, static_cast<Eigen::Index>(sflat) * d + j) += sign * R(l, j);
        }
    }
    return B;
}

CoboundarySolve solve_coboundary(const Cochain& w, double tol)
{
    if (w.degree() < 1)
        throw std::invalid_argument("solve_coboundary needs degree >= 1");
    const StructureConstantAlgebra& A = w.algebra();
    int k = w.degree() - 1;

    if (w.sup_norm() == 0.0)
        return {Cochain(A, k), 0.0};

    std::size_t rows = ipow(A.dim(), k + 1) * A.dim();
    std::size_t cols = ipow(A.dim(), k) * A.dim();
    if (rows * cols > 30'000'000)
        throw std::invalid_argument("solve_coboundary: coefficient matrix too large");

    Matrix B = differential_matrix(A, k);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(B); // minimum-norm solve
    Vector x = cod.solve(w.tensor());
    double res = rel_residual((B * x - w.tensor()).norm(), w.tensor().norm());

    CoboundarySolve out{std::nullopt, res};
    if (res <= tol)
        out.witness = Cochain(A, k, std::move(x));
    return out;
}

namespace {

int matrix_rank(const Matrix& m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    Eigen::BDCSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    double cutoff = (sv.size() > 0 ? sv[0] : 0.0) * 1e-9;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff)
            ++rank;
    return rank;
}

} // namespace

int cohomology_dimension(const StructureConstantAlgebra& A, int k)
{
    if (k < 0 || k > 3)
        throw std::invalid_argument("cohomology_dimension supports 0 <= k <= 3");
    int d = A.dim();
    std::size_t rows = ipow(d, k + 1) * d;
    std::size_t cols = ipow(d, k) * d;
    if (rows * cols > 200'000)
        throw std::invalid_argument("cohomology_dimension: size guard exceeded");

    Matrix bk = differential_matrix(A, k);
    int ker = static_cast<int>(cols) - matrix_rank(bk);
    int im_prev = 0;
    if (k > 0)
        im_prev = matrix_rank(differential_matrix(A, k - 1));
    return ker - im_prev;
}

} // namespace ncpoisson
