#include "ncpoisson/torus.hpp"
#include "ncpoisson/poisson.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace ncpoisson {

TorusElement::TorusElement(double theta, int truncation)
    : theta_(theta), N_(truncation)
{
    if (truncation <= 0)
        throw std::invalid_argument("torus truncation must be positive");
    int side = 2 * N_ + 1;
    coeffs_ = Vector::Zero(side * side);
}

TorusElement TorusElement::unit(double theta, int truncation)
{
    return monomial(theta, truncation, 0, 0);
}

TorusElement TorusElement::u(double theta, int truncation)
{
    return monomial(theta, truncation, 1, 0);
}

TorusElement TorusElement::v(double theta, int truncation)
{
    return monomial(theta, truncation, 0, 1);
}

TorusElement TorusElement::monomial(double theta, int truncation, int n, int m, Complex coeff)
{
    TorusElement e(theta, truncation);
    if (std::abs(n) > truncation || std::abs(m) > truncation)
        throw std::invalid_argument("monomial outside truncation box");
    e.coeffs_[e.index(n, m)] = coeff;
    e.refresh_support_radius();
    return e;
}

TorusElement TorusElement::random(double theta, int truncation, int max_radius, Rng& rng)
{
    TorusElement e(theta, truncation);
    int R = std::min(max_radius, truncation);
    for (int n = -R; n <= R; ++n)
        for (int m = -R; m <= R; ++m)
            if (std::abs(n) + std::abs(m) <= R)
                e.coeffs_[e.index(n, m)] = rng.cgaussian();
    e.refresh_support_radius();
    return e;
}

void TorusElement::set_coeff(int n, int m, Complex v)
{
    coeffs_[index(n, m)] = v;
    refresh_support_radius();
}

double TorusElement::sup_norm() const
{
    return coeffs_.size() ? coeffs_.cwiseAbs().maxCoeff() : 0.0;
}

void TorusElement::refresh_support_radius()
{
    support_radius_ = 0;
    for (int n = -N_; n <= N_; ++n)
        for (int m = -N_; m <= N_; ++m)
            if (coeffs_[index(n, m)] != Complex(0.0))
                support_radius_ = std::max(support_radius_, std::abs(n) + std::abs(m));
}

void TorusElement::check_compatible(const TorusElement& o) const
{
    if (theta_ != o.theta_ || N_ != o.N_)
        throw std::invalid_argument("mismatched torus parameters");
}

TorusElement TorusElement::operator+(const TorusElement& o) const
{
    check_compatible(o);
    TorusElement r(theta_, N_);
    r.coeffs_ = coeffs_ + o.coeffs_;
    r.exact_ = exact_ && o.exact_;
    r.refresh_support_radius();
    return r;
}

TorusElement TorusElement::operator-(const TorusElement& o) const
{
    check_compatible(o);
    TorusElement r(theta_, N_);
    r.coeffs_ = coeffs_ - o.coeffs_;
    r.exact_ = exact_ && o.exact_;
    r.refresh_support_radius();
    return r;
}

TorusElement TorusElement::operator*(Complex s) const
{
    TorusElement r(theta_, N_);
    r.coeffs_ = coeffs_ * s;
    r.exact_ = exact_;
    r.refresh_support_radius();
    return r;
}

TorusElement multiply(const TorusElement& a, const TorusElement& b)
{
    a.check_compatible(b);
    int N = a.N_;
    TorusElement r(a.theta_, N);
    bool dropped = false;
    for (int n1 = -N; n1 <= N; ++n1)
        for (int m1 = -N; m1 <= N; ++m1) {
            Complex ca = a.coeffs_[a.index(n1, m1)];
            if (ca == Complex(0.0))
                continue;
            for (int n2 = -N; n2 <= N; ++n2)
                for (int m2 = -N; m2 <= N; ++m2) {
                    Complex cb = b.coeffs_[b.index(n2, m2)];
                    if (cb == Complex(0.0))
                        continue;
                    int n = n1 + n2, m = m1 + m2;
                    Complex term = ca * cb *
                        std::exp(Complex(0.0, 2.0 * kPi * a.theta_ * m1 * n2));
                    if (std::abs(n) > N || std::abs(m) > N) {
                        dropped = true;
                        continue;
                    }
                    r.coeffs_[r.index(n, m)] += term;
                }
        }
    r.exact_ = a.exact_ && b.exact_ && !dropped;
    r.refresh_support_radius();
    return r;
}

TorusElement delta1(const TorusElement& a)
{
    TorusElement r(a.theta_, a.N_);
    for (int n = -a.N_; n <= a.N_; ++n)
        for (int m = -a.N_; m <= a.N_; ++m)
            r.coeffs_[r.index(n, m)] = Complex(0.0, 2.0 * kPi * n) * a.coeffs_[a.index(n, m)];
    r.exact_ = a.exact_;
    r.refresh_support_radius();
    return r;
}

TorusElement delta2(const TorusElement& a)
{
    TorusElement r(a.theta_, a.N_);
    for (int n = -a.N_; n <= a.N_; ++n)
        for (int m = -a.N_; m <= a.N_; ++m)
            r.coeffs_[r.index(n, m)] = Complex(0.0, 2.0 * kPi * m) * a.coeffs_[a.index(n, m)];
    r.exact_ = a.exact_;
    r.refresh_support_radius();
    return r;
}

TorusElement canonical_poisson(const TorusElement& a, const TorusElement& b)
{
    return multiply(delta1(a), delta2(b));
}

TorusElement canonical_witness(const TorusElement& a, const TorusElement& b)
{
    return multiply(delta1(delta1(a)), delta2(delta2(b))) * Complex(-0.5);
}

double seminorm(const TorusElement& a, int k)
{
    if (k < 0)
        throw std::invalid_argument("seminorm order must be >= 0");
    double best = 0.0;
    for (int n = -a.truncation(); n <= a.truncation(); ++n)
        for (int m = -a.truncation(); m <= a.truncation(); ++m) {
            Complex c = a.coeff(n, m);
            if (c == Complex(0.0))
                continue;
            best = std::max(best, std::pow(std::abs(n) + std::abs(m), k) * std::abs(c));
        }
    return best;
}

nlohmann::json TorusElement::to_json() const
{
    nlohmann::json j = nlohmann::json::array();
    for (int n = -N_; n <= N_; ++n)
        for (int m = -N_; m <= N_; ++m) {
            Complex c = coeffs_[index(n, m)];
            if (c == Complex(0.0))
                continue;
            j.push_back({{"n", n}, {"m", m}, {"re", c.real()}, {"im", c.imag()}});
        }
    return j;
}

TorusElement TorusElement::from_json(const nlohmann::json& j, double theta, int truncation)
{
    TorusElement e(theta, truncation);
    for (const auto& entry : j) {
        int n = entry.at("n").get<int>();
        int m = entry.at("m").get<int>();
        e.coeffs_[e.index(n, m)] =
            Complex(entry.at("re").get<double>(), entry.at("im").get<double>());
    }
    e.refresh_support_radius();
    return e;
}

namespace {

struct ModeTable
{
    int side;
    int N;
    int n_of(int i) const { return i / side - N; }
    int m_of(int i) const { return i % side - N; }
};

} // namespace

int TorusEmbedding::radius_of(int basis_index) const
{
    ModeTable t{2 * n_small + 1, n_small};
    return std::abs(t.n_of(basis_index)) + std::abs(t.m_of(basis_index));
}

bool TorusEmbedding::safe_triple(int i, int j, int k) const
{
    return radius_of(i) + radius_of(j) + radius_of(k) <= n_small;
}

double TorusEmbedding::leibniz_residual_safe() const
{
    return check_leibniz(pi, [this](int i, int j, int k) { return safe_triple(i, j, k); });
}

double TorusEmbedding::jacobi_residual_safe() const
{
    return check_jacobi_witness(pi, pi1,
                                [this](int i, int j, int k) { return safe_triple(i, j, k); });
}

int TorusEmbedding::central_safe_dimension(int x_radius, int probe_radius) const
{
    if (x_radius + probe_radius > n_small)
        throw std::invalid_argument("central_safe_dimension: radii exceed the exact range");
    int dim = algebra->dim();
    std::vector<int> xmodes, probes;
    for (int i = 0; i < dim; ++i) {
        if (radius_of(i) <= x_radius)
            xmodes.push_back(i);
        if (radius_of(i) <= probe_radius)
            probes.push_back(i);
    }
    Matrix sys(static_cast<Eigen::Index>(probes.size()) * dim,
               static_cast<Eigen::Index>(xmodes.size()));
    for (std::size_t col = 0; col < xmodes.size(); ++col) {
        Vector x = Vector::Zero(dim);
        x[xmodes[col]] = 1.0;
        Matrix ad = algebra->inner_derivation_matrix(x);
        for (std::size_t pr = 0; pr < probes.size(); ++pr) {
            Vector ej = Vector::Zero(dim);
            ej[probes[pr]] = 1.0;
            sys.block(static_cast<Eigen::Index>(pr) * dim, static_cast<Eigen::Index>(col),
                      dim, 1) = ad * ej;
        }
    }
    Eigen::JacobiSVD<Matrix> svd(sys);
    const auto& sv = svd.singularValues();
    double cutoff = (sv.size() > 0 ? sv[0] : 0.0) * 1e-9;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff)
            ++rank;
    return static_cast<int>(xmodes.size()) - rank;
}

TorusEmbedding embed_as_finite_algebra(double theta, int n_small)
{
    if (n_small < 1 || n_small > 3)
        throw std::invalid_argument("embed_as_finite_algebra: n_small must be in 1..3");
    int side = 2 * n_small + 1;
    int dim = side * side;
    ModeTable t{side, n_small};

    std::vector<Complex> c(static_cast<std::size_t>(dim) * dim * dim, Complex(0.0));
    std::vector<std::string> labels(dim);
    for (int i = 0; i < dim; ++i) {
        int n1 = t.n_of(i), m1 = t.m_of(i);
        labels[i] = "U^" + std::to_string(n1) + "V^" + std::to_string(m1);
        for (int j = 0; j < dim; ++j) {
            int n2 = t.n_of(j), m2 = t.m_of(j);
            int n = n1 + n2, m = m1 + m2;
            if (std::abs(n) > n_small || std::abs(m) > n_small)
                continue; // truncated away
            int k = (n + n_small) * side + (m + n_small);
            c[(static_cast<std::size_t>(i) * dim + j) * dim + k] =
                std::exp(Complex(0.0, 2.0 * kPi * theta * m1 * n2));
        }
    }
    Vector unit = Vector::Zero(dim);
    unit[(0 + n_small) * side + (0 + n_small)] = 1.0;

    StructureConstantAlgebra::Options opts;
    opts.check_associativity = false; // boundary truncation breaks it
    auto algebra = std::make_unique<StructureConstantAlgebra>(
        dim, std::move(labels), std::move(c), std::move(unit), opts);

    Cochain pi(*algebra, 2), pi1(*algebra, 2);
    for (int i = 0; i < dim; ++i) {
        int n1 = t.n_of(i), m1 = t.m_of(i);
        for (int j = 0; j < dim; ++j) {
            int n2 = t.n_of(j), m2 = t.m_of(j);
            int n = n1 + n2, m = m1 + m2;
            if (std::abs(n) > n_small || std::abs(m) > n_small)
                continue;
            int k = (n + n_small) * side + (m + n_small);
            Complex phase = std::exp(Complex(0.0, 2.0 * kPi * theta * m1 * n2));
            Complex d1 = Complex(0.0, 2.0 * kPi * n1);
            Complex d2 = Complex(0.0, 2.0 * kPi * m2);
            std::size_t flat = (static_cast<std::size_t>(i) * dim + j) * dim + k;
            pi.tensor()[static_cast<Eigen::Index>(flat)] = d1 * d2 * phase;
            pi1.tensor()[static_cast<Eigen::Index>(flat)] = -0.5 * d1 * d1 * d2 * d2 * phase;
        }
    }

    TorusEmbedding emb{std::move(algebra), std::move(pi), std::move(pi1), theta, n_small};
    return emb;
}

} // namespace ncpoisson
