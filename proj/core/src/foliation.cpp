#include "ncpoisson/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncpoisson {

namespace {

int ipow_i(int b, int e)
{
    int r = 1;
    for (int i = 0; i < e; ++i)
        r *= b;
    return r;
}

} // namespace

FoliatedTorusModel::FoliatedTorusModel(const FoliationConfig& config)
    : config_(config),
      p_(config.p),
      q_(config.q),
      nx_(config.n_x),
      ny_(config.n_y)
{
    if (p_ < 1 || q_ < 2 || q_ % 2 != 0)
        throw std::invalid_argument("model needs p >= 1 and even q >= 2");
    if (nx_ < 4 || ny_ < 4)
        throw std::invalid_argument("grids must have at least 4 points per axis");
    nleaf_ = ipow_i(nx_, p_);
    nbase_ = ipow_i(ny_, q_);

    // spectral differentiation matrix on the n_y-periodic unit grid;
    // exact on modes up to (n_y-1)/2, Nyquist mode mapped to zero
    dmat_ = RealMatrix::Zero(ny_, ny_);
    int maxm = (ny_ - 1) / 2;
    for (int a = 0; a < ny_; ++a)
        for (int b = 0; b < ny_; ++b) {
            if (a == b)
                continue;
            double s = 0.0;
            for (int m = 1; m <= maxm; ++m)
                s += m * std::sin(2.0 * kPi * m * (a - b) / ny_);
            dmat_(a, b) = -4.0 * kPi * s / ny_;
        }

    // density modes
    std::vector<DensityMode> modes;
    if (config.density == "const") {
        // log f = 0
    } else if (config.density == "expsin") {
        DensityMode m;
        m.mx.assign(p_, 0);
        m.my.assign(q_, 0);
        m.my[0] = 1;
        m.b = 1.0; // log f = sin(2 pi y_1)
        modes.push_back(m);
    } else if (config.density == "userfourier") {
        modes = config.density_modes;
        for (const auto& m : modes)
            if (static_cast<int>(m.mx.size()) != p_ || static_cast<int>(m.my.size()) != q_)
                throw std::invalid_argument("density mode has wrong index count");
    } else {
        throw std::invalid_argument("unknown density preset: " + config.density);
    }

    f_ = RealMatrix::Zero(nleaf_, nbase_);
    for (int x = 0; x < nleaf_; ++x)
        for (int y = 0; y < nbase_; ++y) {
            double phase_logf = 0.0;
            for (const auto& m : modes) {
                double arg = 0.0;
                for (int a = 0; a < p_; ++a)
                    arg += m.mx[a] * (static_cast<double>(leaf_axis_coord(x, a)) / nx_);
                for (int a = 0; a < q_; ++a)
                    arg += m.my[a] * (static_cast<double>(base_axis_coord(y, a)) / ny_);
                phase_logf += m.a * std::cos(2.0 * kPi * arg) + m.b * std::sin(2.0 * kPi * arg);
            }
            f_(x, y) = std::exp(phase_logf);
        }
    if ((f_.array() <= 0.0).any())
        throw std::invalid_argument("density must be positive");

    RealMatrix logf = f_.array().log().matrix();
    kappa_.reserve(q_);
    for (int l = 0; l < q_; ++l)
        kappa_.push_back(base_derivative(logf, l));

    omega_ = RealMatrix::Zero(q_, q_);
    for (int i = 0; i + 1 < q_; i += 2) {
        omega_(i, i + 1) = 1.0;
        omega_(i + 1, i) = -1.0;
    }
    lambda_ = omega_.inverse();
    if ((lambda_ * omega_ - RealMatrix::Identity(q_, q_)).norm() > 1e-12)
        throw std::logic_error("lambda is not the inverse of omega");
}

int FoliatedTorusModel::base_axis_stride(int axis) const
{
    return ipow_i(ny_, q_ - 1 - axis);
}

int FoliatedTorusModel::base_axis_coord(int yflat, int axis) const
{
    return (yflat / base_axis_stride(axis)) % ny_;
}

int FoliatedTorusModel::leaf_axis_coord(int xflat, int axis) const
{
    return (xflat / ipow_i(nx_, p_ - 1 - axis)) % nx_;
}

Matrix FoliatedTorusModel::base_derivative(const Matrix& values, int axis) const
{
    Matrix out = Matrix::Zero(values.rows(), values.cols());
    int stride = base_axis_stride(axis);
    for (int y = 0; y < nbase_; ++y) {
        int c = base_axis_coord(y, axis);
        int base = y - c * stride;
        for (int t = 0; t < ny_; ++t) {
            double w = dmat_(c, t);
            if (w != 0.0)
                out.col(y) += w * values.col(base + t * stride);
        }
    }
    return out;
}

RealMatrix FoliatedTorusModel::base_derivative(const RealMatrix& values, int axis) const
{
    RealMatrix out = RealMatrix::Zero(values.rows(), values.cols());
    int stride = base_axis_stride(axis);
    for (int y = 0; y < nbase_; ++y) {
        int c = base_axis_coord(y, axis);
        int base = y - c * stride;
        for (int t = 0; t < ny_; ++t) {
            double w = dmat_(c, t);
            if (w != 0.0)
                out.col(y) += w * values.col(base + t * stride);
        }
    }
    return out;
}

RealVector FoliatedTorusModel::base_derivative(const RealVector& values, int axis) const
{
    RealVector out = RealVector::Zero(values.size());
    int stride = base_axis_stride(axis);
    for (int y = 0; y < nbase_; ++y) {
        int c = base_axis_coord(y, axis);
        int base = y - c * stride;
        for (int t = 0; t < ny_; ++t) {
            double w = dmat_(c, t);
            if (w != 0.0)
                out[y] += w * values[base + t * stride];
        }
    }
    return out;
}

int component_count(FormDegree deg, int q)
{
    switch (deg) {
    case FormDegree::Scalar: return 1;
    case FormDegree::OneForm: return q;
    case FormDegree::SymTwoTensor: return q * (q + 1) / 2;
    case FormDegree::AltTwoForm: return q * (q - 1) / 2;
    }
    return 0;
}

int sym_component_index(int j, int l, int q)
{
    if (j > l)
        std::swap(j, l);
    return j * q - j * (j - 1) / 2 + (l - j);
}

int alt_component_index(int j, int l, int q)
{
    // caller orients j < l
    return j * (2 * q - j - 1) / 2 + (l - j - 1);
}

GroupoidKernel::GroupoidKernel(const FoliatedTorusModel& model, FormDegree deg)
    : model_(&model), deg_(deg)
{
    int nc = component_count(deg, model.q());
    comp_.assign(nc, std::vector<Matrix>(
                         model.base_points(),
                         Matrix::Zero(model.leaf_points(), model.leaf_points())));
}

double GroupoidKernel::sup_norm() const
{
    double best = 0.0;
    for (const auto& c : comp_)
        for (const auto& m : c)
            best = std::max(best, m.cwiseAbs().maxCoeff());
    return best;
}

GroupoidKernel GroupoidKernel::operator+(const GroupoidKernel& o) const
{
    if (model_ != o.model_ || deg_ != o.deg_)
        throw std::invalid_argument("kernel mismatch");
    GroupoidKernel r(*model_, deg_);
    for (int c = 0; c < components(); ++c)
        for (int y = 0; y < model_->base_points(); ++y)
            r.comp_[c][y] = comp_[c][y] + o.comp_[c][y];
    return r;
}

GroupoidKernel GroupoidKernel::operator-(const GroupoidKernel& o) const
{
    if (model_ != o.model_ || deg_ != o.deg_)
        throw std::invalid_argument("kernel mismatch");
    GroupoidKernel r(*model_, deg_);
    for (int c = 0; c < components(); ++c)
        for (int y = 0; y < model_->base_points(); ++y)
            r.comp_[c][y] = comp_[c][y] - o.comp_[c][y];
    return r;
}

GroupoidKernel GroupoidKernel::operator*(Complex s) const
{
    GroupoidKernel r(*model_, deg_);
    for (int c = 0; c < components(); ++c)
        for (int y = 0; y < model_->base_points(); ++y)
            r.comp_[c][y] = comp_[c][y] * s;
    return r;
}

MFunction broadcast(const BaseFunction& h)
{
    const auto& m = *h.model;
    Matrix v(m.leaf_points(), m.base_points());
    for (int y = 0; y < m.base_points(); ++y)
        v.col(y).setConstant(Complex(h.values[y], 0.0));
    return {h.model, std::move(v)};
}

ExtendedElement extended_zero(const FoliatedTorusModel& model)
{
    return {GroupoidKernel(model, FormDegree::Scalar),
            {&model, Matrix::Zero(model.leaf_points(), model.base_points())}};
}

ExtendedElement extended_from_kernel(GroupoidKernel k)
{
    const FoliatedTorusModel& m = k.model();
    return {std::move(k), {&m, Matrix::Zero(m.leaf_points(), m.base_points())}};
}

ExtendedElement extended_from_function(MFunction a)
{
    const FoliatedTorusModel& m = *a.model;
    return {GroupoidKernel(m, FormDegree::Scalar), std::move(a)};
}

ExtendedElement extended_from_base(const BaseFunction& h)
{
    return extended_from_function(broadcast(h));
}

namespace {

void check_same_model(const GroupoidKernel& a, const GroupoidKernel& b)
{
    if (&a.model() != &b.model())
        throw std::invalid_argument("kernels belong to different models");
}

// f-weighted slicewise product: out[y] = A[y] diag(f(:,y)) B[y] / nleaf
std::vector<Matrix> convolve_components(const FoliatedTorusModel& m,
                                        const std::vector<Matrix>& A,
                                        const std::vector<Matrix>& B)
{
    int nbase = m.base_points();
    int nleaf = m.leaf_points();
    std::vector<Matrix> out(nbase);
    double scale = 1.0 / nleaf;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int y = 0; y < nbase; ++y) {
        Vector w = m.density().col(y).cast<Complex>() * scale;
        out[y] = A[y] * (w.asDiagonal() * B[y]);
    }
    return out;
}

// 1/2 (kappa_l(x,y) + kappa_l(x',y)) K, the diagonal sandwich
void add_curvature_term(const FoliatedTorusModel& m, int axis,
                        const std::vector<Matrix>& K, std::vector<Matrix>& out,
                        double weight = 0.5)
{
    const RealMatrix& kap = m.mean_curvature()[axis];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int y = 0; y < m.base_points(); ++y) {
        Vector kv = kap.col(y).cast<Complex>();
        out[y] += weight * (kv.asDiagonal() * K[y] + K[y] * kv.asDiagonal());
    }
}

std::vector<Matrix> kernel_base_derivative(const FoliatedTorusModel& m,
                                           const std::vector<Matrix>& K, int axis)
{
    int nbase = m.base_points();
    int stride = m.base_axis_stride(axis);
    int ny = m.n_y();
    std::vector<Matrix> out(nbase);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int y = 0; y < nbase; ++y) {
        int c = m.base_axis_coord(y, axis);
        int base = y - c * stride;
        Matrix acc = Matrix::Zero(m.leaf_points(), m.leaf_points());
        for (int t = 0; t < ny; ++t) {
            double w = m.derivative_matrix()(c, t);
            if (w != 0.0)
                acc += w * K[base + t * stride];
        }
        out[y] = std::move(acc);
    }
    return out;
}

// corrected derivative (D_axis + C_axis) applied to one component
std::vector<Matrix> corrected_derivative(const FoliatedTorusModel& m,
                                         const std::vector<Matrix>& K, int axis)
{
    std::vector<Matrix> out = kernel_base_derivative(m, K, axis);
    add_curvature_term(m, axis, K, out);
    return out;
}

double scale_of(std::initializer_list<const GroupoidKernel*> ks)
{
    double s = 1.0;
    for (const GroupoidKernel* k : ks)
        s = std::max(s, k->sup_norm());
    return s;
}

} // namespace

GroupoidKernel convolve(const GroupoidKernel& k1, const GroupoidKernel& k2)
{
    check_same_model(k1, k2);
    if (k1.form_degree() != FormDegree::Scalar || k2.form_degree() != FormDegree::Scalar)
        throw std::invalid_argument("convolve expects scalar kernels (use wedge_convolve)");
    GroupoidKernel out(k1.model(), FormDegree::Scalar);
    out.component(0) = convolve_components(k1.model(), k1.component(0), k2.component(0));
    return out;
}

const std::vector<RealMatrix>& mean_curvature_form(const FoliatedTorusModel& model)
{
    return model.mean_curvature();
}

GroupoidKernel involution(const GroupoidKernel& k)
{
    if (k.form_degree() != FormDegree::Scalar)
        throw std::invalid_argument("involution expects a scalar kernel");
    GroupoidKernel out(k.model(), FormDegree::Scalar);
    for (int y = 0; y < k.model().base_points(); ++y)
        out.at(0, y) = k.at(0, y).adjoint();
    return out;
}

GroupoidKernel multiply_left(const MFunction& a, const GroupoidKernel& k)
{
    if (a.model != &k.model())
        throw std::invalid_argument("function and kernel belong to different models");
    GroupoidKernel out(k.model(), k.form_degree());
    for (int c = 0; c < k.components(); ++c)
        for (int y = 0; y < k.model().base_points(); ++y)
            out.at(c, y) = a.values.col(y).asDiagonal() * k.at(c, y);
    return out;
}

GroupoidKernel multiply_right(const GroupoidKernel& k, const MFunction& a)
{
    if (a.model != &k.model())
        throw std::invalid_argument("function and kernel belong to different models");
    GroupoidKernel out(k.model(), k.form_degree());
    for (int c = 0; c < k.components(); ++c)
        for (int y = 0; y < k.model().base_points(); ++y)
            out.at(c, y) = k.at(c, y) * a.values.col(y).asDiagonal();
    return out;
}

ExtendedElement multiply(const ExtendedElement& e1, const ExtendedElement& e2)
{
    const FoliatedTorusModel& m = e1.kernel.model();
    if (&m != &e2.kernel.model())
        throw std::invalid_argument("elements belong to different models");
    GroupoidKernel k = convolve(e1.kernel, e2.kernel) + multiply_left(e1.fn, e2.kernel) +
                       multiply_right(e1.kernel, e2.fn);
    MFunction a{&m, (e1.fn.values.array() * e2.fn.values.array()).matrix()};
    return {std::move(k), std::move(a)};
}

GroupoidKernel transverse_differential(const GroupoidKernel& k)
{
    const FoliatedTorusModel& m = k.model();
    if (k.form_degree() == FormDegree::Scalar) {
        GroupoidKernel out(m, FormDegree::OneForm);
        for (int l = 0; l < m.q(); ++l)
            out.component(l) = corrected_derivative(m, k.component(0), l);
        return out;
    }
    if (k.form_degree() == FormDegree::OneForm) {
        GroupoidKernel out(m, FormDegree::AltTwoForm);
        for (int j = 0; j < m.q(); ++j)
            for (int l = j + 1; l < m.q(); ++l) {
                std::vector<Matrix> a = corrected_derivative(m, k.component(l), j);
                std::vector<Matrix> b = corrected_derivative(m, k.component(j), l);
                auto& dst = out.component(alt_component_index(j, l, m.q()));
                for (int y = 0; y < m.base_points(); ++y)
                    dst[y] = a[y] - b[y];
            }
        return out;
    }
    throw std::invalid_argument("transverse_differential handles scalar and 1-form kernels");
}

GroupoidKernel second_transverse_differential(const GroupoidKernel& k)
{
    const FoliatedTorusModel& m = k.model();
    if (k.form_degree() != FormDegree::Scalar)
        throw std::invalid_argument("second_transverse_differential expects a scalar kernel");
    GroupoidKernel omega = transverse_differential(k);
    GroupoidKernel out(m, FormDegree::SymTwoTensor);
    for (int j = 0; j < m.q(); ++j)
        for (int l = j; l < m.q(); ++l) {
            std::vector<Matrix> a = corrected_derivative(m, omega.component(l), j);
            std::vector<Matrix> b = corrected_derivative(m, omega.component(j), l);
            auto& dst = out.component(sym_component_index(j, l, m.q()));
            for (int y = 0; y < m.base_points(); ++y)
                dst[y] = 0.5 * (a[y] + b[y]);
        }
    return out;
}

GroupoidKernel wedge_convolve(const GroupoidKernel& w1, const GroupoidKernel& w2)
{
    check_same_model(w1, w2);
    const FoliatedTorusModel& m = w1.model();
    FormDegree d1 = w1.form_degree(), d2 = w2.form_degree();
    auto deg_of = [](FormDegree d) {
        switch (d) {
        case FormDegree::Scalar: return 0;
        case FormDegree::OneForm: return 1;
        case FormDegree::AltTwoForm: return 2;
        case FormDegree::SymTwoTensor: return -100; // not a form
        }
        return -100;
    };
    int total = deg_of(d1) + deg_of(d2);
    if (total < 0 || total > 2)
        throw std::invalid_argument("wedge_convolve: degree overflow");

    if (d1 == FormDegree::Scalar && d2 == FormDegree::Scalar)
        return convolve(w1, w2);

    if (d1 == FormDegree::Scalar || d2 == FormDegree::Scalar) {
        const GroupoidKernel& form = (d1 == FormDegree::Scalar) ? w2 : w1;
        GroupoidKernel out(m, form.form_degree());
        for (int c = 0; c < form.components(); ++c)
            out.component(c) =
                (d1 == FormDegree::Scalar)
                    ? convolve_components(m, w1.component(0), form.component(c))
                    : convolve_components(m, form.component(c), w2.component(0));
        return out;
    }

    // 1-form wedge 1-form -> antisymmetric 2-form
    GroupoidKernel out(m, FormDegree::AltTwoForm);
    for (int j = 0; j < m.q(); ++j)
        for (int l = j + 1; l < m.q(); ++l) {
            std::vector<Matrix> a = convolve_components(m, w1.component(j), w2.component(l));
            std::vector<Matrix> b = convolve_components(m, w1.component(l), w2.component(j));
            auto& dst = out.component(alt_component_index(j, l, m.q()));
            for (int y = 0; y < m.base_points(); ++y)
                dst[y] = a[y] - b[y];
        }
    return out;
}

GroupoidKernel poisson_bracket_kernels(const GroupoidKernel& k1, const GroupoidKernel& k2)
{
    check_same_model(k1, k2);
    const FoliatedTorusModel& m = k1.model();
    GroupoidKernel w1 = transverse_differential(k1);
    GroupoidKernel w2 = transverse_differential(k2);
    GroupoidKernel out(m, FormDegree::Scalar);
    for (int j = 0; j < m.q(); ++j)
        for (int l = 0; l < m.q(); ++l) {
            double lam = m.lambda()(j, l);
            if (lam == 0.0)
                continue;
            std::vector<Matrix> t = convolve_components(m, w1.component(j), w2.component(l));
            for (int y = 0; y < m.base_points(); ++y)
                out.at(0, y) += lam * t[y];
        }
    return out;
}

GroupoidKernel witness_kernels(const GroupoidKernel& k1, const GroupoidKernel& k2)
{
    check_same_model(k1, k2);
    const FoliatedTorusModel& m = k1.model();
    GroupoidKernel d1 = second_transverse_differential(k1);
    GroupoidKernel d2 = second_transverse_differential(k2);
    GroupoidKernel out(m, FormDegree::Scalar);
    for (int j = 0; j < m.q(); ++j)
        for (int l = 0; l < m.q(); ++l) {
            double lam1 = m.lambda()(j, l);
            if (lam1 == 0.0)
                continue;
            for (int mm = 0; mm < m.q(); ++mm)
                for (int n = 0; n < m.q(); ++n) {
                    double lam2 = m.lambda()(mm, n);
                    if (lam2 == 0.0)
                        continue;
                    std::vector<Matrix> t = convolve_components(
                        m, d1.component(sym_component_index(j, mm, m.q())),
                        d2.component(sym_component_index(l, n, m.q())));
                    double w = -0.5 * lam1 * lam2;
                    for (int y = 0; y < m.base_points(); ++y)
                        out.at(0, y) += w * t[y];
                }
        }
    return out;
}

ExtendedElement extended_bracket(const ExtendedElement& e1, const ExtendedElement& e2)
{
    const FoliatedTorusModel& m = e1.kernel.model();
    if (&m != &e2.kernel.model())
        throw std::invalid_argument("elements belong to different models");

    GroupoidKernel kpart = poisson_bracket_kernels(e1.kernel, e2.kernel);

    GroupoidKernel w2 = transverse_differential(e2.kernel);
    GroupoidKernel w1 = transverse_differential(e1.kernel);
    std::vector<Matrix> da1(m.q()), da2(m.q());
    for (int l = 0; l < m.q(); ++l) {
        da1[l] = m.base_derivative(e1.fn.values, l);
        da2[l] = m.base_derivative(e2.fn.values, l);
    }

    for (int j = 0; j < m.q(); ++j)
        for (int l = 0; l < m.q(); ++l) {
            double lam = m.lambda()(j, l);
            if (lam == 0.0)
                continue;
            for (int y = 0; y < m.base_points(); ++y) {
                // Lambda(d_H a1, D_H k2) evaluated at the range point (x,y)
                kpart.at(0, y) += lam * (da1[j].col(y).asDiagonal() * w2.at(l, y));
                // Lambda(D_H k1, d_H a2) evaluated at the source point (x',y)
                kpart.at(0, y) += lam * (w1.at(j, y) * da2[l].col(y).asDiagonal());
            }
        }

    Matrix fn = Matrix::Zero(m.leaf_points(), m.base_points());
    for (int j = 0; j < m.q(); ++j)
        for (int l = 0; l < m.q(); ++l) {
            double lam = m.lambda()(j, l);
            if (lam == 0.0)
                continue;
            fn += lam * (da1[j].array() * da2[l].array()).matrix();
        }
    return {std::move(kpart), {&m, std::move(fn)}};
}

HamiltonianField hamiltonian_field(const BaseFunction& h)
{
    const FoliatedTorusModel& m = *h.model;
    std::vector<RealVector> dh(m.q());
    for (int j = 0; j < m.q(); ++j)
        dh[j] = m.base_derivative(h.values, j);
    std::vector<RealVector> v(m.q(), RealVector::Zero(m.base_points()));
    for (int l = 0; l < m.q(); ++l)
        for (int j = 0; j < m.q(); ++j) {
            double lam = m.lambda()(j, l);
            if (lam != 0.0)
                v[l] += lam * dh[j];
        }
    return {&m, std::move(v)};
}

GroupoidKernel lie_derivative_operator(const BaseFunction& h, const GroupoidKernel& k)
{
    const FoliatedTorusModel& m = k.model();
    if (h.model != &m)
        throw std::invalid_argument("hamiltonian and kernel belong to different models");
    if (k.form_degree() != FormDegree::Scalar)
        throw std::invalid_argument("lie_derivative_operator expects a scalar kernel");

    HamiltonianField v = hamiltonian_field(h);
    GroupoidKernel out(m, FormDegree::Scalar);
    for (int l = 0; l < m.q(); ++l) {
        std::vector<Matrix> dk = kernel_base_derivative(m, k.component(0), l);
        const RealMatrix& kap = m.mean_curvature()[l];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int y = 0; y < m.base_points(); ++y) {
            double vl = v.comp[l][y];
            if (vl == 0.0)
                continue;
            Vector kv = kap.col(y).cast<Complex>();
            out.at(0, y) += vl * dk[y] +
                            0.5 * vl * (kv.asDiagonal() * k.at(0, y) + k.at(0, y) * kv.asDiagonal());
        }
    }
    return out;
}

double check_lemma(const BaseFunction& h, const BaseFunction& a)
{
    const FoliatedTorusModel& m = *h.model;
    HamiltonianField v = hamiltonian_field(h);
    std::vector<RealVector> dh(m.q()), da(m.q());
    for (int j = 0; j < m.q(); ++j) {
        dh[j] = m.base_derivative(h.values, j);
        da[j] = m.base_derivative(a.values, j);
    }
    RealVector lhs = RealVector::Zero(m.base_points());
    for (int j = 0; j < m.q(); ++j)
        for (int l = 0; l < m.q(); ++l) {
            double lam = m.lambda()(j, l);
            if (lam != 0.0)
                lhs += lam * (dh[j].array() * da[l].array()).matrix();
        }
    RealVector rhs = RealVector::Zero(m.base_points());
    for (int l = 0; l < m.q(); ++l)
        rhs += (v.comp[l].array() * da[l].array()).matrix();
    double scale = std::max({1.0, lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()});
    return (lhs - rhs).cwiseAbs().maxCoeff() / scale;
}

double check_lemma(const BaseFunction& h, const MFunction& a)
{
    const FoliatedTorusModel& m = *h.model;
    HamiltonianField v = hamiltonian_field(h);
    std::vector<RealVector> dh(m.q());
    std::vector<Matrix> da(m.q());
    for (int j = 0; j < m.q(); ++j) {
        dh[j] = m.base_derivative(h.values, j);
        da[j] = m.base_derivative(a.values, j);
    }
    Matrix lhs = Matrix::Zero(m.leaf_points(), m.base_points());
    for (int j = 0; j < m.q(); ++j)
        for (int l = 0; l < m.q(); ++l) {
            double lam = m.lambda()(j, l);
            if (lam == 0.0)
                continue;
            for (int y = 0; y < m.base_points(); ++y)
                lhs.col(y) += lam * dh[j][y] * da[l].col(y);
        }
    Matrix rhs = Matrix::Zero(m.leaf_points(), m.base_points());
    for (int l = 0; l < m.q(); ++l)
        for (int y = 0; y < m.base_points(); ++y)
            rhs.col(y) += v.comp[l][y] * da[l].col(y);
    double scale = std::max({1.0, lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()});
    return (lhs - rhs).cwiseAbs().maxCoeff() / scale;
}

TheoremReport check_main_theorem(const BaseFunction& h, const GroupoidKernel& k,
                                 const MFunction* a, double tolerance)
{
    const FoliatedTorusModel& m = k.model();
    if (h.model != &m)
        throw std::invalid_argument("hamiltonian and kernel belong to different models");

    ExtendedElement eh = extended_from_base(h);
    ExtendedElement ek = extended_from_kernel(k);
    ExtendedElement hk = extended_bracket(eh, ek);
    ExtendedElement kh = extended_bracket(ek, eh);
    GroupoidKernel lie = lie_derivative_operator(h, k);

    GroupoidKernel diff = (hk.kernel - kh.kernel) * Complex(0.5) - lie;
    double scale = scale_of({&hk.kernel, &kh.kernel, &lie});
    double res = diff.sup_norm() / scale;

    if (a) {
        ExtendedElement ea = extended_from_function(*a);
        ExtendedElement ha = extended_bracket(eh, ea);
        ExtendedElement ah = extended_bracket(ea, eh);
        Matrix fdiff = 0.5 * (ha.fn.values - ah.fn.values);
        HamiltonianField v = hamiltonian_field(h);
        for (int l = 0; l < m.q(); ++l) {
            Matrix da = m.base_derivative(a->values, l);
            for (int y = 0; y < m.base_points(); ++y)
                fdiff.col(y) -= v.comp[l][y] * da.col(y);
        }
        double fscale = std::max(1.0, ha.fn.values.cwiseAbs().maxCoeff());
        res = std::max(res, fdiff.cwiseAbs().maxCoeff() / fscale);
    }

    return {res, m.n_y(), tolerance, res <= tolerance};
}

// --- random band-limited data --------------------------------------------

namespace {

Spectrum random_spectrum(int axes, int max_mode, double decay, Rng& rng)
{
    Spectrum s;
    s.axes.assign(axes, 0);
    s.max_mode = max_mode;
    int side = 2 * max_mode + 1;
    std::size_t total = 1;
    for (int a = 0; a < axes; ++a)
        total *= side;
    s.coef.resize(total);
    std::vector<int> idx(axes, 0);
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rem = f;
        int l1 = 0;
        for (int a = axes - 1; a >= 0; --a) {
            int mi = static_cast<int>(rem % side);
            rem /= side;
            l1 += std::abs(mi - max_mode);
        }
        s.coef[f] = rng.cgaussian() * std::exp(-decay * l1);
    }
    return s;
}

// Evaluate the truncated Fourier sum on per-axis grids by contracting one
// axis at a time (contract the last axis, prepend the new grid axis).
std::vector<Complex> render_spectrum(const Spectrum& s, const std::vector<int>& grid_sizes)
{
    int axes = static_cast<int>(s.axes.size());
    int side = 2 * s.max_mode + 1;
    std::vector<Complex> data = s.coef;
    std::vector<std::size_t> shape(axes, static_cast<std::size_t>(side));

    for (int step = axes - 1; step >= 0; --step) {
        int g = grid_sizes[step]; // axis being contracted is the original axis `step`
        Matrix E(g, side);
        for (int x = 0; x < g; ++x)
            for (int mi = 0; mi < side; ++mi)
                E(x, mi) = std::exp(Complex(0.0, 2.0 * kPi * (mi - s.max_mode) *
                                                     (static_cast<double>(x) / g)));
        std::size_t rest = data.size() / side;
        std::vector<Complex> next(rest * g);
        for (std::size_t r = 0; r < rest; ++r) {
            Eigen::Map<const Vector> vin(data.data() + r * side, side);
            Vector vout = E * vin;
            for (int x = 0; x < g; ++x)
                next[static_cast<std::size_t>(x) * rest + r] = vout[x];
        }
        data = std::move(next);
    }
    return data;
}

} // namespace

Spectrum random_kernel_spectrum(int p, int q, int max_mode, double decay, Rng& rng)
{
    return random_spectrum(2 * p + q, max_mode, decay, rng);
}

Spectrum random_mfunction_spectrum(int p, int q, int max_mode, double decay, Rng& rng)
{
    return random_spectrum(p + q, max_mode, decay, rng);
}

Spectrum random_base_spectrum(int q, int max_mode, double decay, Rng& rng)
{
    return random_spectrum(q, max_mode, decay, rng);
}

GroupoidKernel render_kernel(const Spectrum& s, const FoliatedTorusModel& model)
{
    int p = model.p(), q = model.q();
    if (static_cast<int>(s.axes.size()) != 2 * p + q)
        throw std::invalid_argument("kernel spectrum has wrong axis count");
    std::vector<int> grids;
    for (int a = 0; a < 2 * p; ++a)
        grids.push_back(model.n_x());
    for (int a = 0; a < q; ++a)
        grids.push_back(model.n_y());
    std::vector<Complex> data = render_spectrum(s, grids);

    GroupoidKernel out(model, FormDegree::Scalar);
    int nleaf = model.leaf_points(), nbase = model.base_points();
    for (int x = 0; x < nleaf; ++x)
        for (int xp = 0; xp < nleaf; ++xp)
            for (int y = 0; y < nbase; ++y)
                out.at(0, y)(x, xp) =
                    data[(static_cast<std::size_t>(x) * nleaf + xp) * nbase + y];
    return out;
}

MFunction render_mfunction(const Spectrum& s, const FoliatedTorusModel& model)
{
    int p = model.p(), q = model.q();
    if (static_cast<int>(s.axes.size()) != p + q)
        throw std::invalid_argument("mfunction spectrum has wrong axis count");
    std::vector<int> grids;
    for (int a = 0; a < p; ++a)
        grids.push_back(model.n_x());
    for (int a = 0; a < q; ++a)
        grids.push_back(model.n_y());
    std::vector<Complex> data = render_spectrum(s, grids);
    Matrix v(model.leaf_points(), model.base_points());
    for (int x = 0; x < model.leaf_points(); ++x)
        for (int y = 0; y < model.base_points(); ++y)
            v(x, y) = data[static_cast<std::size_t>(x) * model.base_points() + y];
    return {&model, std::move(v)};
}

BaseFunction render_base_real(const Spectrum& s, const FoliatedTorusModel& model)
{
    if (static_cast<int>(s.axes.size()) != model.q())
        throw std::invalid_argument("base spectrum has wrong axis count");
    std::vector<int> grids(model.q(), model.n_y());
    std::vector<Complex> data = render_spectrum(s, grids);
    RealVector v(model.base_points());
    for (int y = 0; y < model.base_points(); ++y)
        v[y] = data[y].real();
    return {&model, std::move(v)};
}

GroupoidKernel random_kernel(const FoliatedTorusModel& model, int max_mode, Rng& rng,
                             double decay)
{
    return render_kernel(random_kernel_spectrum(model.p(), model.q(), max_mode, decay, rng),
                         model);
}

MFunction random_mfunction(const FoliatedTorusModel& model, int max_mode, Rng& rng, double decay)
{
    return render_mfunction(random_mfunction_spectrum(model.p(), model.q(), max_mode, decay, rng),
                            model);
}

BaseFunction base_preset(const FoliatedTorusModel& model, const std::string& name)
{
    RealVector v(model.base_points());
    for (int y = 0; y < model.base_points(); ++y) {
        double y1 = static_cast<double>(model.base_axis_coord(y, 0)) / model.n_y();
        double y2 = model.q() > 1
                        ? static_cast<double>(model.base_axis_coord(y, 1)) / model.n_y()
                        : 0.0;
        if (name == "sin1")
            v[y] = std::sin(2.0 * kPi * y1);
        else if (name == "cos2")
            v[y] = std::cos(2.0 * kPi * y2);
        else if (name == "sum12")
            v[y] = std::sin(2.0 * kPi * y1) + std::cos(2.0 * kPi * y2);
        else if (name == "const")
            v[y] = 1.0;
        else
            throw std::invalid_argument("unknown base preset: " + name);
    }
    return {&model, std::move(v)};
}

// --- identity residuals ----------------------------------------------------

double associativity_residual(const GroupoidKernel& k1, const GroupoidKernel& k2,
                              const GroupoidKernel& k3)
{
    GroupoidKernel a = convolve(convolve(k1, k2), k3);
    GroupoidKernel b = convolve(k1, convolve(k2, k3));
    double scale = scale_of({&a, &b});
    return (a - b).sup_norm() / scale;
}

double involution_antihom_residual(const GroupoidKernel& k1, const GroupoidKernel& k2)
{
    GroupoidKernel a = involution(convolve(k1, k2));
    GroupoidKernel b = convolve(involution(k2), involution(k1));
    double scale = scale_of({&a, &b});
    return (a - b).sup_norm() / scale;
}

double leibniz_residual(const GroupoidKernel& k1, const GroupoidKernel& k2)
{
    GroupoidKernel lhs = transverse_differential(convolve(k1, k2));
    GroupoidKernel t1 = wedge_convolve(transverse_differential(k1), k2);
    GroupoidKernel t2 = wedge_convolve(k1, transverse_differential(k2));
    double scale = scale_of({&lhs, &t1, &t2});
    return (lhs - t1 - t2).sup_norm() / scale;
}

double graded_leibniz_residual(const GroupoidKernel& k_scalar, const GroupoidKernel& omega1)
{
    if (omega1.form_degree() != FormDegree::OneForm)
        throw std::invalid_argument("graded_leibniz_residual expects a 1-form second factor");
    GroupoidKernel prod = wedge_convolve(k_scalar, omega1);            // 1-form
    GroupoidKernel lhs = transverse_differential(prod);               // 2-form
    GroupoidKernel t1 = wedge_convolve(transverse_differential(k_scalar), omega1);
    GroupoidKernel t2 = wedge_convolve(k_scalar, transverse_differential(omega1));
    double scale = scale_of({&lhs, &t1, &t2});
    return (lhs - t1 - t2).sup_norm() / scale;
}

double bracket_cocycle_residual(const GroupoidKernel& k1, const GroupoidKernel& k2,
                                const GroupoidKernel& k3)
{
    GroupoidKernel t1 = convolve(k1, poisson_bracket_kernels(k2, k3));
    GroupoidKernel t2 = poisson_bracket_kernels(convolve(k1, k2), k3);
    GroupoidKernel t3 = poisson_bracket_kernels(k1, convolve(k2, k3));
    GroupoidKernel t4 = convolve(poisson_bracket_kernels(k1, k2), k3);
    double scale = scale_of({&t1, &t2, &t3, &t4});
    return (t1 - t2 + t3 - t4).sup_norm() / scale;
}

double bracket_antisymmetry_residual(const GroupoidKernel& k1, const GroupoidKernel& k2)
{
    // For self-adjoint kernels: Pi(k1,k2)^* = -Pi(k2,k1).
    GroupoidKernel a = involution(poisson_bracket_kernels(k1, k2));
    GroupoidKernel b = poisson_bracket_kernels(k2, k1);
    double scale = scale_of({&a, &b});
    return (a + b).sup_norm() / scale;
}

double extended_cocycle_residual(const ExtendedElement& e1, const ExtendedElement& e2,
                                 const ExtendedElement& e3)
{
    ExtendedElement t1 = multiply(e1, extended_bracket(e2, e3));
    ExtendedElement t2 = extended_bracket(multiply(e1, e2), e3);
    ExtendedElement t3 = extended_bracket(e1, multiply(e2, e3));
    ExtendedElement t4 = multiply(extended_bracket(e1, e2), e3);

    GroupoidKernel kres = t1.kernel - t2.kernel + t3.kernel - t4.kernel;
    Matrix fres = t1.fn.values - t2.fn.values + t3.fn.values - t4.fn.values;
    double scale = std::max({1.0, t1.kernel.sup_norm(), t2.kernel.sup_norm(),
                             t3.kernel.sup_norm(), t4.kernel.sup_norm(),
                             t1.fn.values.size() ? t1.fn.values.cwiseAbs().maxCoeff() : 0.0,
                             t2.fn.values.size() ? t2.fn.values.cwiseAbs().maxCoeff() : 0.0});
    return std::max(kres.sup_norm(), fres.cwiseAbs().maxCoeff()) / scale;
}

double jacobi_witness_residual(const GroupoidKernel& k1, const GroupoidKernel& k2,
                               const GroupoidKernel& k3)
{
    GroupoidKernel lhs = poisson_bracket_kernels(k1, poisson_bracket_kernels(k2, k3)) -
                         poisson_bracket_kernels(poisson_bracket_kernels(k1, k2), k3);
    GroupoidKernel r1 = convolve(k1, witness_kernels(k2, k3));
    GroupoidKernel r2 = witness_kernels(convolve(k1, k2), k3);
    GroupoidKernel r3 = witness_kernels(k1, convolve(k2, k3));
    GroupoidKernel r4 = convolve(witness_kernels(k1, k2), k3);
    GroupoidKernel rhs = r1 - r2 + r3 - r4;
    double scale = scale_of({&lhs, &r1, &r2, &r3, &r4});
    return (lhs - rhs).sup_norm() / scale;
}

double lie_derivation_residual(const BaseFunction& h, const GroupoidKernel& k1,
                               const GroupoidKernel& k2)
{
    GroupoidKernel lhs = lie_derivative_operator(h, convolve(k1, k2));
    GroupoidKernel t1 = convolve(lie_derivative_operator(h, k1), k2);
    GroupoidKernel t2 = convolve(k1, lie_derivative_operator(h, k2));
    double scale = scale_of({&lhs, &t1, &t2});
    return (lhs - t1 - t2).sup_norm() / scale;
}

double d2_symmetry_residual(const GroupoidKernel& k)
{
    const FoliatedTorusModel& m = k.model();
    GroupoidKernel omega = transverse_differential(k);
    double worst = 0.0, scale = 1.0;
    for (int j = 0; j < m.q(); ++j)
        for (int l = j + 1; l < m.q(); ++l) {
            std::vector<Matrix> a = corrected_derivative(m, omega.component(l), j);
            std::vector<Matrix> b = corrected_derivative(m, omega.component(j), l);
            for (int y = 0; y < m.base_points(); ++y) {
                worst = std::max(worst, (a[y] - b[y]).cwiseAbs().maxCoeff());
                scale = std::max({scale, a[y].cwiseAbs().maxCoeff(),
                                  b[y].cwiseAbs().maxCoeff()});
            }
        }
    return worst / scale;
}

} // namespace ncpoisson
