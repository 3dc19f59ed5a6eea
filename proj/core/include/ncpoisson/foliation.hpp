#pragma once

#include "ncpoisson/common.hpp"

#include <string>
#include <vector>

namespace ncpoisson {

/// One Fourier mode of the log-density: log f += a cos(2 pi (mx.x + my.y))
///                                              + b sin(2 pi (mx.x + my.y)).
struct DensityMode
{
    std::vector<int> mx; // size p
    std::vector<int> my; // size q
    double a = 0.0;
    double b = 0.0;
};

struct FoliationConfig
{
    int p = 1;       // leaf dimension
    int q = 2;       // base dimension, even
    int n_x = 32;    // grid per leaf coordinate
    int n_y = 32;    // grid per base coordinate
    std::string density = "expsin"; // const | expsin | userfourier
    std::vector<DensityMode> density_modes; // used by userfourier
};

/// Discretized fibration foliation with leaves T^p x {y} inside
/// M = T^p x T^q, standard symplectic base (omega = sum dy_{2i-1} ^ dy_{2i},
/// Lambda = omega^{-1}), positive leafwise density f(x,y) dx, and the flat
/// transverse distribution spanned by the base directions. All derivatives
/// in y are spectral on the periodic grid.
class FoliatedTorusModel
{
public:
    explicit FoliatedTorusModel(const FoliationConfig& config);

    int p() const { return p_; }
    int q() const { return q_; }
    int n_x() const { return nx_; }
    int n_y() const { return ny_; }
    int leaf_points() const { return nleaf_; }  // n_x^p
    int base_points() const { return nbase_; }  // n_y^q

    const RealMatrix& density() const { return f_; }
    const RealMatrix& omega() const { return omega_; }
    const RealMatrix& lambda() const { return lambda_; }
    /// kappa_l = d/dy_l log f, one (leaf x base) array per base axis.
    const std::vector<RealMatrix>& mean_curvature() const { return kappa_; }
    const RealMatrix& derivative_matrix() const { return dmat_; }

    int base_axis_coord(int yflat, int axis) const;
    int base_axis_stride(int axis) const;
    int leaf_axis_coord(int xflat, int axis) const;

    /// y-derivative along one base axis for (leaf x base) sample arrays.
    Matrix base_derivative(const Matrix& values, int axis) const;
    RealMatrix base_derivative(const RealMatrix& values, int axis) const;
    /// Same for base-only samples.
    RealVector base_derivative(const RealVector& values, int axis) const;

    const FoliationConfig& config() const { return config_; }

private:
    FoliationConfig config_;
    int p_, q_, nx_, ny_, nleaf_, nbase_;
    RealMatrix f_;                  // nleaf x nbase
    std::vector<RealMatrix> kappa_; // q arrays, nleaf x nbase
    RealMatrix omega_, lambda_;     // q x q
    RealMatrix dmat_;               // n_y x n_y spectral differentiation
};

enum class FormDegree { Scalar, OneForm, SymTwoTensor, AltTwoForm };

int component_count(FormDegree deg, int q);
int sym_component_index(int j, int l, int q);
int alt_component_index(int j, int l, int q); // j < l

/// Kernel k(x, x', y) on the discretized groupoid T^p x T^p x T^q,
/// optionally valued in transverse forms. Stored per base point as a
/// (leaf x leaf) matrix, rows = x, columns = x'.
class GroupoidKernel
{
public:
    GroupoidKernel(const FoliatedTorusModel& model, FormDegree deg);

    const FoliatedTorusModel& model() const { return *model_; }
    FormDegree form_degree() const { return deg_; }
    int components() const { return static_cast<int>(comp_.size()); }

    const Matrix& at(int component, int yflat) const { return comp_[component][yflat]; }
    Matrix& at(int component, int yflat) { return comp_[component][yflat]; }
    const std::vector<Matrix>& component(int c) const { return comp_[c]; }
    std::vector<Matrix>& component(int c) { return comp_[c]; }

    double sup_norm() const;

    GroupoidKernel operator+(const GroupoidKernel& o) const;
    GroupoidKernel operator-(const GroupoidKernel& o) const;
    GroupoidKernel operator*(Complex s) const;

private:
    const FoliatedTorusModel* model_;
    FormDegree deg_;
    std::vector<std::vector<Matrix>> comp_;
};

/// Sampled function on M = T^p x T^q.
struct MFunction
{
    const FoliatedTorusModel* model;
    Matrix values; // nleaf x nbase
};

/// Leafwise-constant function h(y) on the base.
struct BaseFunction
{
    const FoliatedTorusModel* model;
    RealVector values; // nbase
};

MFunction broadcast(const BaseFunction& h);

/// Element k + a of the unital enlargement of the kernel algebra.
struct ExtendedElement
{
    GroupoidKernel kernel;
    MFunction fn;
};

ExtendedElement extended_zero(const FoliatedTorusModel& model);
ExtendedElement extended_from_kernel(GroupoidKernel k);
ExtendedElement extended_from_function(MFunction a);
ExtendedElement extended_from_base(const BaseFunction& h);

/// Convolution over the leaf: (k1 * k2)(x,x',y) = int k1(x,s,y) k2(s,x',y)
/// f(s,y) ds with the periodic trapezoid rule.
GroupoidKernel convolve(const GroupoidKernel& k1, const GroupoidKernel& k2);

/// kappa_l(x,y) = d/dy_l log f(x,y), one array per base axis.
const std::vector<RealMatrix>& mean_curvature_form(const FoliatedTorusModel& model);

/// k*(x,x',y) = conj k(x',x,y).
GroupoidKernel involution(const GroupoidKernel& k);

/// Left/right module actions of functions on M.
GroupoidKernel multiply_left(const MFunction& a, const GroupoidKernel& k);
GroupoidKernel multiply_right(const GroupoidKernel& k, const MFunction& a);

/// Product in the unital enlargement:
/// (k1+a1)(k2+a2) = k1*k2 + a1.k2 + k1.a2 + a1 a2.
ExtendedElement multiply(const ExtendedElement& e1, const ExtendedElement& e2);

/// Transverse differential with the mean-curvature correction,
///   (D_H k)_l = d_{y_l} k + 1/2 (kappa_l(x,y) + kappa_l(x',y)) k,
/// extended to 1-form-valued kernels as the antisymmetrized corrected
/// derivative (a 2-form-valued kernel).
GroupoidKernel transverse_differential(const GroupoidKernel& k);

/// Corrected second derivative (the flat covariant Hessian in the
/// half-density trivialization), symmetrized over the two form indices.
GroupoidKernel second_transverse_differential(const GroupoidKernel& k);

/// Convolution of form-valued kernels with antisymmetrization over form
/// indices; degrees must sum to at most 2.
GroupoidKernel wedge_convolve(const GroupoidKernel& w1, const GroupoidKernel& w2);

/// Poisson bracket of scalar kernels,
///   Pi(k1,k2) = sum_{jl} Lambda^{jl} (D_H k1)_j * (D_H k2)_l.
GroupoidKernel poisson_bracket_kernels(const GroupoidKernel& k1, const GroupoidKernel& k2);

/// Jacobi witness
///   Pi1(k1,k2) = -1/2 sum Lambda^{jl} Lambda^{mn} (D^2 k1)_{jm} * (D^2 k2)_{ln}.
/// The -1/2 normalization matches the torus witness and is pinned by the
/// Jacobi residual test.
GroupoidKernel witness_kernels(const GroupoidKernel& k1, const GroupoidKernel& k2);

/// Bracket on the unital enlargement: the kernel part collects
/// Pi(k1,k2) + Lambda(d_H a1, D_H k2) + Lambda(D_H k1, d_H a2), and the
/// function part is the base bracket Lambda(d_H a1, d_H a2).
ExtendedElement extended_bracket(const ExtendedElement& e1, const ExtendedElement& e2);

/// Transverse Hamiltonian field of a leafwise-constant h:
/// v^l(y) = sum_j Lambda^{jl} d_{y_j} h. The lift to the groupoid has no
/// leaf components in this model.
struct HamiltonianField
{
    const FoliatedTorusModel* model;
    std::vector<RealVector> comp; // q arrays over the base grid
};

HamiltonianField hamiltonian_field(const BaseFunction& h);

/// L_{v_h} k = sum_l v^l d_{y_l} k
///           + 1/2 sum_l v^l (kappa_l(x,y) + kappa_l(x',y)) k.
GroupoidKernel lie_derivative_operator(const BaseFunction& h, const GroupoidKernel& k);

/// sup | sum_{jl} Lambda^{jl} d_j h d_l a  -  sum_l v_h^l d_l a |.
double check_lemma(const BaseFunction& h, const BaseFunction& a);
double check_lemma(const BaseFunction& h, const MFunction& a);

struct TheoremReport
{
    double residual;
    int grid;
    double tolerance;
    bool pass;
};

/// Residual of the Hamiltonian-derivation identity
///   1/2 (Pi(h,k) - Pi(k,h)) = L_{v_h} k,
/// plus, when a is supplied, of 1/2 (Pi(h,a) - Pi(a,h)) = v_h(a).
TheoremReport check_main_theorem(const BaseFunction& h, const GroupoidKernel& k,
                                 const MFunction* a = nullptr, double tolerance = 1e-9);

// --- band-limited random data -------------------------------------------

/// Fourier coefficients of a smooth random field, kept separate from any
/// grid so the same field can be rendered at several resolutions.
struct Spectrum
{
    std::vector<int> axes; // grid-size kind per axis is fixed at render time
    int max_mode;
    std::vector<Complex> coef; // flat over (2M+1)^axes, row-major
};

/// Kernel spectrum over (x, x', y); mode amplitudes decay exponentially at
/// rate `decay` in the total mode modulus, so products of rendered fields
/// stay resolved on the grid.
Spectrum random_kernel_spectrum(int p, int q, int max_mode, double decay, Rng& rng);
Spectrum random_mfunction_spectrum(int p, int q, int max_mode, double decay, Rng& rng);
Spectrum random_base_spectrum(int q, int max_mode, double decay, Rng& rng);

GroupoidKernel render_kernel(const Spectrum& s, const FoliatedTorusModel& model);
MFunction render_mfunction(const Spectrum& s, const FoliatedTorusModel& model);
BaseFunction render_base_real(const Spectrum& s, const FoliatedTorusModel& model);

GroupoidKernel random_kernel(const FoliatedTorusModel& model, int max_mode, Rng& rng,
                             double decay = 2.0);
MFunction random_mfunction(const FoliatedTorusModel& model, int max_mode, Rng& rng,
                           double decay = 2.0);

/// Named leafwise-constant Hamiltonians: "sin1" -> sin 2 pi y_1,
/// "cos2" -> cos 2 pi y_2, "sum12" -> sin 2 pi y_1 + cos 2 pi y_2,
/// "const" -> 1.
BaseFunction base_preset(const FoliatedTorusModel& model, const std::string& name);

// --- residuals of the algebraic identities (used by suites and tests) ----

double associativity_residual(const GroupoidKernel& k1, const GroupoidKernel& k2,
                              const GroupoidKernel& k3);
double involution_antihom_residual(const GroupoidKernel& k1, const GroupoidKernel& k2);
double leibniz_residual(const GroupoidKernel& k1, const GroupoidKernel& k2);
double graded_leibniz_residual(const GroupoidKernel& k_scalar, const GroupoidKernel& omega1);
double bracket_cocycle_residual(const GroupoidKernel& k1, const GroupoidKernel& k2,
                                const GroupoidKernel& k3);
double bracket_antisymmetry_residual(const GroupoidKernel& k1, const GroupoidKernel& k2);
double extended_cocycle_residual(const ExtendedElement& e1, const ExtendedElement& e2,
                                 const ExtendedElement& e3);
double jacobi_witness_residual(const GroupoidKernel& k1, const GroupoidKernel& k2,
                               const GroupoidKernel& k3);
double lie_derivation_residual(const BaseFunction& h, const GroupoidKernel& k1,
                               const GroupoidKernel& k2);
double d2_symmetry_residual(const GroupoidKernel& k);

} // namespace ncpoisson
