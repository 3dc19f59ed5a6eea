#include "ncpoisson/suites.hpp"

#include "ncpoisson/hochschild.hpp"
#include "ncpoisson/poisson.hpp"
#include "ncpoisson/torus.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

namespace ncpoisson {

nlohmann::json SuiteConfig::to_json() const
{
    nlohmann::json j;
    j["theta"] = theta;
    j["truncation"] = truncation;
    j["p"] = p;
    j["q"] = q;
    j["grid"] = grid;
    j["density"] = density;
    j["h_preset"] = h_preset;
    j["seed"] = seed;
    j["solve_tol"] = solve_tol;
    if (!density_modes.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& m : density_modes)
            arr.push_back({{"mx", m.mx}, {"my", m.my}, {"a", m.a}, {"b", m.b}});
        j["density_modes"] = arr;
    }
    return j;
}

FoliationConfig SuiteConfig::foliation(int grid_override) const
{
    FoliationConfig fc;
    fc.p = p;
    fc.q = q;
    fc.n_x = grid_override > 0 ? grid_override : grid;
    fc.n_y = fc.n_x;
    fc.density = density;
    fc.density_modes = density_modes;
    return fc;
}

namespace {

// ---------------------------------------------------------------- hochschild

void run_hochschild_suite(const SuiteConfig& cfg, std::vector<CheckResult>& out)
{
    struct Entry
    {
        std::string name;
        StructureConstantAlgebra algebra;
    };
    std::vector<Entry> algebras;
    algebras.push_back({"m2", matrix_algebra(2)});
    algebras.push_back({"m3", matrix_algebra(3)});
    algebras.push_back({"cs3", s3_group_algebra()});
    algebras.push_back({"ct3", truncated_polynomial_algebra(3)});

    // b(b(c)) = 0 on 25 seeded cochains per algebra, degrees cycling 0..3
    for (std::size_t e = 0; e < algebras.size(); ++e) {
        const auto& A = algebras[e].algebra;
        Rng rng(cfg.seed + 11 * e);
        double worst = 0.0;
        for (int draw = 0; draw < 25; ++draw) {
            Cochain c = Cochain::random(A, draw % 4, rng);
            Cochain bc = differential(c);
            Cochain bbc = differential(bc);
            worst = std::max(worst, rel_residual(bbc.sup_norm(), bc.sup_norm()));
        }
        out.push_back(make_check("b_squared_" + algebras[e].name, worst, 1e-12));

        Cochain mu = Cochain::multiplication(A);
        out.push_back(make_check("b_multiplication_" + algebras[e].name,
                                 rel_residual(differential(mu).sup_norm(), mu.sup_norm()),
                                 1e-12));
    }

    // graded antisymmetry of the Gerstenhaber bracket
    {
        double worst = 0.0;
        for (std::size_t e = 0; e < 2; ++e) { // m2, m3
            const auto& A = algebras[e].algebra;
            Rng rng(cfg.seed + 101 + e);
            int draws = e == 0 ? 20 : 10;
            for (int d = 0; d < draws; ++d) {
                int u = rng.uniform_int(0, 3), v = rng.uniform_int(0, 3);
                if (u == 0 && v == 0)
                    u = 1;
                Cochain U = Cochain::random(A, u, rng);
                Cochain V = Cochain::random(A, v, rng);
                Cochain lhs = gerstenhaber(U, V);
                Cochain rhs = gerstenhaber(V, U) *
                              Complex(parity_sign(static_cast<long>(u - 1) * (v - 1)));
                worst = std::max(worst,
                                 rel_residual((lhs + rhs).sup_norm(), lhs.sup_norm()));
            }
        }
        out.push_back(make_check("gerstenhaber_antisymmetry", worst, 1e-12));
    }

    // [P,P] = 2 P*P for 2-cochains
    {
        double worst = 0.0;
        for (std::size_t e = 0; e < 2; ++e) {
            const auto& A = algebras[e].algebra;
            Rng rng(cfg.seed + 211 + e);
            for (int d = 0; d < 10; ++d) {
                Cochain P = Cochain::random(A, 2, rng);
                Cochain lhs = gerstenhaber(P, P);
                Cochain rhs = pre_lie(P, P) * Complex(2.0);
                worst = std::max(worst,
                                 rel_residual((lhs - rhs).sup_norm(), lhs.sup_norm()));
            }
        }
        out.push_back(make_check("bracket_square_identity", worst, 1e-12));
    }
}

// ------------------------------------------------------------------- matrix

void run_matrix_suite(const SuiteConfig& cfg, std::vector<CheckResult>& out)
{
    auto m2 = matrix_algebra(2);
    auto m3 = matrix_algebra(3);
    auto ct2 = truncated_polynomial_algebra(2);
    auto ct3 = truncated_polynomial_algebra(3);
    auto cs3 = s3_group_algebra();

    auto dim_check = [&](const std::string& name, int got, int expected) {
        out.push_back(make_check(name, std::abs(got - expected), 0.0));
    };
    dim_check("h0_m2", cohomology_dimension(m2, 0), 1);
    dim_check("h1_m2", cohomology_dimension(m2, 1), 0);
    dim_check("h2_m2", cohomology_dimension(m2, 2), 0);
    dim_check("h0_m3", cohomology_dimension(m3, 0), 1);
    dim_check("h1_m3", cohomology_dimension(m3, 1), 0);
    dim_check("h0_ct2", cohomology_dimension(ct2, 0), 2);
    dim_check("h0_ct3", cohomology_dimension(ct3, 0), 3);

    // witness solve at the configured tolerance
    {
        Rng rng(cfg.seed + 307);
        Cochain pi = differential(Cochain::random(m2, 1, rng));
        auto sol = solve_jacobi_witness(pi, cfg.solve_tol);
        double res = sol.witness ? sol.residual : 1.0;
        out.push_back(make_check("jacobi_witness_solve_m2", res, cfg.solve_tol));
    }

    // Hamiltonian-derivation properties for the built-in Poisson structures
    struct Structure
    {
        std::string name;
        const StructureConstantAlgebra* algebra;
        Cochain pi;
        TripleFilter filter; // truncated models restrict the cocycle check
    };
    std::vector<Structure> structures;

    structures.push_back({"m2_mu", &m2, Cochain::multiplication(m2)});
    {
        Rng rng(cfg.seed + 301);
        structures.push_back({"m2_coboundary", &m2, differential(Cochain::random(m2, 1, rng))});
    }
    structures.push_back({"m3_mu", &m3, Cochain::multiplication(m3)});
    {
        Rng rng(cfg.seed + 303);
        structures.push_back(
            {"cs3_coboundary", &cs3, differential(Cochain::random(cs3, 1, rng))});
    }
    structures.push_back({"ct3_mu", &ct3, Cochain::multiplication(ct3)});
    {
        // P(f,g) = (t f')(t g'), the square of the Euler derivation of C[t]/(t^3)
        Cochain pi(ct3, 2);
        int d = 3;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (i + j < d)
                    pi.set_coeff({i, j}, i + j, Complex(i * j));
        structures.push_back({"ct3_biderivation", &ct3, std::move(pi)});
    }
    TorusEmbedding emb = embed_as_finite_algebra(cfg.theta, 1);
    structures.push_back({"torus_embed", emb.algebra.get(), emb.pi,
                          [&emb](int i, int j, int k) { return emb.safe_triple(i, j, k); }});

    for (const auto& st : structures) {
        const StructureConstantAlgebra& A = *st.algebra;
        double leib = check_leibniz(st.pi, st.filter);
        out.push_back(make_check("poisson_cocycle_" + st.name, leib, 1e-10));

        auto basis = A.center();
        double deriv = 0.0, antisym = 0.0, jacobi = 0.0, inner = 0.0, cobound = 0.0;
        for (std::size_t ci = 0; ci < basis.size(); ++ci) {
            Cochain X = hamiltonian_derivation(st.pi, basis[ci]);
            deriv = std::max(deriv, A.is_derivation(cochain_as_matrix(X)).residual);
            for (std::size_t ei = ci; ei < basis.size(); ++ei) {
                AlgebraElement ce = center_bracket(st.pi, basis[ci], basis[ei]);
                AlgebraElement ec = center_bracket(st.pi, basis[ei], basis[ci]);
                antisym = std::max(antisym,
                                   rel_residual((ce.coeffs() + ec.coeffs()).norm(),
                                                std::max(ce.norm(), ec.norm())));
                PropositionReport rep =
                    check_proposition({st.pi, std::nullopt}, basis[ci], basis[ei]);
                cobound = std::max(cobound, rep.lie_derivative_coboundary);
                inner = std::max(inner, rep.bracket_compatibility);
                jacobi = std::max(jacobi, rep.center_jacobi);
            }
        }
        out.push_back(make_check("ham_derivation_" + st.name, deriv, 1e-9));
        out.push_back(make_check("ham_bracket_antisym_" + st.name, antisym, 1e-12));
        out.push_back(make_check("ham_center_jacobi_" + st.name, jacobi, 1e-9));
        out.push_back(make_check("ham_inner_compat_" + st.name, inner, 1e-9));
        out.push_back(make_check("ham_lie_coboundary_" + st.name, cobound, 1e-9));
    }
}

// -------------------------------------------------------------------- torus

void run_torus_suite(const SuiteConfig& cfg, std::vector<CheckResult>& out)
{
    double theta = cfg.theta;
    int N = cfg.truncation;

    TorusElement U = TorusElement::u(theta, N);
    TorusElement V = TorusElement::v(theta, N);

    {
        TorusElement lhs = multiply(V, U);
        TorusElement rhs = multiply(U, V) * std::exp(Complex(0.0, 2.0 * kPi * theta));
        out.push_back(make_check("vu_phase", (lhs - rhs).sup_norm(), 1e-12));
    }

    {
        TorusElement uv = multiply(U, V);
        TorusElement lhs = canonical_poisson(U, V);
        double pi2 = 4.0 * kPi * kPi;
        out.push_back(make_check(
            "pi_uv_value", rel_residual((lhs + uv * Complex(pi2)).sup_norm(), pi2), 1e-12));
        TorusElement w = canonical_witness(U, V);
        double pi4 = 8.0 * kPi * kPi * kPi * kPi;
        out.push_back(make_check(
            "pi1_uv_value", rel_residual((w + uv * Complex(pi4)).sup_norm(), pi4), 1e-12));
    }

    {
        Rng rng(cfg.seed + 401);
        double worst = 0.0;
        for (int d = 0; d < 20; ++d) {
            TorusElement a = TorusElement::random(theta, N, N / 3, rng);
            TorusElement dd = delta1(delta2(a));
            worst = std::max(worst,
                             rel_residual((dd - delta2(delta1(a))).sup_norm(), dd.sup_norm()));
        }
        out.push_back(make_check("delta_commute", worst, 1e-12));
    }

    {
        Rng rng(cfg.seed + 402);
        double worst = 0.0;
        bool exact = true;
        for (int d = 0; d < 20; ++d) {
            TorusElement a = TorusElement::random(theta, N, N / 3, rng);
            TorusElement b = TorusElement::random(theta, N, N / 3, rng);
            TorusElement ab = multiply(a, b);
            exact = exact && ab.exact();
            TorusElement r = delta1(ab) - multiply(delta1(a), b) - multiply(a, delta1(b));
            worst = std::max(worst, rel_residual(r.sup_norm(), delta1(ab).sup_norm()));
        }
        out.push_back(make_check("delta_leibniz", exact ? worst : 1.0, 1e-12));
    }

    {
        Rng rng(cfg.seed + 403);
        double worst = 0.0;
        bool exact = true;
        for (int d = 0; d < 20; ++d) {
            TorusElement a = TorusElement::random(theta, N, N / 3, rng);
            TorusElement b = TorusElement::random(theta, N, N / 3, rng);
            TorusElement c = TorusElement::random(theta, N, N / 3, rng);
            TorusElement lhs = multiply(multiply(a, b), c);
            TorusElement rhs = multiply(a, multiply(b, c));
            exact = exact && lhs.exact() && rhs.exact();
            worst = std::max(worst, rel_residual((lhs - rhs).sup_norm(), lhs.sup_norm()));
        }
        out.push_back(make_check("associativity_safe", exact ? worst : 1.0, 1e-12));
    }

    // cocycle identity on 50 seeded safe triples
    {
        Rng rng(cfg.seed + 404);
        double worst = 0.0;
        bool exact = true;
        for (int d = 0; d < 50; ++d) {
            TorusElement a1 = TorusElement::random(theta, N, N / 3, rng);
            TorusElement a2 = TorusElement::random(theta, N, N / 3, rng);
            TorusElement a3 = TorusElement::random(theta, N, N / 3, rng);
            TorusElement t1 = multiply(a1, canonical_poisson(a2, a3));
            TorusElement t2 = canonical_poisson(multiply(a1, a2), a3);
            TorusElement t3 = canonical_poisson(a1, multiply(a2, a3));
            TorusElement t4 = multiply(canonical_poisson(a1, a2), a3);
            exact = exact && t1.exact() && t2.exact() && t3.exact() && t4.exact();
            TorusElement r = t1 - t2 + t3 - t4;
            double scale = std::max({t1.sup_norm(), t2.sup_norm(), t3.sup_norm(), t4.sup_norm()});
            worst = std::max(worst, rel_residual(r.sup_norm(), scale));
        }
        out.push_back(make_check("p1_random_triples", exact ? worst : 1.0, 1e-12));
    }

    // Jacobi identity against the -1/2 delta^2 witness, 50 seeded triples
    {
        Rng rng(cfg.seed + 405);
        double worst = 0.0;
        bool exact = true;
        for (int d = 0; d < 50; ++d) {
            TorusElement a1 = TorusElement::random(theta, N, N / 4, rng);
            TorusElement a2 = TorusElement::random(theta, N, N / 4, rng);
            TorusElement a3 = TorusElement::random(theta, N, N / 4, rng);
            TorusElement lhs = canonical_poisson(a1, canonical_poisson(a2, a3)) -
                               canonical_poisson(canonical_poisson(a1, a2), a3);
            TorusElement r1 = multiply(a1, canonical_witness(a2, a3));
            TorusElement r2 = canonical_witness(multiply(a1, a2), a3);
            TorusElement r3 = canonical_witness(a1, multiply(a2, a3));
            TorusElement r4 = multiply(canonical_witness(a1, a2), a3);
            exact = exact && lhs.exact() && r1.exact() && r2.exact() && r3.exact() && r4.exact();
            TorusElement rhs = r1 - r2 + r3 - r4;
            double scale = std::max({lhs.sup_norm(), r1.sup_norm(), r2.sup_norm(),
                                     r3.sup_norm(), r4.sup_norm()});
            worst = std::max(worst, rel_residual((lhs - rhs).sup_norm(), scale));
        }
        out.push_back(make_check("p2_witness_random_triples", exact ? worst : 1.0, 1e-10));
    }

    {
        out.push_back(make_check("seminorm_p0_u", std::abs(seminorm(U, 0) - 1.0), 1e-15));
        out.push_back(
            make_check("seminorm_p1_uv", std::abs(seminorm(multiply(U, V), 1) - 2.0), 1e-15));
        out.push_back(
            make_check("seminorm_zero", seminorm(TorusElement(theta, N), 3), 0.0));
    }

    {
        TorusEmbedding emb = embed_as_finite_algebra(theta, 3);
        out.push_back(make_check("embed_p1_safe", emb.leibniz_residual_safe(), 1e-12));
        out.push_back(make_check("embed_p2_safe", emb.jacobi_residual_safe(), 1e-10));
        out.push_back(make_check("embed_center_scalars",
                                 std::abs(emb.central_safe_dimension(1, 2) - 1), 0.0));
    }
}

// ----------------------------------------------------------------- classical

void run_classical_suite(const SuiteConfig& cfg, std::vector<CheckResult>& out)
{
    const double h = kDefaultFdStep;

    // constant bivector: jacobiator vanishes without derivatives
    {
        Rng rng(cfg.seed + 501);
        RealMatrix L0 = RealMatrix::Zero(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                L0(i, j) = rng.gaussian();
                L0(j, i) = -L0(i, j);
            }
        BivectorField lambda = [L0](const RealVector&) { return L0; };
        double worst = 0.0;
        for (const auto& x : halton_points(4, 100))
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    for (int k = 0; k < 4; ++k)
                        worst = std::max(worst,
                                         std::abs(schouten_jacobiator(lambda, i, j, k, x, h)));
        out.push_back(make_check("schouten_constant", worst, 1e-9));
    }

    ClassicalSystem so3 = make_system("so3star");
    ClassicalSystem can = make_system("canonical2d");

    {
        double worst = 0.0;
        for (const auto& x : halton_points(3, 100))
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        worst = std::max(
                            worst, std::abs(schouten_jacobiator(so3.lambda, i, j, k, x, h)));
        out.push_back(make_check("schouten_so3star", worst, 1e-9));
    }

    // {x1, x2} = x3 on so(3)*
    {
        ScalarField f = [](const RealVector& x) { return x[0]; };
        ScalarField g = [](const RealVector& x) { return x[1]; };
        double worst = 0.0;
        for (const auto& x : halton_points(3, 50))
            worst = std::max(worst,
                             std::abs(poisson_bracket(f, g, so3.lambda, x, h) - x[2]));
        out.push_back(make_check("so3star_bracket_value", worst, 1e-9));
    }

    ScalarField f1 = [](const RealVector& x) { return std::sin(x[0]) + x[1] * x[1]; };
    ScalarField g1 = [](const RealVector& x) { return x[0] * x[1]; };
    ScalarField w1 = [](const RealVector& x) { return std::cos(x[1]) + 0.5 * x[0]; };

    {
        double worst = 0.0;
        ScalarField gw = [&](const RealVector& x) { return g1(x) * w1(x); };
        for (const auto& x : halton_points(2, 50)) {
            double lhs = poisson_bracket(f1, gw, can.lambda, x, h);
            double rhs = poisson_bracket(f1, g1, can.lambda, x, h) * w1(x) +
                         g1(x) * poisson_bracket(f1, w1, can.lambda, x, h);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        out.push_back(make_check("bracket_leibniz", worst, 1e-6));
    }

    {
        double worst = 0.0;
        for (const ClassicalSystem* sys : {&can, &so3}) {
            ScalarField f = f1, g = g1, w = w1; // reused in dim 2 and 3 (extra coords ignored)
            ScalarField gw_b = [&](const RealVector& x) {
                return poisson_bracket(g, w, sys->lambda, x, h);
            };
            ScalarField wf_b = [&](const RealVector& x) {
                return poisson_bracket(w, f, sys->lambda, x, h);
            };
            ScalarField fg_b = [&](const RealVector& x) {
                return poisson_bracket(f, g, sys->lambda, x, h);
            };
            for (const auto& x : halton_points(sys->dim, 30)) {
                double jac = poisson_bracket(f, gw_b, sys->lambda, x, h) +
                             poisson_bracket(g, wf_b, sys->lambda, x, h) +
                             poisson_bracket(w, fg_b, sys->lambda, x, h);
                worst = std::max(worst, std::abs(jac));
            }
        }
        out.push_back(make_check("bracket_jacobi", worst, 1e-6));
    }

    // 4th-order convergence of the finite-difference bracket
    {
        ScalarField f = [](const RealVector& x) { return std::exp(0.3 * x[0]) * std::sin(x[1]); };
        ScalarField g = [](const RealVector& x) { return std::cos(2 * x[0]) + x[1] * x[1] * x[1]; };
        auto exact = [](const RealVector& x) {
            double d1f = 0.3 * std::exp(0.3 * x[0]) * std::sin(x[1]);
            double d2f = std::exp(0.3 * x[0]) * std::cos(x[1]);
            double d1g = -2 * std::sin(2 * x[0]);
            double d2g = 3 * x[1] * x[1];
            return d1f * d2g - d2f * d1g;
        };
        auto max_err = [&](double step) {
            double worst = 0.0;
            for (const auto& x : halton_points(2, 20))
                worst = std::max(worst,
                                 std::abs(poisson_bracket(f, g, can.lambda, x, step) - exact(x)));
            return worst;
        };
        double e1 = max_err(0.05), e2 = max_err(0.025);
        double ratio = e1 / std::max(e2, 1e-300);
        out.push_back(make_check("fd_convergence_order", 8.0 / ratio, 1.0));
    }

    {
        ClassicalSystem sys = make_system("harmonic");
        VectorField X = hamiltonian_vector_field(sys.hamiltonian, sys.lambda, h);
        RealVector x0(2);
        x0 << 1.0, 0.0;
        Trajectory tr = integrate_flow(X, x0, 2.0 * kPi, 1e-3, &*sys.casimir);
        out.push_back(
            make_check("flow_harmonic_closure", (tr.states.back() - x0).norm(), 1e-8));
    }

    {
        VectorField X = hamiltonian_vector_field(so3.hamiltonian, so3.lambda, h);
        RealVector x0(3);
        x0 << 0.6, 0.3, 0.8;
        Trajectory tr = integrate_flow(X, x0, 10.0, 1e-3, &*so3.casimir);
        out.push_back(make_check("flow_so3star_casimir_drift", tr.conserved_drift, 1e-8));
    }

    // X_f g = {f,g} at samples
    {
        VectorField X = hamiltonian_vector_field(f1, can.lambda, h);
        double worst = 0.0;
        for (const auto& x : halton_points(2, 50)) {
            double lhs = gradient(g1, x, h).dot(X(x));
            worst = std::max(worst,
                             std::abs(lhs - poisson_bracket(f1, g1, can.lambda, x, h)));
        }
        out.push_back(make_check("hamiltonian_field_consistency", worst, 1e-9));
    }

    {
        ChristoffelField flat = flat_connection(2);
        ScalarField f = [](const RealVector& x) { return x[0] * x[1]; };
        RealVector x0(2);
        x0 << 0.3, -0.2;
        RealMatrix H = hessian_with_connection(f, flat, x0, h);
        RealMatrix expect(2, 2);
        expect << 0, 1, 1, 0;
        out.push_back(make_check("hessian_flat_value", (H - expect).norm(), 1e-9));

        ScalarField fq = [](const RealVector& x) { return 0.5 * x[0] * x[0]; };
        ScalarField gq = [](const RealVector& x) { return 0.5 * x[1] * x[1]; };
        double v = classical_pi1(fq, gq, can.lambda, flat, x0, h);
        out.push_back(make_check("pi1_canonical_value", std::abs(v - 1.0), 1e-9));
    }

    // Jacobi defect against the coboundary of the hessian pairing, with the
    // normalization constant fitted over sample points
    {
        ChristoffelField flat = flat_connection(2);
        ScalarField f = [](const RealVector& x) { return std::sin(x[0]) + x[1] * x[1]; };
        ScalarField g = [](const RealVector& x) { return x[0] * std::cos(x[1]); };
        ScalarField w = [](const RealVector& x) { return std::exp(0.2 * x[0]) * x[1]; };
        auto fit = classical_jacobi_fit(f, g, w, can.lambda, flat, halton_points(2, 40), h);
        nlohmann::json witness;
        witness["fitted_constant"] = fit.fitted_constant;
        out.push_back(
            make_check("jacobi_witness_fit", fit.residual, 1e-6, witness));
    }
}

// ----------------------------------------------------------------- foliation

void run_foliation_suite(const SuiteConfig& cfg, std::vector<CheckResult>& out)
{
    FoliatedTorusModel model(cfg.foliation());
    int modes = std::max(1, cfg.grid / 4);
    Rng rng(cfg.seed + 601);

    Spectrum s1 = random_kernel_spectrum(cfg.p, cfg.q, modes, 2.0, rng);
    Spectrum s2 = random_kernel_spectrum(cfg.p, cfg.q, modes, 2.0, rng);
    Spectrum s3 = random_kernel_spectrum(cfg.p, cfg.q, modes, 2.0, rng);
    GroupoidKernel k1 = render_kernel(s1, model);
    GroupoidKernel k2 = render_kernel(s2, model);
    GroupoidKernel k3 = render_kernel(s3, model);

    BaseFunction h = base_preset(model, cfg.h_preset);
    MFunction a1 = random_mfunction(model, std::max(1, modes / 2), rng);
    MFunction a2 = random_mfunction(model, std::max(1, modes / 2), rng);
    MFunction a3 = random_mfunction(model, std::max(1, modes / 2), rng);

    out.push_back(make_check("convolution_associativity",
                             associativity_residual(k1, k2, k3), 1e-10));
    out.push_back(make_check("involution_antihomomorphism",
                             involution_antihom_residual(k1, k2), 1e-12));

    {
        GroupoidKernel lhs = convolve(multiply_left(a1, k1), k2);
        GroupoidKernel rhs = multiply_left(a1, convolve(k1, k2));
        double scale = std::max(lhs.sup_norm(), rhs.sup_norm());
        out.push_back(make_check("left_action_compatibility",
                                 rel_residual((lhs - rhs).sup_norm(), scale), 1e-12));
    }

    // mean curvature of the expsin density: kappa_1 = 2 pi cos(2 pi y_1)
    if (cfg.density == "expsin") {
        double worst = 0.0;
        const auto& kap = model.mean_curvature();
        for (int y = 0; y < model.base_points(); ++y) {
            double y1 = static_cast<double>(model.base_axis_coord(y, 0)) / model.n_y();
            double expect = 2.0 * kPi * std::cos(2.0 * kPi * y1);
            worst = std::max(worst, std::abs(kap[0](0, y) - expect) / (2.0 * kPi));
            for (int l = 1; l < model.q(); ++l)
                worst = std::max(worst, std::abs(kap[l](0, y)));
        }
        out.push_back(make_check("kappa_expsin_value", worst, 1e-12));
    }

    out.push_back(make_check("dh_leibniz", leibniz_residual(k1, k2), 1e-9));
    out.push_back(make_check("dh_graded_leibniz",
                             graded_leibniz_residual(k1, transverse_differential(k2)), 1e-9));
    out.push_back(make_check("bracket_cocycle", bracket_cocycle_residual(k1, k2, k3), 1e-9));

    {
        GroupoidKernel sa1 = (k1 + involution(k1)) * Complex(0.5);
        GroupoidKernel sa2 = (k2 + involution(k2)) * Complex(0.5);
        out.push_back(make_check("bracket_antisymmetry",
                                 bracket_antisymmetry_residual(sa1, sa2), 1e-9));
    }

    {
        ExtendedElement e1{k1, a1};
        ExtendedElement e2{k2, a2};
        ExtendedElement e3{k3, a3};
        out.push_back(
            make_check("extended_cocycle", extended_cocycle_residual(e1, e2, e3), 1e-9));
    }

    // base-only elements reduce to the classical bracket with the same Lambda
    {
        BaseFunction b1 = base_preset(model, "sin1");
        BaseFunction b2 = base_preset(model, "cos2");
        ExtendedElement e1 = extended_from_base(b1);
        ExtendedElement e2 = extended_from_base(b2);
        ExtendedElement br = extended_bracket(e1, e2);
        double worst = 0.0;
        RealMatrix L = model.lambda();
        BivectorField lambda = [L](const RealVector&) { return L; };
        ScalarField f = [](const RealVector& y) { return std::sin(2.0 * kPi * y[0]); };
        ScalarField g = [](const RealVector& y) { return std::cos(2.0 * kPi * y[1]); };
        for (int y = 0; y < model.base_points(); ++y) {
            RealVector yv(model.q());
            for (int axis = 0; axis < model.q(); ++axis)
                yv[axis] = static_cast<double>(model.base_axis_coord(y, axis)) / model.n_y();
            double classical = poisson_bracket(f, g, lambda, yv, 1e-4);
            worst = std::max(worst, std::abs(br.fn.values(0, y).real() - classical) /
                                        (4.0 * kPi * kPi));
        }
        out.push_back(make_check("extended_base_bracket_vs_classical", worst, 1e-6));
    }

    out.push_back(make_check("lemma", check_lemma(h, a1), 1e-12));
    out.push_back(make_check("lie_derivation", lie_derivation_residual(h, k1, k2), 1e-9));
    out.push_back(make_check("d2_symmetry", d2_symmetry_residual(k1), 1e-9));

    {
        TheoremReport rep = check_main_theorem(h, k1, &a1, 1e-9);
        out.push_back(make_check("main_theorem", rep.residual, rep.tolerance));
    }

    {
        // Hamiltonian field of sin(2 pi y_1): transverse, second component
        // lambda(0,1) * 2 pi cos(2 pi y_1)
        BaseFunction hs = base_preset(model, "sin1");
        HamiltonianField v = hamiltonian_field(hs);
        double worst = 0.0;
        for (int y = 0; y < model.base_points(); ++y) {
            double y1 = static_cast<double>(model.base_axis_coord(y, 0)) / model.n_y();
            double expect = model.lambda()(0, 1) * 2.0 * kPi * std::cos(2.0 * kPi * y1);
            worst = std::max(worst, std::abs(v.comp[1][y] - expect) / (2.0 * kPi));
            worst = std::max(worst, std::abs(v.comp[0][y]) / (2.0 * kPi));
        }
        out.push_back(make_check("hamiltonian_field_value", worst, 1e-12));
        // v_h(h) = 0
        double vh = 0.0;
        std::vector<RealVector> dh(model.q());
        for (int l = 0; l < model.q(); ++l)
            dh[l] = model.base_derivative(hs.values, l);
        for (int y = 0; y < model.base_points(); ++y) {
            double s = 0.0;
            for (int l = 0; l < model.q(); ++l)
                s += v.comp[l][y] * dh[l][y];
            vh = std::max(vh, std::abs(s) / (4.0 * kPi * kPi));
        }
        out.push_back(make_check("hamiltonian_field_annihilates_h", vh, 1e-10));
    }

    {
        double r32 = jacobi_witness_residual(k1, k2, k3);
        out.push_back(make_check("jacobi_witness_n32", r32, 1e-7));

        FoliatedTorusModel model48(cfg.foliation(cfg.grid * 3 / 2));
        GroupoidKernel k1b = render_kernel(s1, model48);
        GroupoidKernel k2b = render_kernel(s2, model48);
        GroupoidKernel k3b = render_kernel(s3, model48);
        double r48 = jacobi_witness_residual(k1b, k2b, k3b);
        out.push_back(make_check("jacobi_witness_improves_n48",
                                 r48 / std::max(r32, 1e-300), 1.0));
    }
}

} // namespace

VerificationReport run_suite(const std::string& name, const SuiteConfig& config)
{
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport rep;
    rep.suite = name;
    rep.config = config.to_json();
    rep.seed = config.seed;

    if (name == "hochschild")
        run_hochschild_suite(config, rep.checks);
    else if (name == "matrix")
        run_matrix_suite(config, rep.checks);
    else if (name == "torus")
        run_torus_suite(config, rep.checks);
    else if (name == "classical")
        run_classical_suite(config, rep.checks);
    else if (name == "foliation")
        run_foliation_suite(config, rep.checks);
    else if (name == "all") {
        run_hochschild_suite(config, rep.checks);
        run_matrix_suite(config, rep.checks);
        run_torus_suite(config, rep.checks);
        run_classical_suite(config, rep.checks);
        run_foliation_suite(config, rep.checks);
    } else {
        throw std::invalid_argument("unknown suite: " + name);
    }

    rep.sort_checks();
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<ConvergenceRow> convergence_study(const std::string& check,
                                              const std::vector<int>& grids,
                                              const SuiteConfig& config)
{
    if (grids.empty())
        throw std::invalid_argument("convergence_study needs at least one grid");
    if (check != "leibniz" && check != "theorem" && check != "p2witness" &&
        check != "associativity")
        throw std::invalid_argument("unknown convergence check: " + check);

    int min_grid = *std::min_element(grids.begin(), grids.end());
    int modes = std::max(1, min_grid / 4);

    Rng rng(config.seed + 701);
    Spectrum s1 = random_kernel_spectrum(config.p, config.q, modes, 2.0, rng);
    Spectrum s2 = random_kernel_spectrum(config.p, config.q, modes, 2.0, rng);
    Spectrum s3 = random_kernel_spectrum(config.p, config.q, modes, 2.0, rng);

    std::vector<ConvergenceRow> rows;
    for (int g : grids) {
        FoliatedTorusModel model(config.foliation(g));
        GroupoidKernel k1 = render_kernel(s1, model);
        GroupoidKernel k2 = render_kernel(s2, model);
        double res = 0.0;
        if (check == "leibniz") {
            res = leibniz_residual(k1, k2);
        } else if (check == "theorem") {
            BaseFunction h = base_preset(model, config.h_preset);
            res = check_main_theorem(h, k1).residual;
        } else if (check == "p2witness") {
            GroupoidKernel k3 = render_kernel(s3, model);
            res = jacobi_witness_residual(k1, k2, k3);
        } else { // associativity
            GroupoidKernel k3 = render_kernel(s3, model);
            res = associativity_residual(k1, k2, k3);
        }
        rows.push_back({check, g, res});
    }
    return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows)
{
    std::ostringstream os;
    os.precision(15);
    os << "check,grid,residual,order\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        os << rows[i].check << ',' << rows[i].grid << ',' << rows[i].residual << ',';
        if (i > 0 && rows[i].residual > 0 && rows[i - 1].residual > 0 &&
            rows[i].grid != rows[i - 1].grid) {
            double order = std::log(rows[i - 1].residual / rows[i].residual) /
                           std::log(static_cast<double>(rows[i].grid) / rows[i - 1].grid);
            os << order;
        }
        os << '\n';
    }
    return os.str();
}

FlowResult flow_demo(const std::string& system, const RealVector& x0, double T, double dt,
                     const nlohmann::json* user_config)
{
    ClassicalSystem sys = make_system(system, user_config);
    if (x0.size() != sys.dim)
        throw std::invalid_argument("flow_demo: x0 has wrong dimension");
    VectorField X = hamiltonian_vector_field(sys.hamiltonian, sys.lambda);
    const ScalarField* conserved = sys.casimir ? &*sys.casimir : &sys.hamiltonian;
    Trajectory tr = integrate_flow(X, x0, T, dt, conserved);
    double drift = tr.conserved_drift;
    return {std::move(tr), system, drift};
}

std::string trajectory_csv(const FlowResult& flow)
{
    std::ostringstream os;
    os.precision(15);
    os << "t";
    int dim = flow.trajectory.states.empty() ? 0
                                             : static_cast<int>(flow.trajectory.states[0].size());
    for (int d = 0; d < dim; ++d)
        os << ",x" << (d + 1);
    os << "\n";
    for (std::size_t i = 0; i < flow.trajectory.states.size(); ++i) {
        os << flow.trajectory.times[i];
        for (int d = 0; d < dim; ++d)
            os << ',' << flow.trajectory.states[i][d];
        os << '\n';
    }
    return os.str();
}

std::string dump_kernel_csv(const SuiteConfig& config)
{
    FoliatedTorusModel model(config.foliation());
    Rng rng(config.seed + 801);
    GroupoidKernel k = random_kernel(model, std::max(1, config.grid / 4), rng);

    std::ostringstream os;
    os.precision(15);
    os << "ix,ixp";
    for (int a = 0; a < model.q(); ++a)
        os << ",iy" << (a + 1);
    os << ",re,im\n";
    for (int x = 0; x < model.leaf_points(); ++x)
        for (int xp = 0; xp < model.leaf_points(); ++xp)
            for (int y = 0; y < model.base_points(); ++y) {
                os << x << ',' << xp;
                for (int a = 0; a < model.q(); ++a)
                    os << ',' << model.base_axis_coord(y, a);
                Complex v = k.at(0, y)(x, xp);
                os << ',' << v.real() << ',' << v.imag() << '\n';
            }
    return os.str();
}

std::string dump_field_csv(const SuiteConfig& config)
{
    FoliatedTorusModel model(config.foliation());
    Rng rng(config.seed + 802);
    GroupoidKernel k = random_kernel(model, std::max(1, config.grid / 4), rng);
    BaseFunction h = base_preset(model, config.h_preset);

    ExtendedElement eh = extended_from_base(h);
    ExtendedElement ek = extended_from_kernel(k);
    GroupoidKernel diff = (extended_bracket(eh, ek).kernel -
                           extended_bracket(ek, eh).kernel) *
                              Complex(0.5) -
                          lie_derivative_operator(h, k);

    std::ostringstream os;
    os.precision(15);
    os << "ix,ixp";
    for (int a = 0; a < model.q(); ++a)
        os << ",iy" << (a + 1);
    os << ",re,im\n";
    for (int x = 0; x < model.leaf_points(); ++x)
        for (int xp = 0; xp < model.leaf_points(); ++xp)
            for (int y = 0; y < model.base_points(); ++y) {
                os << x << ',' << xp;
                for (int a = 0; a < model.q(); ++a)
                    os << ',' << model.base_axis_coord(y, a);
                Complex v = diff.at(0, y)(x, xp);
                os << ',' << v.real() << ',' << v.imag() << '\n';
            }
    return os.str();
}

} // namespace ncpoisson
