#pragma once

#include "ncpoisson/classical.hpp"
#include "ncpoisson/foliation.hpp"
#include "ncpoisson/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ncpoisson {

/// Shared configuration for the verification suites. CLI flags override
/// config-file values override these defaults.
struct SuiteConfig
{
    double theta = 0.61803398874989484820; // (sqrt 5 - 1)/2
    int truncation = 16;                   // torus mode radius N
    int p = 1;
    int q = 2;
    int grid = 32;                         // foliation n_x = n_y
    std::string density = "expsin";
    std::vector<DensityMode> density_modes;
    std::string h_preset = "sin1";
    std::uint64_t seed = 20260809;
    double solve_tol = 1e-9;               // coboundary-witness solve tolerance

    nlohmann::json to_json() const;
    FoliationConfig foliation(int grid_override = 0) const;
};

/// Runs one of {hochschild, matrix, torus, classical, foliation, all}.
VerificationReport run_suite(const std::string& name, const SuiteConfig& config);

struct ConvergenceRow
{
    std::string check;
    int grid;
    double residual;
};

/// Residual-versus-grid study for one of
/// {leibniz, theorem, p2witness, associativity}.
std::vector<ConvergenceRow> convergence_study(const std::string& check,
                                              const std::vector<int>& grids,
                                              const SuiteConfig& config);

/// CSV with an empirical-order column (log2 ratio of consecutive residuals
/// per grid doubling).
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

struct FlowResult
{
    Trajectory trajectory;
    std::string system;
    double conserved_drift;
};

FlowResult flow_demo(const std::string& system, const RealVector& x0, double T, double dt,
                     const nlohmann::json* user_config = nullptr);

std::string trajectory_csv(const FlowResult& flow);

/// CSV dumps (columns ix, ix', iy..., re, im).
std::string dump_kernel_csv(const SuiteConfig& config);
std::string dump_field_csv(const SuiteConfig& config); // main-theorem residual field

} // namespace ncpoisson
