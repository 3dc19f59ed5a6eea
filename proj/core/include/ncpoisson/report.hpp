#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ncpoisson {

struct CheckResult
{
    std::string check;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::optional<nlohmann::json> witness;

    nlohmann::json to_json() const;
};

CheckResult make_check(std::string name, double residual, double tolerance,
                       std::optional<nlohmann::json> witness = std::nullopt);

struct VerificationReport
{
    std::string suite;
    std::vector<CheckResult> checks;
    nlohmann::json config;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;

    bool all_pass() const;
    void sort_checks(); // deterministic order by check name

    /// Report body: everything except the wall time. Identical seed and
    /// config must serialize byte-identically.
    nlohmann::json body_json() const;
    nlohmann::json to_json() const;
};

} // namespace ncpoisson
