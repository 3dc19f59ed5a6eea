#include "ncpoisson/report.hpp"

#include <algorithm>

namespace ncpoisson {

nlohmann::json CheckResult::to_json() const
{
    nlohmann::json j;
    j["check"] = check;
    j["residual"] = residual;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    if (witness)
        j["witness"] = *witness;
    return j;
}

CheckResult make_check(std::string name, double residual, double tolerance,
                       std::optional<nlohmann::json> witness)
{
    CheckResult r;
    r.check = std::move(name);
    r.residual = residual;
    r.tolerance = tolerance;
    r.pass = residual <= tolerance;
    r.witness = std::move(witness);
    return r;
}

bool VerificationReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

void VerificationReport::sort_checks()
{
    std::sort(checks.begin(), checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.check < b.check; });
}

nlohmann::json VerificationReport::body_json() const
{
    nlohmann::json j;
    j["suite"] = suite;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks)
        arr.push_back(c.to_json());
    j["checks"] = arr;
    j["config"] = config;
    j["seed"] = seed;
    return j;
}

nlohmann::json VerificationReport::to_json() const
{
    nlohmann::json j = body_json();
    j["wall_time_s"] = wall_time_s;
    return j;
}

} // namespace ncpoisson
