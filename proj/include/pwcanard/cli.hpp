#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwcanard/model.hpp"

namespace pwc::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kNumerical = 3 };

struct RunConfig {
    std::string command;
    std::optional<double> a;
    double k = 1.0;
    std::optional<double> m;
    std::optional<std::string> sign;  // "minus" or "plus"
    std::optional<double> eps;
    double x0 = -0.5;
    double y0 = 0.0;
    int crossings = 20;
    double dt = 0.0;
    int points = 200;
    std::string family = "both";
    std::string id = "all";
    double k_min = 0.3;
    double k_max = 4.0;
    std::vector<int> criteria;
    std::string out;
    std::string out_dir = ".";

    bool operator==(const RunConfig&) const = default;

    // m_sign from --sign or the sign of --m; throws ValidationError when neither is usable.
    int m_sign() const;
    double eps_or(double fallback) const { return eps.value_or(fallback); }
    // Full parameter set; needs --a and --eps.
    Params params() const;
};

nlohmann::json to_json(const RunConfig& c);
// Keys present in j override the fields of base; unknown keys are rejected.
RunConfig apply_json(RunConfig base, const nlohmann::json& j);

// Runs the command line; output goes to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pwc::cli
