#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pwcanard/canard.hpp"
#include "pwcanard/poincare.hpp"

namespace pwc {

enum class StabilitySource { multiplier, r_function, none };

const char* stability_source_name(StabilitySource s);

struct BranchPoint {
    double x0 = 0.0;
    double h = 0.0;
    double a = 0.0;
    double log_multiplier = 0.0;
    Stability stability = Stability::nonhyperbolic;
    StabilitySource source = StabilitySource::none;
    CycleKind kind = CycleKind::headless;
    bool window = false;        // transitory window or outside the validity ranges
    bool underflow = false;     // a reported as a_tilde
    bool verified = false;
    bool two_zone = false;      // cycle stays in L and C (small unstable cycles near a_H)
    bool ok = false;
    std::optional<LogValue> r_value;  // R3z / R4z at h, when inside its domain
    std::string error;
};

struct Branch {
    double k = 1.0;
    double eps = 0.01;
    int m_sign = -1;
    std::optional<double> a_H;
    double a_tilde = 0.0;
    double x_r = 0.0, x_u = 0.0, x_s = 0.0;
    std::vector<BranchPoint> points;  // widths decreasing
};

struct BranchOptions {
    int points = 200;
    std::vector<double> widths;  // overrides the adaptive grid when non-empty
    double edge_guard = 0.01;    // distance kept from -sqrt(eps) and x_r
};

// Adaptive grid: geometric clustering toward x_r, x_u, -1, x_s and -sqrt(eps).
std::vector<double> branch_widths(double k, double eps, int m_sign, int n, double edge_guard = 0.01);

BranchPoint branch_point(double x0, double k, double eps, int m_sign);

// OpenMP sweep; the serial variant is the reference used in tests and benchmarks.
Branch trace_branch(double k, double eps, int m_sign, const BranchOptions& opt = {});
Branch trace_branch_serial(double k, double eps, int m_sign, const BranchOptions& opt = {});

// Width inside (x_r, x_u) U [-1, x_s).
bool in_validity_window(double x0, const Branch& b);

struct Fold {
    double x_star = 0.0;
    double a_star = 0.0;
    CycleKind side = CycleKind::headless;
    double multiplier_residual = 0.0;  // |multiplier - 1| at x_star
    bool coarse = false;               // quadratic-fit vertex instead of a multiplier root
    std::optional<double> hstar;       // h* of the matching R family
    std::optional<double> hstar_rel_gap;
};

std::vector<Fold> detect_folds(const Branch& b);

struct HopfSample {
    double delta;      // |a - a_H|
    double amplitude;  // distance of the section crossing from the tangency point
    double log_multiplier;
};

struct HopfCheck {
    double a_H = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool equilibrium_flip = false;  // equilibrium stable just above a_H and unstable just below
    std::vector<HopfSample> samples;
};

// Throws NumericalError when no small cycle is found.
HopfCheck hopf_check(double k, double eps, int m_sign, int samples = 10);

} // namespace pwc
