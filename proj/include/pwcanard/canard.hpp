#pragma once

#include <optional>

#include "pwcanard/logvalue.hpp"
#include "pwcanard/model.hpp"
#include "pwcanard/poincare.hpp"

namespace pwc {

// Orbit from q1_R through zone C to q0_L (the maximal canard).
struct Connection {
    double a_tilde = 0.0;
    double tau_C = 0.0;
    Vec2 residual;  // rescaled (F, G) at the last iterate
    bool valid = false;
    bool converged = false;
    int iterations = 0;
    double a_bar = 0.0;    // a / sqrt(eps)
    double tau_bar = 0.0;  // tau * sqrt(eps)
};

// Solution of the eps = 0 rescaled system and its Jacobian determinant.
struct SingularConnection {
    double a_bar;
    double tau_bar;
    double det_J;
};

SingularConnection singular_connection();

// Rescaled residual and Jacobian in (tau_bar, a_bar).
Vec2 connection_residual(double tau_bar, double a_bar, double k, double eps, int m_sign);
Mat2 connection_jacobian(double tau_bar, double a_bar, double k, double eps, int m_sign);

// Damped Newton from the singular solution; throws ConvergenceError when it
// stalls and DomainError when the converged orbit leaves the central band.
Connection maximal_canard(double k, double eps, int m_sign);
// Same, but reports instead of throwing.
Connection maximal_canard_unchecked(double k, double eps, int m_sign);

// Corridor test: x(s) in (-sqrt(eps), sqrt(eps)) for s in (0, tau_C) at n samples.
bool connection_in_corridor(const Connection& c, double k, double eps, int m_sign, int n = 1000);

double a_tilde_series(double k, double eps, int m_sign);
double tau_C_series(double k, double eps, int m_sign);

struct FlightTimes {
    std::optional<double> tau_R;
    std::optional<double> tau_L;
    std::optional<double> tau_Ld;
    std::optional<double> tau_LL;
    std::optional<double> tau_RR;
};

// Closed-form flight times; a value is empty when its log argument is not positive.
FlightTimes flight_times(double h, const Params& p);

enum class RFamily { three_zone, four_zone };

const char* r_family_name(RFamily f);

struct RFunctionValue {
    RFamily family = RFamily::three_zone;
    double h = 0.0;
    LogValue value;
    // log of the product of powers; value = exp(log_product) - exp(m tau_C)
    double log_product = 0.0;
    double log_target = 0.0;
};

// Domain of h: (h_s, h_M] for 3z, (h_r, h_u) for 4z.
std::pair<double, double> r_domain(RFamily f, const Params& p);

// p.a is the connection value; throws DomainError outside the family's h-interval
// or when a power base is not positive.
RFunctionValue r_function(RFamily f, double h, const Params& p, double tau_C);
RFunctionValue R3z(double h, const Params& p, double tau_C);
RFunctionValue R4z(double h, const Params& p, double tau_C);

// Parameters at the maximal canard: a = a_tilde(k, eps), m = m_sign sqrt(eps).
Params canard_params(double k, double eps, int m_sign, const Connection& c);

struct HstarResult {
    std::optional<double> h;
    int sign_changes = 0;
    int derivative_sign = 0;  // sign of dR/dh at the root
    bool derivative_as_claimed = true;
    double h_lo = 0.0, h_hi = 0.0;
};

HstarResult hstar_root(RFamily f, double k, double eps, int m_sign, int samples = 2000);

// Printed leading-order terms; empty when the 3z exponent diverges (k = 1).
std::optional<double> hstar_series(RFamily f, double k, double eps, int m_sign);

struct WidthSolve {
    double x0 = 0.0;
    double a_hat = 0.0;
    double a_tilde = 0.0;
    std::optional<CycleRecord> cycle;
    LogValue gap_to_a_tilde;
    bool gap_estimated = false;       // taken from the exponential bound
    bool underflow_dominated = false;
    bool outside_validity = false;    // width outside (x_r, x_u) U [-1, x_s)
};

WidthSolve cycle_for_width(double x0, double k, double eps, int m_sign);

// log of the expected |a_hat - a_tilde| at width x0.
double width_gap_log_estimate(double x0, const Params& p);

// k at which the saddle-node height matches Phi(x0); throws NumericalError
// when no bracket is found in [k_min, k_max].
double saddle_node_k_for_width(double x0, double eps, int m_sign, double k_min = 0.3, double k_max = 4.0);

struct HalfMapAsymptotic {
    Vec2 anchor;      // q0_L, q1_R or q1_LL
    int orientation;  // predicted y = anchor.y + orientation * correction
    LogValue correction;
};

// Exponentially small displacement from the anchor for kinds L (inverse map),
// R, LL and Ld (inverse map); throws DomainError below the threshold.
HalfMapAsymptotic halfmap_asymptotic(HalfMapKind kind, double h, const Params& p);

} // namespace pwc
