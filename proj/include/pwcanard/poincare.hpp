#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pwcanard/linflow.hpp"
#include "pwcanard/logvalue.hpp"
#include "pwcanard/model.hpp"

namespace pwc {

enum class HalfMapKind { Cd, Cu, L, R, LL, Ld, Lu };

const char* half_map_name(HalfMapKind k);

struct HalfMapSpec {
    Zone zone;
    double source_x;
    double target_x;
};

HalfMapSpec half_map_spec(HalfMapKind k, const Params& p);

struct HalfMapResult {
    double y_out = 0.0;
    double tau = 0.0;
};

// inverse=true maps target-line ordinates back to the source line (negative time).
HalfMapResult half_map(HalfMapKind kind, double y, const Params& p, bool inverse = false);

struct ZoneVisit {
    std::string label;  // Cd, Cu, L, Ld, Lu, LL, R (or the zone name)
    Zone zone;
    double time;
};

std::string visit_label(const OrbitEvent& ev, const Params& p);
// Sum of trace * flight time over the events (the log of the divergence factor).
double divergence_log(const std::vector<OrbitEvent>& events, const Params& p);

struct ReturnResult {
    double y_out = 0.0;
    std::vector<ZoneVisit> times;
    bool visited_LL = false;
    LogValue multiplier_div;
    Orbit orbit;
};

// First return to the section x = sqrt(eps), y < m(sqrt(eps) - a), moving left.
ReturnResult return_map(double y0, const Params& p);

enum class PhiBranch { three_zone, four_zone };

double phi(double x0, const Params& p);
double phi_inverse(double h, PhiBranch branch, const Params& p);

// Forward and backward arcs from the nullcline point (x0, f(x0)) to the section
// x = -sqrt(eps) crossed leftward; their ordinate mismatch closes a cycle.
struct ShootingArcs {
    Orbit forward;
    Orbit backward;
    double y_forward = 0.0;
    double y_backward = 0.0;
    double gap() const { return y_forward - y_backward; }
};

std::optional<ShootingArcs> shoot_from_width(double x0, const Params& p);

enum class Stability { stable, unstable, nonhyperbolic };
enum class CycleKind { headless, with_head };

const char* stability_name(Stability s);
const char* cycle_kind_name(CycleKind k);

constexpr double kNonhyperbolicBand = 1e-6;
Stability classify_multiplier(double log_multiplier);

struct CycleRecord {
    double y_fix = 0.0;           // ordinate on the return section
    double x0 = 0.0;              // width
    double h = 0.0;               // height Phi(x0); NaN for cycles that never reach zone L
    double log_multiplier = 0.0;  // sum of trace * flight time over one revolution
    Stability stability = Stability::nonhyperbolic;
    CycleKind kind = CycleKind::headless;
    bool in_window = false;       // width inside a transitory window (x_u,-1) or (x_s,-sqrt(eps))
    double residual = 0.0;        // closure mismatch of the defining shooting problem
    bool verified = false;
    bool from_width = true;       // two-sided shooting (true) or section return map (false)
    Orbit orbit;                  // one revolution, chronological
};

constexpr double kFixedPointTol = 1e-11;

// Cycle through the width point (x0, f(x0)) at the current parameters (no
// adjustment of a); the residual reports how far it is from closing.
std::optional<CycleRecord> cycle_from_width(double x0, const Params& p);

struct FixedPointOptions {
    int width_grid = 800;
    int section_grid = 200;
};

std::vector<CycleRecord> fixed_points(const Params& p, double y_lo, double y_hi,
                                      const FixedPointOptions& opt = {});

LogValue multiplier(const CycleRecord& cycle, const Params& p);

// Finite-difference multiplier (Richardson-extrapolated central differences);
// empty when the differences are not resolvable in double precision.
std::optional<double> fd_multiplier(const CycleRecord& cycle, const Params& p);

// Ordinate where the cycle crosses x = c moving right, if it does.
std::optional<double> cycle_crossing(const CycleRecord& cycle, double c, const Params& p);

bool in_transitory_window(double x0, const Params& p);

} // namespace pwc
