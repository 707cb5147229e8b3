#pragma once

#include <optional>
#include <vector>

#include "pwcanard/model.hpp"
#include "pwcanard/vec2.hpp"

namespace pwc {

// Closed-form solution of one zone's affine system from a fixed start point.
// Time t may be negative; all evaluations avoid forming overflowing products.
class ZoneSolution {
public:
    ZoneSolution(const ZoneData& d, Vec2 q);

    Vec2 point(double t) const;
    double x(double t) const;
    double dx(double t) const;
    // Smallest extremum time of x(.) strictly beyond s_from along direction dir
    // (s = dir * t); +inf if none.
    double next_extremum(double s_from, int dir) const;
    // Growth rate of |x - e_x| along direction dir for large s (max over modes).
    double asymptotic_rate(int dir) const;
    // Upper bound of |x(t) - e_x| / exp(rate * s) for the oscillatory case.
    double envelope_amplitude() const;

    const ZoneData& data() const { return d_; }

private:
    enum class Mode { eigen, hyperbolic, parabolic, complex };
    // Returns (C, S) such that phi - e = e^{sigma t}(C d + S (A - sigma I) d).
    void cs(double t, double& c, double& s) const;

    ZoneData d_;
    Mode mode_;
    Vec2 del_;     // q - e
    Vec2 adel_;    // (A - sigma I) del
    double sigma_ = 0.0, delta_ = 0.0, omega_ = 0.0;
    double cs_ = 0.0, cq_ = 0.0;  // eigen-mode coefficients
};

Vec2 flow(Zone z, Vec2 q, double t, const Params& p);
Vec2 flow(const ZoneData& d, Vec2 q, double t);
// e^{tA} for the zone's matrix.
Mat2 propagator(const ZoneData& d, double t);

enum class CrossingKind { transversal, grazing, none };
const char* crossing_kind_name(CrossingKind k);

// time is elapsed along the integration direction (never negative).
struct CrossingResult {
    double time = 0.0;
    Vec2 point;
    CrossingKind kind = CrossingKind::none;
    double boundary = 0.0;
};

// First exit of the zone along direction dir (+1 forward, -1 backward).
// kind=none means no exit ever (capture by the in-zone equilibrium, an in-zone
// periodic orbit or escape to infinity inside an unbounded zone).
CrossingResult first_exit(Zone z, Vec2 q, const Params& p, int dir = 1);
CrossingResult crossing_time(Zone z, Vec2 q, double c, const Params& p, int dir = 1);

struct OrbitEvent {
    Zone zone = Zone::C;
    Vec2 entry;
    Vec2 exit;
    double flight_time = 0.0;
    bool truncated = false;
};

struct Orbit {
    std::vector<OrbitEvent> events;
    double total_time = 0.0;
    bool truncated = false;
    bool captured = false;
    int direction = 1;
};

// Zone the orbit enters from q along dir; boundary points follow the velocity,
// a tangency keeps `current` when given.
Zone entering_zone(Vec2 q, const Params& p, int dir = 1, std::optional<Zone> current = {});

std::optional<OrbitEvent> try_advance(Vec2 q, const Params& p, int dir = 1,
                                      std::optional<Zone> current = {});
// Throws CaptureError when no further boundary crossing exists.
OrbitEvent advance(Vec2 q, const Params& p, int dir = 1, std::optional<Zone> current = {});

struct StopRule {
    enum class Kind { max_events, max_time, section };
    Kind kind = Kind::max_events;
    int max_events = 100;
    double max_time = 0.0;
    // Section: switching line x = section_x crossed with sign(dx/ds) = section_dir.
    double section_x = 0.0;
    int section_dir = -1;
    // Only stop at the section after this zone has been visited.
    std::optional<Zone> require_visit;
    bool stop_on_capture = false;

    static StopRule events(int n);
    static StopRule time(double t, int budget = 100000);
    static StopRule section(double x, int dir, int budget = 64, std::optional<Zone> after = {});
};

Orbit integrate_orbit(Vec2 q, const Params& p, const StopRule& stop, int dir = 1);

struct OrbitSample {
    double t = 0.0;
    Vec2 point;
    Zone zone = Zone::C;
};

// Uniform samples (spacing dt in integration time) plus the final point.
std::vector<OrbitSample> sample_orbit(const Orbit& orbit, const Params& p, double dt);

// Fixed-step RK4 on the affine field of zone z, ignoring boundaries.
Vec2 rk4_oracle(Zone z, Vec2 q, double t, int n, const Params& p);
Vec2 rk4_affine(const Mat2& A, Vec2 b, Vec2 q, double t, int n);

// Extremum of x (a nullcline crossing) inside an event, if any, in event time.
std::optional<double> event_x_extremum(const OrbitEvent& ev, const Params& p, int dir);

} // namespace pwc
