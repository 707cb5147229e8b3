#include "pwcanard/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace pwc::io {

std::string real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("rename failed: " + path.string() + ": " + ec.message());
    }
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
    buf_ += '\n';
}

Csv& Csv::cell(double v) {
    if (filled_++) buf_ += ',';
    buf_ += real(v);
    return *this;
}

Csv& Csv::cell(long v) {
    if (filled_++) buf_ += ',';
    buf_ += std::to_string(v);
    return *this;
}

Csv& Csv::cell(const std::string& v) {
    if (filled_++) buf_ += ',';
    buf_ += v;
    return *this;
}

void Csv::end_row() {
    if (filled_ != columns_) throw std::logic_error("csv row has the wrong number of cells");
    buf_ += '\n';
    filled_ = 0;
}

namespace {

// JSON has no NaN; non-finite reals become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

} // namespace

json to_json(const LogValue& v) {
    return {{"log_abs", num(v.log_abs)}, {"sign", v.sign}};
}

json to_json(const Vec2& v) { return json::array({num(v.x), num(v.y)}); }

json to_json(const Params& p) {
    return {{"a", num(p.a)}, {"k", num(p.k)}, {"m", num(p.m)}, {"eps", num(p.eps)}};
}

json to_json(const Landmarks& lm) {
    json rh = json::array();
    for (const auto& v : lm.rhomboid) rh.push_back(to_json(v));
    return {{"p_LL", to_json(lm.p_LL)}, {"p_L", to_json(lm.p_L)},     {"p_R", to_json(lm.p_R)},
            {"q1_LL", to_json(lm.q1_LL)}, {"q1_R", to_json(lm.q1_R)}, {"q0_L", to_json(lm.q0_L)},
            {"q1_L", to_json(lm.q1_L)}, {"q0_RR", to_json(lm.q0_RR)}, {"x_r", num(lm.x_r)},
            {"x_s", num(lm.x_s)},       {"x_u", num(lm.x_u)},         {"h_r", num(lm.h_r)},
            {"h_s", num(lm.h_s)},       {"h_u", num(lm.h_u)},         {"h_M", num(lm.h_M)},
            {"a_H", opt(lm.a_H)},       {"equilibrium", to_json(lm.equilibrium)}, {"rhomboid", rh}};
}

json to_json(const EquilibriumInfo& e) {
    return {{"point", to_json(e.point)},
            {"zone", zone_name(e.zone)},
            {"class", equilibrium_class_name(e.classification)},
            {"stable", e.stable()}};
}

json to_json(const Connection& c) {
    return {{"a_tilde", num(c.a_tilde)},     {"tau_C", num(c.tau_C)},     {"residual", to_json(c.residual)},
            {"valid", c.valid},              {"converged", c.converged}, {"iterations", c.iterations},
            {"a_bar", num(c.a_bar)},         {"tau_bar", num(c.tau_bar)}};
}

json to_json(const CycleRecord& c, bool with_orbit) {
    json j{{"y_fix", num(c.y_fix)},
           {"x0", num(c.x0)},
           {"h", num(c.h)},
           {"log_multiplier", num(c.log_multiplier)},
           {"stability", stability_name(c.stability)},
           {"kind", cycle_kind_name(c.kind)},
           {"in_window", c.in_window},
           {"residual", num(c.residual)},
           {"verified", c.verified},
           {"from_width", c.from_width},
           {"period", num(c.orbit.total_time)}};
    if (with_orbit) {
        json ev = json::array();
        for (const auto& e : c.orbit.events)
            ev.push_back({{"zone", zone_name(e.zone)},
                          {"entry", to_json(e.entry)},
                          {"exit", to_json(e.exit)},
                          {"time", num(e.flight_time)}});
        j["events"] = ev;
    }
    return j;
}

json to_json(const Fold& f) {
    return {{"x_star", num(f.x_star)},
            {"a_star", num(f.a_star)},
            {"side", cycle_kind_name(f.side)},
            {"multiplier_residual", num(f.multiplier_residual)},
            {"coarse", f.coarse},
            {"hstar", opt(f.hstar)},
            {"hstar_rel_gap", opt(f.hstar_rel_gap)}};
}

json to_json(const HopfCheck& h) {
    json s = json::array();
    for (const auto& x : h.samples)
        s.push_back({{"delta", num(x.delta)}, {"amplitude", num(x.amplitude)}, {"log_multiplier", num(x.log_multiplier)}});
    return {{"a_H", num(h.a_H)},
            {"slope", num(h.slope)},
            {"intercept", num(h.intercept)},
            {"r2", num(h.r2)},
            {"equilibrium_flip", h.equilibrium_flip},
            {"samples", s}};
}

json to_json(const HstarResult& r) {
    return {{"h", opt(r.h)},
            {"sign_changes", r.sign_changes},
            {"derivative_sign", r.derivative_sign},
            {"derivative_as_claimed", r.derivative_as_claimed},
            {"h_lo", num(r.h_lo)},
            {"h_hi", num(r.h_hi)}};
}

std::string orbit_csv(const Orbit& orbit, const Params& p) {
    Csv csv({"index", "zone", "label", "t_entry", "entry_x", "entry_y", "exit_x", "exit_y", "flight_time"});
    double t = 0.0;
    long i = 0;
    for (const auto& ev : orbit.events) {
        csv.cell(i++).cell(zone_name(ev.zone)).cell(visit_label(ev, p)).cell(t).cell(ev.entry.x).cell(ev.entry.y);
        csv.cell(ev.exit.x).cell(ev.exit.y).cell(ev.flight_time);
        csv.end_row();
        t += ev.flight_time;
    }
    return csv.str();
}

std::string samples_csv(const std::vector<OrbitSample>& samples) {
    Csv csv({"t", "x", "y", "zone"});
    for (const auto& s : samples) {
        csv.cell(s.t).cell(s.point.x).cell(s.point.y).cell(zone_name(s.zone));
        csv.end_row();
    }
    return csv.str();
}

std::string branch_csv(const Branch& b) {
    Csv csv({"x0", "h", "a", "log_multiplier", "stability", "kind", "window_flag", "stability_source", "underflow",
             "verified", "two_zone", "ok"});
    for (const auto& p : b.points) {
        csv.cell(p.x0).cell(p.h).cell(p.a).cell(p.log_multiplier);
        csv.cell(p.ok ? stability_name(p.stability) : "none").cell(p.ok ? cycle_kind_name(p.kind) : "none");
        csv.cell(p.window).cell(stability_source_name(p.source)).cell(p.underflow).cell(p.verified);
        csv.cell(p.two_zone).cell(p.ok);
        csv.end_row();
    }
    return csv.str();
}

std::string folds_csv(const std::vector<Fold>& folds) {
    Csv csv({"x_star", "a_star", "side", "residual", "coarse"});
    for (const auto& f : folds) {
        csv.cell(f.x_star).cell(f.a_star).cell(cycle_kind_name(f.side)).cell(f.multiplier_residual).cell(f.coarse);
        csv.end_row();
    }
    return csv.str();
}

} // namespace pwc::io
