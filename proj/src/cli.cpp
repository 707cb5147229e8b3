#include "pwcanard/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "pwcanard/acceptance.hpp"
#include "pwcanard/canard.hpp"
#include "pwcanard/continuation.hpp"
#include "pwcanard/errors.hpp"
#include "pwcanard/io.hpp"
#include "pwcanard/linflow.hpp"
#include "pwcanard/poincare.hpp"

namespace pwc::cli {

using nlohmann::json;

int RunConfig::m_sign() const {
    if (sign) {
        if (*sign == "minus") return -1;
        if (*sign == "plus") return 1;
        throw ValidationError("--sign must be minus or plus");
    }
    if (m && *m != 0.0) {
        if (eps && std::fabs(std::fabs(*m) - std::sqrt(*eps)) > 1e-12 * std::sqrt(*eps))
            throw ValidationError("this command needs m = -sqrt(eps) or +sqrt(eps); use --sign");
        return *m < 0 ? -1 : 1;
    }
    throw ValidationError("give --sign {minus,plus} or a nonzero --m");
}

Params RunConfig::params() const {
    if (!a) throw ValidationError("--a is required");
    if (!eps) throw ValidationError("--eps is required");
    if (m && sign) throw ValidationError("give either --m or --sign, not both");
    const double mm = m ? *m : m_sign() * std::sqrt(*eps);
    return Params::make(*a, k, mm, *eps);
}

namespace {

template <class T>
json opt_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
void opt_from(const json& j, std::optional<T>& v) {
    if (j.is_null()) v.reset();
    else v = j.get<T>();
}

} // namespace

json to_json(const RunConfig& c) {
    return {{"command", c.command}, {"a", opt_json(c.a)},   {"k", c.k},           {"m", opt_json(c.m)},
            {"sign", opt_json(c.sign)}, {"eps", opt_json(c.eps)}, {"x0", c.x0},   {"y0", c.y0},
            {"crossings", c.crossings}, {"dt", c.dt},       {"points", c.points}, {"family", c.family},
            {"id", c.id},               {"k_min", c.k_min}, {"k_max", c.k_max},   {"criteria", c.criteria},
            {"out", c.out},             {"out_dir", c.out_dir}};
}

RunConfig apply_json(RunConfig c, const json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    const std::map<std::string, std::function<void(const json&)>> setters{
        {"command", [&](const json& v) { c.command = v.get<std::string>(); }},
        {"a", [&](const json& v) { opt_from(v, c.a); }},
        {"k", [&](const json& v) { c.k = v.get<double>(); }},
        {"m", [&](const json& v) { opt_from(v, c.m); }},
        {"sign", [&](const json& v) { opt_from(v, c.sign); }},
        {"eps", [&](const json& v) { opt_from(v, c.eps); }},
        {"x0", [&](const json& v) { c.x0 = v.get<double>(); }},
        {"y0", [&](const json& v) { c.y0 = v.get<double>(); }},
        {"crossings", [&](const json& v) { c.crossings = v.get<int>(); }},
        {"dt", [&](const json& v) { c.dt = v.get<double>(); }},
        {"points", [&](const json& v) { c.points = v.get<int>(); }},
        {"family", [&](const json& v) { c.family = v.get<std::string>(); }},
        {"id", [&](const json& v) { c.id = v.get<std::string>(); }},
        {"k_min", [&](const json& v) { c.k_min = v.get<double>(); }},
        {"k_max", [&](const json& v) { c.k_max = v.get<double>(); }},
        {"criteria", [&](const json& v) { c.criteria = v.get<std::vector<int>>(); }},
        {"out", [&](const json& v) { c.out = v.get<std::string>(); }},
        {"out_dir", [&](const json& v) { c.out_dir = v.get<std::string>(); }},
    };
    for (const auto& [key, v] : j.items()) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ValidationError("unknown config key: " + key);
        try {
            it->second(v);
        } catch (const json::exception& e) {
            throw ValidationError("config key " + key + ": " + e.what());
        }
    }
    return c;
}

namespace {

std::string kname(double k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", k);
    return buf;
}

const char* sname(int s) { return s < 0 ? "sup" : "sub"; }

struct Context {
    const RunConfig& cfg;
    std::ostream& out;

    void emit(const json& j) const {
        const std::string s = j.dump(2) + "\n";
        if (cfg.out.empty()) out << s;
        else io::write_atomic(cfg.out, s);
    }
    void emit_text(const std::string& s) const {
        if (cfg.out.empty()) out << s;
        else io::write_atomic(cfg.out, s);
    }
    std::string file(const std::string& name) const {
        const std::filesystem::path p = std::filesystem::path(cfg.out_dir) / name;
        return p.string();
    }
};

json series_report(const Connection& c, double k, double eps, int s) {
    const double as = a_tilde_series(k, eps, s), ts = tau_C_series(k, eps, s);
    return {{"a_tilde_series", as},
            {"tau_C_series", ts},
            {"a_tilde_diff", c.a_tilde - as},
            {"a_tilde_diff_over_eps2", (c.a_tilde - as) / (eps * eps)},
            {"tau_C_diff", c.tau_C - ts},
            {"tau_C_diff_over_eps", (c.tau_C - ts) / eps}};
}

void cmd_model(const Context& cx) {
    const Params p = cx.cfg.params();
    cx.emit({{"config", to_json(cx.cfg)},
             {"params", io::to_json(p)},
             {"landmarks", io::to_json(landmarks(p))},
             {"equilibrium", io::to_json(equilibrium_stability(p))}});
}

void cmd_simulate(const Context& cx) {
    const Params p = cx.cfg.params();
    if (cx.cfg.crossings < 1) throw ValidationError("--crossings must be positive");
    const Orbit o = integrate_orbit({cx.cfg.x0, cx.cfg.y0}, p, StopRule::events(cx.cfg.crossings));
    if (cx.cfg.dt > 0.0) cx.emit_text(io::samples_csv(sample_orbit(o, p, cx.cfg.dt)));
    else cx.emit_text(io::orbit_csv(o, p));
}

void cmd_connect(const Context& cx) {
    const double eps = cx.cfg.eps_or(NAN);
    if (!cx.cfg.eps) throw ValidationError("--eps is required");
    const int s = cx.cfg.m_sign();
    Params::with_sign(0.0, cx.cfg.k, s, eps).validate();
    const Connection c = maximal_canard(cx.cfg.k, eps, s);
    const SingularConnection sc = singular_connection();
    cx.emit({{"config", to_json(cx.cfg)},
             {"connection", io::to_json(c)},
             {"corridor", connection_in_corridor(c, cx.cfg.k, eps, s)},
             {"series", series_report(c, cx.cfg.k, eps, s)},
             {"singular", {{"a_bar", sc.a_bar}, {"tau_bar", sc.tau_bar}, {"det_J", sc.det_J}}}});
}

void cmd_branch(const Context& cx) {
    if (!cx.cfg.eps) throw ValidationError("--eps is required");
    const int s = cx.cfg.m_sign();
    Params::with_sign(0.0, cx.cfg.k, s, *cx.cfg.eps).validate();
    BranchOptions opt;
    opt.points = cx.cfg.points;
    const Branch b = trace_branch(cx.cfg.k, *cx.cfg.eps, s, opt);
    const auto folds = detect_folds(b);
    const std::string bf = cx.file("branch.csv"), ff = cx.file("folds.csv");
    io::write_atomic(bf, io::branch_csv(b));
    io::write_atomic(ff, io::folds_csv(folds));
    int ok = 0, failed = 0;
    for (const auto& p : b.points) (p.ok ? ok : failed)++;
    json jf = json::array();
    for (const auto& f : folds) jf.push_back(io::to_json(f));
    cx.emit({{"config", to_json(cx.cfg)},
             {"a_tilde", b.a_tilde},
             {"a_H", b.a_H ? json(*b.a_H) : json(nullptr)},
             {"x_r", b.x_r},
             {"x_u", b.x_u},
             {"x_s", b.x_s},
             {"points", ok},
             {"failed_points", failed},
             {"folds", jf},
             {"branch_csv", bf},
             {"folds_csv", ff}});
}

std::vector<RFamily> families(const std::string& f) {
    if (f == "3z") return {RFamily::three_zone};
    if (f == "4z") return {RFamily::four_zone};
    if (f == "both") return {RFamily::three_zone, RFamily::four_zone};
    throw ValidationError("--family must be 3z, 4z or both");
}

void cmd_rzero(const Context& cx) {
    if (!cx.cfg.eps) throw ValidationError("--eps is required");
    const double eps = *cx.cfg.eps, k = cx.cfg.k;
    const int s = cx.cfg.m_sign();
    Params::with_sign(0.0, k, s, eps).validate();
    const auto fams = families(cx.cfg.family);
    const Connection c = maximal_canard(k, eps, s);
    const Params pc = canard_params(k, eps, s, c);
    json res = json::object();
    for (RFamily f : fams) {
        const HstarResult r = hstar_root(f, k, eps, s);
        const auto ser = hstar_series(f, k, eps, s);
        const auto dom = r_domain(f, pc);
        json j = io::to_json(r);
        j["series"] = ser ? json(*ser) : json(nullptr);
        j["rel_gap"] = (r.h && ser) ? json(std::fabs(*r.h - *ser) / std::fabs(*ser)) : json(nullptr);
        j["domain"] = {dom.first, dom.second};
        res[r_family_name(f)] = j;
    }
    cx.emit({{"config", to_json(cx.cfg)}, {"a_tilde", c.a_tilde}, {"tau_C", c.tau_C}, {"roots", res}});
}

void cmd_snk(const Context& cx) {
    if (!cx.cfg.eps) throw ValidationError("--eps is required");
    const int s = cx.cfg.m_sign();
    const double k = saddle_node_k_for_width(cx.cfg.x0, *cx.cfg.eps, s, cx.cfg.k_min, cx.cfg.k_max);
    cx.emit({{"config", to_json(cx.cfg)}, {"k", k}, {"family", cx.cfg.x0 >= -1.0 ? "3z" : "4z"}});
}

void cmd_hopf(const Context& cx) {
    if (!cx.cfg.eps) throw ValidationError("--eps is required");
    const int s = cx.cfg.m_sign();
    Params::with_sign(0.0, cx.cfg.k, s, *cx.cfg.eps).validate();
    cx.emit({{"config", to_json(cx.cfg)}, {"hopf", io::to_json(hopf_check(cx.cfg.k, *cx.cfg.eps, s))}});
}

// Datasets behind the figures.

json fig_branches(const Context& cx) {
    const double eps = cx.cfg.eps_or(0.05);
    json files = json::array();
    for (int s : {-1, 1}) {
        for (double k : s < 0 ? std::vector<double>{0.8, 1.0, 2.5} : std::vector<double>{0.75, 1.0, 2.5}) {
            BranchOptions opt;
            opt.points = cx.cfg.points;
            const Branch b = trace_branch(k, eps, s, opt);
            const std::string stem = std::string("fig3_") + sname(s) + "_k" + kname(k);
            io::write_atomic(cx.file(stem + "_branch.csv"), io::branch_csv(b));
            io::write_atomic(cx.file(stem + "_folds.csv"), io::folds_csv(detect_folds(b)));
            files.push_back(stem + "_branch.csv");
            files.push_back(stem + "_folds.csv");
        }
    }
    return files;
}

json fig_rfunction(const Context& cx, RFamily fam, const std::string& tag, double k_sup, double k_sub) {
    const std::vector<double> eps_list =
        cx.cfg.eps ? std::vector<double>{*cx.cfg.eps} : std::vector<double>{0.05, 0.01, 0.005};
    json files = json::array();
    for (int s : {-1, 1}) {
        const double k = s < 0 ? k_sup : k_sub;
        io::Csv csv({"eps", "h", "log_abs", "sign", "value"});
        for (double eps : eps_list) {
            const Connection c = maximal_canard(k, eps, s);
            const Params pc = canard_params(k, eps, s, c);
            const auto [lo, hi] = r_domain(fam, pc);
            for (int i = 0; i < 400; ++i) {
                const double h = lo + (hi - lo) * (i + 0.5) / 400.0;
                try {
                    const RFunctionValue r = r_function(fam, h, pc, c.tau_C);
                    csv.cell(eps).cell(h).cell(r.value.log_abs).cell(r.value.sign).cell(r.value.value());
                    csv.end_row();
                } catch (const DomainError&) {
                }
            }
        }
        const std::string name = tag + "_R_" + sname(s) + "_k" + kname(k) + ".csv";
        io::write_atomic(cx.file(name), csv.str());
        files.push_back(name);

        io::Csv hc({"eps", "k", "hstar_root", "hstar_series"});
        for (double eps : eps_list) {
            for (int i = 0; i <= 74; ++i) {
                const double kk = 0.3 + 0.05 * i;
                if (std::fabs(kk - 1.0) < 1e-9 && fam == RFamily::three_zone) continue;
                double root = NAN;
                try {
                    const auto r = hstar_root(fam, kk, eps, s, 800);
                    if (r.h) root = *r.h;
                } catch (const NumericalError&) {
                }
                const auto ser = hstar_series(fam, kk, eps, s);
                hc.cell(eps).cell(kk).cell(root).cell(ser ? *ser : NAN);
                hc.end_row();
            }
        }
        const std::string hname = tag + "_hstar_" + sname(s) + ".csv";
        io::write_atomic(cx.file(hname), hc.str());
        files.push_back(hname);
    }
    return files;
}

json fig_cycles(const Context& cx, const std::string& tag, double a) {
    const double eps = cx.cfg.eps_or(0.1);
    const Params p = Params::make(a, 2.5, -std::sqrt(eps), eps);
    const auto fps = fixed_points(p, -10.0, 10.0);
    io::Csv csv({"index", "y_fix", "x0", "h", "y_at_x0", "log_multiplier", "stability", "kind", "period"});
    json files = json::array();
    for (std::size_t i = 0; i < fps.size(); ++i) {
        const auto& c = fps[i];
        const auto y = cycle_crossing(c, 0.0, p);
        csv.cell(static_cast<long>(i)).cell(c.y_fix).cell(c.x0).cell(c.h).cell(y ? *y : NAN);
        csv.cell(c.log_multiplier).cell(stability_name(c.stability)).cell(cycle_kind_name(c.kind));
        csv.cell(c.orbit.total_time);
        csv.end_row();
        const std::string name = tag + "_orbit_" + std::to_string(i) + ".csv";
        io::write_atomic(cx.file(name), io::samples_csv(sample_orbit(c.orbit, p, 0.01)));
        files.push_back(name);
    }
    io::write_atomic(cx.file(tag + "_cycles.csv"), csv.str());
    files.push_back(tag + "_cycles.csv");
    return files;
}

json fig_hk(const Context& cx) {
    const double eps = cx.cfg.eps_or(1e-5);
    io::Csv csv({"sign", "family", "k", "hstar_root", "hstar_series", "h_M"});
    for (int s : {-1, 1}) {
        for (RFamily f : {RFamily::three_zone, RFamily::four_zone}) {
            for (int i = 0; i <= 74; ++i) {
                const double k = 0.3 + 0.05 * i;
                if (std::fabs(k - 1.0) < 1e-9 && f == RFamily::three_zone) continue;
                double root = NAN, hm = NAN;
                try {
                    const auto r = hstar_root(f, k, eps, s, 800);
                    if (r.h) root = *r.h;
                    hm = landmarks(canard_params(k, eps, s, maximal_canard(k, eps, s))).h_M;
                } catch (const NumericalError&) {
                }
                const auto ser = hstar_series(f, k, eps, s);
                csv.cell(sname(s)).cell(r_family_name(f)).cell(k).cell(root).cell(ser ? *ser : NAN).cell(hm);
                csv.end_row();
            }
        }
    }
    io::write_atomic(cx.file("fig7_hstar.csv"), csv.str());
    return json::array({"fig7_hstar.csv"});
}

void cmd_figures(const Context& cx) {
    const std::string& id = cx.cfg.id;
    static const char* ids[] = {"fig3", "fig4", "fig5", "fig6", "fig6a", "fig6b", "fig7", "all"};
    if (std::find(std::begin(ids), std::end(ids), id) == std::end(ids))
        throw ValidationError("--id must be one of fig3 fig4 fig5 fig6 fig6a fig6b fig7 all");
    json files = json::object();
    const bool all = id == "all";
    if (all || id == "fig3") files["fig3"] = fig_branches(cx);
    if (all || id == "fig4") files["fig4"] = fig_rfunction(cx, RFamily::three_zone, "fig4", 2.5, 0.75);
    if (all || id == "fig5") files["fig5"] = fig_rfunction(cx, RFamily::four_zone, "fig5", 1.3, 0.75);
    if (all || id == "fig6" || id == "fig6a") files["fig6a"] = fig_cycles(cx, "fig6a", 0.2305968812);
    if (all || id == "fig6" || id == "fig6b") files["fig6b"] = fig_cycles(cx, "fig6b", 0.23059688315966);
    if (all || id == "fig7") files["fig7"] = fig_hk(cx);
    cx.emit({{"config", to_json(cx.cfg)}, {"out_dir", cx.cfg.out_dir}, {"files", files}});
}

int cmd_verify(const Context& cx) {
    int failed = 0;
    std::ostringstream buf;
    for (const auto& r : acceptance::run_all(cx.cfg.criteria)) {
        buf << acceptance::format_line(r) << '\n';
        failed += !r.pass;
        if (cx.cfg.out.empty()) {
            cx.out << acceptance::format_line(r) << '\n' << std::flush;
        }
    }
    if (!cx.cfg.out.empty()) io::write_atomic(cx.cfg.out, buf.str());
    return failed ? kFailure : kOk;
}

void set_threads() {
    if (const char* t = std::getenv("PWCANARD_THREADS")) {
        const int n = std::atoi(t);
        if (n < 1) throw ValidationError("PWCANARD_THREADS must be a positive integer");
        omp_set_num_threads(n);
    }
}

json error_json(const char* kind, const std::string& command, const std::string& what) {
    return {{"error", kind}, {"command", command}, {"message", what}};
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Canard cycles of a piecewise-linear slow-fast system", "pwcanard"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "JSON file whose keys override the flags");

    // Optional values are staged through raw variables; counts decide whether they were given.
    double a_raw = 0, m_raw = 0, eps_raw = 0;
    std::string sign_raw;
    std::vector<std::pair<CLI::Option*, std::function<void()>>> staged;

    auto add_params = [&](CLI::App* sc, bool with_a) {
        if (with_a) staged.push_back({sc->add_option("--a", a_raw, "Slow-nullcline parameter a"), [&] { cfg.a = a_raw; }});
        sc->add_option("--k", cfg.k, "Slope magnitude of zone L");
        staged.push_back({sc->add_option("--m", m_raw, "Slope of zone C"), [&] { cfg.m = m_raw; }});
        staged.push_back({sc->add_option("--sign", sign_raw, "minus: m = -sqrt(eps), plus: m = +sqrt(eps)")
                              ->check(CLI::IsMember({"minus", "plus"})),
                          [&] { cfg.sign = sign_raw; }});
        staged.push_back({sc->add_option("--eps", eps_raw, "Singular parameter"), [&] { cfg.eps = eps_raw; }});
        sc->add_option("--out", cfg.out, "Output file (default standard output)");
    };

    std::map<std::string, std::function<int(const Context&)>> handlers;
    auto sub = [&](const char* name, const char* help, std::function<int(const Context&)> h) {
        handlers[name] = std::move(h);
        return app.add_subcommand(name, help);
    };
    auto unit = [](void (*f)(const Context&)) {
        return [f](const Context& c) {
            f(c);
            return int(kOk);
        };
    };

    auto* model = sub("model", "Landmarks and equilibrium as JSON", unit(cmd_model));
    add_params(model, true);

    auto* simulate = sub("simulate", "Event-driven orbit as CSV", unit(cmd_simulate));
    add_params(simulate, true);
    simulate->add_option("--x0", cfg.x0, "Initial x");
    simulate->add_option("--y0", cfg.y0, "Initial y");
    simulate->add_option("--crossings", cfg.crossings, "Number of zone events");
    simulate->add_option("--dt", cfg.dt, "Dense sampling step (0: one row per event)");

    auto* connect = sub("connect", "Maximal canard connection and series comparison", unit(cmd_connect));
    add_params(connect, false);

    auto* branch = sub("branch", "Branch of canard cycles and its folds", unit(cmd_branch));
    add_params(branch, false);
    branch->add_option("--points", cfg.points, "Number of widths");
    branch->add_option("--out-dir", cfg.out_dir, "Directory for branch.csv and folds.csv");

    auto* rzero = sub("rzero", "Zeros of R3z / R4z and their series", unit(cmd_rzero));
    add_params(rzero, false);
    rzero->add_option("--family", cfg.family, "3z, 4z or both")->check(CLI::IsMember({"3z", "4z", "both"}));

    auto* snk = sub("snk", "k at which the saddle-node cycle has the given width", unit(cmd_snk));
    add_params(snk, false);
    snk->add_option("--x0", cfg.x0, "Width");
    snk->add_option("--k-min", cfg.k_min, "Lower end of the k scan");
    snk->add_option("--k-max", cfg.k_max, "Upper end of the k scan");

    auto* hopf = sub("hopf", "Small cycles near the Hopf-like point", unit(cmd_hopf));
    add_params(hopf, false);

    auto* figures = sub("figures", "Datasets behind Figures 3 to 7", unit(cmd_figures));
    figures->add_option("--id", cfg.id, "fig3 fig4 fig5 fig6 fig6a fig6b fig7 all");
    staged.push_back({figures->add_option("--eps", eps_raw, "Override the figure's eps"), [&] { cfg.eps = eps_raw; }});
    figures->add_option("--points", cfg.points, "Widths per branch (fig3)");
    figures->add_option("--out-dir", cfg.out_dir, "Output directory");
    figures->add_option("--out", cfg.out, "Summary JSON file (default standard output)");

    auto* verify = sub("verify", "Acceptance criteria, one PASS/FAIL line each", cmd_verify);
    verify->add_option("--criteria", cfg.criteria, "Subset of criteria (default all)");
    verify->add_option("--out", cfg.out, "Report file (default standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
        return kUsage;
    }
    for (auto& [opt, set] : staged)
        if (opt->count() > 0) set();
    for (auto* sc : app.get_subcommands()) cfg.command = sc->get_name();

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ValidationError("cannot read config " + config_path);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ValidationError(std::string("config is not valid JSON: ") + e.what());
            }
            const std::string command = cfg.command;
            cfg = apply_json(cfg, j);
            if (cfg.command != command) throw ValidationError("config command does not match the subcommand");
        }
        set_threads();
        const Context cx{cfg, out};
        return handlers.at(cfg.command)(cx);
    } catch (const ValidationError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConvergenceError& e) {
        err << error_json("convergence", cfg.command, e.what()).dump() << '\n';
        return kNumerical;
    } catch (const NumericalError& e) {
        err << error_json("numerical", cfg.command, e.what()).dump() << '\n';
        return kNumerical;
    } catch (const DomainError& e) {
        err << error_json("domain", cfg.command, e.what()).dump() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << error_json("io", cfg.command, e.what()).dump() << '\n';
        return kFailure;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("pwcanard");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace pwc::cli
