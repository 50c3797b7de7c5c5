#include "cli_app.hpp"

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sta/analysis.hpp"
#include "sta/constants.hpp"
#include "sta/correction.hpp"
#include "sta/errors.hpp"
#include "sta/io.hpp"
#include "sta/plan.hpp"
#include "sta/simulator.hpp"
#include "sta/sloshing.hpp"
#include "sta/trap.hpp"

namespace sta::cli {

namespace {

using constants::pi;

double unit_factor(const std::string& suffix, Unit unit) {
    static const std::map<std::string, std::pair<Unit, double>> table{
        {"m", {Unit::Length, 1.0}},       {"mm", {Unit::Length, 1e-3}},
        {"um", {Unit::Length, 1e-6}},     {"nm", {Unit::Length, 1e-9}},
        {"s", {Unit::Time, 1.0}},         {"ms", {Unit::Time, 1e-3}},
        {"us", {Unit::Time, 1e-6}},       {"Hz", {Unit::Frequency, 1.0}},
        {"kHz", {Unit::Frequency, 1e3}},  {"rad", {Unit::Angle, 1.0}},
        {"deg", {Unit::Angle, pi / 180}}, {"K", {Unit::Temperature, 1.0}},
        {"mK", {Unit::Temperature, 1e-3}}, {"uK", {Unit::Temperature, 1e-6}},
        {"nK", {Unit::Temperature, 1e-9}},
    };
    if (suffix.empty()) return 1.0;
    const auto it = table.find(suffix);
    if (it == table.end() || it->second.first != unit)
        throw CLI::ValidationError("unit", "unknown or mismatched unit suffix '" + suffix + "'");
    return it->second.second;
}

double parse_quantity_impl(const std::string& text, Unit unit) {
    std::size_t pos = 0;
    double value;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw CLI::ValidationError("value", "cannot parse number in '" + text + "'");
    }
    std::string suffix = text.substr(pos);
    while (!suffix.empty() && suffix.front() == ' ') suffix.erase(0, 1);
    if (unit == Unit::Dimensionless && !suffix.empty())
        throw CLI::ValidationError("value", "'" + text + "' must be dimensionless");
    return value * unit_factor(suffix, unit);
}

}  // namespace

double parse_quantity(const std::string& text, Unit unit) {
    return parse_quantity_impl(text, unit);
}

std::vector<double> parse_range(const std::string& text, Unit unit) {
    const auto c1 = text.find(':');
    const auto c2 = text.rfind(':');
    if (c1 == std::string::npos || c2 == c1)
        throw CLI::ValidationError("range", "expected lo:hi:count in '" + text + "'");
    const double lo = parse_quantity(text.substr(0, c1), unit);
    const double hi = parse_quantity(text.substr(c1 + 1, c2 - c1 - 1), unit);
    const int n = std::stoi(text.substr(c2 + 1));
    if (n < 1) throw CLI::ValidationError("range", "count must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return out;
}

namespace {

// A harmonic-reference trap for boundary simulation when no config file is
// given; only the axial frequency matters there.
TrapConfig reference_config(double omega0) {
    return TrapConfig::from_axial_freq(omega0, 20e-6, 1.064e-6,
                                       39.96399848 * constants::atomic_mass_unit,
                                       90.0 * omega0);
}

struct PlanSpec {
    std::string family = "septic";
    std::string d = "1mm", tf, f0;
    std::string omega1;  // Hz; for trap_from_atom families
};

struct BuiltPlan {
    MotionPlan trap;                     // what gets exported / simulated
    std::optional<MotionPlan> atom;      // when the family defines one
    double omega0 = 0;
};

BuiltPlan build_plan(const PlanSpec& spec) {
    const double d = parse_quantity(spec.d, Unit::Length);
    const double tf = parse_quantity(spec.tf, Unit::Time);
    const double f0 = parse_quantity(spec.f0, Unit::Frequency);
    const double w0 = 2.0 * pi * f0;
    const double w1 = spec.omega1.empty()
                          ? w0
                          : 2.0 * pi * parse_quantity(spec.omega1, Unit::Frequency);
    TransportRequest req{d, tf, w0};
    BuiltPlan out;
    out.omega0 = w0;
    if (spec.family == "sine") {
        out.trap = sine_plan(req);
    } else if (spec.family == "triangular") {
        out.trap = triangular_plan(req);
    } else if (spec.family == "quintic-trap") {
        out.trap = quintic_trap_plan(req);
    } else if (spec.family == "septic-trap") {
        out.trap = septic_trap_plan(req);
    } else if (spec.family == "quintic") {
        out.atom = quintic_plan(req);
        out.trap = trap_from_atom(*out.atom, w1);
    } else if (spec.family == "septic") {
        out.atom = septic_plan(req);
        out.trap = trap_from_atom(*out.atom, w1);
    } else {
        throw CLI::ValidationError("family", "unknown family '" + spec.family + "'");
    }
    return out;
}

void add_manifest_outputs(io::RunManifest& man, const std::vector<std::string>& paths) {
    for (const auto& p : paths) man.output_digests[p] = io::file_digest_hex(p);
}

io::RunManifest make_manifest(const std::vector<std::string>& args) {
    io::RunManifest man;
    man.tool_version = kToolVersion;
    man.command = args;
    return man;
}

int cmd_plan(const std::vector<std::string>& args, const PlanSpec& spec, double rate,
             double tol, const std::string& out) {
    const BuiltPlan built = build_plan(spec);
    const auto cfg = reference_config(built.omega0);

    BoundaryReport report =
        built.atom ? check_boundaries(*built.atom, built.trap, tol)
                   : check_boundaries(built.trap, cfg, tol, IntegratorConfig{0, 4096});
    const auto res = sloshing_residual(built.trap, built.omega0);
    const double d_abs = std::abs(built.trap.request.distance);

    const std::string csv = out + ".csv";
    const std::string desc = out + ".json";
    io::write_waveform_csv(csv, built.trap, rate);
    io::write_text_file(desc, io::plan_descriptor_json(built.trap, std::nullopt));

    io::RunManifest man = make_manifest(args);
    man.parameters = {{"family", spec.family},
                      {"d_m", io::format_double(built.trap.request.distance)},
                      {"tf_s", io::format_double(built.trap.request.duration)},
                      {"omega0_rad_s", io::format_double(built.omega0)},
                      {"sample_rate_Hz", io::format_double(rate)},
                      {"tol", io::format_double(tol)}};
    add_manifest_outputs(man, {csv, desc});
    io::write_text_file(out + ".manifest.json", man.to_json());

    std::cout << "boundary conditions (tol " << tol << "):\n" << report.summary();
    std::cout << "predicted sloshing amplitude: " << io::format_double(res.amplitude)
              << " m (" << io::format_double(res.amplitude / d_abs) << " of d)\n";
    if (res.amplitude > 1e-6 * d_abs)
        std::cout << "warning: predicted sloshing amplitude exceeds 1e-6 d\n";
    std::cout << "wrote " << csv << ", " << desc << "\n";
    if (!report.trap_pass()) {
        std::cout << "error: trap boundary conditions violated (trap not at rest at ends)\n";
        return 2;
    }
    return 0;
}

// Rebuild the closed-form family a waveform declares in its metadata; fall
// back to the spline import for custom data.
MotionPlan plan_from_waveform_or_family(const io::WaveformFile& wf) {
    const auto fam = wf.metadata.find("family");
    const auto frame = wf.metadata.find("frame");
    if (fam != wf.metadata.end() && frame != wf.metadata.end() &&
        frame->second == "trap" && wf.metadata.count("d_m") &&
        wf.metadata.count("tf_s") && wf.metadata.count("f0_Hz")) {
        const TransportRequest req{std::stod(wf.metadata.at("d_m")),
                                   std::stod(wf.metadata.at("tf_s")),
                                   2.0 * pi * std::stod(wf.metadata.at("f0_Hz"))};
        if (fam->second == "sine") return sine_plan(req);
        if (fam->second == "triangular") return triangular_plan(req);
        if (fam->second == "quintic") return quintic_trap_plan(req);
        if (fam->second == "septic") return septic_trap_plan(req);
    }
    return io::plan_from_waveform(wf);
}

int cmd_correct(const std::vector<std::string>& args, const std::string& base_path,
                const std::string& f0_eff, const std::string& out, double rate) {
    const auto wf = io::read_waveform_csv(base_path);
    const MotionPlan base = plan_from_waveform_or_family(wf);
    const double w_eff = f0_eff.empty()
                             ? base.request.trap_freq
                             : 2.0 * pi * parse_quantity(f0_eff, Unit::Frequency);
    const CorrectionSolution sol = solve_correction(base, w_eff);
    const MotionPlan corrected = apply_correction(base, sol.params);

    const std::string csv = out + ".csv";
    const std::string sol_path = out + "_solution.json";
    io::write_waveform_csv(csv, corrected, rate,
                           {{"A0_m", io::format_double(sol.params.amplitude)},
                            {"phi0_rad", io::format_double(sol.params.phase)},
                            {"omega_c_rad_s", io::format_double(sol.params.omega_c)}});
    io::write_text_file(sol_path, io::correction_solution_json(sol));
    io::write_text_file(out + ".json",
                        io::plan_descriptor_json(corrected, sol.params));

    io::RunManifest man = make_manifest(args);
    man.parameters = {{"base", base_path},
                      {"omega_c_rad_s", io::format_double(w_eff)},
                      {"sample_rate_Hz", io::format_double(rate)}};
    man.input_digests[base_path] = io::file_digest_hex(base_path);
    add_manifest_outputs(man, {csv, sol_path, out + ".json"});
    io::write_text_file(out + ".manifest.json", man.to_json());

    std::cout << "A0 = " << io::format_double(sol.params.amplitude)
              << " m, phi0 = " << io::format_double(sol.params.phase * 180.0 / pi)
              << " deg, residual = " << io::format_double(sol.corrected_amplitude) << " m\n";
    std::cout << "wrote " << csv << ", " << sol_path << "\n";
    if (!sol.converged) {
        std::cout << "error: corrected residual above tolerance\n";
        return 3;
    }
    return 0;
}

Family family_from_name(const std::string& name) {
    if (name == "sine") return Family::Sine;
    if (name == "triangular") return Family::Triangular;
    if (name == "quintic-trap") return Family::Quintic;
    if (name == "septic-trap") return Family::Septic;
    throw CLI::ValidationError("family", "sweepable families: sine, triangular, "
                                         "quintic-trap, septic-trap");
}

int cmd_sweep_duration(const std::vector<std::string>& args, const std::string& family,
                       const std::string& f0_s, const std::string& d_s,
                       const std::string& range, const std::string& out) {
    const double f0 = parse_quantity(f0_s, Unit::Frequency);
    const double d = parse_quantity(d_s, Unit::Length);
    const auto xs = parse_range(range, Unit::Dimensionless);
    const auto rows = amplitude_vs_duration_sweep(family_from_name(family), f0, xs, d);
    io::write_duration_sweep_csv(out, rows);
    io::RunManifest man = make_manifest(args);
    man.parameters = {{"kind", "duration"}, {"family", family},
                      {"f0_Hz", io::format_double(f0)}, {"d_m", io::format_double(d)},
                      {"x_range", range}};
    add_manifest_outputs(man, {out});
    io::write_text_file(out + ".manifest.json", man.to_json());
    std::cout << "wrote " << out << " (" << rows.size() << " rows)\n";
    return 0;
}

int cmd_sweep_amplitude(const std::vector<std::string>& args, const PlanSpec& spec,
                        const std::string& phi0_s, const std::string& a0_range,
                        const std::string& out) {
    const BuiltPlan built = build_plan(spec);
    const double phi0 = parse_quantity(phi0_s, Unit::Angle);
    const auto a0s = parse_range(a0_range, Unit::Length);
    const auto rows = amplitude_sweep(built.trap, phi0, built.omega0, a0s);
    io::write_amplitude_sweep_csv(out, rows);
    io::RunManifest man = make_manifest(args);
    man.parameters = {{"kind", "amplitude"}, {"family", spec.family},
                      {"phi0_rad", io::format_double(phi0)}, {"a0_range", a0_range}};
    add_manifest_outputs(man, {out});
    io::write_text_file(out + ".manifest.json", man.to_json());
    std::cout << "wrote " << out << " (" << rows.size() << " rows)\n";
    return 0;
}

int cmd_sweep_frequency(const std::vector<std::string>& args, const PlanSpec& spec,
                        const std::string& ratio_range, const std::string& out) {
    PlanSpec atom_spec = spec;
    if (spec.family == "quintic-trap") atom_spec.family = "quintic";
    if (spec.family == "septic-trap") atom_spec.family = "septic";
    const BuiltPlan built = build_plan(atom_spec);
    if (!built.atom)
        throw CLI::ValidationError("family", "frequency sweep needs a polynomial family");
    const auto ratios = parse_range(ratio_range, Unit::Dimensionless);
    std::vector<double> omega1s(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) omega1s[i] = ratios[i] * built.omega0;
    const auto rows = frequency_sensitivity_sweep(*built.atom, built.omega0, omega1s);
    io::write_frequency_sweep_csv(out, rows, built.omega0);
    io::RunManifest man = make_manifest(args);
    man.parameters = {{"kind", "frequency"}, {"family", atom_spec.family},
                      {"omega1_range", ratio_range}};
    add_manifest_outputs(man, {out});
    io::write_text_file(out + ".manifest.json", man.to_json());
    std::cout << "wrote " << out << " (" << rows.size() << " rows)\n";
    return 0;
}

ForceModel model_from_name(const std::string& name) {
    if (name == "harmonic") return ForceModel::Harmonic;
    if (name == "quartic") return ForceModel::QuarticCorrected;
    if (name == "full-gaussian") return ForceModel::FullGaussian;
    throw CLI::ValidationError("model", "models: harmonic, quartic, full-gaussian");
}

int cmd_simulate(const std::vector<std::string>& args, const std::string& plan_path,
                 const std::string& config_path, const std::string& model_s,
                 const std::string& temperature_s, const std::string& spread_s, int n,
                 std::uint64_t seed, bool antithetic, const std::string& hold_s,
                 int steps_per_period, int stride, bool probe, const std::string& waits_s,
                 const std::string& te_s, int reps, const std::string& noise_s,
                 const std::string& out) {
    const auto wf = io::read_waveform_csv(plan_path);
    const MotionPlan plan = io::plan_from_waveform(wf);
    const ForceModel model = model_from_name(model_s);
    TrapConfig cfg = config_path.empty()
                         ? reference_config(plan.request.trap_freq)
                         : TrapConfig::from_file(config_path);
    IntegratorConfig icfg;
    icfg.steps_per_period = steps_per_period;

    io::RunManifest man = make_manifest(args);
    man.parameters = {{"plan", plan_path}, {"model", model_s}};
    man.input_digests[plan_path] = io::file_digest_hex(plan_path);
    if (!config_path.empty())
        man.input_digests[config_path] = io::file_digest_hex(config_path);

    if (probe) {
        const auto waits = parse_range(waits_s, Unit::Time);
        const double te = parse_quantity(te_s, Unit::Time);
        const double noise = noise_s.empty() ? 0.0 : parse_quantity(noise_s, Unit::Length);
        const auto records =
            stop_and_probe_scan(plan, cfg, model, waits, te, reps, noise, seed, icfg);
        io::write_probe_csv(out, records);
        man.parameters["waits"] = waits_s;
        man.parameters["te_s"] = io::format_double(te);
        man.parameters["noise_m"] = io::format_double(noise);
        man.parameters["reps"] = std::to_string(reps);
        man.seeds = {seed};
        add_manifest_outputs(man, {out});
        io::write_text_file(out + ".manifest.json", man.to_json());
        std::cout << "wrote " << out << " (" << records.size() << " samples)\n";
        return 0;
    }

    double temperature;
    if (!spread_s.empty()) {
        const double spread = parse_quantity(spread_s, Unit::Length);
        temperature = temperature_for_axial_spread(cfg, model, spread);
        std::cout << "matched temperature: " << io::format_double(temperature * 1e9)
                  << " nK for " << io::format_double(spread * 1e6) << " um spread\n";
    } else if (!temperature_s.empty()) {
        temperature = parse_quantity(temperature_s, Unit::Temperature);
    } else {
        throw CLI::ValidationError("simulate", "give --temperature or --spread");
    }
    const double hold = hold_s.empty() ? 0.0 : parse_quantity(hold_s, Unit::Time);
    const auto ensemble =
        sample_thermal_ensemble(cfg, model, temperature, n, seed, antithetic);
    const auto obs = simulate_transport(ensemble, plan, cfg, model, icfg, hold, stride);
    io::write_observables_csv(out, obs);
    man.parameters["temperature_K"] = io::format_double(temperature);
    man.parameters["n"] = std::to_string(n);
    man.parameters["hold_s"] = io::format_double(hold);
    man.parameters["antithetic"] = antithetic ? "true" : "false";
    man.parameters["steps_per_period"] = std::to_string(steps_per_period);
    man.parameters["record_stride"] = std::to_string(stride);
    man.seeds = {seed};
    add_manifest_outputs(man, {out});
    io::write_text_file(out + ".manifest.json", man.to_json());
    const double surviving = obs.surviving.empty() ? 1.0 : obs.surviving.back();
    std::cout << "wrote " << out << " (" << obs.t.size() << " rows, surviving fraction "
              << io::format_double(surviving) << ")\n";
    return 0;
}

int cmd_fit(const std::vector<std::string>& args, const std::string& data_path,
            const std::string& te_s, const std::string& center_s, const std::string& out) {
    const auto records = io::read_probe_csv(data_path);
    const double te = parse_quantity(te_s, Unit::Time);
    const double center = center_s.empty() ? 0.0 : parse_quantity(center_s, Unit::Length);
    const auto extracted = extract_sloshing(records, te, center);
    io::write_text_file(out, io::fit_json(extracted.fit));
    io::RunManifest man = make_manifest(args);
    man.parameters = {{"data", data_path}, {"te_s", io::format_double(te)},
                      {"center_m", io::format_double(center)}};
    man.input_digests[data_path] = io::file_digest_hex(data_path);
    add_manifest_outputs(man, {out});
    io::write_text_file(out + ".manifest.json", man.to_json());
    std::cout << "in-situ amplitude " << io::format_double(extracted.sloshing.amplitude)
              << " m, phase " << io::format_double(extracted.sloshing.phase * 180.0 / pi)
              << " deg\n";
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Trajectory synthesis, spectral correction and verification for "
                 "non-adiabatic optical-trap transport"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    PlanSpec spec;
    double rate = 1000.0;
    double tol = 1e-6;
    std::string out = "plan";
    auto* plan_cmd = app.add_subcommand("plan", "generate a transport waveform");
    plan_cmd->add_option("--family", spec.family,
                         "sine | triangular | quintic | quintic-trap | septic | septic-trap");
    plan_cmd->add_option("--d", spec.d, "transport distance (e.g. 1.29mm)");
    plan_cmd->add_option("--tf", spec.tf, "duration (e.g. 186ms)")->required();
    plan_cmd->add_option("--f0", spec.f0, "axial trap frequency in Hz")->required();
    plan_cmd->add_option("--omega1", spec.omega1,
                         "frequency parameter (Hz) for atom->trap conversion");
    plan_cmd->add_option("--rate", rate, "waveform sample rate [Hz]");
    plan_cmd->add_option("--tol", tol, "boundary tolerance (normalized)");
    plan_cmd->add_option("--out", out, "output basename");

    std::string base_path, f0_eff;
    std::string correct_out = "corrected";
    auto* correct_cmd = app.add_subcommand("correct", "null the residual of a base waveform");
    correct_cmd->add_option("--base", base_path, "base waveform CSV")->required();
    correct_cmd->add_option("--f0-eff", f0_eff,
                            "correction frequency in Hz (default: plan metadata; use the "
                            "softened effective frequency for warm clouds)");
    correct_cmd->add_option("--rate", rate, "waveform sample rate [Hz]");
    correct_cmd->add_option("--out", correct_out, "output basename");

    std::string kind = "duration", sweep_family = "sine", sweep_range, phi0_s, sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "duration / amplitude / frequency sweeps");
    sweep_cmd->add_option("--kind", kind, "duration | amplitude | frequency")->required();
    sweep_cmd->add_option("--family", sweep_family, "plan family");
    sweep_cmd->add_option("--d", spec.d, "transport distance");
    sweep_cmd->add_option("--tf", spec.tf, "duration (amplitude/frequency kinds)");
    sweep_cmd->add_option("--f0", spec.f0, "axial trap frequency in Hz")->required();
    sweep_cmd->add_option("--range", sweep_range,
                          "lo:hi:count; x=tf*f0 (duration), A0 lengths (amplitude), "
                          "omega1/omega0 (frequency)")
        ->required();
    sweep_cmd->add_option("--phi0", phi0_s, "correction phase (amplitude kind)");
    sweep_cmd->add_option("--out", sweep_out, "output CSV")->required();

    std::string plan_path, config_path, model_s = "harmonic", temperature_s, spread_s;
    std::string hold_s, waits_s, te_s = "12ms", noise_s, sim_out = "observables.csv";
    int n = 10000, reps = 3, steps_per_period = 1000, stride = 1;
    std::uint64_t seed = 1;
    bool antithetic = false, probe = false;
    auto* sim_cmd = app.add_subcommand("simulate", "ensemble dynamics or stop-and-probe");
    sim_cmd->add_option("--plan", plan_path, "trap waveform CSV")->required();
    sim_cmd->add_option("--config", config_path, "trap config file (key = value)");
    sim_cmd->add_option("--model", model_s, "harmonic | quartic | full-gaussian");
    sim_cmd->add_option("--temperature", temperature_s, "ensemble temperature (e.g. 400nK)");
    sim_cmd->add_option("--spread", spread_s,
                        "target RMS axial spread (temperature is tuned to match)");
    sim_cmd->add_option("--n", n, "number of particles");
    sim_cmd->add_option("--seed", seed, "RNG seed");
    sim_cmd->add_flag("--antithetic", antithetic, "mirror-paired sampling");
    sim_cmd->add_option("--hold", hold_s, "extra time after motion end");
    sim_cmd->add_option("--steps-per-period", steps_per_period, "integrator resolution");
    sim_cmd->add_option("--stride", stride, "record every k-th step");
    sim_cmd->add_flag("--probe", probe, "stop-and-probe dataset instead of observables");
    sim_cmd->add_option("--waits", waits_s, "waiting times lo:hi:count (probe)");
    sim_cmd->add_option("--te", te_s, "expansion time (probe)");
    sim_cmd->add_option("--reps", reps, "repetitions per waiting time (probe)");
    sim_cmd->add_option("--noise", noise_s, "probe noise sigma (e.g. 2um)");
    sim_cmd->add_option("--out", sim_out, "output CSV");

    std::string data_path, center_s, fit_out = "fit.json";
    std::string fit_te_s = "12ms";
    auto* fit_cmd = app.add_subcommand("fit", "decaying-sine fit of a probe dataset");
    fit_cmd->add_option("--data", data_path, "probe CSV")->required();
    fit_cmd->add_option("--te", fit_te_s, "expansion time used in the dataset");
    fit_cmd->add_option("--center", center_s, "transport target position to subtract");
    fit_cmd->add_option("--out", fit_out, "output JSON");

    std::vector<char*> argv;
    std::vector<std::string> storage = args;
    argv.reserve(storage.size() + 1);
    static std::string prog = "sta";
    argv.push_back(prog.data());
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    std::vector<std::string> full_cmd = args;
    try {
        if (plan_cmd->parsed()) return cmd_plan(full_cmd, spec, rate, tol, out);
        if (correct_cmd->parsed())
            return cmd_correct(full_cmd, base_path, f0_eff, correct_out, rate);
        if (sweep_cmd->parsed()) {
            if (kind == "duration")
                return cmd_sweep_duration(full_cmd, sweep_family, spec.f0, spec.d,
                                          sweep_range, sweep_out);
            if (kind == "amplitude") {
                PlanSpec s2 = spec;
                s2.family = sweep_family;
                return cmd_sweep_amplitude(full_cmd, s2, phi0_s, sweep_range, sweep_out);
            }
            if (kind == "frequency") {
                PlanSpec s2 = spec;
                s2.family = sweep_family;
                return cmd_sweep_frequency(full_cmd, s2, sweep_range, sweep_out);
            }
            throw CLI::ValidationError("kind", "kinds: duration, amplitude, frequency");
        }
        if (sim_cmd->parsed())
            return cmd_simulate(full_cmd, plan_path, config_path, model_s, temperature_s,
                                spread_s, n, seed, antithetic, hold_s, steps_per_period,
                                stride, probe, waits_s, te_s, reps, noise_s, sim_out);
        if (fit_cmd->parsed())
            return cmd_fit(full_cmd, data_path, fit_te_s, center_s, fit_out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const FitError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return 3;
    } catch (const QuadratureError& e) {
        std::cerr << "quadrature error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace sta::cli
