#include "sta/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sta::io {

namespace {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::vector<double> sample_times(double tf, double rate) {
    if (!(rate > 0)) throw std::invalid_argument("sample rate must be > 0");
    const auto n = static_cast<std::size_t>(std::ceil(tf * rate - 1e-9));
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) t[i] = tf * static_cast<double>(i) / n;
    return t;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void write_waveform_csv(const std::string& path, const MotionPlan& plan,
                        double sample_rate_hz,
                        const std::map<std::string, std::string>& extra_metadata) {
    std::ostringstream os;
    os << "#family=" << to_string(plan.family) << "\n";
    os << "#frame=" << to_string(plan.frame) << "\n";
    os << "#d_m=" << format_double(plan.request.distance) << "\n";
    os << "#tf_s=" << format_double(plan.request.duration) << "\n";
    os << "#f0_Hz=" << format_double(plan.request.trap_freq / (2.0 * 3.141592653589793)) << "\n";
    os << "#sample_rate_Hz=" << format_double(sample_rate_hz) << "\n";
    for (const auto& [k, v] : extra_metadata) os << "#" << k << "=" << v << "\n";
    os << "t_s,z_m\n";
    for (double t : sample_times(plan.request.duration, sample_rate_hz))
        os << format_double(t) << "," << format_double(plan.position(t)) << "\n";
    write_text_file(path, os.str());
}

WaveformFile read_waveform_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    WaveformFile wf;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos)
                wf.metadata[line.substr(1, eq - 1)] = line.substr(eq + 1);
            continue;
        }
        if (!header_seen) {  // column header row
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        wf.t.push_back(std::stod(line.substr(0, comma)));
        wf.z.push_back(std::stod(line.substr(comma + 1)));
    }
    if (wf.t.size() < 4) throw std::runtime_error("waveform " + path + ": too few samples");
    return wf;
}

MotionPlan plan_from_waveform(const WaveformFile& wf, std::optional<double> trap_freq) {
    double w0;
    if (trap_freq) {
        w0 = *trap_freq;
    } else {
        const auto it = wf.metadata.find("f0_Hz");
        if (it == wf.metadata.end())
            throw std::invalid_argument("waveform has no f0_Hz metadata; pass trap_freq");
        w0 = 2.0 * 3.141592653589793 * std::stod(it->second);
    }
    return custom_plan_from_samples(wf.t, wf.z, w0, Frame::Trap);
}

void write_plan_csv(const std::string& path, const MotionPlan& plan, double sample_rate_hz) {
    std::ostringstream os;
    os << "t_s,z_m,v_mps,a_mps2\n";
    for (double t : sample_times(plan.request.duration, sample_rate_hz))
        os << format_double(t) << "," << format_double(plan.position(t)) << ","
           << format_double(plan.velocity(t)) << "," << format_double(plan.acceleration(t))
           << "\n";
    write_text_file(path, os.str());
}

MotionPlan read_plan_csv(const std::string& path, double trap_freq, Frame frame) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> t, z;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) continue;
        t.push_back(std::stod(a));
        z.push_back(std::stod(b));
    }
    return custom_plan_from_samples(t, z, trap_freq, frame);
}

std::string plan_descriptor_json(const MotionPlan& plan,
                                 const std::optional<CorrectionParams>& correction) {
    json j;
    j["family"] = to_string(plan.family);
    j["frame"] = to_string(plan.frame);
    j["request"] = {{"distance_m", plan.request.distance},
                    {"duration_s", plan.request.duration},
                    {"trap_freq_rad_s", plan.request.trap_freq}};
    if (correction) {
        j["correction"] = {{"A0_m", correction->amplitude},
                           {"phi0_rad", correction->phase},
                           {"omega_c_rad_s", correction->omega_c},
                           {"ramp_s", correction->ramp_duration()}};
    }
    return j.dump(2) + "\n";
}

void write_duration_sweep_csv(const std::string& path,
                              std::span<const DurationSweepRow> rows) {
    std::ostringstream os;
    os << "tf_f0,amplitude_over_d,phase_rad\n";
    for (const auto& r : rows)
        os << format_double(r.x) << "," << format_double(r.amplitude_over_d) << ","
           << format_double(r.phase) << "\n";
    write_text_file(path, os.str());
}

void write_amplitude_sweep_csv(const std::string& path,
                               std::span<const AmplitudeSweepRow> rows) {
    std::ostringstream os;
    os << "A0_m,amplitude_m,phase_rad\n";
    for (const auto& r : rows)
        os << format_double(r.amplitude) << "," << format_double(r.sloshing) << ","
           << format_double(r.sloshing_phase) << "\n";
    write_text_file(path, os.str());
}

void write_frequency_sweep_csv(const std::string& path,
                               std::span<const FrequencySweepRow> rows, double omega0) {
    std::ostringstream os;
    os << "omega1_rad_s,omega1_over_omega0,amplitude_m,phase_rad\n";
    for (const auto& r : rows)
        os << format_double(r.omega1) << "," << format_double(r.omega1 / omega0) << ","
           << format_double(r.sloshing) << "," << format_double(r.sloshing_phase) << "\n";
    write_text_file(path, os.str());
}

void write_observables_csv(const std::string& path, const TransportObservables& obs) {
    std::ostringstream os;
    os << "t_s,com_m,var_m2,e_exc_J,surviving_fraction\n";
    for (std::size_t i = 0; i < obs.t.size(); ++i)
        os << format_double(obs.t[i]) << "," << format_double(obs.com[i]) << ","
           << format_double(obs.variance[i]) << "," << format_double(obs.excitation[i])
           << "," << format_double(obs.surviving[i]) << "\n";
    write_text_file(path, os.str());
}

void write_probe_csv(const std::string& path, std::span<const ProbeRecord> records) {
    std::ostringstream os;
    os << "t_wait_s,rep,z_tof_m\n";
    for (const auto& r : records)
        os << format_double(r.t_wait) << "," << r.rep << "," << format_double(r.z_tof) << "\n";
    write_text_file(path, os.str());
}

std::vector<ProbeRecord> read_probe_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<ProbeRecord> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            continue;
        out.push_back({std::stod(a), std::stoi(b), std::stod(c)});
    }
    if (out.empty()) throw std::runtime_error("probe dataset " + path + ": empty");
    return out;
}

std::string correction_solution_json(const CorrectionSolution& sol) {
    json j;
    j["A0_m"] = sol.params.amplitude;
    j["phi0_rad"] = sol.params.phase;
    j["phi0_deg"] = sol.params.phase * 180.0 / 3.141592653589793;
    j["omega_c_rad_s"] = sol.params.omega_c;
    j["residual_m"] = sol.corrected_amplitude;
    j["base_residual_m"] = std::abs(sol.base_residual);
    j["used_fallback"] = sol.used_fallback;
    j["converged"] = sol.converged;
    return j.dump(2) + "\n";
}

std::string fit_json(const DecayingSineFit& fit) {
    json j;
    j["amplitude_m"] = fit.amplitude;
    j["amplitude_sigma_m"] = fit.amplitude_sigma();
    j["tau_s"] = std::isfinite(fit.tau) ? json(fit.tau) : json();
    j["omega_rad_s"] = fit.omega;
    j["phi_rad"] = fit.phi;
    j["phi_deg"] = fit.phi * 180.0 / 3.141592653589793;
    j["prefactor"] = fit.prefactor();
    j["in_situ_amplitude_m"] = fit.amplitude;
    j["apparent_amplitude_m"] = fit.apparent_amplitude();
    j["chi2"] = fit.chi2;
    j["dof"] = fit.dof;
    return j.dump(2) + "\n";
}

std::uint64_t fnv1a_file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::uint64_t h = 14695981039346656037ull;
    char buf[8192];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    return h;
}

std::string file_digest_hex(const std::string& path) {
    return hex64(fnv1a_file_digest(path));
}

std::string RunManifest::to_json() const {
    json j;
    j["tool"] = "sta";
    j["version"] = tool_version;
    j["command"] = command;
    j["parameters"] = parameters;
    j["seeds"] = seeds;
    json in = json::object();
    for (const auto& [p, d] : input_digests) in[p] = d;
    j["inputs"] = in;
    json out = json::object();
    for (const auto& [p, d] : output_digests) out[p] = d;
    j["outputs"] = out;
    return j.dump(2) + "\n";
}

}  // namespace sta::io
