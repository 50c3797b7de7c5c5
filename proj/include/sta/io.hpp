#ifndef STA_IO_HPP_
#define STA_IO_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sta/analysis.hpp"
#include "sta/correction.hpp"
#include "sta/plan.hpp"
#include "sta/simulator.hpp"

namespace sta::io {

// Shortest round-trippable decimal form, identical across runs.
std::string format_double(double v);

// Controller waveform: '#key=value' metadata lines, a 't_s,z_m' header, then
// fixed-rate position samples (the final sample always lands on t_f).
void write_waveform_csv(const std::string& path, const MotionPlan& plan,
                        double sample_rate_hz,
                        const std::map<std::string, std::string>& extra_metadata = {});

struct WaveformFile {
    std::vector<double> t, z;
    std::map<std::string, std::string> metadata;
};

WaveformFile read_waveform_csv(const std::string& path);

// Re-imports a waveform as a spline-differentiated Custom plan. The trap
// frequency comes from the file metadata unless overridden.
MotionPlan plan_from_waveform(const WaveformFile& wf,
                              std::optional<double> trap_freq = std::nullopt);

// Full kinematic export: t_s,z_m,v_mps,a_mps2 at the caller's sample rate.
void write_plan_csv(const std::string& path, const MotionPlan& plan, double sample_rate_hz);

// Import of the kinematic CSV as a spline-differentiated Custom plan (the
// position column drives the spline; velocity/acceleration come from it).
MotionPlan read_plan_csv(const std::string& path, double trap_freq,
                         Frame frame = Frame::Trap);

// JSON descriptor recording family, request and correction parameters.
std::string plan_descriptor_json(const MotionPlan& plan,
                                 const std::optional<CorrectionParams>& correction);

void write_duration_sweep_csv(const std::string& path,
                              std::span<const DurationSweepRow> rows);
void write_amplitude_sweep_csv(const std::string& path,
                               std::span<const AmplitudeSweepRow> rows);
void write_frequency_sweep_csv(const std::string& path,
                               std::span<const FrequencySweepRow> rows, double omega0);
void write_observables_csv(const std::string& path, const TransportObservables& obs);
void write_probe_csv(const std::string& path, std::span<const ProbeRecord> records);
std::vector<ProbeRecord> read_probe_csv(const std::string& path);

std::string correction_solution_json(const CorrectionSolution& sol);
std::string fit_json(const DecayingSineFit& fit);

// FNV-1a 64-bit content digest (reproducibility fingerprint, not a
// cryptographic hash).
std::uint64_t fnv1a_file_digest(const std::string& path);
std::string file_digest_hex(const std::string& path);

// Every CLI output is accompanied by a manifest sufficient to reproduce it.
struct RunManifest {
    std::string tool_version;
    std::vector<std::string> command;
    std::map<std::string, std::string> parameters;
    std::vector<std::uint64_t> seeds;
    std::map<std::string, std::string> input_digests;   // path -> fnv1a hex
    std::map<std::string, std::string> output_digests;  // path -> fnv1a hex

    std::string to_json() const;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sta::io

#endif
