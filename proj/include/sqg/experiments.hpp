#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqg/coupling.hpp"
#include "sqg/diagnostics.hpp"

namespace sqg {

enum class ExperimentKind { Simulate, Couple, Ergodic, Verify, Spectrum };

const char* kind_name(ExperimentKind k);

struct CoupleOptions {
    double K0 = -1.0;  // < 0: default 2 lambda_{N+1}
    int n_ball = 2;
    int pairs = 8;
    double fit_transient = 2.0;
    double fit_floor = 1e-11;
    InitialCondition ic_tilde;
    std::string constants_path;  // empty: compute a fresh corpus estimate
};

struct ErgodicOptions {
    Observable observable = Observable::L2Sq;
    double burn_in = -1.0;  // < 0: default 20 / lambda1
    int batches = 32;
};

struct SpectrumOptions {
    bool emit_sigma_csv = true;
    bool emit_constants = false;
    int corpus_samples = 48;
    std::uint64_t constants_seed = 7;
    int couple_n = 2;  // ball used for the (E2)/delta0 report
};

struct VerifyOptions {
    int modes_per_dim = 32;
    std::uint64_t seed = 2024;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Simulate;
    SimConfig sim;
    CoupleOptions couple;
    ErgodicOptions ergodic;
    SpectrumOptions spectrum;
    VerifyOptions verify;
    std::string out_dir = "out";

    CoupledConfig coupled_config() const;
};

// Parses and validates a config file (JSON, // comments allowed; unknown
// keys rejected).  Also accepts a run manifest, in which case the embedded
// config echo is loaded, enabling bit-exact reruns.
ExperimentSpec parse_experiment_file(const std::string& path,
                                     ExperimentKind kind);

// Serialized echo of a resolved spec (the manifest's config block).
std::string experiment_echo_json(const ExperimentSpec& spec);

// FNV-1a 64-bit content hash, hex-encoded.
std::string fnv1a64_file(const std::string& path);

struct VerifyClaim {
    std::string id;
    std::string description;
    double observed = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// The built-in property suites behind the `verify` experiment.
std::vector<VerifyClaim> run_verify_suites(const VerifyOptions& opt);

// Executes a parsed experiment, writing artifacts under spec.out_dir.
// Returns the process exit code (0 ok, 3 verification failure; config and
// runtime errors surface as exceptions).
int run_experiment(const ExperimentSpec& spec);

// CSV emitters (schemas documented in the README).
void write_diagnostics_csv(const std::string& path, const DiagnosticsRecord& rec);
void write_sync_csv(const std::string& path, const SyncRecord& rec);
void write_sigma_csv(const std::string& path, const AdditiveSpectralNoise& noise);

}  // namespace sqg
