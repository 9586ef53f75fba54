#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sqg/dynamics.hpp"
#include "sqg/noise.hpp"

namespace sqg {

enum class Scheme { ExpEulerAdditive, EulerMaruyama, DeterministicRk4 };

struct NoiseConfig {
    enum class Type { None, AdditiveE1, AdditiveE3, Multiplicative };
    Type type = Type::None;
    NoiseSpecE1 e1;
    NoiseSpecE3 e3;
    double mult_amplitude = 1.0;
    double mult_decay = 3.0;
    MultiplicativeDiagNoise::Profile mult_profile =
        MultiplicativeDiagNoise::Profile::One;
};

struct InitialCondition {
    enum class Kind { Zero, CosX, SinY, RandomBand, Snapshot };
    Kind kind = Kind::CosX;
    double amplitude = 1.0;   // H^1 norm for RandomBand, plain amplitude else
    int band = 4;             // highest |k| excited by RandomBand
    std::uint64_t ic_seed = 1;
    std::string snapshot_path;
};

SpectralField make_initial_condition(const InitialCondition& ic,
                                     const GridSpec& grid);

struct SimConfig {
    PhysicalParams params;
    GridSpec grid;
    NoiseConfig noise;
    Scheme scheme = Scheme::DeterministicRk4;
    double dt = 1e-2;
    double t_end = 1.0;
    InitialCondition ic;
    std::uint64_t seed = 1;
    int snapshot_stride = 0;   // 0 = no snapshots
    int diagnostic_stride = 10;
    double delta_mollify = 0.0;  // > 0 switches to the delayed velocity
    bool mollify_noise = false;  // Poisson-filter the noise increments too
    double blowup_ceiling = 1e6;
    double lp_diag_p = 4.0;
    // Stream cursor for checkpoint resume: the run starts at
    // t = start_step * dt and consumes noise draws from that step index,
    // so a resumed trajectory is bit-identical to an uninterrupted one.
    std::int64_t start_step = 0;

    std::int64_t n_steps() const;  // steps from start_step up to t_end
    void validate() const;
};

struct TrajectoryState {
    double t = 0.0;
    std::int64_t step_index = 0;
    SpectralField theta;
    // Decomposed formulation (theta = v + z), maintained by the
    // exponential-Euler scheme.
    SpectralField v, z;
    bool decomposed = false;
    std::optional<HistoryBuffer> history;
};

struct DiagnosticsRow {
    double t = 0.0;
    double l2 = 0.0;
    double h_alpha = 0.0;
    double h1 = 0.0;
    double lp = 0.0;
    double tail_frac = 0.0;
    double diss_cum = 0.0;  // int_0^t ||theta||_{H^alpha}^2 (trapezoid)
};

struct DiagnosticsRecord {
    double lp_p = 4.0;
    std::vector<DiagnosticsRow> rows;
};

struct SimResult {
    DiagnosticsRecord diag;
    SpectralField final_theta;
    std::int64_t steps = 0;
    // dt * k_max * ||u||_inf estimate exceeded 1/2 at some diagnostic time
    // (advisory only; a warning is printed once).
    bool stability_advisory = false;
};

// Owns the built noise operators and the cached per-mode decay tables for
// one configuration; stateless across trajectories.
class Integrator {
  public:
    explicit Integrator(const SimConfig& cfg);

    const SimConfig& config() const { return cfg_; }
    const AdditiveSpectralNoise* additive_noise() const {
        return add_noise_ ? &*add_noise_ : nullptr;
    }

    TrajectoryState initial_state() const;

    // Advance one dt.  Throws BlowUpError on non-finite coefficients or
    // an H^1 norm above the ceiling.
    void step(TrajectoryState& state, const WienerStream& stream,
              std::uint64_t traj) const;

    // Deterministic-RK4 step carrying a tangent perturbation through the
    // cutoff dynamics: the tangent stage derivatives are the exact
    // linearization of the primal stages.
    void step_with_tangent(TrajectoryState& state, SpectralField& dtheta,
                           const CutoffSpec& cut) const;

  private:
    SpectralField drift_advective(const TrajectoryState& state,
                                  const SpectralField& field_for_nl) const;
    SpectralField noise_increment(const TrajectoryState& state,
                                  const WienerStream& stream,
                                  std::uint64_t traj) const;
    void apply_decay(SpectralField& f, const std::vector<double>& table) const;
    void guard(const TrajectoryState& state) const;

    SimConfig cfg_;
    std::optional<AdditiveSpectralNoise> add_noise_;
    std::optional<MultiplicativeDiagNoise> mult_noise_;
    std::vector<double> decay_full_;
    std::vector<double> decay_half_;
};

// Checkpoint naming for the decomposed state: "X.snap" -> "X.v.snap" /
// "X.z.snap".
std::string sibling_snapshot(const std::string& theta_path, char tag);

// Per-mode table of e^{-kappa |k|^{2 alpha} t} over the retained band.
std::vector<double> semigroup_decay_table(const GridSpec& grid,
                                          const PhysicalParams& params,
                                          double t);

// Receives the full state so decomposed checkpoints can be written.
using SnapshotSink = std::function<void(const TrajectoryState&)>;

SimResult simulate(const SimConfig& cfg, std::uint64_t traj = 0,
                   const SnapshotSink& sink = nullptr);

// Independent trajectories traj = 0..n-1 on the shared stream layout; runs
// in parallel, results identical for any thread count.
std::vector<DiagnosticsRecord> run_ensemble(const SimConfig& cfg, int n_traj);

}  // namespace sqg
