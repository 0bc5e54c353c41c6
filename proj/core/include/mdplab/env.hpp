#pragma once

#include <memory>
#include <unordered_map>

#include "mdplab/mdp.hpp"
#include "mdplab/noise.hpp"
#include "mdplab/rng.hpp"

namespace mdplab {

struct StepOutcome {
    StateId next = kNoState;
    double reward = 0.0;
    bool terminal = false;
};

/// One playable environment instance. Instances are cheap handles over a
/// shared immutable Mdp; each instance owns its RNG streams and per-episode
/// caches and must belong to exactly one worker.
class Environment {
  public:
    virtual ~Environment() = default;

    virtual const Mdp& mdp() const = 0;
    StateId initial_state() const { return mdp().initial; }

    /// Starts an episode. The key seeds the step-sampling stream and, for
    /// noisy environments with per-episode resampling, the noise draw.
    virtual void begin_episode(std::uint64_t episode_key) = 0;

    /// Samples a successor of (s, a). Throws IllegalAction on illegal input
    /// and EnvironmentFault when a successor falls outside the state index.
    virtual StepOutcome step(StateId s, ActionId a) = 0;
};

/// The base MDP as-is.
class ExactEnvironment final : public Environment {
  public:
    ExactEnvironment(std::shared_ptr<const Mdp> mdp, std::uint64_t stream_seed);

    const Mdp& mdp() const override { return *mdp_; }
    void begin_episode(std::uint64_t episode_key) override;
    StepOutcome step(StateId s, ActionId a) override;

  private:
    std::shared_ptr<const Mdp> mdp_;
    std::uint64_t stream_seed_;
    Rng rng_;
};

/// Noise-injected view of a base MDP. The per-episode row cache keeps the
/// effective table sparse: a row's noise is drawn on first visit within an
/// episode, which is equivalent to eager materialization because rows are
/// seeded by (realized seed, episode, state, action).
class NoisyEnvironment final : public Environment {
  public:
    NoisyEnvironment(std::shared_ptr<const Mdp> mdp, NoiseSpec noise, std::uint64_t stream_seed);

    const Mdp& mdp() const override { return *mdp_; }
    void begin_episode(std::uint64_t episode_key) override;
    StepOutcome step(StateId s, ActionId a) override;

    const DeltaEnvironment& delta() const { return delta_; }
    std::size_t degenerate_rows_seen() const { return degenerate_rows_; }

  private:
    std::shared_ptr<const Mdp> mdp_;
    DeltaEnvironment delta_;
    std::uint64_t stream_seed_;
    std::uint64_t episode_key_ = 0;
    Rng rng_;
    std::unordered_map<std::size_t, SparseRow> row_cache_;
    std::size_t degenerate_rows_ = 0;
};

/// stream_seed mixes the noise spec's own seed, so distinct agents (distinct
/// stream seeds) experience independent noise realizations.
std::unique_ptr<Environment> make_environment(std::shared_ptr<const Mdp> mdp,
                                              const NoiseSpec& noise, std::uint64_t stream_seed);

}  // namespace mdplab
