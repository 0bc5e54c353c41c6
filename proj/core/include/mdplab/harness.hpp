#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mdplab/agents.hpp"
#include "mdplab/analysis.hpp"
#include "mdplab/games.hpp"
#include "mdplab/noise.hpp"

namespace mdplab {

/// One trainable/testable environment: a game (layout + element policies +
/// rewards) plus transition-noise parameters. A semantic variant is a
/// different element policy, a noise variant a non-zero std.
struct EnvDescriptor {
    GameSpec game;
    NoiseSpec noise;

    bool operator==(const EnvDescriptor&) const = default;

    std::string label() const;
    /// Canonical one-line serialization; feeds the spec fingerprint.
    std::string canonical_string() const;
};

struct ProtocolConfig {
    int n_agents = 500;
    int n_episodes = 1000;
    int eval_every = 10;
    int eval_episodes = 10;
    int max_steps = kDefaultMaxSteps;
    std::uint64_t base_seed = 1;

    bool operator==(const ProtocolConfig&) const = default;

    int checkpoints() const { return n_episodes / eval_every; }
    void validate() const;
};

struct ExperimentSpec {
    std::string name;  // directory-friendly identifier, e.g. "L_RandomGhost_std0.5"
    EnvDescriptor train_env;
    EnvDescriptor test_env;
    AgentConfig agent;
    ProtocolConfig protocol;

    std::uint64_t fingerprint() const;
    std::string canonical_string() const;
    void validate() const;
};

/// Train and test on the same target environment.
ExperimentSpec make_learnability_spec(const EnvDescriptor& target, const AgentConfig& agent,
                                      const ProtocolConfig& protocol);

/// Train on the source environment, test zero-shot on the target. Throws
/// IncompatibleEnvironments when the two games cannot share a state index.
ExperimentSpec make_generalization_spec(const EnvDescriptor& source, const EnvDescriptor& target,
                                        const AgentConfig& agent, const ProtocolConfig& protocol);

struct RunResult {
    RewardCurve curve;                        // one point per checkpoint
    std::vector<double> per_agent_final;      // final checkpoint mean per agent
    std::vector<std::uint64_t> per_agent_seed;
    std::vector<std::uint8_t> visited_union;  // pair flags, state * num_actions + action
    std::vector<std::vector<std::uint8_t>> visited_per_agent;
    std::uint64_t spec_fingerprint = 0;
    StateId num_states = 0;
    int num_actions = 0;
    std::vector<std::uint8_t> legal_pairs;  // pair flags of the legal universe
    double r_max = 0.0;                     // analytic best-case return of the test MDP
};

/// Shared immutable MDPs of one experiment. The test game defines the state
/// index; the train game's rows are built over that same index so Q-tables
/// transfer without translation.
struct BuiltEnvironments {
    std::shared_ptr<const Mdp> train_mdp;
    std::shared_ptr<const Mdp> test_mdp;
};

BuiltEnvironments build_environments(const ExperimentSpec& spec);

/// Runs the whole agent population. Fully deterministic given the spec:
/// agent i derives its train-env / policy / eval-env streams from
/// (base_seed, i, role), so results are independent of scheduling and of the
/// worker count. Any failing agent aborts the run (WorkerFailure names the
/// seed).
RunResult run_experiment(const ExperimentSpec& spec, int workers = 1);

/// Pre-built variant, for sharing MDPs across runs of a suite.
RunResult run_experiment(const ExperimentSpec& spec, const BuiltEnvironments& built, int workers);

struct SuitePair {
    std::string target_label;
    ExperimentSpec learnability;
    ExperimentSpec generalization;
};

struct PairOutcome {
    std::string target_label;
    bool ok = false;
    std::string error;  // set when ok == false
    RunResult learnability;
    RunResult generalization;
};

struct SuiteResult {
    std::vector<PairOutcome> pairs;
    std::size_t failed() const;
};

/// Executes every pair; failures are recorded per pair while the remaining
/// pairs still run. Persistence is the caller's job (see persist.hpp), so
/// the harness stays filesystem-free.
SuiteResult run_suite(const std::vector<SuitePair>& manifest, int workers);

/// Builds the (L, G) pair for one target: the learnability spec trains and
/// tests on the target, the generalization spec trains on the source.
SuitePair make_suite_pair(const EnvDescriptor& source, const EnvDescriptor& target,
                          const AgentConfig& agent, const ProtocolConfig& protocol);

/// Table-style protocol enumeration for one game: every grid x noise level
/// x element-policy variation. Walk-move policies combine with the noise
/// presets {0, 0.1, 0.5}; teleport policies are noise-free targets.
/// PacMan yields 33 targets, Pong 18, Breakout 9 (60 in total);
/// `count_zero_noise = false` drops the no-noise rows (42 in total).
std::vector<EnvDescriptor> standard_protocol_targets(GameKind kind, const RewardSpec& rewards,
                                                     double discount,
                                                     bool count_zero_noise = true);

PairInput pair_input_from_results(const std::string& label, const RunResult& l,
                                  const RunResult& g);

}  // namespace mdplab
