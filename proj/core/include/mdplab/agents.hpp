#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdplab/env.hpp"
#include "mdplab/mdp.hpp"
#include "mdplab/rng.hpp"

namespace mdplab {

enum class Algorithm : std::uint8_t { QLearning, Sarsa };
enum class ExplorationKind : std::uint8_t { Boltzmann, EpsilonGreedy };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& s);
const char* exploration_name(ExplorationKind e);
ExplorationKind exploration_from_name(const std::string& s);

struct AgentConfig {
    Algorithm algorithm = Algorithm::Sarsa;
    ExplorationKind exploration = ExplorationKind::EpsilonGreedy;
    double alpha = 0.05;
    double discount = 0.9;
    double tau = 1.5;      // Boltzmann temperature
    double epsilon = 0.1;  // epsilon-greedy exploration probability
    std::uint64_t seed = 0;
    bool greedy_evaluation = true;  // false: evaluate with the exploration policy

    bool operator==(const AgentConfig&) const = default;

    void validate() const;
};

/// Action-value table, zero-initialized, plus the set of (state, action)
/// pairs the agent ever selected while training.
class QTable {
  public:
    QTable(StateId n_states, int n_actions);

    double value(StateId s, ActionId a) const { return values_[idx(s, a)]; }
    void set_value(StateId s, ActionId a, double v) { values_[idx(s, a)] = v; }

    bool visited(StateId s, ActionId a) const { return visited_[idx(s, a)] != 0; }
    void mark_visited(StateId s, ActionId a) { visited_[idx(s, a)] = 1; }
    std::size_t visited_count() const;
    const std::vector<std::uint8_t>& visited_flags() const { return visited_; }

    StateId num_states() const { return n_states_; }
    int num_actions() const { return n_actions_; }
    std::size_t idx(StateId s, ActionId a) const {
        return static_cast<std::size_t>(s) * n_actions_ + a;
    }

    bool operator==(const QTable&) const = default;

  private:
    StateId n_states_;
    int n_actions_;
    std::vector<double> values_;
    std::vector<std::uint8_t> visited_;
};

/// Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)); the bootstrap
/// term is zero when s' is terminal. Throws IllegalAction.
void q_update(const Mdp& mdp, QTable& q, StateId s, ActionId a, double r, StateId s_next,
              bool next_terminal, const AgentConfig& cfg);

/// Q(s,a) += alpha * (r + gamma * Q(s',a') - Q(s,a)); bootstrap zero on
/// terminal s' (a_next ignored then). Throws IllegalAction.
void sarsa_update(const Mdp& mdp, QTable& q, StateId s, ActionId a, double r, StateId s_next,
                  ActionId a_next, bool next_terminal, const AgentConfig& cfg);

/// Boltzmann probabilities over the legal actions of s (same order as
/// mdp.legal[s]), computed with a max shift so large Q-values cannot
/// overflow. Sums to 1 within 1e-12.
std::vector<double> boltzmann_probs(const Mdp& mdp, const QTable& q, StateId s, double tau);

ActionId boltzmann_select(const Mdp& mdp, const QTable& q, StateId s, double tau, Rng& rng);

/// With probability epsilon a uniform legal action, otherwise the greedy
/// action; all ties break uniformly at random.
ActionId epsilon_greedy_select(const Mdp& mdp, const QTable& q, StateId s, double epsilon,
                               Rng& rng);

/// Greedy action with uniform random tie-breaking.
ActionId greedy_select(const Mdp& mdp, const QTable& q, StateId s, Rng& rng);

inline constexpr int kDefaultMaxSteps = 1000;

struct EpisodeResult {
    double episode_return = 0.0;
    int steps = 0;
    bool reached_terminal = false;
};

/// One training episode: rolls out the exploration policy with online
/// updates (SARSA selects the next action before updating), records every
/// selected pair in the visited set, truncates at max_steps with the normal
/// bootstrap (truncation is not treated as terminal).
EpisodeResult run_training_episode(Environment& env, QTable& q, const AgentConfig& cfg,
                                   Rng& policy_rng, int max_steps = kDefaultMaxSteps);

/// Mean return of `episodes` evaluation rollouts (greedy by default, no
/// learning, no visited recording). Episode keys are episode_key_base + i.
double evaluate(Environment& env, const QTable& q, int episodes, Rng& rng,
                const AgentConfig& cfg, std::uint64_t episode_key_base = 0,
                int max_steps = kDefaultMaxSteps);

}  // namespace mdplab
