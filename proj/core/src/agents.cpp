#include "mdplab/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdplab/errors.hpp"

namespace mdplab {

const char* algorithm_name(Algorithm a) {
    return a == Algorithm::QLearning ? "qlearning" : "sarsa";
}

Algorithm algorithm_from_name(const std::string& s) {
    if (s == "qlearning") return Algorithm::QLearning;
    if (s == "sarsa") return Algorithm::Sarsa;
    throw ConfigError("unknown algorithm: " + s);
}

const char* exploration_name(ExplorationKind e) {
    return e == ExplorationKind::Boltzmann ? "boltzmann" : "egreedy";
}

ExplorationKind exploration_from_name(const std::string& s) {
    if (s == "boltzmann") return ExplorationKind::Boltzmann;
    if (s == "egreedy") return ExplorationKind::EpsilonGreedy;
    throw ConfigError("unknown exploration strategy: " + s);
}

void AgentConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
    if (!(discount > 0.0 && discount <= 1.0))
        throw std::invalid_argument("discount must be in (0,1]");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must be in [0,1]");
}

QTable::QTable(StateId n_states, int n_actions)
    : n_states_(n_states),
      n_actions_(n_actions),
      values_(static_cast<std::size_t>(n_states) * n_actions, 0.0),
      visited_(static_cast<std::size_t>(n_states) * n_actions, 0) {}

std::size_t QTable::visited_count() const {
    std::size_t n = 0;
    for (std::uint8_t v : visited_) n += v;
    return n;
}

namespace {

void check_legal(const Mdp& mdp, StateId s, ActionId a) {
    const auto& acts = mdp.legal[s];
    if (std::find(acts.begin(), acts.end(), a) == acts.end())
        throw IllegalAction("action " + std::to_string(int(a)) + " is illegal in state " +
                            std::to_string(s));
}

double max_q(const Mdp& mdp, const QTable& q, StateId s) {
    double best = -std::numeric_limits<double>::infinity();
    for (ActionId a : mdp.legal[s]) best = std::max(best, q.value(s, a));
    return best;
}

}  // namespace

void q_update(const Mdp& mdp, QTable& q, StateId s, ActionId a, double r, StateId s_next,
              bool next_terminal, const AgentConfig& cfg) {
    check_legal(mdp, s, a);
    const double bootstrap = next_terminal ? 0.0 : max_q(mdp, q, s_next);
    const double old = q.value(s, a);
    q.set_value(s, a, old + cfg.alpha * (r + cfg.discount * bootstrap - old));
}

void sarsa_update(const Mdp& mdp, QTable& q, StateId s, ActionId a, double r, StateId s_next,
                  ActionId a_next, bool next_terminal, const AgentConfig& cfg) {
    check_legal(mdp, s, a);
    double bootstrap = 0.0;
    if (!next_terminal) {
        check_legal(mdp, s_next, a_next);
        bootstrap = q.value(s_next, a_next);
    }
    const double old = q.value(s, a);
    q.set_value(s, a, old + cfg.alpha * (r + cfg.discount * bootstrap - old));
}

std::vector<double> boltzmann_probs(const Mdp& mdp, const QTable& q, StateId s, double tau) {
    const auto& acts = mdp.legal[s];
    std::vector<double> probs(acts.size());
    double shift = -std::numeric_limits<double>::infinity();
    for (ActionId a : acts) shift = std::max(shift, q.value(s, a));
    double total = 0.0;
    for (std::size_t i = 0; i < acts.size(); ++i) {
        probs[i] = std::exp((q.value(s, acts[i]) - shift) / tau);
        total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
}

ActionId boltzmann_select(const Mdp& mdp, const QTable& q, StateId s, double tau, Rng& rng) {
    const auto& acts = mdp.legal[s];
    const auto probs = boltzmann_probs(mdp, q, s, tau);
    const double u = rng.next_double();
    double cum = 0.0;
    for (std::size_t i = 0; i < acts.size(); ++i) {
        cum += probs[i];
        if (u < cum) return acts[i];
    }
    return acts.back();
}

ActionId greedy_select(const Mdp& mdp, const QTable& q, StateId s, Rng& rng) {
    const auto& acts = mdp.legal[s];
    double best = -std::numeric_limits<double>::infinity();
    std::uint32_t ties = 0;
    ActionId pick = acts[0];
    for (ActionId a : acts) {
        const double v = q.value(s, a);
        if (v > best) {
            best = v;
            ties = 1;
            pick = a;
        } else if (v == best) {
            // Reservoir choice keeps ties uniform in a single pass.
            ++ties;
            if (rng.uniform_int(ties) == 0) pick = a;
        }
    }
    return pick;
}

ActionId epsilon_greedy_select(const Mdp& mdp, const QTable& q, StateId s, double epsilon,
                               Rng& rng) {
    const auto& acts = mdp.legal[s];
    if (epsilon > 0.0 && rng.next_double() < epsilon)
        return acts[rng.uniform_int(static_cast<std::uint32_t>(acts.size()))];
    return greedy_select(mdp, q, s, rng);
}

namespace {

ActionId explore_select(const Mdp& mdp, const QTable& q, StateId s, const AgentConfig& cfg,
                        Rng& rng) {
    if (cfg.exploration == ExplorationKind::Boltzmann)
        return boltzmann_select(mdp, q, s, cfg.tau, rng);
    return epsilon_greedy_select(mdp, q, s, cfg.epsilon, rng);
}

}  // namespace

EpisodeResult run_training_episode(Environment& env, QTable& q, const AgentConfig& cfg,
                                   Rng& policy_rng, int max_steps) {
    const Mdp& mdp = env.mdp();
    EpisodeResult result;
    StateId s = env.initial_state();
    if (mdp.is_terminal(s) || max_steps <= 0) return result;

    const bool sarsa = cfg.algorithm == Algorithm::Sarsa;
    ActionId a = explore_select(mdp, q, s, cfg, policy_rng);
    q.mark_visited(s, a);

    for (int step = 0; step < max_steps; ++step) {
        const StepOutcome out = env.step(s, a);
        result.episode_return += out.reward;
        ++result.steps;

        if (sarsa) {
            ActionId a_next = 0;
            if (!out.terminal) {
                a_next = explore_select(mdp, q, out.next, cfg, policy_rng);
                q.mark_visited(out.next, a_next);
            }
            sarsa_update(mdp, q, s, a, out.reward, out.next, a_next, out.terminal, cfg);
            a = a_next;
        } else {
            q_update(mdp, q, s, a, out.reward, out.next, out.terminal, cfg);
        }

        if (out.terminal) {
            result.reached_terminal = true;
            break;
        }
        s = out.next;
        if (!sarsa) {
            a = explore_select(mdp, q, s, cfg, policy_rng);
            q.mark_visited(s, a);
        }
    }
    return result;
}

double evaluate(Environment& env, const QTable& q, int episodes, Rng& rng, const AgentConfig& cfg,
                std::uint64_t episode_key_base, int max_steps) {
    const Mdp& mdp = env.mdp();
    double total = 0.0;
    for (int e = 0; e < episodes; ++e) {
        env.begin_episode(episode_key_base + static_cast<std::uint64_t>(e));
        StateId s = env.initial_state();
        double ep_return = 0.0;
        for (int step = 0; step < max_steps && !mdp.is_terminal(s); ++step) {
            const ActionId a = cfg.greedy_evaluation
                                   ? greedy_select(mdp, q, s, rng)
                                   : (cfg.exploration == ExplorationKind::Boltzmann
                                          ? boltzmann_select(mdp, q, s, cfg.tau, rng)
                                          : epsilon_greedy_select(mdp, q, s, cfg.epsilon, rng));
            const StepOutcome out = env.step(s, a);
            ep_return += out.reward;
            if (out.terminal) break;
            s = out.next;
        }
        total += ep_return;
    }
    return total / episodes;
}

}  // namespace mdplab
