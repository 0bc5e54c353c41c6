#include "mdplab/harness.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "mdplab/errors.hpp"
#include "mdplab/mdp_io.hpp"

namespace mdplab {

namespace {

// Stream roles for per-agent seed derivation.
constexpr std::uint64_t kTrainEnvRole = 1;
constexpr std::uint64_t kPolicyRole = 2;
constexpr std::uint64_t kEvalEnvRole = 3;

std::string layout_id(const LayoutSpec& layout) {
    for (const std::string& name : builtin_layout_names())
        if (builtin_layout(name) == layout) return name;
    // Custom layouts are identified by a content hash.
    std::uint64_t h = splitmix64(layout.cells.size());
    for (char c : layout.cells) h = hash_mix(h, std::uint64_t(std::uint8_t(c)));
    std::ostringstream out;
    out << "custom-" << std::hex << h;
    return out.str();
}

}  // namespace

std::string EnvDescriptor::label() const {
    std::ostringstream out;
    out << layout_id(game.layout);
    for (const ElementPolicy& ep : game.element_policies) out << ' ' << ep.to_string();
    if (noise.std != 0.0) out << " std=" << format_double(noise.std);
    return out.str();
}

std::string EnvDescriptor::canonical_string() const {
    std::ostringstream out;
    out << "game=" << game_kind_name(game.kind) << ";layout=" << layout_id(game.layout)
        << ";policies=";
    for (std::size_t i = 0; i < game.element_policies.size(); ++i) {
        if (i) out << ',';
        out << game.element_policies[i].to_string();
    }
    out << ";rewards=" << format_double(game.rewards.step_penalty) << ','
        << format_double(game.rewards.food_reward) << ','
        << format_double(game.rewards.death_penalty) << ','
        << format_double(game.rewards.win_reward);
    out << ";discount=" << format_double(game.discount);
    out << ";noise.std=" << format_double(noise.std) << ";noise.seed=" << noise.seed
        << ";noise.resample=" << (noise.resample_per_episode ? 1 : 0)
        << ";noise.dense_cap=" << noise.dense_support_cap << ";noise.sample_k=" << noise.sample_k;
    return out.str();
}

void ProtocolConfig::validate() const {
    if (n_agents < 1) throw ConfigError("protocol key n_agents must be >= 1");
    if (n_episodes < 1) throw ConfigError("protocol key n_episodes must be >= 1");
    if (eval_every < 1) throw ConfigError("protocol key eval_every must be >= 1");
    if (eval_episodes < 1) throw ConfigError("protocol key eval_episodes must be >= 1");
    if (max_steps < 0) throw ConfigError("protocol key max_steps must be >= 0");
    if (n_episodes % eval_every != 0)
        throw ConfigError("protocol key eval_every must divide n_episodes evenly");
}

std::string ExperimentSpec::canonical_string() const {
    std::ostringstream out;
    out << "train{" << train_env.canonical_string() << "};test{" << test_env.canonical_string()
        << "};agent{" << algorithm_name(agent.algorithm) << ','
        << exploration_name(agent.exploration) << ",alpha=" << format_double(agent.alpha)
        << ",discount=" << format_double(agent.discount) << ",tau=" << format_double(agent.tau)
        << ",epsilon=" << format_double(agent.epsilon)
        << ",greedy_eval=" << (agent.greedy_evaluation ? 1 : 0) << "};protocol{"
        << protocol.n_agents << ',' << protocol.n_episodes << ',' << protocol.eval_every << ','
        << protocol.eval_episodes << ',' << protocol.max_steps << ",seed=" << protocol.base_seed
        << '}';
    return out.str();
}

std::uint64_t ExperimentSpec::fingerprint() const {
    const std::string canon = canonical_string();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : canon) h = splitmix64(h ^ std::uint64_t(std::uint8_t(c)));
    return h;
}

void ExperimentSpec::validate() const {
    train_env.game.validate();
    test_env.game.validate();
    train_env.noise.validate();
    test_env.noise.validate();
    agent.validate();
    protocol.validate();
    if (!(train_env.game.layout == test_env.game.layout) ||
        train_env.game.kind != test_env.game.kind)
        throw IncompatibleEnvironments(
            "train and test environments must share a layout (state index)");
}

ExperimentSpec make_learnability_spec(const EnvDescriptor& target, const AgentConfig& agent,
                                      const ProtocolConfig& protocol) {
    ExperimentSpec spec;
    spec.name = "L";
    spec.train_env = target;
    spec.test_env = target;
    spec.agent = agent;
    spec.protocol = protocol;
    spec.validate();
    return spec;
}

ExperimentSpec make_generalization_spec(const EnvDescriptor& source, const EnvDescriptor& target,
                                        const AgentConfig& agent, const ProtocolConfig& protocol) {
    ExperimentSpec spec;
    spec.name = "G";
    spec.train_env = source;
    spec.test_env = target;
    spec.agent = agent;
    spec.protocol = protocol;
    spec.validate();
    return spec;
}

BuiltEnvironments build_environments(const ExperimentSpec& spec) {
    BuiltEnvironments built;
    auto test_mdp = std::make_shared<Mdp>(build_mdp(spec.test_env.game));
    built.test_mdp = test_mdp;
    if (spec.train_env.game == spec.test_env.game) {
        built.train_mdp = built.test_mdp;
        return built;
    }
    // The train game's rows are built over the test game's index, which works
    // exactly when the test dynamics' support covers the train dynamics'.
    auto train_mdp = std::make_shared<Mdp>();
    Mdp& m = *train_mdp;
    m.game = spec.train_env.game;
    m.index = test_mdp->index;
    try {
        m.transitions = build_transition_table(spec.train_env.game, m.index);
    } catch (const InconsistentIndex& e) {
        throw IncompatibleEnvironments(
            std::string("train environment leaves the test environment's state index: ") +
            e.what());
    }
    m.rewards = spec.train_env.game.rewards;
    m.discount = spec.train_env.game.discount;
    m.legal = test_mdp->legal;
    m.outcomes = test_mdp->outcomes;
    m.items_left = test_mdp->items_left;
    m.initial = test_mdp->initial;
    built.train_mdp = train_mdp;
    return built;
}

namespace {

struct AgentRunOutput {
    std::vector<double> checkpoint_means;
    std::vector<std::uint8_t> visited;  // byte flags, state * num_actions + action
    std::uint64_t seed = 0;
};

AgentRunOutput run_single_agent(const ExperimentSpec& spec, const BuiltEnvironments& built,
                                int agent_index) {
    const ProtocolConfig& proto = spec.protocol;
    const std::uint64_t agent_seed = seed_hash({proto.base_seed, std::uint64_t(agent_index)});
    const std::uint64_t train_env_seed = seed_hash({agent_seed, kTrainEnvRole});
    const std::uint64_t policy_seed = seed_hash({agent_seed, kPolicyRole});
    const std::uint64_t eval_env_seed = seed_hash({agent_seed, kEvalEnvRole});

    auto train_env = make_environment(built.train_mdp, spec.train_env.noise, train_env_seed);
    auto test_env = make_environment(built.test_mdp, spec.test_env.noise, eval_env_seed);

    AgentConfig agent = spec.agent;
    agent.seed = policy_seed;
    Rng policy_rng(policy_seed);
    Rng eval_rng(seed_hash({policy_seed, kEvalEnvRole}));

    QTable q(built.test_mdp->num_states(), built.test_mdp->num_actions());
    AgentRunOutput out;
    out.seed = agent_seed;
    out.checkpoint_means.reserve(proto.checkpoints());

    for (int episode = 1; episode <= proto.n_episodes; ++episode) {
        train_env->begin_episode(std::uint64_t(episode));
        run_training_episode(*train_env, q, agent, policy_rng, proto.max_steps);
        if (episode % proto.eval_every == 0) {
            const std::uint64_t key_base =
                std::uint64_t(episode) * std::uint64_t(proto.eval_episodes);
            out.checkpoint_means.push_back(evaluate(*test_env, q, proto.eval_episodes, eval_rng,
                                                    agent, key_base, proto.max_steps));
        }
    }
    out.visited = q.visited_flags();
    return out;
}

}  // namespace

RunResult run_experiment(const ExperimentSpec& spec, int workers) {
    return run_experiment(spec, build_environments(spec), workers);
}

RunResult run_experiment(const ExperimentSpec& spec, const BuiltEnvironments& built, int workers) {
    spec.validate();
    const ProtocolConfig& proto = spec.protocol;
    const int n_agents = proto.n_agents;
    std::vector<AgentRunOutput> outputs(n_agents);

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string failure_message;
    std::mutex failure_mutex;

    auto worker_loop = [&] {
        int i;
        while (!failed.load(std::memory_order_relaxed) &&
               (i = next.fetch_add(1)) < n_agents) {
            try {
                outputs[i] = run_single_agent(spec, built, i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failed.exchange(true))
                    failure_message = "agent " + std::to_string(i) + " (seed " +
                                      std::to_string(seed_hash(
                                          {proto.base_seed, std::uint64_t(i)})) +
                                      ") failed: " + e.what();
            }
        }
    };

    const int n_workers = std::max(1, std::min(workers, n_agents));
    if (n_workers == 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker_loop);
        for (std::thread& t : pool) t.join();
    }
    if (failed) throw WorkerFailure(failure_message);

    RunResult result;
    result.spec_fingerprint = spec.fingerprint();
    result.num_states = built.test_mdp->num_states();
    result.num_actions = built.test_mdp->num_actions();
    result.r_max = best_case_return(*built.test_mdp);

    result.legal_pairs.assign(std::size_t(result.num_states) * result.num_actions, 0);
    for (StateId s = 0; s < result.num_states; ++s)
        for (ActionId a : built.test_mdp->legal[s])
            result.legal_pairs[built.test_mdp->transitions.idx(s, a)] = 1;

    const int n_checkpoints = proto.checkpoints();
    result.curve.resize(n_checkpoints);
    result.visited_union.assign(std::size_t(result.num_states) * result.num_actions, 0);
    result.per_agent_final.reserve(n_agents);
    result.per_agent_seed.reserve(n_agents);
    result.visited_per_agent.reserve(n_agents);

    for (int k = 0; k < n_checkpoints; ++k) {
        std::vector<double> values(n_agents);
        for (int i = 0; i < n_agents; ++i) values[i] = outputs[i].checkpoint_means[k];
        result.curve[k].episode = (k + 1) * proto.eval_every;
        result.curve[k].mean_return = mean(values);
        result.curve[k].std_return = population_stddev(values);
    }
    for (int i = 0; i < n_agents; ++i) {
        result.per_agent_final.push_back(outputs[i].checkpoint_means.back());
        result.per_agent_seed.push_back(outputs[i].seed);
        for (std::size_t j = 0; j < outputs[i].visited.size(); ++j)
            result.visited_union[j] |= outputs[i].visited[j];
        result.visited_per_agent.push_back(std::move(outputs[i].visited));
    }
    return result;
}

std::size_t SuiteResult::failed() const {
    std::size_t n = 0;
    for (const PairOutcome& p : pairs)
        if (!p.ok) ++n;
    return n;
}

SuiteResult run_suite(const std::vector<SuitePair>& manifest, int workers) {
    SuiteResult suite;
    for (const SuitePair& pair : manifest) {
        PairOutcome outcome;
        outcome.target_label = pair.target_label;
        try {
            const BuiltEnvironments built_l = build_environments(pair.learnability);
            outcome.learnability = run_experiment(pair.learnability, built_l, workers);
            const BuiltEnvironments built_g = build_environments(pair.generalization);
            outcome.generalization = run_experiment(pair.generalization, built_g, workers);
            outcome.ok = true;
        } catch (const std::exception& e) {
            outcome.ok = false;
            outcome.error = e.what();
        }
        suite.pairs.push_back(std::move(outcome));
    }
    return suite;
}

SuitePair make_suite_pair(const EnvDescriptor& source, const EnvDescriptor& target,
                          const AgentConfig& agent, const ProtocolConfig& protocol) {
    SuitePair pair;
    pair.target_label = target.label();
    pair.learnability = make_learnability_spec(target, agent, protocol);
    pair.generalization = make_generalization_spec(source, target, agent, protocol);
    std::string suffix = target.label();
    for (char& c : suffix)
        if (c == ' ' || c == ':' || c == '=') c = '_';
    pair.learnability.name = "L_" + suffix;
    pair.generalization.name = "G_" + suffix;
    return pair;
}

std::vector<EnvDescriptor> standard_protocol_targets(GameKind kind, const RewardSpec& rewards,
                                                     double discount, bool count_zero_noise) {
    std::vector<std::string> grids;
    std::vector<ElementPolicy> walk_policies;  // combined with every noise level
    std::vector<ElementPolicy> teleport_policies;  // noise-free targets
    switch (kind) {
    case GameKind::PacMan:
        grids = {"pacman_v2", "pacman_v3", "pacman_v4"};
        walk_policies = {ElementPolicy::parse("RandomGhost"),
                         ElementPolicy::parse("DirectionalGhost:0.3"),
                         ElementPolicy::parse("DirectionalGhost:0.6")};
        teleport_policies = {ElementPolicy::parse("TeleportingGhost:0.5"),
                             ElementPolicy::parse("TeleportingGhost:0.2")};
        break;
    case GameKind::Pong:
        grids = {"pong_p1", "pong_p2"};
        walk_policies = {ElementPolicy::parse("RandomPaddle"),
                         ElementPolicy::parse("FollowingPaddle:0.3"),
                         ElementPolicy::parse("FollowingPaddle:0.6")};
        break;
    case GameKind::Breakout:
        grids = {"breakout_b1", "breakout_b2", "breakout_b3"};
        break;
    }

    std::vector<double> noise_levels{0.0, 0.1, 0.5};
    if (!count_zero_noise) noise_levels = {0.1, 0.5};

    std::vector<EnvDescriptor> targets;
    for (const std::string& grid : grids) {
        GameSpec game;
        game.kind = kind;
        game.layout = builtin_layout(grid);
        game.rewards = rewards;
        game.discount = discount;

        if (kind == GameKind::Breakout) {
            for (double std : noise_levels) {
                EnvDescriptor d{game, NoiseSpec{}};
                d.noise.std = std;
                targets.push_back(d);
            }
            continue;
        }
        for (const ElementPolicy& policy : walk_policies) {
            GameSpec variant = game;
            variant.element_policies.assign(game.layout.element_starts.size(), policy);
            for (double std : noise_levels) {
                EnvDescriptor d{variant, NoiseSpec{}};
                d.noise.std = std;
                targets.push_back(d);
            }
        }
        for (const ElementPolicy& policy : teleport_policies) {
            GameSpec variant = game;
            variant.element_policies.assign(game.layout.element_starts.size(), policy);
            targets.push_back(EnvDescriptor{variant, NoiseSpec{}});
        }
    }
    return targets;
}

PairInput pair_input_from_results(const std::string& label, const RunResult& l,
                                  const RunResult& g) {
    PairInput input;
    input.label = label;
    input.curve_l = l.curve;
    input.curve_g = g.curve;
    input.finals_l = l.per_agent_final;
    input.finals_g = g.per_agent_final;
    input.visited_l = l.visited_union;
    input.visited_g = g.visited_union;
    input.universe = l.legal_pairs;
    input.num_states = l.num_states;
    input.num_actions = l.num_actions;
    input.r_max = l.r_max;
    return input;
}

}  // namespace mdplab
