#include "mdplab/config.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "mdplab/errors.hpp"
#include "mdplab/mdp_io.hpp"

namespace mdplab {

namespace {

struct RawConfig {
    // section -> key -> value; insertion-order preserved for error messages
    std::map<std::string, std::map<std::string, std::string>> sections;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
            raw.sections[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (!raw.sections[section].emplace(key, value).second)
            throw ConfigError("duplicate key '" + key + "' in section [" + section + "]");
    }
    return raw;
}

class SectionReader {
  public:
    SectionReader(const RawConfig& raw, const std::string& name) : name_(name) {
        auto it = raw.sections.find(name);
        if (it != raw.sections.end()) entries_ = &it->second;
    }

    bool present() const { return entries_ != nullptr; }

    std::optional<std::string> get(const std::string& key) {
        consumed_.insert(key);
        if (!entries_) return std::nullopt;
        auto it = entries_->find(key);
        if (it == entries_->end()) return std::nullopt;
        return it->second;
    }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v) throw ConfigError("missing key '" + key + "' in section [" + name_ + "]");
        return *v;
    }

    double get_double(const std::string& key, double fallback) {
        auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const double d = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing junk");
            return d;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' in section [" + name_ + "] is not a number: " +
                              *v);
        }
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback) {
        auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const std::int64_t i = std::stoll(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing junk");
            return i;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' in section [" + name_ + "] is not an integer: " +
                              *v);
        }
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const std::uint64_t i = std::stoull(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing junk");
            return i;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' in section [" + name_ +
                              "] is not an unsigned integer: " + *v);
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        auto v = get(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1") return true;
        if (*v == "false" || *v == "0") return false;
        throw ConfigError("key '" + key + "' in section [" + name_ + "] is not a boolean: " + *v);
    }

    void finish() const {
        if (!entries_) return;
        for (const auto& [key, value] : *entries_)
            if (!consumed_.count(key))
                throw ConfigError("unknown key '" + key + "' in section [" + name_ + "]");
    }

  private:
    std::string name_;
    const std::map<std::string, std::string>* entries_ = nullptr;
    std::set<std::string> consumed_;
};

std::vector<ElementPolicy> parse_policy_list(const std::string& value, std::size_t n_elements,
                                             const std::string& where) {
    std::vector<ElementPolicy> policies;
    std::istringstream in(value);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) policies.push_back(ElementPolicy::parse(tok));
    }
    if (policies.empty()) throw ConfigError("empty policy list in section [" + where + "]");
    if (policies.size() == 1 && n_elements > 1) policies.assign(n_elements, policies[0]);
    if (policies.size() != n_elements)
        throw ConfigError("section [" + where + "] lists " + std::to_string(policies.size()) +
                          " policies for " + std::to_string(n_elements) + " elements");
    return policies;
}

ElementPolicy default_policy(GameKind kind) {
    return kind == GameKind::PacMan ? ElementPolicy{ElementPolicyKind::RandomGhost, 0.0, false}
                                    : ElementPolicy{ElementPolicyKind::RandomPaddle, 0.0, false};
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
    const RawConfig raw = parse_raw(text);
    static const std::set<std::string> known_sections = {
        "game", "layout", "train_env", "test_env", "agent", "protocol", "noise",
        "suite", "analysis"};
    for (const auto& [name, entries] : raw.sections)
        if (!known_sections.count(name)) throw ConfigError("unknown section [" + name + "]");

    ExperimentConfig cfg;

    SectionReader game(raw, "game");
    cfg.kind = game_kind_from_name(game.require("kind"));
    cfg.rewards.step_penalty = game.get_double("step_penalty", cfg.rewards.step_penalty);
    cfg.rewards.food_reward = game.get_double("food_reward", cfg.rewards.food_reward);
    cfg.rewards.death_penalty = game.get_double("death_penalty", cfg.rewards.death_penalty);
    cfg.rewards.win_reward = game.get_double("win_reward", cfg.rewards.win_reward);
    game.finish();

    SectionReader layout(raw, "layout");
    const auto name = layout.get("name");
    const auto path = layout.get("path");
    if (name && path)
        throw ConfigError("section [layout] must set either 'name' or 'path', not both");
    if (name) {
        cfg.layout_name = *name;
        cfg.layout = builtin_layout(*name);
    } else if (path) {
        cfg.layout_name = *path;
        cfg.layout = load_layout_file(*path);
    } else {
        throw ConfigError("missing key 'name' (or 'path') in section [layout]");
    }
    layout.finish();

    const std::size_t n_elements = cfg.layout.element_starts.size();
    const std::vector<ElementPolicy> fallback_policies(n_elements, default_policy(cfg.kind));

    SectionReader train(raw, "train_env");
    if (auto v = train.get("policy"))
        cfg.train_policies = parse_policy_list(*v, n_elements, "train_env");
    else
        cfg.train_policies = fallback_policies;
    cfg.train_noise_std = train.get_double("noise_std", 0.0);
    train.finish();

    SectionReader test(raw, "test_env");
    if (auto v = test.get("policy"))
        cfg.test_policies = parse_policy_list(*v, n_elements, "test_env");
    else
        cfg.test_policies = cfg.train_policies;
    cfg.test_noise_std = test.get_double("noise_std", cfg.train_noise_std);
    test.finish();

    SectionReader agent(raw, "agent");
    if (auto v = agent.get("algorithm")) cfg.agent.algorithm = algorithm_from_name(*v);
    if (auto v = agent.get("exploration")) cfg.agent.exploration = exploration_from_name(*v);
    cfg.agent.alpha = agent.get_double("alpha", cfg.agent.alpha);
    cfg.agent.discount = agent.get_double("discount", cfg.agent.discount);
    cfg.agent.tau = agent.get_double("tau", cfg.agent.tau);
    cfg.agent.epsilon = agent.get_double("epsilon", cfg.agent.epsilon);
    if (auto v = agent.get("eval_policy")) {
        if (*v == "greedy") cfg.agent.greedy_evaluation = true;
        else if (*v == "exploration") cfg.agent.greedy_evaluation = false;
        else throw ConfigError("key 'eval_policy' in section [agent] must be greedy|exploration");
    }
    cfg.discount = cfg.agent.discount;
    agent.finish();

    SectionReader protocol(raw, "protocol");
    cfg.protocol.n_agents = static_cast<int>(protocol.get_int("n_agents", cfg.protocol.n_agents));
    cfg.protocol.n_episodes =
        static_cast<int>(protocol.get_int("n_episodes", cfg.protocol.n_episodes));
    cfg.protocol.eval_every =
        static_cast<int>(protocol.get_int("eval_every", cfg.protocol.eval_every));
    cfg.protocol.eval_episodes =
        static_cast<int>(protocol.get_int("eval_episodes", cfg.protocol.eval_episodes));
    cfg.protocol.max_steps =
        static_cast<int>(protocol.get_int("max_steps", cfg.protocol.max_steps));
    cfg.protocol.base_seed = protocol.get_u64("base_seed", cfg.protocol.base_seed);
    protocol.finish();

    SectionReader noise(raw, "noise");
    cfg.noise.seed = noise.get_u64("seed", cfg.noise.seed);
    cfg.noise.resample_per_episode =
        noise.get_bool("resample_per_episode", cfg.noise.resample_per_episode);
    cfg.noise.dense_support_cap = static_cast<std::uint32_t>(
        noise.get_u64("dense_support_cap", cfg.noise.dense_support_cap));
    cfg.noise.sample_k = static_cast<std::uint32_t>(noise.get_u64("sample_k", cfg.noise.sample_k));
    noise.finish();

    SectionReader suite(raw, "suite");
    if (suite.present()) {
        const std::string targets = suite.require("targets");
        std::istringstream in(targets);
        std::string tok;
        while (std::getline(in, tok, ';')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            SuiteTarget target;
            const auto at = tok.find('@');
            std::string policy_part = tok;
            if (at != std::string::npos) {
                policy_part = trim(tok.substr(0, at));
                try {
                    target.noise_std = std::stod(tok.substr(at + 1));
                } catch (const std::exception&) {
                    throw ConfigError("bad noise level in suite target: " + tok);
                }
            }
            if (!policy_part.empty()) target.policy = ElementPolicy::parse(policy_part);
            cfg.suite_targets.push_back(target);
        }
        if (cfg.suite_targets.empty())
            throw ConfigError("key 'targets' in section [suite] lists no targets");
    }
    suite.finish();

    SectionReader analysis(raw, "analysis");
    if (auto v = analysis.get("r_max")) cfg.r_max_override = std::stod(*v);
    analysis.finish();

    // Fail early on anything structurally wrong.
    cfg.experiment();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return parse_experiment_config(read_text_file(path));
}

EnvDescriptor ExperimentConfig::train_env() const {
    EnvDescriptor env;
    env.game.kind = kind;
    env.game.layout = layout;
    env.game.element_policies = train_policies;
    env.game.rewards = rewards;
    env.game.discount = discount;
    env.noise = noise;
    env.noise.std = train_noise_std;
    return env;
}

EnvDescriptor ExperimentConfig::test_env() const {
    EnvDescriptor env = train_env();
    env.game.element_policies = test_policies;
    env.noise.std = test_noise_std;
    return env;
}

ExperimentSpec ExperimentConfig::experiment() const {
    ExperimentSpec spec;
    spec.name = "run";
    spec.train_env = train_env();
    spec.test_env = test_env();
    spec.agent = agent;
    spec.protocol = protocol;
    spec.validate();
    return spec;
}

std::vector<SuitePair> ExperimentConfig::suite_pairs() const {
    if (suite_targets.empty())
        throw ConfigError("config has no [suite] section with targets");
    const EnvDescriptor source = train_env();
    std::vector<SuitePair> pairs;
    for (const SuiteTarget& t : suite_targets) {
        EnvDescriptor target = source;
        if (t.policy)
            target.game.element_policies.assign(layout.element_starts.size(), *t.policy);
        target.noise.std = t.noise_std;
        pairs.push_back(make_suite_pair(source, target, agent, protocol));
    }
    return pairs;
}

std::string ExperimentConfig::echo() const {
    std::ostringstream out;
    out << "[game]\n";
    out << "kind = " << game_kind_name(kind) << '\n';
    out << "step_penalty = " << format_double(rewards.step_penalty) << '\n';
    out << "food_reward = " << format_double(rewards.food_reward) << '\n';
    out << "death_penalty = " << format_double(rewards.death_penalty) << '\n';
    out << "win_reward = " << format_double(rewards.win_reward) << '\n';
    out << "\n[layout]\n";
    out << "name = " << layout_name << '\n';
    auto policies_line = [](const std::vector<ElementPolicy>& ps) {
        std::string s;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (i) s += ',';
            s += ps[i].to_string();
        }
        return s;
    };
    out << "\n[train_env]\n";
    if (!train_policies.empty()) out << "policy = " << policies_line(train_policies) << '\n';
    out << "noise_std = " << format_double(train_noise_std) << '\n';
    out << "\n[test_env]\n";
    if (!test_policies.empty()) out << "policy = " << policies_line(test_policies) << '\n';
    out << "noise_std = " << format_double(test_noise_std) << '\n';
    out << "\n[agent]\n";
    out << "algorithm = " << algorithm_name(agent.algorithm) << '\n';
    out << "exploration = " << exploration_name(agent.exploration) << '\n';
    out << "alpha = " << format_double(agent.alpha) << '\n';
    out << "discount = " << format_double(agent.discount) << '\n';
    out << "tau = " << format_double(agent.tau) << '\n';
    out << "epsilon = " << format_double(agent.epsilon) << '\n';
    out << "eval_policy = " << (agent.greedy_evaluation ? "greedy" : "exploration") << '\n';
    out << "\n[protocol]\n";
    out << "n_agents = " << protocol.n_agents << '\n';
    out << "n_episodes = " << protocol.n_episodes << '\n';
    out << "eval_every = " << protocol.eval_every << '\n';
    out << "eval_episodes = " << protocol.eval_episodes << '\n';
    out << "max_steps = " << protocol.max_steps << '\n';
    out << "base_seed = " << protocol.base_seed << '\n';
    out << "\n[noise]\n";
    out << "seed = " << noise.seed << '\n';
    out << "resample_per_episode = " << (noise.resample_per_episode ? "true" : "false") << '\n';
    out << "dense_support_cap = " << noise.dense_support_cap << '\n';
    out << "sample_k = " << noise.sample_k << '\n';
    if (!suite_targets.empty()) {
        out << "\n[suite]\n";
        out << "targets = ";
        for (std::size_t i = 0; i < suite_targets.size(); ++i) {
            if (i) out << "; ";
            if (suite_targets[i].policy) out << suite_targets[i].policy->to_string();
            if (suite_targets[i].noise_std != 0.0 || !suite_targets[i].policy)
                out << '@' << format_double(suite_targets[i].noise_std);
        }
        out << '\n';
    }
    if (r_max_override) {
        out << "\n[analysis]\n";
        out << "r_max = " << format_double(*r_max_override) << '\n';
    }
    return out.str();
}

}  // namespace mdplab
