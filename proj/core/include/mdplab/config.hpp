#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdplab/harness.hpp"

namespace mdplab {

/// One suite target: an element policy applied to every stochastic element
/// (absent = keep the source policy) plus a noise level.
struct SuiteTarget {
    std::optional<ElementPolicy> policy;
    double noise_std = 0.0;
};

/// Fully resolved experiment configuration. Parsed from an INI-style file
/// with sections [game], [layout], [train_env], [test_env], [agent],
/// [protocol], [noise], and optionally [suite] and [analysis]; unknown
/// sections, unknown keys, and duplicate keys are errors.
struct ExperimentConfig {
    std::string layout_name;  // built-in name or file path
    GameKind kind = GameKind::PacMan;
    LayoutSpec layout;
    RewardSpec rewards;
    double discount = 0.9;

    std::vector<ElementPolicy> train_policies;
    double train_noise_std = 0.0;
    std::vector<ElementPolicy> test_policies;
    double test_noise_std = 0.0;

    AgentConfig agent;
    ProtocolConfig protocol;
    NoiseSpec noise;  // std is per-environment; the rest is shared

    std::vector<SuiteTarget> suite_targets;
    std::optional<double> r_max_override;

    EnvDescriptor train_env() const;
    EnvDescriptor test_env() const;

    /// The single train/test experiment described by the config.
    ExperimentSpec experiment() const;

    /// The (L, G) pair per suite target; train_env is the shared source.
    /// Throws ConfigError when the config has no [suite] section.
    std::vector<SuitePair> suite_pairs() const;

    /// Canonical INI echo of every resolved value, fixed key order.
    std::string echo() const;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace mdplab
