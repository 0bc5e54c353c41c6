#pragma once

#include <array>
#include <cstdint>
#include <functional>

namespace mdplab {

using StateId = std::uint32_t;
using ActionId = std::uint8_t;

inline constexpr StateId kNoState = 0xffffffffu;

/// Most stochastic elements (ghosts / computer paddles) a layout may carry.
inline constexpr int kMaxElements = 2;

/// Grid coordinate: x = column, y = row, origin at the top-left corner.
struct Cell {
    std::int8_t x = 0;
    std::int8_t y = 0;

    bool operator==(const Cell&) const = default;
};

enum class Action : std::uint8_t { Left = 0, Right, Up, Down, Stop };

/// Unit displacement for a movement action. Stop maps to (0, 0).
inline Cell action_delta(Action a) {
    switch (a) {
    case Action::Left: return {-1, 0};
    case Action::Right: return {1, 0};
    case Action::Up: return {0, -1};
    case Action::Down: return {0, 1};
    case Action::Stop: return {0, 0};
    }
    return {0, 0};
}

const char* action_name(Action a);

enum class Outcome : std::uint8_t { Playing = 0, Win, Loss };

/// Reward constants applied per transition. Defaults follow the classic
/// grid-game convention: small per-step cost, bonus per consumed item,
/// large terminal bonuses.
struct RewardSpec {
    double step_penalty = -1.0;
    double food_reward = 20.0;
    double death_penalty = -200.0;
    double win_reward = 500.0;

    bool operator==(const RewardSpec&) const = default;

    /// Throws std::invalid_argument when the sign conventions are violated
    /// (step_penalty < 0, win_reward > 0, death_penalty < 0).
    void validate() const;
};

inline std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

}  // namespace mdplab
