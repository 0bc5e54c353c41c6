#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mdplab/layout.hpp"
#include "mdplab/rng.hpp"
#include "mdplab/types.hpp"

namespace mdplab {

enum class GameKind : std::uint8_t { PacMan, Pong, Breakout };

const char* game_kind_name(GameKind k);
GameKind game_kind_from_name(const std::string& name);

/// Dense action ids for a game kind. PacMan uses Left, Right, Up, Down
/// (ids 0..3); Pong and Breakout use Left, Right, Stop (ids 0..2). The order
/// is fixed so that state enumeration is reproducible.
int num_actions(GameKind k);
Action action_at(GameKind k, ActionId id);

enum class ElementPolicyKind : std::uint8_t {
    RandomGhost,
    DirectionalGhost,
    TeleportingGhost,
    RandomPaddle,
    FollowingPaddle,
};

const char* element_policy_kind_name(ElementPolicyKind k);

/// Move policy of one stochastic game element (ghost or computer paddle).
///
/// RandomGhost        uniform over legal walk moves.
/// DirectionalGhost   probability p uniformly on walk moves that strictly
///                    decrease Manhattan distance to the agent, 1-p uniformly
///                    on the remaining legal moves; uniform over all legal
///                    moves when no distance-decreasing move exists.
/// TeleportingGhost   probability p uniformly over teleport targets (every
///                    non-wall cell except the agent's), 1-p as RandomGhost.
///                    With near_walls set, targets are restricted to
///                    wall-adjacent non-wall cells.
/// RandomPaddle       uniform over legal moves among Left, Right, Stop.
/// FollowingPaddle    probability p on the move toward the ball's column
///                    (Stop when aligned or blocked), 1-p uniformly over the
///                    legal moves among Left, Right, Stop.
struct ElementPolicy {
    ElementPolicyKind kind = ElementPolicyKind::RandomGhost;
    double p = 0.0;
    bool near_walls = false;

    bool operator==(const ElementPolicy&) const = default;

    std::string to_string() const;
    static ElementPolicy parse(const std::string& text);
};

struct GameSpec {
    GameKind kind = GameKind::PacMan;
    LayoutSpec layout;
    std::vector<ElementPolicy> element_policies;  // one per 'G' in the layout
    RewardSpec rewards;
    double discount = 0.9;

    bool operator==(const GameSpec& other) const {
        return kind == other.kind && layout == other.layout &&
               element_policies == other.element_policies && rewards == other.rewards &&
               discount == other.discount;
    }

    /// Strict validation for experiment configs: PacMan needs at least one
    /// pellet, Pong exactly one ball and two paddles (P + G), Breakout at
    /// least one brick plus ball and paddle. Throws LayoutInvalid.
    void validate() const;
};

/// Canonical game configuration. The tuple (agent, elements, items, ball,
/// velocity, outcome) identifies a state; unused fields stay zeroed so that
/// hashing and equality are well defined for every game kind.
struct GameState {
    Cell agent;
    std::array<Cell, kMaxElements> elements{};
    std::uint64_t items = 0;  // bit i set = item i still present
    Cell ball{};
    std::int8_t vx = 0;
    std::int8_t vy = 0;
    Outcome outcome = Outcome::Playing;

    bool operator==(const GameState&) const = default;
};

struct GameStateHash {
    std::size_t operator()(const GameState& s) const {
        std::uint64_t h = 0x243f6a8885a308d3ull;
        h = hash_mix(h, (std::uint64_t(std::uint8_t(s.agent.x)) << 8) | std::uint8_t(s.agent.y));
        for (const Cell& e : s.elements)
            h = hash_mix(h, (std::uint64_t(std::uint8_t(e.x)) << 8) | std::uint8_t(e.y));
        h = hash_mix(h, s.items);
        h = hash_mix(h, (std::uint64_t(std::uint8_t(s.ball.x)) << 24) |
                            (std::uint64_t(std::uint8_t(s.ball.y)) << 16) |
                            (std::uint64_t(std::uint8_t(s.vx)) << 8) | std::uint8_t(s.vy));
        h = hash_mix(h, std::uint64_t(s.outcome));
        return static_cast<std::size_t>(splitmix64(h));
    }
};

std::string state_to_string(const GameSpec& spec, const GameState& s);

/// Initial configuration read off the layout. The ball starts with velocity
/// (+1, +1) in Pong (toward the player's side) and (+1, -1) in Breakout
/// (toward the bricks).
GameState initial_state(const GameSpec& spec);

/// Terminal classification.
///   PacMan:   Loss when the agent shares a cell with a ghost (or the state
///             was stamped Loss by a swap-through), Win when no pellet is left.
///   Pong:     Win when the ball reached the border row behind the computer
///             paddle, Loss when it reached the row behind the player paddle.
///   Breakout: Win when no brick is left, Loss when the ball reached the
///             bottom border row.
Outcome is_terminal(const GameSpec& spec, const GameState& s);

/// Agent actions legal in a state, as dense action ids in canonical order.
std::vector<ActionId> legal_agent_actions(const GameSpec& spec, const GameState& s);

/// Move distribution of one stochastic element, expressed over destination
/// cells (walk moves and teleport targets landing on the same cell merge).
/// Entries are ordered: walk moves in canonical action order first, then
/// teleport targets in row-major order. Throws NoLegalMove when the element
/// is fully enclosed.
std::vector<std::pair<Cell, double>> element_move_distribution(const GameSpec& spec,
                                                               const GameState& s,
                                                               int element);

/// All successor configurations of (state, action) with their probabilities.
/// The agent component moves first (PacMan: collision and pellet resolution;
/// paddle games: paddle shift), then each stochastic element moves
/// independently, then the ball advances. Duplicate successors are merged;
/// probabilities sum to 1 within 1e-12. Throws IllegalAction.
std::vector<std::pair<GameState, double>> successor_configurations(const GameSpec& spec,
                                                                   const GameState& s,
                                                                   ActionId action);

}  // namespace mdplab
