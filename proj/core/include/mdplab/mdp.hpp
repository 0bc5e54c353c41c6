#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mdplab/games.hpp"
#include "mdplab/types.hpp"

namespace mdplab {

/// Dense ids for every reachable game configuration. Ordering is
/// breadth-first from the initial configuration with children visited in
/// canonical action order, so ids are reproducible across runs and platforms.
struct StateIndex {
    std::vector<GameState> states;
    std::unordered_map<GameState, StateId, GameStateHash> ids;

    StateId count() const { return static_cast<StateId>(states.size()); }

    /// Dense id of a configuration; throws InconsistentIndex when absent.
    StateId id_of(const GameState& s) const;

    /// Like id_of but returns kNoState instead of throwing.
    StateId find(const GameState& s) const {
        auto it = ids.find(s);
        return it == ids.end() ? kNoState : it->second;
    }
};

/// One sparse probability row, successor ids ascending.
struct SparseRow {
    std::vector<StateId> succ;
    std::vector<double> prob;

    std::size_t size() const { return succ.size(); }
    bool empty() const { return succ.empty(); }
    double sum() const;

    bool operator==(const SparseRow&) const = default;
};

/// Sparse row-stochastic transition table with one row per
/// (non-terminal state, legal action). Rows are addressed as
/// state * num_actions + action; absent rows are empty.
struct TransitionTable {
    std::uint8_t num_actions = 0;
    std::vector<SparseRow> rows;

    static TransitionTable empty_like(StateId n_states, int n_actions);

    bool has_row(StateId s, ActionId a) const { return !rows[idx(s, a)].empty(); }
    const SparseRow& row(StateId s, ActionId a) const { return rows[idx(s, a)]; }
    SparseRow& row(StateId s, ActionId a) { return rows[idx(s, a)]; }
    std::size_t idx(StateId s, ActionId a) const {
        return static_cast<std::size_t>(s) * num_actions + a;
    }
    std::size_t row_count() const;

    bool operator==(const TransitionTable&) const = default;
};

/// Exact finite MDP for one game. Immutable after construction and safe to
/// share read-only across threads.
struct Mdp {
    GameSpec game;
    StateIndex index;
    std::vector<std::vector<ActionId>> legal;  // per state; empty for terminal states
    TransitionTable transitions;
    RewardSpec rewards;
    double discount = 0.9;
    std::vector<Outcome> outcomes;             // terminal classification per state
    std::vector<std::uint16_t> items_left;     // popcount of the item mask per state
    StateId initial = 0;

    StateId num_states() const { return index.count(); }
    int num_actions() const { return transitions.num_actions; }
    bool is_terminal(StateId s) const { return outcomes[s] != Outcome::Playing; }

    /// Transition reward: step penalty, plus food reward per item consumed
    /// entering `next` (never negative, even for noise-injected jumps that
    /// gain items), plus the win/death bonus when `next` is terminal.
    double reward(StateId s, StateId next) const {
        double r = rewards.step_penalty;
        if (items_left[s] > items_left[next])
            r += rewards.food_reward * (items_left[s] - items_left[next]);
        if (outcomes[next] == Outcome::Win) r += rewards.win_reward;
        if (outcomes[next] == Outcome::Loss) r += rewards.death_penalty;
        return r;
    }

    std::vector<StateId> terminal_states() const;
    std::size_t legal_pair_count() const;
};

inline constexpr std::size_t kDefaultStateCap = 5'000'000;

/// Breadth-first enumeration of every configuration reachable from the
/// initial one through any agent action and any element move in a policy's
/// support, terminal configurations included. Throws LayoutInvalid or
/// StateSpaceOverflow.
StateIndex enumerate_states(const GameSpec& game, std::size_t state_cap = kDefaultStateCap);

/// Transition probabilities for every (non-terminal state, legal action):
/// the product of independent per-element move probabilities, aggregated
/// over element-move combinations reaching the same successor. Throws
/// InconsistentIndex if a successor is missing from the index.
TransitionTable build_transition_table(const GameSpec& game, const StateIndex& index);

/// enumerate_states + build_transition_table + per-state metadata.
Mdp build_mdp(const GameSpec& game, std::size_t state_cap = kDefaultStateCap);

struct Violation {
    enum class Code {
        RowSumOff,
        NegativeProbability,
        OrphanRow,       // row stored for a terminal state or an illegal action
        MissingRow,      // no row for a (non-terminal state, legal action)
        SuccessorOutOfRange,
        UnreachableState,
    };
    Code code;
    StateId state = kNoState;
    ActionId action = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

/// Report-only check of every MDP invariant: row sums within 1e-9,
/// non-negative entries, exactly one row per (non-terminal, legal action),
/// successor closure, reachability from the initial state.
ValidationReport validate_mdp(const Mdp& mdp);

}  // namespace mdplab
