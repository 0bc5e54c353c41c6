#include "mdplab/mdp.hpp"

#include <bit>
#include <cmath>
#include <deque>
#include <sstream>

#include "mdplab/errors.hpp"

namespace mdplab {

StateId StateIndex::id_of(const GameState& s) const {
    auto it = ids.find(s);
    if (it == ids.end()) throw InconsistentIndex("configuration missing from state index");
    return it->second;
}

double SparseRow::sum() const {
    double total = 0.0;
    for (double p : prob) total += p;
    return total;
}

TransitionTable TransitionTable::empty_like(StateId n_states, int n_actions) {
    TransitionTable t;
    t.num_actions = static_cast<std::uint8_t>(n_actions);
    t.rows.resize(static_cast<std::size_t>(n_states) * n_actions);
    return t;
}

std::size_t TransitionTable::row_count() const {
    std::size_t n = 0;
    for (const SparseRow& r : rows)
        if (!r.empty()) ++n;
    return n;
}

std::vector<StateId> Mdp::terminal_states() const {
    std::vector<StateId> out;
    for (StateId s = 0; s < num_states(); ++s)
        if (outcomes[s] != Outcome::Playing) out.push_back(s);
    return out;
}

std::size_t Mdp::legal_pair_count() const {
    std::size_t n = 0;
    for (const auto& acts : legal) n += acts.size();
    return n;
}

StateIndex enumerate_states(const GameSpec& game, std::size_t state_cap) {
    StateIndex index;
    const GameState init = initial_state(game);
    index.states.push_back(init);
    index.ids.emplace(init, 0);

    std::deque<StateId> frontier{0};
    while (!frontier.empty()) {
        const StateId sid = frontier.front();
        frontier.pop_front();
        const GameState s = index.states[sid];
        if (is_terminal(game, s) != Outcome::Playing) continue;

        for (ActionId a : legal_agent_actions(game, s)) {
            for (const auto& [succ, prob] : successor_configurations(game, s, a)) {
                if (index.ids.emplace(succ, index.count()).second) {
                    index.states.push_back(succ);
                    frontier.push_back(static_cast<StateId>(index.count() - 1));
                    if (index.states.size() > state_cap)
                        throw StateSpaceOverflow("state count exceeds cap of " +
                                                 std::to_string(state_cap));
                }
            }
        }
    }
    return index;
}

TransitionTable build_transition_table(const GameSpec& game, const StateIndex& index) {
    TransitionTable table = TransitionTable::empty_like(index.count(), num_actions(game.kind));
    std::vector<std::pair<StateId, double>> entries;

    for (StateId sid = 0; sid < index.count(); ++sid) {
        const GameState& s = index.states[sid];
        if (is_terminal(game, s) != Outcome::Playing) continue;

        for (ActionId a : legal_agent_actions(game, s)) {
            entries.clear();
            for (const auto& [succ, prob] : successor_configurations(game, s, a)) {
                const StateId tid = index.find(succ);
                if (tid == kNoState)
                    throw InconsistentIndex("successor of state " + std::to_string(sid) +
                                            " under action " + std::to_string(int(a)) +
                                            " is not in the index");
                entries.emplace_back(tid, prob);
            }
            std::sort(entries.begin(), entries.end(),
                      [](const auto& l, const auto& r) { return l.first < r.first; });
            SparseRow& row = table.row(sid, a);
            for (const auto& [tid, p] : entries) {
                if (!row.succ.empty() && row.succ.back() == tid)
                    row.prob.back() += p;
                else {
                    row.succ.push_back(tid);
                    row.prob.push_back(p);
                }
            }
            const double total = row.sum();
            if (std::abs(total - 1.0) > 1e-9)
                throw InconsistentIndex("row (" + std::to_string(sid) + "," +
                                        std::to_string(int(a)) + ") sums to " +
                                        std::to_string(total));
        }
    }
    return table;
}

Mdp build_mdp(const GameSpec& game, std::size_t state_cap) {
    Mdp mdp;
    mdp.game = game;
    mdp.index = enumerate_states(game, state_cap);
    mdp.transitions = build_transition_table(game, mdp.index);
    mdp.rewards = game.rewards;
    mdp.discount = game.discount;

    const StateId n = mdp.index.count();
    mdp.legal.resize(n);
    mdp.outcomes.resize(n);
    mdp.items_left.resize(n);
    for (StateId s = 0; s < n; ++s) {
        const GameState& st = mdp.index.states[s];
        mdp.outcomes[s] = is_terminal(game, st);
        mdp.items_left[s] = static_cast<std::uint16_t>(std::popcount(st.items));
        if (mdp.outcomes[s] == Outcome::Playing) mdp.legal[s] = legal_agent_actions(game, st);
    }
    return mdp;
}

namespace {

std::string row_name(StateId s, ActionId a) {
    return "(state " + std::to_string(s) + ", action " + std::to_string(int(a)) + ")";
}

}  // namespace

std::string ValidationReport::to_string() const {
    if (ok()) return "ok: all invariants hold\n";
    std::ostringstream out;
    for (const Violation& v : violations) out << v.detail << '\n';
    return out.str();
}

ValidationReport validate_mdp(const Mdp& mdp) {
    ValidationReport report;
    const StateId n = mdp.num_states();
    const int n_actions = mdp.num_actions();
    auto flag = [&](Violation::Code code, StateId s, ActionId a, std::string detail) {
        report.violations.push_back({code, s, a, std::move(detail)});
    };

    std::vector<std::uint8_t> legal_mask(static_cast<std::size_t>(n) * n_actions, 0);
    for (StateId s = 0; s < n; ++s)
        for (ActionId a : mdp.legal[s]) legal_mask[mdp.transitions.idx(s, a)] = 1;

    for (StateId s = 0; s < n; ++s) {
        if (!mdp.is_terminal(s) && mdp.legal[s].empty())
            flag(Violation::Code::MissingRow, s, 0,
                 "non-terminal state " + std::to_string(s) + " has no legal action");
        for (ActionId a = 0; a < n_actions; ++a) {
            const SparseRow& row = mdp.transitions.row(s, a);
            const bool should_exist = !mdp.is_terminal(s) && legal_mask[mdp.transitions.idx(s, a)];
            if (row.empty()) {
                if (should_exist)
                    flag(Violation::Code::MissingRow, s, a, "missing row " + row_name(s, a));
                continue;
            }
            if (!should_exist) {
                flag(Violation::Code::OrphanRow, s, a,
                     "orphan row " + row_name(s, a) +
                         (mdp.is_terminal(s) ? " on a terminal state" : " on an illegal action"));
            }
            double total = 0.0;
            for (std::size_t i = 0; i < row.succ.size(); ++i) {
                if (row.prob[i] < 0.0)
                    flag(Violation::Code::NegativeProbability, s, a,
                         "negative probability in row " + row_name(s, a));
                if (row.succ[i] >= n)
                    flag(Violation::Code::SuccessorOutOfRange, s, a,
                         "successor id " + std::to_string(row.succ[i]) + " out of range in row " +
                             row_name(s, a));
                total += row.prob[i];
            }
            if (std::abs(total - 1.0) > 1e-9)
                flag(Violation::Code::RowSumOff, s, a,
                     "row " + row_name(s, a) + " sums to " + std::to_string(total));
        }
    }

    // Reachability over the support graph from the initial state.
    std::vector<std::uint8_t> reached(n, 0);
    std::deque<StateId> frontier;
    if (mdp.initial < n) {
        reached[mdp.initial] = 1;
        frontier.push_back(mdp.initial);
    }
    while (!frontier.empty()) {
        const StateId s = frontier.front();
        frontier.pop_front();
        for (ActionId a = 0; a < n_actions; ++a) {
            const SparseRow& row = mdp.transitions.row(s, a);
            for (StateId t : row.succ)
                if (t < n && !reached[t]) {
                    reached[t] = 1;
                    frontier.push_back(t);
                }
        }
    }
    for (StateId s = 0; s < n; ++s)
        if (!reached[s])
            flag(Violation::Code::UnreachableState, s, 0,
                 "state " + std::to_string(s) + " is unreachable from the initial state");

    return report;
}

}  // namespace mdplab
