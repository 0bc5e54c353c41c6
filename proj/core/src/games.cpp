#include "mdplab/games.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "mdplab/errors.hpp"

namespace mdplab {

const char* action_name(Action a) {
    switch (a) {
    case Action::Left: return "Left";
    case Action::Right: return "Right";
    case Action::Up: return "Up";
    case Action::Down: return "Down";
    case Action::Stop: return "Stop";
    }
    return "?";
}

void RewardSpec::validate() const {
    if (!(step_penalty < 0)) throw std::invalid_argument("step_penalty must be negative");
    if (!(win_reward > 0)) throw std::invalid_argument("win_reward must be positive");
    if (!(death_penalty < 0)) throw std::invalid_argument("death_penalty must be negative");
}

const char* game_kind_name(GameKind k) {
    switch (k) {
    case GameKind::PacMan: return "pacman";
    case GameKind::Pong: return "pong";
    case GameKind::Breakout: return "breakout";
    }
    return "?";
}

GameKind game_kind_from_name(const std::string& name) {
    if (name == "pacman") return GameKind::PacMan;
    if (name == "pong") return GameKind::Pong;
    if (name == "breakout") return GameKind::Breakout;
    throw ConfigError("unknown game kind: " + name);
}

int num_actions(GameKind k) { return k == GameKind::PacMan ? 4 : 3; }

Action action_at(GameKind k, ActionId id) {
    static constexpr Action pacman[4] = {Action::Left, Action::Right, Action::Up, Action::Down};
    static constexpr Action paddle[3] = {Action::Left, Action::Right, Action::Stop};
    if (k == GameKind::PacMan) return pacman[id];
    return paddle[id];
}

const char* element_policy_kind_name(ElementPolicyKind k) {
    switch (k) {
    case ElementPolicyKind::RandomGhost: return "RandomGhost";
    case ElementPolicyKind::DirectionalGhost: return "DirectionalGhost";
    case ElementPolicyKind::TeleportingGhost: return "TeleportingGhost";
    case ElementPolicyKind::RandomPaddle: return "RandomPaddle";
    case ElementPolicyKind::FollowingPaddle: return "FollowingPaddle";
    }
    return "?";
}

std::string ElementPolicy::to_string() const {
    std::ostringstream out;
    out << element_policy_kind_name(kind);
    if (near_walls) out << "NearWalls";
    if (kind != ElementPolicyKind::RandomGhost && kind != ElementPolicyKind::RandomPaddle)
        out << ':' << p;
    return out.str();
}

ElementPolicy ElementPolicy::parse(const std::string& text) {
    ElementPolicy policy;
    std::string name = text;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        name = text.substr(0, colon);
        try {
            policy.p = std::stod(text.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad element policy parameter: " + text);
        }
    }
    if (name.size() > 9 && name.substr(name.size() - 9) == "NearWalls") {
        policy.near_walls = true;
        name = name.substr(0, name.size() - 9);
    }
    if (name == "RandomGhost") policy.kind = ElementPolicyKind::RandomGhost;
    else if (name == "DirectionalGhost" || name == "FollowingGhost")
        policy.kind = ElementPolicyKind::DirectionalGhost;
    else if (name == "TeleportingGhost") policy.kind = ElementPolicyKind::TeleportingGhost;
    else if (name == "RandomPaddle") policy.kind = ElementPolicyKind::RandomPaddle;
    else if (name == "FollowingPaddle" || name == "DirectionalPaddle")
        policy.kind = ElementPolicyKind::FollowingPaddle;
    else throw ConfigError("unknown element policy: " + text);
    if (policy.p < 0.0 || policy.p > 1.0)
        throw ConfigError("element policy parameter out of [0,1]: " + text);
    return policy;
}

void GameSpec::validate() const {
    rewards.validate();
    if (!(discount > 0.0 && discount <= 1.0))
        throw std::invalid_argument("discount must be in (0,1]");
    if (element_policies.size() != layout.element_starts.size())
        throw LayoutInvalid("need one element policy per 'G' in the layout");
    const bool ghost_game = kind == GameKind::PacMan;
    for (const ElementPolicy& ep : element_policies) {
        const bool ghost_policy = ep.kind == ElementPolicyKind::RandomGhost ||
                                  ep.kind == ElementPolicyKind::DirectionalGhost ||
                                  ep.kind == ElementPolicyKind::TeleportingGhost;
        if (ghost_policy != ghost_game)
            throw ConfigError(std::string("element policy ") + element_policy_kind_name(ep.kind) +
                              " does not match game " + game_kind_name(kind));
    }
    switch (kind) {
    case GameKind::PacMan:
        if (layout.items.empty()) throw LayoutInvalid("pacman layout needs at least one pellet");
        if (layout.has_ball) throw LayoutInvalid("pacman layout must not contain a ball");
        break;
    case GameKind::Pong:
        if (!layout.has_ball || layout.element_starts.size() != 1)
            throw LayoutInvalid("pong layout needs exactly one ball and two paddles");
        if (!layout.items.empty()) throw LayoutInvalid("pong layout must not contain items");
        if (layout.element_starts[0].y == layout.agent_start.y)
            throw LayoutInvalid("pong paddles must sit on different rows");
        break;
    case GameKind::Breakout:
        if (layout.items.empty()) throw LayoutInvalid("breakout layout needs at least one brick");
        if (!layout.has_ball || !layout.element_starts.empty())
            throw LayoutInvalid("breakout layout needs one ball, one paddle and no 'G'");
        break;
    }
}

std::string state_to_string(const GameSpec& spec, const GameState& s) {
    std::ostringstream out;
    out << "P(" << int(s.agent.x) << ',' << int(s.agent.y) << ')';
    for (std::size_t i = 0; i < spec.layout.element_starts.size(); ++i)
        out << " G" << i << '(' << int(s.elements[i].x) << ',' << int(s.elements[i].y) << ')';
    if (!spec.layout.items.empty()) out << " items=0x" << std::hex << s.items << std::dec;
    if (spec.layout.has_ball)
        out << " ball(" << int(s.ball.x) << ',' << int(s.ball.y) << " v=" << int(s.vx) << ','
            << int(s.vy) << ')';
    return out.str();
}

GameState initial_state(const GameSpec& spec) {
    const LayoutSpec& layout = spec.layout;
    GameState s;
    s.agent = layout.agent_start;
    for (std::size_t i = 0; i < layout.element_starts.size() && i < kMaxElements; ++i)
        s.elements[i] = layout.element_starts[i];
    s.items = layout.items.empty() ? 0 : (layout.items.size() == 64
                                              ? ~std::uint64_t{0}
                                              : (std::uint64_t{1} << layout.items.size()) - 1);
    if (layout.has_ball) {
        s.ball = layout.ball_start;
        s.vx = 1;
        // Pong: toward the player's side; Breakout: up, toward the bricks.
        if (spec.kind == GameKind::Pong)
            s.vy = layout.agent_start.y > layout.element_starts[0].y ? 1 : -1;
        else
            s.vy = -1;
    }
    return s;
}

namespace {

int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

Cell shifted(Cell c, Action a) {
    const Cell d = action_delta(a);
    return {static_cast<std::int8_t>(c.x + d.x), static_cast<std::int8_t>(c.y + d.y)};
}

// Pong goal rows: border row behind each paddle.
int pong_win_row(const GameSpec& spec) {
    return spec.layout.element_starts[0].y < spec.layout.agent_start.y ? 0
                                                                       : spec.layout.height - 1;
}
int pong_loss_row(const GameSpec& spec) {
    return pong_win_row(spec) == 0 ? spec.layout.height - 1 : 0;
}

// Walkable destinations for a ghost, canonical direction order.
std::vector<Cell> walk_destinations(const LayoutSpec& layout, Cell pos) {
    static constexpr Action dirs[4] = {Action::Left, Action::Right, Action::Up, Action::Down};
    std::vector<Cell> out;
    for (Action a : dirs) {
        const Cell d = shifted(pos, a);
        if (!layout.wall(d)) out.push_back(d);
    }
    return out;
}

bool wall_adjacent(const LayoutSpec& layout, Cell c) {
    return layout.wall(c.x - 1, c.y) || layout.wall(c.x + 1, c.y) || layout.wall(c.x, c.y - 1) ||
           layout.wall(c.x, c.y + 1);
}

// Teleport targets in row-major order: non-wall cells except the agent's,
// optionally restricted to wall-adjacent cells.
std::vector<Cell> teleport_targets(const LayoutSpec& layout, Cell agent, bool near_walls) {
    std::vector<Cell> out;
    for (int y = 1; y < layout.height - 1; ++y)
        for (int x = 1; x < layout.width - 1; ++x) {
            const Cell c{static_cast<std::int8_t>(x), static_cast<std::int8_t>(y)};
            if (layout.wall(c) || c == agent) continue;
            if (near_walls && !wall_adjacent(layout, c)) continue;
            out.push_back(c);
        }
    return out;
}

void add_mass(std::vector<std::pair<Cell, double>>& dist, Cell dest, double mass) {
    if (mass <= 0.0) return;
    for (auto& [cell, p] : dist)
        if (cell == dest) {
            p += mass;
            return;
        }
    dist.emplace_back(dest, mass);
}

// Paddle destinations among Left, Right, Stop, canonical order.
std::vector<Cell> paddle_destinations(const LayoutSpec& layout, Cell pos) {
    std::vector<Cell> out;
    for (Action a : {Action::Left, Action::Right}) {
        const Cell d = shifted(pos, a);
        if (!layout.wall(d)) out.push_back(d);
    }
    out.push_back(pos);  // Stop is always legal
    return out;
}

}  // namespace

Outcome is_terminal(const GameSpec& spec, const GameState& s) {
    switch (spec.kind) {
    case GameKind::PacMan:
        for (std::size_t i = 0; i < spec.layout.element_starts.size(); ++i)
            if (s.elements[i] == s.agent) return Outcome::Loss;
        if (s.items == 0) return Outcome::Win;
        return Outcome::Playing;
    case GameKind::Pong:
        if (s.ball.y == pong_win_row(spec)) return Outcome::Win;
        if (s.ball.y == pong_loss_row(spec)) return Outcome::Loss;
        return Outcome::Playing;
    case GameKind::Breakout:
        if (s.items == 0) return Outcome::Win;
        if (s.ball.y == spec.layout.height - 1) return Outcome::Loss;
        return Outcome::Playing;
    }
    return Outcome::Playing;
}

std::vector<ActionId> legal_agent_actions(const GameSpec& spec, const GameState& s) {
    std::vector<ActionId> out;
    const int n = num_actions(spec.kind);
    for (ActionId id = 0; id < n; ++id) {
        const Action a = action_at(spec.kind, id);
        if (a == Action::Stop || !spec.layout.wall(shifted(s.agent, a))) out.push_back(id);
    }
    return out;
}

std::vector<std::pair<Cell, double>> element_move_distribution(const GameSpec& spec,
                                                               const GameState& s, int element) {
    if (element < 0 || element >= static_cast<int>(spec.element_policies.size()))
        throw Error("element index out of range");
    const ElementPolicy& policy = spec.element_policies[element];
    const Cell pos = s.elements[element];
    const LayoutSpec& layout = spec.layout;
    std::vector<std::pair<Cell, double>> dist;

    switch (policy.kind) {
    case ElementPolicyKind::RandomGhost: {
        const auto dests = walk_destinations(layout, pos);
        if (dests.empty()) throw NoLegalMove("ghost is fully enclosed");
        for (Cell d : dests) add_mass(dist, d, 1.0 / dests.size());
        break;
    }
    case ElementPolicyKind::DirectionalGhost: {
        const auto dests = walk_destinations(layout, pos);
        if (dests.empty()) throw NoLegalMove("ghost is fully enclosed");
        std::vector<Cell> toward, away;
        for (Cell d : dests)
            (manhattan(d, s.agent) < manhattan(pos, s.agent) ? toward : away).push_back(d);
        if (toward.empty() || away.empty()) {
            for (Cell d : dests) add_mass(dist, d, 1.0 / dests.size());
        } else {
            for (Cell d : toward) add_mass(dist, d, policy.p / toward.size());
            for (Cell d : away) add_mass(dist, d, (1.0 - policy.p) / away.size());
        }
        break;
    }
    case ElementPolicyKind::TeleportingGhost: {
        const auto walks = walk_destinations(layout, pos);
        const auto targets = teleport_targets(layout, s.agent, policy.near_walls);
        if (walks.empty() && targets.empty()) throw NoLegalMove("ghost is fully enclosed");
        double walk_mass = 1.0 - policy.p;
        double tp_mass = policy.p;
        if (walks.empty()) walk_mass = 0.0, tp_mass = 1.0;
        if (targets.empty()) tp_mass = 0.0, walk_mass = 1.0;
        for (Cell d : walks) add_mass(dist, d, walk_mass / walks.size());
        for (Cell t : targets) add_mass(dist, t, tp_mass / targets.size());
        break;
    }
    case ElementPolicyKind::RandomPaddle: {
        const auto dests = paddle_destinations(layout, pos);
        for (Cell d : dests) add_mass(dist, d, 1.0 / dests.size());
        break;
    }
    case ElementPolicyKind::FollowingPaddle: {
        const auto dests = paddle_destinations(layout, pos);
        Cell follow = pos;  // Stop when aligned with the ball's column
        if (s.ball.x != pos.x) {
            const Cell step = shifted(pos, s.ball.x > pos.x ? Action::Right : Action::Left);
            if (!layout.wall(step)) follow = step;
        }
        add_mass(dist, follow, policy.p);
        for (Cell d : dests) add_mass(dist, d, (1.0 - policy.p) / dests.size());
        break;
    }
    }
    return dist;
}

namespace {

void clear_item(GameState& st, int idx) { st.items &= ~(std::uint64_t{1} << idx); }

bool brick_present(const GameSpec& spec, const GameState& st, int x, int y) {
    if (spec.kind != GameKind::Breakout) return false;
    const int idx = spec.layout.item_index({static_cast<std::int8_t>(x), static_cast<std::int8_t>(y)});
    return idx >= 0 && ((st.items >> idx) & 1);
}

bool paddle_at(const GameSpec& spec, const GameState& st, int x, int y) {
    if (st.agent.x == x && st.agent.y == y) return true;
    for (std::size_t i = 0; i < spec.layout.element_starts.size(); ++i)
        if (st.elements[i].x == x && st.elements[i].y == y) return true;
    return false;
}

// Rows the ball may pass into (scoring); every other wall reflects.
bool goal_row(const GameSpec& spec, int y) {
    if (spec.kind == GameKind::Pong) return y == 0 || y == spec.layout.height - 1;
    return y == spec.layout.height - 1;
}

// Axis-separated ball step. On contact the ball keeps its cell on that axis
// and the velocity component flips; paddles are solid on both axes, so a
// corner hit flips both components. Bricks break on contact.
void advance_ball(const GameSpec& spec, GameState& st) {
    const LayoutSpec& layout = spec.layout;
    int x = st.ball.x, y = st.ball.y;
    int vx = st.vx, vy = st.vy;

    if (vx != 0) {
        const int tx = x + vx;
        if (paddle_at(spec, st, tx, y)) {
            vx = -vx;
        } else if (brick_present(spec, st, tx, y)) {
            clear_item(st, layout.item_index({static_cast<std::int8_t>(tx), static_cast<std::int8_t>(y)}));
            vx = -vx;
        } else if (layout.wall(tx, y)) {
            vx = -vx;
        } else {
            x = tx;
        }
    }
    if (vy != 0) {
        const int ty = y + vy;
        if (paddle_at(spec, st, x, ty)) {
            vy = -vy;
        } else if (brick_present(spec, st, x, ty)) {
            clear_item(st, layout.item_index({static_cast<std::int8_t>(x), static_cast<std::int8_t>(ty)}));
            vy = -vy;
        } else if (layout.wall(x, ty) && !goal_row(spec, ty)) {
            vy = -vy;
        } else {
            y = ty;
        }
    }
    st.ball = {static_cast<std::int8_t>(x), static_cast<std::int8_t>(y)};
    st.vx = static_cast<std::int8_t>(vx);
    st.vy = static_cast<std::int8_t>(vy);
}

struct SuccessorAccumulator {
    std::vector<std::pair<GameState, double>> list;
    std::unordered_map<GameState, std::size_t, GameStateHash> seen;

    void add(const GameState& st, double prob) {
        auto [it, inserted] = seen.emplace(st, list.size());
        if (inserted)
            list.emplace_back(st, prob);
        else
            list[it->second].second += prob;
    }
};

}  // namespace

std::vector<std::pair<GameState, double>> successor_configurations(const GameSpec& spec,
                                                                   const GameState& s,
                                                                   ActionId action) {
    if (is_terminal(spec, s) != Outcome::Playing)
        throw IllegalAction("no actions are legal in a terminal state");
    if (action >= num_actions(spec.kind)) throw IllegalAction("action id out of range");
    const Action act = action_at(spec.kind, action);
    if (act != Action::Stop && spec.layout.wall(shifted(s.agent, act)))
        throw IllegalAction(std::string(action_name(act)) + " is blocked by a wall");

    GameState base = s;
    base.agent = shifted(s.agent, act);

    if (spec.kind == GameKind::PacMan) {
        // Moving onto a ghost is death; the pellet on that cell stays.
        for (std::size_t i = 0; i < spec.layout.element_starts.size(); ++i)
            if (base.elements[i] == base.agent) return {{base, 1.0}};
        const int idx = spec.layout.item_index(base.agent);
        if (idx >= 0 && ((base.items >> idx) & 1)) {
            clear_item(base, idx);
            if (base.items == 0) return {{base, 1.0}};  // win: elements stay put
        }
    }

    const int n_elements = static_cast<int>(spec.layout.element_starts.size());
    SuccessorAccumulator acc;

    if (n_elements == 0) {
        if (spec.layout.has_ball) advance_ball(spec, base);
        acc.add(base, 1.0);
        return std::move(acc.list);
    }

    std::vector<std::vector<std::pair<Cell, double>>> moves(n_elements);
    for (int i = 0; i < n_elements; ++i) moves[i] = element_move_distribution(spec, base, i);

    // Joint element moves, element 0 outermost, canonical per-element order.
    std::vector<std::size_t> pick(n_elements, 0);
    while (true) {
        GameState next = base;
        double prob = 1.0;
        for (int i = 0; i < n_elements; ++i) {
            next.elements[i] = moves[i][pick[i]].first;
            prob *= moves[i][pick[i]].second;
        }
        if (spec.layout.has_ball) advance_ball(spec, next);
        acc.add(next, prob);

        int level = n_elements - 1;
        while (level >= 0 && ++pick[level] == moves[level].size()) pick[level--] = 0;
        if (level < 0) break;
    }
    return std::move(acc.list);
}

}  // namespace mdplab
