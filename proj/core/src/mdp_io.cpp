#include "mdplab/mdp_io.hpp"

#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mdplab/errors.hpp"

namespace mdplab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string export_mdp_text(const Mdp& mdp) { return export_mdp_text(mdp, mdp.transitions); }

std::string export_mdp_text(const Mdp& mdp, const TransitionTable& table) {
    std::ostringstream out;
    const GameSpec& game = mdp.game;
    out << "mdplab-mdp 1\n";
    out << "game " << game_kind_name(game.kind) << '\n';
    out << "discount " << format_double(mdp.discount) << '\n';
    out << "rewards step=" << format_double(mdp.rewards.step_penalty)
        << " food=" << format_double(mdp.rewards.food_reward)
        << " death=" << format_double(mdp.rewards.death_penalty)
        << " win=" << format_double(mdp.rewards.win_reward) << '\n';
    out << "policies";
    for (const ElementPolicy& ep : game.element_policies) out << ' ' << ep.to_string();
    out << '\n';
    out << "layout " << game.layout.width << ' ' << game.layout.height << '\n';
    for (int y = 0; y < game.layout.height; ++y) {
        for (int x = 0; x < game.layout.width; ++x) out << game.layout.at(x, y);
        out << '\n';
    }
    out << "initial " << mdp.initial << '\n';
    out << "states " << mdp.num_states() << '\n';
    for (StateId s = 0; s < mdp.num_states(); ++s) {
        const GameState& st = mdp.index.states[s];
        out << "s " << s << ' ' << int(st.agent.x) << ' ' << int(st.agent.y);
        for (std::size_t i = 0; i < game.layout.element_starts.size(); ++i)
            out << ' ' << int(st.elements[i].x) << ' ' << int(st.elements[i].y);
        out << ' ' << st.items;
        if (game.layout.has_ball)
            out << ' ' << int(st.ball.x) << ' ' << int(st.ball.y) << ' ' << int(st.vx) << ' '
                << int(st.vy);
        out << '\n';
    }
    out << "rows " << table.row_count() << '\n';
    for (StateId s = 0; s < mdp.num_states(); ++s) {
        for (ActionId a = 0; a < table.num_actions; ++a) {
            const SparseRow& row = table.row(s, a);
            if (row.empty()) continue;
            out << "r " << s << ' ' << int(a) << ' ' << row.size();
            for (std::size_t i = 0; i < row.size(); ++i)
                out << ' ' << row.succ[i] << ' ' << format_double(row.prob[i]);
            out << '\n';
        }
    }
    out << "end\n";
    return out.str();
}

namespace {

struct LineReader {
    std::istringstream in;
    int line_no = 0;
    explicit LineReader(const std::string& text) : in(text) {}

    std::string next() {
        std::string line;
        if (!std::getline(in, line)) throw IoError("mdp document truncated");
        ++line_no;
        return line;
    }
};

[[noreturn]] void bad(const LineReader& r, const std::string& what) {
    throw IoError("mdp document line " + std::to_string(r.line_no) + ": " + what);
}

double parse_reward_field(LineReader& r, std::istringstream& in, const std::string& key) {
    std::string tok;
    if (!(in >> tok) || tok.rfind(key + "=", 0) != 0) bad(r, "expected " + key + "=");
    return std::stod(tok.substr(key.size() + 1));
}

}  // namespace

Mdp import_mdp_text(const std::string& text) {
    LineReader r(text);
    if (r.next() != "mdplab-mdp 1") throw IoError("not an mdplab-mdp document");

    GameSpec game;
    {
        std::istringstream in(r.next());
        std::string kw, name;
        if (!(in >> kw >> name) || kw != "game") bad(r, "expected game header");
        game.kind = game_kind_from_name(name);
    }
    {
        std::istringstream in(r.next());
        std::string kw;
        if (!(in >> kw >> game.discount) || kw != "discount") bad(r, "expected discount");
    }
    {
        std::istringstream in(r.next());
        std::string kw;
        if (!(in >> kw) || kw != "rewards") bad(r, "expected rewards");
        game.rewards.step_penalty = parse_reward_field(r, in, "step");
        game.rewards.food_reward = parse_reward_field(r, in, "food");
        game.rewards.death_penalty = parse_reward_field(r, in, "death");
        game.rewards.win_reward = parse_reward_field(r, in, "win");
    }
    {
        std::istringstream in(r.next());
        std::string kw, tok;
        if (!(in >> kw) || kw != "policies") bad(r, "expected policies");
        while (in >> tok) game.element_policies.push_back(ElementPolicy::parse(tok));
    }
    int width = 0, height = 0;
    {
        std::istringstream in(r.next());
        std::string kw;
        if (!(in >> kw >> width >> height) || kw != "layout") bad(r, "expected layout");
    }
    std::string layout_text;
    for (int y = 0; y < height; ++y) layout_text += r.next() + "\n";
    game.layout = LayoutSpec::parse(layout_text);
    if (game.layout.width != width || game.layout.height != height)
        bad(r, "layout dimensions disagree with header");

    Mdp mdp;
    mdp.game = game;
    mdp.rewards = game.rewards;
    mdp.discount = game.discount;
    {
        std::istringstream in(r.next());
        std::string kw;
        if (!(in >> kw >> mdp.initial) || kw != "initial") bad(r, "expected initial");
    }
    StateId n_states = 0;
    {
        std::istringstream in(r.next());
        std::string kw;
        if (!(in >> kw >> n_states) || kw != "states") bad(r, "expected states");
    }
    mdp.index.states.reserve(n_states);
    for (StateId s = 0; s < n_states; ++s) {
        std::istringstream in(r.next());
        std::string kw;
        StateId id;
        GameState st;
        int ax, ay;
        if (!(in >> kw >> id >> ax >> ay) || kw != "s" || id != s) bad(r, "bad state line");
        st.agent = {static_cast<std::int8_t>(ax), static_cast<std::int8_t>(ay)};
        for (std::size_t i = 0; i < game.layout.element_starts.size(); ++i) {
            int ex, ey;
            if (!(in >> ex >> ey)) bad(r, "bad element cell");
            st.elements[i] = {static_cast<std::int8_t>(ex), static_cast<std::int8_t>(ey)};
        }
        if (!(in >> st.items)) bad(r, "bad item mask");
        if (game.layout.has_ball) {
            int bx, by, vx, vy;
            if (!(in >> bx >> by >> vx >> vy)) bad(r, "bad ball tuple");
            st.ball = {static_cast<std::int8_t>(bx), static_cast<std::int8_t>(by)};
            st.vx = static_cast<std::int8_t>(vx);
            st.vy = static_cast<std::int8_t>(vy);
        }
        mdp.index.states.push_back(st);
        if (!mdp.index.ids.emplace(st, s).second) bad(r, "duplicate state");
    }

    mdp.transitions = TransitionTable::empty_like(n_states, num_actions(game.kind));
    std::size_t n_rows = 0;
    {
        std::istringstream in(r.next());
        std::string kw;
        if (!(in >> kw >> n_rows) || kw != "rows") bad(r, "expected rows");
    }
    for (std::size_t i = 0; i < n_rows; ++i) {
        std::istringstream in(r.next());
        std::string kw;
        StateId s;
        int a;
        std::size_t n;
        if (!(in >> kw >> s >> a >> n) || kw != "r" || s >= n_states ||
            a >= mdp.transitions.num_actions)
            bad(r, "bad row line");
        SparseRow& row = mdp.transitions.row(s, static_cast<ActionId>(a));
        row.succ.resize(n);
        row.prob.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            if (!(in >> row.succ[j] >> row.prob[j])) bad(r, "bad row entry");
    }
    if (r.next() != "end") bad(r, "expected end");

    mdp.legal.resize(n_states);
    mdp.outcomes.resize(n_states);
    mdp.items_left.resize(n_states);
    for (StateId s = 0; s < n_states; ++s) {
        const GameState& st = mdp.index.states[s];
        mdp.outcomes[s] = is_terminal(game, st);
        mdp.items_left[s] = static_cast<std::uint16_t>(std::popcount(st.items));
        if (mdp.outcomes[s] == Outcome::Playing) mdp.legal[s] = legal_agent_actions(game, st);
    }
    return mdp;
}

}  // namespace mdplab
