#include "mdplab/layout.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "mdplab/errors.hpp"

namespace mdplab {

int LayoutSpec::item_index(Cell c) const {
    for (std::size_t i = 0; i < items.size(); ++i)
        if (items[i] == c) return static_cast<int>(i);
    return -1;
}

LayoutSpec LayoutSpec::parse(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    if (lines.size() < 3) throw LayoutInvalid("layout needs at least 3 rows");

    LayoutSpec spec;
    spec.height = static_cast<int>(lines.size());
    spec.width = static_cast<int>(lines[0].size());
    if (spec.width < 3) throw LayoutInvalid("layout needs at least 3 columns");

    int agents = 0, balls = 0;
    for (int y = 0; y < spec.height; ++y) {
        if (static_cast<int>(lines[y].size()) != spec.width)
            throw LayoutInvalid("layout is not rectangular (row " + std::to_string(y) + ")");
        for (int x = 0; x < spec.width; ++x) {
            const char c = lines[y][x];
            const Cell cell{static_cast<std::int8_t>(x), static_cast<std::int8_t>(y)};
            switch (c) {
            case '%':
                break;
            case ' ':
                break;
            case '.':
                spec.items.push_back(cell);
                break;
            case 'P':
                spec.agent_start = cell;
                ++agents;
                break;
            case 'G':
                spec.element_starts.push_back(cell);
                break;
            case 'o':
                spec.ball_start = cell;
                spec.has_ball = true;
                ++balls;
                break;
            default:
                throw LayoutInvalid(std::string("unknown layout character '") + c + "'");
            }
        }
        spec.cells += lines[y];
    }

    for (int x = 0; x < spec.width; ++x)
        if (spec.at(x, 0) != '%' || spec.at(x, spec.height - 1) != '%')
            throw LayoutInvalid("layout border must be walls");
    for (int y = 0; y < spec.height; ++y)
        if (spec.at(0, y) != '%' || spec.at(spec.width - 1, y) != '%')
            throw LayoutInvalid("layout border must be walls");

    if (agents != 1) throw LayoutInvalid("layout must contain exactly one 'P'");
    if (balls > 1) throw LayoutInvalid("layout must contain at most one 'o'");
    if (spec.items.size() > 64) throw LayoutInvalid("layout supports at most 64 items");
    if (static_cast<int>(spec.element_starts.size()) > kMaxElements)
        throw LayoutInvalid("layout supports at most " + std::to_string(kMaxElements) +
                            " stochastic elements");
    return spec;
}

LayoutSpec load_layout_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open layout file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return LayoutSpec::parse(buf.str());
}

namespace {

const std::map<std::string, std::string>& builtin_texts() {
    static const std::map<std::string, std::string> layouts = {
        {"pacman_v2",
         "%%%%%%\n"
         "%P  .%\n"
         "% %% %\n"
         "%.  G%\n"
         "%%%%%%\n"},
        {"pacman_v3",
         "%%%%%%%\n"
         "%P  %.%\n"
         "%  %  %\n"
         "%.%  .%\n"
         "%    G%\n"
         "%%%%%%%\n"},
        {"pacman_v4",
         "%%%%%%%%\n"
         "%P  % .%\n"
         "% %    %\n"
         "% % %% %\n"
         "%   %G %\n"
         "%.%    %\n"
         "%  . G %\n"
         "%%%%%%%%\n"},
        {"pong_p1",
         "%%%%%\n"
         "% G %\n"
         "%   %\n"
         "% o %\n"
         "%   %\n"
         "% P %\n"
         "%%%%%\n"},
        {"pong_p2",
         "%%%%%%\n"
         "%  G %\n"
         "%    %\n"
         "% o  %\n"
         "%    %\n"
         "%    %\n"
         "% P  %\n"
         "%%%%%%\n"},
        {"breakout_b1",
         "%%%%%\n"
         "%...%\n"
         "%   %\n"
         "% o %\n"
         "%   %\n"
         "% P %\n"
         "%%%%%\n"},
        {"breakout_b2",
         "%%%%%%\n"
         "%....%\n"
         "%    %\n"
         "%  o %\n"
         "%    %\n"
         "% P  %\n"
         "%%%%%%\n"},
        {"breakout_b3",
         "%%%%%%\n"
         "%....%\n"
         "% .. %\n"
         "%    %\n"
         "%  o %\n"
         "%    %\n"
         "% P  %\n"
         "%%%%%%\n"},
    };
    return layouts;
}

}  // namespace

const std::string& builtin_layout_text(const std::string& name) {
    const auto& m = builtin_texts();
    auto it = m.find(name);
    if (it == m.end()) throw ConfigError("unknown built-in layout: " + name);
    return it->second;
}

const LayoutSpec& builtin_layout(const std::string& name) {
    static std::map<std::string, LayoutSpec> cache;
    auto it = cache.find(name);
    if (it == cache.end())
        it = cache.emplace(name, LayoutSpec::parse(builtin_layout_text(name))).first;
    return it->second;
}

std::vector<std::string> builtin_layout_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : builtin_texts()) names.push_back(name);
    return names;
}

bool is_builtin_layout(const std::string& name) {
    return builtin_texts().count(name) != 0;
}

}  // namespace mdplab
