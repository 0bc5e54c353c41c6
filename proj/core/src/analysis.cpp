#include "mdplab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "mdplab/errors.hpp"
#include "mdplab/mdp_io.hpp"

namespace mdplab {

ExplorationStats exploration_stats(const PairFlags& visited_l, const PairFlags& visited_g,
                                   const PairFlags& universe) {
    if (visited_l.size() != universe.size() || visited_g.size() != universe.size())
        throw ShapeMismatch("visited sets and universe have different sizes");

    std::size_t both = 0, only_l = 0, only_g = 0, universe_size = 0;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        if ((visited_l[i] || visited_g[i]) && !universe[i])
            throw Error("visited pair " + std::to_string(i) + " is outside the universe");
        universe_size += universe[i] ? 1 : 0;
        if (visited_l[i] && visited_g[i]) ++both;
        else if (visited_l[i]) ++only_l;
        else if (visited_g[i]) ++only_g;
    }
    const std::size_t unioned = both + only_l + only_g;
    if (unioned == 0) throw EmptyUnion("both visited sets are empty");

    ExplorationStats stats;
    stats.p_lg = 100.0 * double(both) / double(unioned);
    stats.p_l = 100.0 * double(only_l) / double(unioned);
    stats.p_g = 100.0 * double(only_g) / double(unioned);
    stats.d_lg = stats.p_l + stats.p_g;
    stats.universe_size = universe_size;
    return stats;
}

ExplorationGrid exploration_grid(const PairFlags& visited_l, const PairFlags& visited_g,
                                 StateId num_states, int num_actions) {
    ExplorationGrid grid;
    grid.num_actions = num_actions;
    grid.num_states = num_states;
    grid.codes.assign(std::size_t(num_actions) * num_states, 0);
    for (StateId s = 0; s < num_states; ++s) {
        for (int a = 0; a < num_actions; ++a) {
            const std::size_t pair = std::size_t(s) * num_actions + a;
            const bool l = pair < visited_l.size() && visited_l[pair];
            const bool g = pair < visited_g.size() && visited_g[pair];
            GridCell cell = GridCell::Neither;
            if (l && g) cell = GridCell::Both;
            else if (l) cell = GridCell::OnlyL;
            else if (g) cell = GridCell::OnlyG;
            grid.codes[std::size_t(a) * num_states + s] = std::uint8_t(cell);
        }
    }
    return grid;
}

std::string exploration_grid_csv(const ExplorationGrid& grid) {
    std::ostringstream out;
    for (int a = 0; a < grid.num_actions; ++a) {
        for (StateId s = 0; s < grid.num_states; ++s) {
            if (s) out << ',';
            out << int(grid.at(a, s));
        }
        out << '\n';
    }
    return out.str();
}

std::string exploration_grid_colors_csv() {
    return "code,label,color\n"
           "0,neither,#f0f0f0\n"
           "1,both,#4a4a4a\n"
           "2,only_learnability,#e377c2\n"
           "3,only_generalization,#ff7f0e\n";
}

double auc(const RewardCurve& curve) {
    if (curve.empty()) throw Error("auc of an empty curve");
    if (curve.size() == 1) return curve[0].mean_return;
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double dx = double(curve[i].episode - curve[i - 1].episode);
        area += 0.5 * (curve[i].mean_return + curve[i - 1].mean_return) * dx;
    }
    const double span = double(curve.back().episode - curve.front().episode);
    return area / span;
}

double regret_ratio(const RewardCurve& l, const RewardCurve& g, double r_max) {
    const double auc_l = auc(l);
    const double auc_g = auc(g);
    if (r_max < auc_l || r_max < auc_g)
        throw std::invalid_argument("r_max must dominate both AUCs");
    const double regret_g = r_max - auc_g;
    if (regret_g == 0.0) return std::numeric_limits<double>::infinity();
    return (r_max - auc_l) / regret_g;
}

double best_case_return(const Mdp& mdp) {
    const StateId n = mdp.num_states();
    std::vector<std::uint32_t> dist(n, UINT32_MAX);
    std::deque<StateId> frontier;
    dist[mdp.initial] = 0;
    frontier.push_back(mdp.initial);
    while (!frontier.empty()) {
        const StateId s = frontier.front();
        frontier.pop_front();
        for (ActionId a = 0; a < mdp.num_actions(); ++a)
            for (StateId t : mdp.transitions.row(s, a).succ)
                if (dist[t] == UINT32_MAX) {
                    dist[t] = dist[s] + 1;
                    frontier.push_back(t);
                }
    }

    const double items0 = double(mdp.items_left[mdp.initial]);
    double best = -std::numeric_limits<double>::infinity();
    for (StateId s = 0; s < n; ++s) {
        if (dist[s] == UINT32_MAX || mdp.outcomes[s] == Outcome::Playing) continue;
        const double bonus = mdp.outcomes[s] == Outcome::Win ? mdp.rewards.win_reward
                                                             : mdp.rewards.death_penalty;
        const double eaten = items0 - double(mdp.items_left[s]);
        best = std::max(best, bonus + mdp.rewards.food_reward * eaten +
                                  mdp.rewards.step_penalty * double(dist[s]));
    }
    // No reachable terminal at all: bound by the total item reward.
    if (!std::isfinite(best)) best = mdp.rewards.food_reward * items0;
    return best;
}

namespace {

PairReport analyze_pair(const PairInput& in) {
    PairReport report;
    report.label = in.label;
    report.r_l = mean(in.finals_l);
    report.r_g = mean(in.finals_g);
    report.r_lg = report.r_g - report.r_l;
    report.exploration = exploration_stats(in.visited_l, in.visited_g, in.universe);
    report.auc_l = auc(in.curve_l);
    report.auc_g = auc(in.curve_g);
    report.regret_ratio = regret_ratio(in.curve_l, in.curve_g, in.r_max);
    try {
        const TTestResult tt = welch_t_test(in.finals_l, in.finals_g);
        report.t = tt.t;
        report.p = tt.p;
    } catch (const DegenerateSamples&) {
        report.t = 0.0;
        report.p = 1.0;
    }
    return report;
}

}  // namespace

SuiteReport suite_report(const std::vector<PairInput>& pairs) {
    if (pairs.empty()) throw Error("suite_report needs at least one pair");
    SuiteReport report;
    for (const PairInput& in : pairs) report.pairs.push_back(analyze_pair(in));

    std::vector<double> dlg_g_better, dlg_l_better;
    std::vector<double> dlgs, rlgs;
    for (const PairReport& pr : report.pairs) {
        dlgs.push_back(pr.exploration.d_lg);
        rlgs.push_back(pr.r_lg);
        if (pr.r_lg > 0) dlg_g_better.push_back(pr.exploration.d_lg);
        if (pr.r_lg < 0) dlg_l_better.push_back(pr.exploration.d_lg);
    }
    if (!dlg_g_better.empty() && !dlg_l_better.empty()) {
        report.grouped = true;
        report.mean_dlg_when_g_better = mean(dlg_g_better);
        report.mean_dlg_when_l_better = mean(dlg_l_better);
        try {
            const TTestResult tt = welch_t_test(dlg_l_better, dlg_g_better);
            report.group_t = tt.t;
            report.group_p = tt.p;
            report.group_test_ok = true;
        } catch (const DegenerateSamples&) {
        }
    }
    try {
        const SpearmanResult sp = spearman(dlgs, rlgs);
        report.spearman_rho = sp.rho;
        report.spearman_p = sp.p;
        report.spearman_ok = true;
    } catch (const Error&) {
    }
    return report;
}

std::string SuiteReport::to_csv() const {
    std::ostringstream out;
    out << "pair,r_l,r_g,r_lg,p_lg,p_l,p_g,d_lg,universe,auc_l,auc_g,regret_ratio,t,p\n";
    for (const PairReport& pr : pairs) {
        out << pr.label << ',' << format_double(pr.r_l) << ',' << format_double(pr.r_g) << ','
            << format_double(pr.r_lg) << ',' << format_double(pr.exploration.p_lg) << ','
            << format_double(pr.exploration.p_l) << ',' << format_double(pr.exploration.p_g)
            << ',' << format_double(pr.exploration.d_lg) << ',' << pr.exploration.universe_size
            << ',' << format_double(pr.auc_l) << ',' << format_double(pr.auc_g) << ','
            << format_double(pr.regret_ratio) << ',' << format_double(pr.t) << ','
            << format_double(pr.p) << '\n';
    }
    return out.str();
}

std::string SuiteReport::summary_text() const {
    std::ostringstream out;
    out << "pairs analyzed: " << pairs.size() << "\n\n";
    for (const PairReport& pr : pairs) {
        out << pr.label << ":\n"
            << "  final mean return  L=" << format_double(pr.r_l) << "  G=" << format_double(pr.r_g)
            << "  gap R_LG=" << format_double(pr.r_lg) << (pr.r_lg >= 0 ? "  (G >= L)" : "  (L > G)")
            << "\n"
            << "  exploration  P_LG=" << format_double(pr.exploration.p_lg)
            << "%  P_L=" << format_double(pr.exploration.p_l)
            << "%  P_G=" << format_double(pr.exploration.p_g)
            << "%  D_LG=" << format_double(pr.exploration.d_lg) << "%\n"
            << "  AUC  L=" << format_double(pr.auc_l) << "  G=" << format_double(pr.auc_g)
            << "  regret ratio L/G=" << format_double(pr.regret_ratio) << "\n"
            << "  Welch t=" << format_double(pr.t) << "  p=" << format_double(pr.p) << "\n";
    }
    out << '\n';
    if (grouped) {
        out << "grouped exploration divergence:\n"
            << "  mean D_LG where G outperformed (R_LG > 0): "
            << format_double(mean_dlg_when_g_better) << "%\n"
            << "  mean D_LG where L outperformed (R_LG < 0): "
            << format_double(mean_dlg_when_l_better) << "%\n";
        if (group_test_ok)
            out << "  between-group Welch t=" << format_double(group_t)
                << "  p=" << format_double(group_p) << "\n";
        out << "  direction observed: "
            << (mean_dlg_when_l_better > mean_dlg_when_g_better
                    ? "higher divergence where L outperformed"
                    : "higher divergence where G outperformed")
            << "\n";
    } else {
        out << "grouped exploration divergence: skipped (needs pairs on both sides of R_LG = 0)\n";
    }
    if (spearman_ok) {
        out << "Spearman(D_LG, R_LG): rho=" << format_double(spearman_rho)
            << "  p=" << format_double(spearman_p) << "\n";
        if (grouped) {
            const bool group_says_l = mean_dlg_when_l_better > mean_dlg_when_g_better;
            const bool corr_says_l = spearman_rho < 0;
            if (group_says_l != corr_says_l)
                out << "note: sign discrepancy between the grouped comparison and the "
                       "correlation; higher D_LG associates with "
                    << (group_says_l ? "L" : "G")
                    << " outperforming by groups, while the correlation sign points the other "
                       "way. Both statistics are reported; neither direction is asserted.\n";
        }
    } else {
        out << "Spearman(D_LG, R_LG): skipped (needs >= 3 pairs with non-constant values)\n";
    }
    return out.str();
}

}  // namespace mdplab
