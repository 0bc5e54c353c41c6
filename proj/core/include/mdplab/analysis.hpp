#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdplab/mdp.hpp"
#include "mdplab/stats.hpp"

namespace mdplab {

struct CurvePoint {
    int episode = 0;
    double mean_return = 0.0;
    double std_return = 0.0;
};
using RewardCurve = std::vector<CurvePoint>;

/// Flat (state, action)-pair flag vector, indexed state * num_actions + action.
using PairFlags = std::vector<std::uint8_t>;

/// Exploration overlap of two agent populations. Percentages are taken over
/// the union of the two visited sets, so p_lg + p_l + p_g == 100; the size
/// of the legal-pair universe is kept for context.
struct ExplorationStats {
    double p_lg = 0.0;  // % visited by both populations
    double p_l = 0.0;   // % visited only by the learnability population
    double p_g = 0.0;   // % visited only by the generalization population
    double d_lg = 0.0;  // p_l + p_g
    std::size_t universe_size = 0;
};

/// Throws EmptyUnion when both sets are empty; throws Error when a visited
/// flag falls outside the universe.
ExplorationStats exploration_stats(const PairFlags& visited_l, const PairFlags& visited_g,
                                   const PairFlags& universe);

enum class GridCell : std::uint8_t { Neither = 0, Both = 1, OnlyL = 2, OnlyG = 3 };

/// Categorical actions-by-states matrix of the two visited sets.
struct ExplorationGrid {
    int num_actions = 0;
    StateId num_states = 0;
    std::vector<std::uint8_t> codes;  // row a, column s: codes[a * num_states + s]

    std::uint8_t at(int a, StateId s) const { return codes[std::size_t(a) * num_states + s]; }
};

ExplorationGrid exploration_grid(const PairFlags& visited_l, const PairFlags& visited_g,
                                 StateId num_states, int num_actions);

/// CSV with one row per action; plus the color-index legend used to render it.
std::string exploration_grid_csv(const ExplorationGrid& grid);
std::string exploration_grid_colors_csv();

/// Trapezoidal integral of the mean return over the episode axis, divided by
/// the episode span (average curve height). A single point is its own AUC.
double auc(const RewardCurve& curve);

/// regret(x) = r_max - auc(x); returns regret(L) / regret(G). Values above 1
/// mean the generalization agent outperformed. Returns +infinity when the
/// generalization regret is zero. Requires r_max >= both AUCs.
double regret_ratio(const RewardCurve& l, const RewardCurve& g, double r_max);

/// Analytic best-case episode return: win reward plus every item's reward
/// minus the minimal number of steps to any winning terminal, where minimal
/// steps come from breadth-first search over the transition support (every
/// positive-probability edge counts). Falls back to the best reachable
/// terminal when no win exists.
double best_case_return(const Mdp& mdp);

/// Everything the per-pair analysis needs, decoupled from how runs are
/// produced or persisted.
struct PairInput {
    std::string label;
    RewardCurve curve_l, curve_g;
    std::vector<double> finals_l, finals_g;  // per-agent final mean returns
    PairFlags visited_l, visited_g, universe;
    StateId num_states = 0;
    int num_actions = 0;
    double r_max = 0.0;
};

struct PairReport {
    std::string label;
    double r_l = 0.0, r_g = 0.0, r_lg = 0.0;
    ExplorationStats exploration;
    double auc_l = 0.0, auc_g = 0.0;
    double regret_ratio = 1.0;
    double t = 0.0, p = 1.0;  // Welch on per-agent finals
};

struct SuiteReport {
    std::vector<PairReport> pairs;

    bool grouped = false;  // both R_LG > 0 and R_LG < 0 groups are non-empty
    double mean_dlg_when_g_better = 0.0;  // mean D_LG over pairs with R_LG > 0
    double mean_dlg_when_l_better = 0.0;  // mean D_LG over pairs with R_LG < 0
    bool group_test_ok = false;
    double group_t = 0.0, group_p = 1.0;

    bool spearman_ok = false;
    double spearman_rho = 0.0, spearman_p = 1.0;

    std::string to_csv() const;
    std::string summary_text() const;
};

/// Per-pair table plus the grouped D_LG comparison and the
/// Spearman(D_LG, R_LG) association across pairs.
SuiteReport suite_report(const std::vector<PairInput>& pairs);

}  // namespace mdplab
