#pragma once

#include <string>
#include <vector>

#include "mdplab/analysis.hpp"
#include "mdplab/harness.hpp"

namespace mdplab {

/// Writes one run directory:
///   spec.echo            resolved configuration echo
///   curve.csv            episode, mean_return, std_return, n_agents
///   per_agent_final.csv  agent_index, seed, final_return
///   visited.bin          population-union pair bitset
///   visited_agents.bin   one bitset per agent
///   legal.bin            legal-pair universe bitset
///   run_meta.json        dimensions, fingerprint, r_max
/// All numbers print in shortest round-trip form; identical results persist
/// to identical bytes.
void write_run(const std::string& dir, const ExperimentSpec& spec, const RunResult& result,
               const std::string& config_echo);

std::string curve_csv(const RewardCurve& curve, int n_agents);
RewardCurve read_curve_csv(const std::string& path);

std::vector<double> read_finals_csv(const std::string& path);

void write_bitset(const std::string& path, const std::vector<std::uint8_t>& flags);
std::vector<std::uint8_t> read_bitset(const std::string& path);

struct RunMeta {
    StateId num_states = 0;
    int num_actions = 0;
    std::uint64_t spec_fingerprint = 0;
    double r_max = 0.0;
    std::string name;
};

RunMeta read_run_meta(const std::string& path);

/// Suite layout on disk: out_dir/<pair-index>_<slug>/{L,G}/... plus
/// manifest.json listing every pair with its directories and status.
void write_suite(const std::string& out_dir, const std::vector<SuitePair>& manifest,
                 const SuiteResult& result, const std::string& config_echo);

/// Rebuilds the analysis inputs for every completed pair in a persisted
/// suite directory.
std::vector<PairInput> read_suite_inputs(const std::string& suite_dir);

void write_suite_report_files(const std::string& out_dir, const SuiteReport& report,
                              const std::vector<PairInput>& pairs);

/// Gnuplot-friendly "episode mean std" columns for one curve.
std::string plot_data(const RewardCurve& curve);

}  // namespace mdplab
