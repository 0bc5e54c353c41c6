#pragma once

#include <cstdint>

#include "mdplab/mdp.hpp"

namespace mdplab {

/// Gaussian transition-noise parameters. Presets used throughout the
/// experiment protocol are std in {0, 0.1, 0.5, 1}.
struct NoiseSpec {
    double std = 0.0;
    std::uint64_t seed = 0;
    bool resample_per_episode = true;
    /// Above this state count, per-row noise switches from dense draws over
    /// every state to the sparse approximation (legal successors plus
    /// sample_k uniformly chosen non-successors, mass-scaled).
    std::uint32_t dense_support_cap = 20'000;
    std::uint32_t sample_k = 64;

    bool operator==(const NoiseSpec&) const = default;

    void validate() const;
};

struct PerturbedRow {
    SparseRow row;
    bool degenerate_fallback = false;  // every raw value clamped to zero; base row kept
};

/// A perturbed view of a base MDP's transition table.
///
/// Per row (state s, action a) and episode, a dedicated RNG stream seeded by
/// hash(realized_seed, episode, s, a) draws one Gaussian per candidate
/// successor; raw values |S| * p + delta are clamped at zero and the row is
/// renormalized to sum 1. Rows are generated on demand, so the perturbed
/// table never has to be materialized; the per-row seeding makes lazy and
/// eager generation identical and visit-order independent.
class DeltaEnvironment {
  public:
    DeltaEnvironment(const Mdp& base, NoiseSpec noise, std::uint64_t realized_seed);

    const Mdp& base() const { return *base_; }
    const NoiseSpec& noise() const { return noise_; }
    std::uint64_t realized_seed() const { return realized_seed_; }

    /// The perturbed row for one (state, action); with std == 0 this is the
    /// base row, bit for bit.
    PerturbedRow perturbed_row(StateId s, ActionId a, std::uint64_t episode = 0) const;

    /// Full perturbed table for one episode draw. `fallbacks`, when given,
    /// receives the number of degenerate rows that fell back to base.
    TransitionTable materialize(std::uint64_t episode = 0, std::size_t* fallbacks = nullptr) const;

    /// Fresh noise realization keyed by episode_seed; deterministic given
    /// (current realized seed, episode_seed).
    DeltaEnvironment resample(std::uint64_t episode_seed) const;

  private:
    const Mdp* base_;
    NoiseSpec noise_;
    std::uint64_t realized_seed_;
};

/// Eq.-style noise injection: realized seed = noise.seed.
DeltaEnvironment inject_noise(const Mdp& mdp, NoiseSpec noise);

/// Mean total-variation distance between two tables over the same state
/// index and row keys: (1/#rows) * sum over rows of 0.5 * sum_j |a_j - b_j|.
/// Always in [0, 1]. Throws ShapeMismatch.
double table_distance(const TransitionTable& a, const TransitionTable& b);

}  // namespace mdplab
