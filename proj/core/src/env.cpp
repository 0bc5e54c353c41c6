#include "mdplab/env.hpp"

#include "mdplab/errors.hpp"

namespace mdplab {

namespace {

constexpr std::uint64_t kStepStreamTag = 0x737465700a55aa01ull;

StateId sample_row(const SparseRow& row, Rng& rng) {
    const double u = rng.next_double();
    double cum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        cum += row.prob[i];
        if (u < cum) return row.succ[i];
    }
    return row.succ.back();  // guard against rounding shortfall
}

void check_step_preconditions(const Mdp& mdp, StateId s, ActionId a) {
    if (s >= mdp.num_states()) throw EnvironmentFault("state id out of range");
    if (mdp.is_terminal(s)) throw IllegalAction("cannot step from a terminal state");
    if (!mdp.transitions.has_row(s, a))
        throw IllegalAction("action " + std::to_string(int(a)) + " is illegal in state " +
                            std::to_string(s));
}

StepOutcome make_outcome(const Mdp& mdp, StateId s, StateId next) {
    if (next >= mdp.num_states()) throw EnvironmentFault("successor outside the state index");
    return {next, mdp.reward(s, next), mdp.is_terminal(next)};
}

}  // namespace

ExactEnvironment::ExactEnvironment(std::shared_ptr<const Mdp> mdp, std::uint64_t stream_seed)
    : mdp_(std::move(mdp)), stream_seed_(stream_seed), rng_(stream_seed) {}

void ExactEnvironment::begin_episode(std::uint64_t episode_key) {
    rng_ = Rng(seed_hash({stream_seed_, kStepStreamTag, episode_key}));
}

StepOutcome ExactEnvironment::step(StateId s, ActionId a) {
    check_step_preconditions(*mdp_, s, a);
    return make_outcome(*mdp_, s, sample_row(mdp_->transitions.row(s, a), rng_));
}

NoisyEnvironment::NoisyEnvironment(std::shared_ptr<const Mdp> mdp, NoiseSpec noise,
                                   std::uint64_t stream_seed)
    : mdp_(std::move(mdp)),
      delta_(*mdp_, noise, seed_hash({noise.seed, stream_seed})),
      stream_seed_(stream_seed),
      rng_(stream_seed) {}

void NoisyEnvironment::begin_episode(std::uint64_t episode_key) {
    episode_key_ = delta_.noise().resample_per_episode ? episode_key : 0;
    row_cache_.clear();
    rng_ = Rng(seed_hash({stream_seed_, kStepStreamTag, episode_key}));
}

StepOutcome NoisyEnvironment::step(StateId s, ActionId a) {
    check_step_preconditions(*mdp_, s, a);
    const std::size_t key = mdp_->transitions.idx(s, a);
    auto it = row_cache_.find(key);
    if (it == row_cache_.end()) {
        PerturbedRow pr = delta_.perturbed_row(s, a, episode_key_);
        if (pr.degenerate_fallback) ++degenerate_rows_;
        it = row_cache_.emplace(key, std::move(pr.row)).first;
    }
    return make_outcome(*mdp_, s, sample_row(it->second, rng_));
}

std::unique_ptr<Environment> make_environment(std::shared_ptr<const Mdp> mdp,
                                              const NoiseSpec& noise, std::uint64_t stream_seed) {
    if (noise.std == 0.0) return std::make_unique<ExactEnvironment>(std::move(mdp), stream_seed);
    return std::make_unique<NoisyEnvironment>(std::move(mdp), noise, stream_seed);
}

}  // namespace mdplab
