#include "mdplab/noise.hpp"

#include <algorithm>
#include <cmath>

#include "mdplab/errors.hpp"
#include "mdplab/rng.hpp"

namespace mdplab {

void NoiseSpec::validate() const {
    if (!(std >= 0.0)) throw std::invalid_argument("noise std must be >= 0");
    if (sample_k == 0) throw std::invalid_argument("noise sample_k must be >= 1");
}

DeltaEnvironment::DeltaEnvironment(const Mdp& base, NoiseSpec noise, std::uint64_t realized_seed)
    : base_(&base), noise_(noise), realized_seed_(realized_seed) {
    noise.validate();
}

DeltaEnvironment inject_noise(const Mdp& mdp, NoiseSpec noise) {
    noise.validate();
    return DeltaEnvironment(mdp, noise, noise.seed);
}

DeltaEnvironment DeltaEnvironment::resample(std::uint64_t episode_seed) const {
    return DeltaEnvironment(*base_, noise_, seed_hash({realized_seed_, episode_seed}));
}

PerturbedRow DeltaEnvironment::perturbed_row(StateId s, ActionId a, std::uint64_t episode) const {
    const SparseRow& base_row = base_->transitions.row(s, a);
    if (noise_.std == 0.0) return {base_row, false};

    const StateId n = base_->num_states();
    Rng rng(seed_hash({realized_seed_, episode, s, a}));

    SparseRow out;
    double total = 0.0;

    if (n <= noise_.dense_support_cap) {
        // Dense draw: one delta per candidate successor in the full index.
        std::size_t k = 0;  // cursor into the sorted base row
        for (StateId j = 0; j < n; ++j) {
            double p = 0.0;
            if (k < base_row.succ.size() && base_row.succ[k] == j) p = base_row.prob[k++];
            const double raw = double(n) * p + rng.normal(noise_.std);
            if (raw > 0.0) {
                out.succ.push_back(j);
                out.prob.push_back(raw);
                total += raw;
            }
        }
    } else {
        // Sparse approximation: noise on legal successors plus sample_k
        // uniformly drawn non-successor candidates. Each sampled candidate
        // stands for (n - L) / sample_k of the skipped ones, so the expected
        // injected mass matches the dense scheme.
        for (std::size_t i = 0; i < base_row.succ.size(); ++i) {
            const double raw = double(n) * base_row.prob[i] + rng.normal(noise_.std);
            if (raw > 0.0) {
                out.succ.push_back(base_row.succ[i]);
                out.prob.push_back(raw);
                total += raw;
            }
        }
        const std::uint32_t k = std::min<std::uint64_t>(noise_.sample_k,
                                                        n - base_row.succ.size());
        const double scale =
            k == 0 ? 0.0 : double(n - base_row.succ.size()) / double(k);
        std::vector<StateId> sampled;
        sampled.reserve(k);
        while (sampled.size() < k) {
            const StateId j = rng.uniform_int(n);
            const bool is_succ =
                std::binary_search(base_row.succ.begin(), base_row.succ.end(), j);
            if (is_succ || std::find(sampled.begin(), sampled.end(), j) != sampled.end())
                continue;
            sampled.push_back(j);
        }
        std::sort(sampled.begin(), sampled.end());
        for (StateId j : sampled) {
            const double raw = rng.normal(noise_.std) * scale;
            if (raw > 0.0) {
                out.succ.push_back(j);
                out.prob.push_back(raw);
                total += raw;
            }
        }
    }

    if (total <= 0.0) return {base_row, true};

    if (!std::is_sorted(out.succ.begin(), out.succ.end())) {
        std::vector<std::size_t> order(out.succ.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t l, std::size_t r) { return out.succ[l] < out.succ[r]; });
        SparseRow sorted;
        sorted.succ.reserve(out.succ.size());
        sorted.prob.reserve(out.prob.size());
        for (std::size_t i : order) {
            sorted.succ.push_back(out.succ[i]);
            sorted.prob.push_back(out.prob[i]);
        }
        out = std::move(sorted);
    }
    for (double& p : out.prob) p /= total;
    return {std::move(out), false};
}

TransitionTable DeltaEnvironment::materialize(std::uint64_t episode, std::size_t* fallbacks) const {
    const Mdp& mdp = *base_;
    TransitionTable table = TransitionTable::empty_like(mdp.num_states(), mdp.num_actions());
    std::size_t degenerate = 0;
    for (StateId s = 0; s < mdp.num_states(); ++s) {
        for (ActionId a : mdp.legal[s]) {
            PerturbedRow pr = perturbed_row(s, a, episode);
            if (pr.degenerate_fallback) ++degenerate;
            table.row(s, a) = std::move(pr.row);
        }
    }
    if (fallbacks) *fallbacks = degenerate;
    return table;
}

double table_distance(const TransitionTable& a, const TransitionTable& b) {
    if (a.num_actions != b.num_actions || a.rows.size() != b.rows.size())
        throw ShapeMismatch("transition tables have different shapes");
    double sum = 0.0;
    std::size_t n_rows = 0;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const SparseRow& ra = a.rows[i];
        const SparseRow& rb = b.rows[i];
        if (ra.empty() != rb.empty())
            throw ShapeMismatch("transition tables have different row keys");
        if (ra.empty()) continue;
        ++n_rows;
        double tv = 0.0;
        std::size_t ia = 0, ib = 0;
        while (ia < ra.size() || ib < rb.size()) {
            if (ib >= rb.size() || (ia < ra.size() && ra.succ[ia] < rb.succ[ib]))
                tv += std::abs(ra.prob[ia++]);
            else if (ia >= ra.size() || rb.succ[ib] < ra.succ[ia])
                tv += std::abs(rb.prob[ib++]);
            else {
                tv += std::abs(ra.prob[ia] - rb.prob[ib]);
                ++ia, ++ib;
            }
        }
        sum += 0.5 * tv;
    }
    return n_rows == 0 ? 0.0 : sum / double(n_rows);
}

}  // namespace mdplab
