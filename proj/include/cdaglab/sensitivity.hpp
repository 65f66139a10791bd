#ifndef CDAGLAB_SENSITIVITY_HPP
#define CDAGLAB_SENSITIVITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cdaglab/arch.hpp"
#include "cdaglab/eval.hpp"
#include "cdaglab/influence.hpp"

namespace cdaglab {

/// One perturbation experiment: sample a sequence, swap one token, compare
/// |f(X) - f(X~)| against gamma * delta_j * |e_j - e~_j| with delta_j taken
/// from exact enumeration at the span processor's constant c.
///
/// The influence weight is carried exactly; the span processor uses its
/// double value. Specs are normalized to the graph before running (arity
/// covers the max in-degree, readout arity matches the sink count, one shared
/// dimension).
struct ExperimentSpec {
    ArchSpec arch;
    TokenEncoderSpec enc;
    SpanProcessorSpec sp;
    ReadoutSpec ro;
    Rational c = 2;
    int num_trials = 1000;
    std::uint64_t seed = 1;
    /// Also evaluate trials whose perturbation changed the graph, as flagged
    /// diagnostics; no bound is claimed for them.
    bool diagnostic_changed_graphs = false;
};

struct Trial {
    std::uint64_t trial_seed = 0;
    int j = 0;  // perturbed position, 1-based
    int orig_token = 0;
    int repl_token = 0;
    double lhs = 0.0;    // |f(X) - f(X~)|
    double bound = 0.0;  // gamma * delta_j * |e_j - e~_j|
    double ratio = 0.0;  // 0 when 0/0
    bool discarded = false;
};

struct TrialSummary {
    int trials = 0;
    int discarded = 0;
    int violations = 0;  // ratio > 1 + 1e-9 among kept trials
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
};

struct TrialRun {
    std::vector<Trial> trials;
    TrialSummary summary;
};

TrialRun run_trials(const ExperimentSpec& spec, int threads = 0);

/// CSV log, one row per trial: seed, j, tokens, lhs, bound, ratio, discarded.
std::string trials_to_csv(const std::vector<Trial>& trials);

/// Worst single-token swing over all positions and trials, against the
/// class-level bound C * gamma * delta_max with C the exact embedding-table
/// diameter and delta_max enumerated.
struct ClassBoundReport {
    double max_observed = 0.0;
    double bound = 0.0;
    double embedding_diameter = 0.0;
    double delta_max = 0.0;
    int trials = 0;
    int discarded = 0;
};

ClassBoundReport class_bound_check(const ExperimentSpec& spec, int threads = 0);

}  // namespace cdaglab

#endif
