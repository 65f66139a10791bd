#ifndef CDAGLAB_EVAL_HPP
#define CDAGLAB_EVAL_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "cdaglab/cdag.hpp"

namespace cdaglab {

using Vec = std::vector<double>;

enum class Positional { None, Additive };

/// Deterministic embedding table; rows are rescaled to unit norm so every
/// encoding has norm <= 1.
struct TokenEncoderSpec {
    int vocab_size = 16;
    int dim = 16;
    std::uint64_t seed = 1;
    Positional positional = Positional::None;
};

class TokenEncoder {
public:
    explicit TokenEncoder(const TokenEncoderSpec& spec);

    const TokenEncoderSpec& spec() const { return spec_; }
    Vec encode(int token, int position) const;

    /// Exact max over token pairs (and positions 1..num_positions when the
    /// encoding is positional) of the encoding distance.
    double max_pairwise_distance(int num_positions) const;

private:
    Vec positional_vec(int position) const;

    TokenEncoderSpec spec_;
    std::vector<Vec> table_;
};

enum class SpanKind {
    LinearMean,       // sum_j (c/K) A_j v_j, each A_j spectrally normalized
    TanhLinear,       // tanh(sum_j c A_j v_j), componentwise
    PaddedFixedArity, // sum_j c A_j v_j; per-argument constant is exactly c
};

/// Per-argument Lipschitz constant is at most `c` by construction for every
/// kind. Nodes with fewer than max_arity parents are padded with the zero
/// vector, which is inert under all kinds.
struct SpanProcessorSpec {
    SpanKind kind = SpanKind::LinearMean;
    double c = 1.0;
    int max_arity = 2;
    int dim = 16;
    std::uint64_t seed = 2;
    bool level_dependent = false;  // adds a fixed per-level offset (Lipschitz-neutral)
};

class SpanProcessor {
public:
    explicit SpanProcessor(const SpanProcessorSpec& spec);

    const SpanProcessorSpec& spec() const { return spec_; }
    Vec apply(const std::vector<const Vec*>& args, int level = 0) const;

    /// Scaled per-slot matrices (row-major dim x dim), for diagnostics and
    /// independent re-computation in tests.
    const std::vector<std::vector<double>>& slot_matrices() const { return slots_; }

private:
    SpanProcessorSpec spec_;
    std::vector<std::vector<double>> slots_;  // row-major dim x dim per slot, scaled
    Vec level_offset(int level) const;        // derived from the seed, no shared state
};

/// Monte-Carlo lower bound on the true per-argument Lipschitz constant:
/// max over sampled (inputs, slot, perturbation) of |delta out| / |eps|.
double effective_lipschitz(const SpanProcessor& sp, int samples = 10000, std::uint64_t seed = 7);

/// Linear readout: sum of per-sink functionals, each of norm exactly gamma,
/// so |h(u) - h(u')| <= gamma * sum |u_n - u'_n|.
struct ReadoutSpec {
    int m = 1;
    double gamma = 1.0;
    int dim = 16;
    std::uint64_t seed = 3;
};

class Readout {
public:
    explicit Readout(const ReadoutSpec& spec);

    const ReadoutSpec& spec() const { return spec_; }
    double apply(const std::vector<Vec>& sink_values) const;

private:
    ReadoutSpec spec_;
    std::vector<Vec> weights_;
};

struct Valuation {
    std::map<NodeRef, Vec> values;
    double output = 0.0;

    std::string to_json(int indent = 2) const;
};

/// Runs the composition over the graph in level order: sources take their
/// token encodings, internal nodes apply the span processor to their parents
/// in argument order, the readout maps the sink values (in sink order) to the
/// output. Throws on token/arity mismatches.
Valuation evaluate(const CDag& g, const std::vector<int>& tokens, const TokenEncoder& enc,
                   const SpanProcessor& sp, const Readout& ro);

}  // namespace cdaglab

#endif
