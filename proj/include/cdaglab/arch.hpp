#ifndef CDAGLAB_ARCH_HPP
#define CDAGLAB_ARCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdaglab/cdag.hpp"

namespace cdaglab {

enum class Family {
    Flat,
    UniRnn,
    BiRnn,
    BalancedTree,
    ParseTree,
    ConvPool,
    Transformer,
    SparseTransformer,
    DecoderTransformer,
};

enum class Pooling { Avg, Sum, Max, Min };

enum class SparsityKind { Adversarial, SeededRandom, Explicit };

/// Attention pattern for the sparse transformer. Explicit patterns give, per
/// attention step and per target column, the K attended source columns; the
/// residual self column is added when absent. `sink_attends` restricts the
/// readout to a subset of last-level columns (default: all of them).
struct SparsitySource {
    SparsityKind kind = SparsityKind::Adversarial;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::vector<int>>> levels;  // [step][column] -> K columns
    std::optional<std::vector<int>> sink_attends;
};

struct ArchSpec {
    Family family = Family::Flat;
    int L = 1;
    int M = 1;         // attention blocks
    int K = 1;         // attention sparsity
    int conv_w = 2;
    int pool_p = 2;
    int m_target = 1;
    Pooling pooling = Pooling::Avg;
    bool padding = false;
    bool strict = false;  // conv+pool: error instead of clamping mid-reduction
    std::string tree;     // parse tree, e.g. "((1,2),((3,4),5))"
    SparsitySource sparsity;
    std::vector<double> valuation;  // per-token activations for max/min pooling

    /// Throws ParseError when parameters are out of range for the family.
    void check() const;

    std::string to_json() const;
    static ArchSpec from_json(const std::string& text);
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

CDag build_flat(int L);
CDag build_uni_rnn(int L);
CDag build_bi_rnn(int L);

/// Balanced binary combination over the tokens in order. Non-powers of two
/// split ceil(n/2) left / floor(n/2) right, recursively.
CDag build_balanced_tree(int L);

/// Binary tree whose leaves are exactly 1..L in order, e.g. "((1,2),((3,4),5))".
CDag build_parse_tree(const std::string& tree);

struct ConvPoolResult {
    CDag dag;
    int actual_m = 0;
    /// Pool edges dropped by max/min selection, in pre-pruning labels.
    std::vector<Edge> deactivated;
};

/// Repeated conv(w)+pool(p) until at most m_target nodes remain; the last
/// pool group may be narrower than p. Max/min pooling needs a valuation and
/// keeps only the winning window per pool node; nodes left without a path to
/// a sink are pruned and the level re-indexed.
ConvPoolResult build_conv_pool(int L, int w, int p, int m_target, Pooling pooling, bool padding,
                               bool strict = false, const std::vector<double>* valuation = nullptr);

/// M all-to-all attention levels; the single sink aggregates the last level.
CDag build_transformer(int L, int M);

CDag build_sparse_transformer(int L, int M, int K, const SparsitySource& sparsity);

/// Causal attention: level edges l:i -> l+1:j exist iff j >= i.
CDag build_decoder_transformer(int L, int M);

/// Reference five-token graph with one two-leaf and one three-leaf branch.
CDag build_example1();
/// Reference seven-token graph with in/out-degree 3, two sinks, skip edges.
CDag build_example2();

/// Dispatch on spec.family; named reference graphs are not families and have
/// their own builders above.
CDag build_arch(const ArchSpec& spec);

}  // namespace cdaglab

#endif
