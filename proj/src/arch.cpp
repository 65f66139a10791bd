#include "cdaglab/arch.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cdaglab/rng.hpp"
#include "json.hpp"

namespace cdaglab {

namespace {

using nlohmann::json;

// Collects internal nodes with arg-ordered parents, then assigns per-level
// indices by the sort order of the arg-ordered parent (level, index) tuples.
class DagAssembler {
public:
    explicit DagAssembler(int num_tokens) : num_tokens_(num_tokens) {
        if (num_tokens_ < 1) throw ParseError("sequence length must be >= 1");
    }

    int source(int i) const {
        if (i < 1 || i > num_tokens_) throw ParseError("source index out of range");
        return i - 1;
    }

    int combine(std::vector<int> args) {
        if (args.empty()) throw ParseError("internal node needs at least one argument");
        int level = 0;
        for (int a : args) level = std::max(level, level_of(a));
        internals_.push_back({std::move(args), level + 1});
        return num_tokens_ + static_cast<int>(internals_.size()) - 1;
    }

    CDag finish(const std::vector<int>& sink_handles) {
        std::vector<NodeRef> ref(static_cast<size_t>(num_tokens_) + internals_.size());
        for (int i = 0; i < num_tokens_; ++i) ref[static_cast<size_t>(i)] = NodeRef{0, i + 1};

        std::map<int, std::vector<int>> by_level;
        for (size_t h = 0; h < internals_.size(); ++h)
            by_level[internals_[h].level].push_back(num_tokens_ + static_cast<int>(h));

        for (auto& [level, handles] : by_level) {
            std::vector<std::pair<std::vector<std::pair<int, int>>, int>> keyed;
            for (int h : handles) {
                std::vector<std::pair<int, int>> key;
                for (int a : internals_[static_cast<size_t>(h - num_tokens_)].args) {
                    const NodeRef& r = ref[static_cast<size_t>(a)];
                    key.emplace_back(r.level, r.index);
                }
                keyed.emplace_back(std::move(key), h);
            }
            std::stable_sort(keyed.begin(), keyed.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            for (size_t pos = 0; pos < keyed.size(); ++pos)
                ref[static_cast<size_t>(keyed[pos].second)] =
                    NodeRef{level, static_cast<int>(pos) + 1};
        }

        std::vector<NodeRef> nodes(ref);
        std::vector<Edge> edges;
        for (size_t h = 0; h < internals_.size(); ++h) {
            const NodeRef to = ref[static_cast<size_t>(num_tokens_) + h];
            int pos = 0;
            for (int a : internals_[h].args)
                edges.push_back(Edge{ref[static_cast<size_t>(a)], to, ++pos});
        }
        std::vector<NodeRef> sinks;
        for (int h : sink_handles) sinks.push_back(ref[static_cast<size_t>(h)]);
        return CDag(num_tokens_, std::move(nodes), std::move(edges), std::move(sinks));
    }

private:
    int level_of(int h) const {
        return h < num_tokens_ ? 0 : internals_[static_cast<size_t>(h - num_tokens_)].level;
    }

    struct Internal {
        std::vector<int> args;
        int level;
    };
    int num_tokens_;
    std::vector<Internal> internals_;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw ParseError(msg);
}

}  // namespace

CDag build_flat(int L) {
    require(L >= 1, "flat composition needs L >= 1");
    DagAssembler a(L);
    std::vector<int> sinks;
    for (int i = 1; i <= L; ++i) sinks.push_back(a.combine({a.source(i)}));
    return a.finish(sinks);
}

CDag build_uni_rnn(int L) {
    require(L >= 2, "unidirectional recurrence needs L >= 2");
    DagAssembler a(L);
    int h = a.combine({a.source(1), a.source(2)});
    for (int t = 3; t <= L; ++t) h = a.combine({h, a.source(t)});
    return a.finish({h});
}

CDag build_bi_rnn(int L) {
    require(L >= 2, "bidirectional recurrence needs L >= 2");
    DagAssembler a(L);
    int fwd = a.combine({a.source(1), a.source(2)});
    for (int t = 3; t <= L; ++t) fwd = a.combine({fwd, a.source(t)});
    int bwd = a.combine({a.source(L), a.source(L - 1)});
    for (int t = L - 2; t >= 1; --t) bwd = a.combine({bwd, a.source(t)});
    return a.finish({fwd, bwd});
}

namespace {

int balanced_subtree(DagAssembler& a, int lo, int hi) {
    if (lo == hi) return a.source(lo);
    int n = hi - lo + 1;
    int mid = lo + (n + 1) / 2 - 1;  // ceil(n/2) leaves on the left
    return a.combine({balanced_subtree(a, lo, mid), balanced_subtree(a, mid + 1, hi)});
}

}  // namespace

CDag build_balanced_tree(int L) {
    require(L >= 2, "tree recurrence needs L >= 2");
    DagAssembler a(L);
    return a.finish({balanced_subtree(a, 1, L)});
}

namespace {

struct TreeParser {
    const std::string& text;
    size_t pos = 0;
    DagAssembler& assembler;
    std::vector<int> leaves_seen;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    int parse_tree() {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of parse tree");
        if (text[pos] == '(') {
            ++pos;
            int left = parse_tree();
            skip_ws();
            if (pos >= text.size() || text[pos] != ',')
                throw ParseError("parse tree nodes must be binary: expected ','");
            ++pos;
            int right = parse_tree();
            skip_ws();
            if (pos >= text.size() || text[pos] != ')')
                throw ParseError("expected ')' in parse tree");
            ++pos;
            return assembler.combine({left, right});
        }
        if (!std::isdigit(static_cast<unsigned char>(text[pos])))
            throw ParseError("expected leaf number or '(' in parse tree");
        int value = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            value = value * 10 + (text[pos++] - '0');
        leaves_seen.push_back(value);
        return assembler.source(value);
    }
};

int count_leaves(const std::string& tree) {
    int n = 0;
    bool in_number = false;
    for (char ch : tree) {
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            if (!in_number) ++n;
            in_number = true;
        } else {
            in_number = false;
        }
    }
    return n;
}

}  // namespace

CDag build_parse_tree(const std::string& tree) {
    int L = count_leaves(tree);
    require(L >= 2, "parse tree needs at least two leaves");
    DagAssembler a(L);
    TreeParser parser{tree, 0, a, {}};
    int root = parser.parse_tree();
    parser.skip_ws();
    if (parser.pos != tree.size()) throw ParseError("trailing characters after parse tree");
    for (size_t i = 0; i < parser.leaves_seen.size(); ++i)
        if (parser.leaves_seen[i] != static_cast<int>(i) + 1)
            throw ParseError("parse tree leaves must be exactly 1..L in order");
    return a.finish({root});
}

ConvPoolResult build_conv_pool(int L, int w, int p, int m_target, Pooling pooling, bool padding,
                               bool strict, const std::vector<double>* valuation) {
    require(L >= 1, "conv+pool needs L >= 1");
    require(w > 1 && w <= L, "conv window must satisfy 1 < w <= L");
    require(p > 1 && p <= L, "pool window must satisfy 1 < p <= L");
    require(m_target >= 1, "m_target must be >= 1");
    const bool selective = pooling == Pooling::Max || pooling == Pooling::Min;
    if (selective) {
        if (valuation == nullptr || static_cast<int>(valuation->size()) != L)
            throw ParseError("max/min pooling needs a valuation with one activation per token");
    }

    std::vector<NodeRef> nodes;
    std::vector<Edge> edges;
    std::vector<Edge> deactivated;
    for (int i = 1; i <= L; ++i) nodes.push_back(NodeRef{0, i});
    std::vector<double> vals = selective ? *valuation : std::vector<double>();

    int n = L;
    int level = 0;
    while (n > m_target) {
        std::vector<std::pair<int, int>> windows;  // inclusive column spans
        if (padding) {
            for (int i = 1; i <= n; ++i) windows.emplace_back(std::max(1, i - w + 1), i);
        } else {
            if (n < w) {
                if (strict)
                    throw ValidationError("conv window exceeds level width mid-reduction");
                break;  // lenient: current level becomes the sinks
            }
            for (int i = 1; i + w - 1 <= n; ++i) windows.emplace_back(i, i + w - 1);
        }
        const int nw = static_cast<int>(windows.size());
        const int groups = (nw + p - 1) / p;
        if (strict && groups < m_target)
            throw ValidationError("pooling step would undershoot m_target");

        std::vector<double> next_vals(static_cast<size_t>(groups), 0.0);
        for (int g = 0; g < groups; ++g) {
            const int wlo = g * p;
            const int whi = std::min((g + 1) * p, nw);  // last group may be narrower
            const NodeRef to{level + 1, g + 1};
            nodes.push_back(to);

            int span_lo = windows[static_cast<size_t>(wlo)].first;
            int span_hi = windows[static_cast<size_t>(whi - 1)].second;
            int keep_lo = span_lo, keep_hi = span_hi;
            if (selective) {
                auto activation = [&](int wi) {
                    double s = 0.0;
                    for (int c = windows[static_cast<size_t>(wi)].first;
                         c <= windows[static_cast<size_t>(wi)].second; ++c)
                        s += vals[static_cast<size_t>(c - 1)];
                    return s;
                };
                int best = wlo;
                double best_act = activation(wlo);
                for (int wi = wlo + 1; wi < whi; ++wi) {
                    double act = activation(wi);
                    const bool better = pooling == Pooling::Max ? act > best_act : act < best_act;
                    if (better) {
                        best = wi;
                        best_act = act;
                    }
                }
                keep_lo = windows[static_cast<size_t>(best)].first;
                keep_hi = windows[static_cast<size_t>(best)].second;
                next_vals[static_cast<size_t>(g)] = best_act;
                for (int c = span_lo; c <= span_hi; ++c)
                    if (c < keep_lo || c > keep_hi)
                        deactivated.push_back(Edge{NodeRef{level, c}, to, 0});
            }
            int pos = 0;
            for (int c = keep_lo; c <= keep_hi; ++c)
                edges.push_back(Edge{NodeRef{level, c}, to, ++pos});
        }
        vals = std::move(next_vals);
        n = groups;
        ++level;
    }

    std::vector<NodeRef> sinks;
    for (int i = 1; i <= n; ++i) sinks.push_back(NodeRef{level, i});

    if (selective) {
        // drop internal nodes whose pool edge was deactivated all the way up
        std::set<NodeRef> alive(nodes.begin(), nodes.end());
        bool changed = true;
        while (changed) {
            changed = false;
            std::set<NodeRef> has_child;
            for (const Edge& e : edges)
                if (alive.count(e.from) && alive.count(e.to)) has_child.insert(e.from);
            for (const NodeRef& node : nodes) {
                if (!alive.count(node) || node.level == 0 || node.level == level) continue;
                if (!has_child.count(node)) {
                    alive.erase(node);
                    changed = true;
                }
            }
        }
        // re-index surviving internal levels, keeping relative order
        std::map<NodeRef, NodeRef> relabel;
        std::map<int, int> next_index;
        for (const NodeRef& node : nodes) {
            if (!alive.count(node)) continue;
            relabel[node] = node.level == 0 ? node : NodeRef{node.level, ++next_index[node.level]};
        }
        std::vector<NodeRef> pruned_nodes;
        for (const NodeRef& node : nodes)
            if (alive.count(node)) pruned_nodes.push_back(relabel[node]);
        std::vector<Edge> pruned_edges;
        for (const Edge& e : edges)
            if (alive.count(e.from) && alive.count(e.to)) {
                pruned_edges.push_back(Edge{relabel[e.from], relabel[e.to], e.arg_pos});
            }
        // arg positions must stay 1..k after dropped parents
        std::map<NodeRef, int> argc;
        std::sort(pruned_edges.begin(), pruned_edges.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.to, a.arg_pos) < std::tie(b.to, b.arg_pos);
        });
        for (Edge& e : pruned_edges) e.arg_pos = ++argc[e.to];
        std::vector<NodeRef> pruned_sinks;
        for (const NodeRef& s : sinks) pruned_sinks.push_back(relabel.at(s));
        return ConvPoolResult{CDag(L, std::move(pruned_nodes), std::move(pruned_edges),
                                   std::move(pruned_sinks)),
                              n, std::move(deactivated)};
    }

    return ConvPoolResult{CDag(L, std::move(nodes), std::move(edges), std::move(sinks)), n,
                          std::move(deactivated)};
}

namespace {

// Shared scaffold for attention-style graphs: M levels of per-column nodes
// whose first argument is the residual (same-column) parent, then one sink
// over the requested last-level columns.
template <typename AttendedFn>
CDag build_attention(int L, int M, AttendedFn attended, const std::vector<int>& sink_cols) {
    require(L >= 1, "attention composition needs L >= 1");
    require(M >= 1, "attention composition needs M >= 1");
    DagAssembler a(L);
    std::vector<int> prev(static_cast<size_t>(L));
    for (int j = 1; j <= L; ++j) prev[static_cast<size_t>(j - 1)] = a.source(j);
    for (int l = 1; l <= M; ++l) {
        std::vector<int> cur(static_cast<size_t>(L));
        for (int j = 1; j <= L; ++j) {
            std::vector<int> args{prev[static_cast<size_t>(j - 1)]};
            for (int i : attended(l, j))
                if (i != j) args.push_back(prev[static_cast<size_t>(i - 1)]);
            cur[static_cast<size_t>(j - 1)] = a.combine(std::move(args));
        }
        prev = std::move(cur);
    }
    std::vector<int> sink_args;
    for (int j : sink_cols) sink_args.push_back(prev[static_cast<size_t>(j - 1)]);
    return a.finish({a.combine(std::move(sink_args))});
}

std::vector<int> all_columns(int L) {
    std::vector<int> cols(static_cast<size_t>(L));
    for (int j = 1; j <= L; ++j) cols[static_cast<size_t>(j - 1)] = j;
    return cols;
}

}  // namespace

CDag build_transformer(int L, int M) {
    return build_attention(
        L, M, [&](int, int) { return all_columns(L); }, all_columns(L));
}

CDag build_decoder_transformer(int L, int M) {
    return build_attention(
        L, M,
        [&](int, int j) {
            std::vector<int> cols;
            for (int i = 1; i <= j; ++i) cols.push_back(i);
            return cols;
        },
        all_columns(L));
}

CDag build_sparse_transformer(int L, int M, int K, const SparsitySource& sparsity) {
    require(K >= 1 && K <= L, "sparsity must satisfy 1 <= K <= L");
    require(M >= 1, "attention composition needs M >= 1");

    auto attended = [&](int l, int j) -> std::vector<int> {
        switch (sparsity.kind) {
            case SparsityKind::Adversarial: {
                // fixed K-column hub attended by every node; column 1 is the
                // designated hub source
                std::vector<int> cols;
                for (int i = 1; i <= K; ++i) cols.push_back(i);
                return cols;
            }
            case SparsityKind::SeededRandom: {
                auto rng = make_rng(derive_seed(sparsity.seed, static_cast<std::uint64_t>(l),
                                                static_cast<std::uint64_t>(j)));
                std::vector<int> cols = all_columns(L);
                for (int i = 0; i < K; ++i) {
                    std::uniform_int_distribution<int> pick(i, L - 1);
                    std::swap(cols[static_cast<size_t>(i)], cols[static_cast<size_t>(pick(rng))]);
                }
                cols.resize(static_cast<size_t>(K));
                std::sort(cols.begin(), cols.end());
                return cols;
            }
            case SparsityKind::Explicit: {
                if (static_cast<int>(sparsity.levels.size()) != M)
                    throw ParseError("explicit sparsity pattern must cover all attention levels");
                const auto& level = sparsity.levels[static_cast<size_t>(l - 1)];
                if (static_cast<int>(level.size()) != L)
                    throw ParseError("explicit sparsity pattern must cover all columns");
                const auto& cols = level[static_cast<size_t>(j - 1)];
                if (static_cast<int>(cols.size()) != K)
                    throw ParseError("explicit sparsity subsets must have exactly K columns");
                for (int c : cols)
                    if (c < 1 || c > L) throw ParseError("sparsity column out of range");
                std::vector<int> sorted(cols);
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                    throw ParseError("sparsity subsets must not repeat columns");
                return sorted;
            }
        }
        throw ParseError("unknown sparsity kind");
    };

    std::vector<int> sink_cols = all_columns(L);
    if (sparsity.kind == SparsityKind::Explicit && sparsity.sink_attends.has_value()) {
        sink_cols = *sparsity.sink_attends;
        std::sort(sink_cols.begin(), sink_cols.end());
        for (int c : sink_cols)
            if (c < 1 || c > L) throw ParseError("sink attention column out of range");
    }
    return build_attention(L, M, attended, sink_cols);
}

CDag build_example1() { return build_parse_tree("((1,2),((3,4),5))"); }

CDag build_example2() {
    std::vector<NodeRef> nodes;
    for (int i = 1; i <= 7; ++i) nodes.push_back(NodeRef{0, i});
    for (int i = 1; i <= 5; ++i) nodes.push_back(NodeRef{1, i});
    for (int i = 1; i <= 4; ++i) nodes.push_back(NodeRef{2, i});
    nodes.push_back(NodeRef{3, 1});
    nodes.push_back(NodeRef{3, 2});
    nodes.push_back(NodeRef{4, 1});

    auto N = [](int l, int i) { return NodeRef{l, i}; };
    const std::vector<std::pair<NodeRef, std::vector<NodeRef>>> parents = {
        {N(1, 1), {N(0, 1), N(0, 2), N(0, 3)}}, {N(1, 2), {N(0, 2), N(0, 3), N(0, 4)}},
        {N(1, 3), {N(0, 3), N(0, 5), N(0, 7)}}, {N(1, 4), {N(0, 4), N(0, 5), N(0, 6)}},
        {N(1, 5), {N(0, 5), N(0, 6), N(0, 7)}}, {N(2, 1), {N(1, 1), N(1, 2), N(1, 3)}},
        {N(2, 2), {N(1, 1), N(1, 3), N(1, 4)}}, {N(2, 3), {N(1, 2), N(1, 4), N(1, 5)}},
        {N(2, 4), {N(1, 3), N(1, 4), N(1, 5)}}, {N(3, 1), {N(2, 1), N(2, 2), N(2, 3)}},
        {N(3, 2), {N(2, 2), N(2, 3), N(2, 4)}}, {N(4, 1), {N(3, 2), N(2, 3), N(2, 4)}},
    };
    std::vector<Edge> edges;
    for (const auto& [to, ps] : parents) {
        int pos = 0;
        for (const NodeRef& from : ps) edges.push_back(Edge{from, to, ++pos});
    }
    return CDag(7, std::move(nodes), std::move(edges), {N(4, 1), N(3, 1)});
}

CDag build_arch(const ArchSpec& spec) {
    spec.check();
    switch (spec.family) {
        case Family::Flat: return build_flat(spec.L);
        case Family::UniRnn: return build_uni_rnn(spec.L);
        case Family::BiRnn: return build_bi_rnn(spec.L);
        case Family::BalancedTree: return build_balanced_tree(spec.L);
        case Family::ParseTree: return build_parse_tree(spec.tree);
        case Family::ConvPool:
            return build_conv_pool(spec.L, spec.conv_w, spec.pool_p, spec.m_target, spec.pooling,
                                   spec.padding, spec.strict,
                                   spec.valuation.empty() ? nullptr : &spec.valuation)
                .dag;
        case Family::Transformer: return build_transformer(spec.L, spec.M);
        case Family::SparseTransformer:
            return build_sparse_transformer(spec.L, spec.M, spec.K, spec.sparsity);
        case Family::DecoderTransformer: return build_decoder_transformer(spec.L, spec.M);
    }
    throw ParseError("unknown architecture family");
}

void ArchSpec::check() const {
    switch (family) {
        case Family::Flat:
            require(L >= 1, "flat composition needs L >= 1");
            break;
        case Family::UniRnn:
        case Family::BiRnn:
        case Family::BalancedTree:
            require(L >= 2, family_name(family) + " needs L >= 2");
            break;
        case Family::ParseTree:
            require(!tree.empty(), "parse tree family needs a tree");
            break;
        case Family::ConvPool:
            require(L >= 1, "conv+pool needs L >= 1");
            require(conv_w > 1 && conv_w <= L, "conv window must satisfy 1 < w <= L");
            require(pool_p > 1 && pool_p <= L, "pool window must satisfy 1 < p <= L");
            require(m_target >= 1, "m_target must be >= 1");
            if (pooling == Pooling::Max || pooling == Pooling::Min)
                require(static_cast<int>(valuation.size()) == L,
                        "max/min pooling needs a valuation with one activation per token");
            break;
        case Family::Transformer:
        case Family::DecoderTransformer:
            require(L >= 1 && M >= 1, "transformer families need L >= 1 and M >= 1");
            break;
        case Family::SparseTransformer:
            require(L >= 1 && M >= 1, "transformer families need L >= 1 and M >= 1");
            require(K >= 1 && K <= L, "sparsity must satisfy 1 <= K <= L");
            break;
    }
}

std::string family_name(Family f) {
    switch (f) {
        case Family::Flat: return "flat";
        case Family::UniRnn: return "unirnn";
        case Family::BiRnn: return "birnn";
        case Family::BalancedTree: return "balancedtree";
        case Family::ParseTree: return "parsetree";
        case Family::ConvPool: return "convpool";
        case Family::Transformer: return "transformer";
        case Family::SparseTransformer: return "sparsetransformer";
        case Family::DecoderTransformer: return "decodertransformer";
    }
    return "unknown";
}

Family family_from_name(const std::string& name) {
    for (Family f : {Family::Flat, Family::UniRnn, Family::BiRnn, Family::BalancedTree,
                     Family::ParseTree, Family::ConvPool, Family::Transformer,
                     Family::SparseTransformer, Family::DecoderTransformer})
        if (family_name(f) == name) return f;
    throw ParseError("unknown architecture family \"" + name + "\"");
}

namespace {

std::string pooling_name(Pooling p) {
    switch (p) {
        case Pooling::Avg: return "avg";
        case Pooling::Sum: return "sum";
        case Pooling::Max: return "max";
        case Pooling::Min: return "min";
    }
    return "avg";
}

Pooling pooling_from_name(const std::string& name) {
    if (name == "avg") return Pooling::Avg;
    if (name == "sum") return Pooling::Sum;
    if (name == "max") return Pooling::Max;
    if (name == "min") return Pooling::Min;
    throw ParseError("unknown pooling \"" + name + "\"");
}

}  // namespace

std::string ArchSpec::to_json() const {
    json j;
    j["family"] = family_name(family);
    j["len"] = L;
    switch (family) {
        case Family::Transformer:
        case Family::DecoderTransformer: j["blocks"] = M; break;
        case Family::SparseTransformer: {
            j["blocks"] = M;
            j["k"] = K;
            json s;
            s["kind"] = sparsity.kind == SparsityKind::Adversarial ? "adversarial"
                        : sparsity.kind == SparsityKind::SeededRandom ? "random"
                                                                      : "explicit";
            if (sparsity.kind == SparsityKind::SeededRandom) s["seed"] = sparsity.seed;
            if (sparsity.kind == SparsityKind::Explicit) {
                s["levels"] = sparsity.levels;
                if (sparsity.sink_attends) s["sink"] = *sparsity.sink_attends;
            }
            j["sparsity"] = s;
            break;
        }
        case Family::ConvPool:
            j["conv"] = conv_w;
            j["pool"] = pool_p;
            j["m"] = m_target;
            j["pooling"] = pooling_name(pooling);
            j["padding"] = padding;
            j["strict"] = strict;
            if (!valuation.empty()) j["valuation"] = valuation;
            break;
        case Family::ParseTree: j["tree"] = tree; break;
        default: break;
    }
    return j.dump();
}

ArchSpec ArchSpec::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed arch spec JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("family"))
        throw ParseError("arch spec must be an object with a \"family\"");
    ArchSpec spec;
    spec.family = family_from_name(j["family"].get<std::string>());
    if (j.contains("len")) spec.L = j["len"].get<int>();
    if (j.contains("blocks")) spec.M = j["blocks"].get<int>();
    if (j.contains("k")) spec.K = j["k"].get<int>();
    if (j.contains("conv")) spec.conv_w = j["conv"].get<int>();
    if (j.contains("pool")) spec.pool_p = j["pool"].get<int>();
    if (j.contains("m")) spec.m_target = j["m"].get<int>();
    if (j.contains("pooling")) spec.pooling = pooling_from_name(j["pooling"].get<std::string>());
    if (j.contains("padding")) spec.padding = j["padding"].get<bool>();
    if (j.contains("strict")) spec.strict = j["strict"].get<bool>();
    if (j.contains("tree")) spec.tree = j["tree"].get<std::string>();
    if (j.contains("valuation")) spec.valuation = j["valuation"].get<std::vector<double>>();
    if (j.contains("sparsity")) {
        const auto& s = j["sparsity"];
        std::string kind = s.value("kind", "adversarial");
        if (kind == "adversarial") {
            spec.sparsity.kind = SparsityKind::Adversarial;
        } else if (kind == "random") {
            spec.sparsity.kind = SparsityKind::SeededRandom;
            spec.sparsity.seed = s.value("seed", std::uint64_t{0});
        } else if (kind == "explicit") {
            spec.sparsity.kind = SparsityKind::Explicit;
            if (s.contains("levels"))
                spec.sparsity.levels = s["levels"].get<std::vector<std::vector<std::vector<int>>>>();
            if (s.contains("sink")) spec.sparsity.sink_attends = s["sink"].get<std::vector<int>>();
        } else {
            throw ParseError("unknown sparsity kind \"" + kind + "\"");
        }
    }
    return spec;
}

}  // namespace cdaglab
