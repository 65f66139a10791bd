#ifndef CDAGLAB_CDAG_HPP
#define CDAGLAB_CDAG_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdaglab {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input is structurally malformed (bad JSON, bad flag, bad tree spec, ...).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// A graph failed its invariants where a valid one was required.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Exhaustive enumeration exceeded its path budget.
class BudgetError : public Error {
public:
    explicit BudgetError(const std::string& msg) : Error(msg) {}
};

/// Node handle: level 0 holds the sources (index i = token position i),
/// indices are 1-based within each level.
struct NodeRef {
    int level = 0;
    int index = 0;

    auto operator<=>(const NodeRef&) const = default;
    std::string str() const;
};

/// Directed edge; arg_pos is the position of `from` in the argument list
/// of the span processor applied at `to` (1-based).
struct Edge {
    NodeRef from;
    NodeRef to;
    int arg_pos = 1;

    auto operator<=>(const Edge&) const = default;
};

struct StructuralStats {
    int k = 0;      // max in-degree
    int q = 0;      // max out-degree
    int m = 0;      // sink count
    int depth = 0;  // max level
};

/// Leveled computation DAG. Immutable after construction; all member
/// functions are const and safe to call concurrently.
///
/// Construction is permissive: it only rejects graphs that cannot be
/// represented at all (L < 1, duplicate node ids, duplicate (to, arg_pos)
/// slots, edges touching unknown nodes). Everything else -- level rules,
/// degree rules, index ordering -- is reported by validate() as data.
class CDag {
public:
    CDag(int num_tokens,
         std::vector<NodeRef> nodes,
         std::vector<Edge> edges,
         std::vector<NodeRef> sinks);

    int num_tokens() const { return num_tokens_; }
    const std::vector<NodeRef>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<NodeRef>& sinks() const { return sinks_; }

    bool contains(NodeRef n) const;
    bool is_sink(NodeRef n) const;

    /// Dense id of a node (position in the sorted node list).
    int node_id(NodeRef n) const;
    NodeRef node_at(int id) const { return nodes_[static_cast<size_t>(id)]; }
    int node_count() const { return static_cast<int>(nodes_.size()); }

    /// Parents in argument order (arg_pos 1..k).
    const std::vector<NodeRef>& parents(NodeRef n) const;
    /// Children in (level, index) order.
    const std::vector<NodeRef>& children(NodeRef n) const;
    int in_degree(NodeRef n) const;
    int out_degree(NodeRef n) const;

    /// Every invariant violation, with the offending node or edge named.
    /// Empty means valid. Sources are allowed out-degree 0 (a token whose
    /// influence was pruned away stays in the graph); internal nodes are not.
    std::vector<std::string> validate() const;

    /// Throws ValidationError listing the violations unless validate() is empty.
    void require_valid() const;

    /// Exact degree/sink/depth maxima. Throws ValidationError on an invalid graph.
    StructuralStats structural_stats() const;

    /// Exact equality: same tokens, nodes, edges (with arg_pos) and sink order.
    bool operator==(const CDag& other) const;

private:
    int num_tokens_;
    std::vector<NodeRef> nodes_;   // sorted by (level, index)
    std::vector<Edge> edges_;      // sorted by (to, arg_pos)
    std::vector<NodeRef> sinks_;   // ordered list, feeds the readout in order
    std::vector<std::vector<NodeRef>> parents_;
    std::vector<std::vector<NodeRef>> children_;
};

/// True iff a level-preserving bijection maps edges to edges, sources to
/// sources and the i-th sink to the i-th sink. Argument positions are not
/// constrained (reshaped graphs of one order-independent composition compare
/// equal). Exact: refinement plus backtracking search, intended for the
/// small graphs this library works with.
bool isomorphic(const CDag& a, const CDag& b);

}  // namespace cdaglab

#endif
