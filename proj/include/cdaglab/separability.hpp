#ifndef CDAGLAB_SEPARABILITY_HPP
#define CDAGLAB_SEPARABILITY_HPP

#include <set>
#include <string>
#include <vector>

#include "cdaglab/cdag.hpp"

namespace cdaglab {

/// Cleanly-separable split at node n: its two parents root disjoint
/// sub-graphs whose leaves are part_a and part_b; remainder holds the other
/// token positions. Only defined in q=1, m=1 graphs.
struct PartsDecomposition {
    NodeRef n;
    NodeRef n_a;
    NodeRef n_b;
    std::vector<int> part_a;     // token positions, ascending
    std::vector<int> part_b;
    std::vector<int> remainder;

    bool operator==(const PartsDecomposition&) const = default;
};

/// Empty unless the graph is valid with q = 1 and one sink; otherwise one
/// decomposition per internal node with exactly two parents. Disjointness of
/// the leaf sets follows from q = 1 and is checked.
std::vector<PartsDecomposition> enumerate_parts(const CDag& g);

/// The graph with the sub-graph rooted at `n` contracted away: every strict
/// ancestor of n disappears, n stays as a placeholder with no parents.
/// Compared exactly (labels included).
struct OutsideGraph {
    std::set<NodeRef> nodes;
    std::set<std::pair<NodeRef, NodeRef>> edges;
    std::vector<NodeRef> sinks;
    NodeRef placeholder;

    bool operator==(const OutsideGraph&) const = default;
};

OutsideGraph contract_subdag(const CDag& g, NodeRef n);

/// A graph with token content and a chosen decomposition.
struct AnnotatedCDag {
    CDag dag;
    std::vector<int> tokens;
    PartsDecomposition parts;
};

/// Builds the annotation for the decomposition at node n; throws if n does
/// not decompose the graph.
AnnotatedCDag annotate(CDag dag, std::vector<int> tokens, NodeRef n);

/// Coverage of one test item by a training set: some item shares part_a's
/// token content, some shares part_b's, and some shares the remainder
/// content with an identical graph outside the contracted split nodes.
struct CoverageReport {
    bool has_a_match = false;
    bool has_b_match = false;
    bool has_remainder_match = false;
    int witness_a = -1;  // index into the training list
    int witness_b = -1;
    int witness_remainder = -1;

    bool covered() const { return has_a_match && has_b_match && has_remainder_match; }
};

CoverageReport check_assumption_coverage(const AnnotatedCDag& test,
                                         const std::vector<AnnotatedCDag>& train);

/// Dataset JSON: [{ "cdag": {...}, "tokens": [...], "parts": {"n": [l,i],
/// "n_a": [l,i], "n_b": [l,i]} }, ...]
std::vector<AnnotatedCDag> dataset_from_json(const std::string& text);
std::string dataset_to_json(const std::vector<AnnotatedCDag>& items, int indent = 2);

}  // namespace cdaglab

#endif
