#include "cdaglab/reference_graphs.hpp"

namespace cdaglab::ref {

namespace {

CDag from_parents(int L, const std::vector<std::pair<NodeRef, std::vector<NodeRef>>>& parents,
                  std::vector<NodeRef> sinks) {
    std::vector<NodeRef> nodes;
    for (int i = 1; i <= L; ++i) nodes.push_back(NodeRef{0, i});
    std::vector<Edge> edges;
    for (const auto& [to, ps] : parents) {
        nodes.push_back(to);
        int pos = 0;
        for (const NodeRef& from : ps) edges.push_back(Edge{from, to, ++pos});
    }
    CDag g(L, std::move(nodes), std::move(edges), std::move(sinks));
    g.require_valid();
    return g;
}

NodeRef N(int l, int i) { return NodeRef{l, i}; }

}  // namespace

CDag separable_chain() {
    return from_parents(7,
                        {
                            {N(1, 1), {N(0, 1), N(0, 2)}},
                            {N(1, 2), {N(0, 3), N(0, 4)}},
                            {N(1, 3), {N(0, 5), N(0, 6)}},
                            {N(2, 1), {N(1, 2), N(1, 3)}},
                            {N(3, 1), {N(2, 1), N(1, 1)}},
                            {N(4, 1), {N(3, 1), N(0, 7)}},
                        },
                        {N(4, 1)});
}

CDag separable_scattered() {
    return from_parents(7,
                        {
                            {N(1, 1), {N(0, 1)}},
                            {N(1, 2), {N(0, 2), N(0, 6)}},
                            {N(1, 3), {N(0, 3), N(0, 5)}},
                            {N(1, 4), {N(0, 4), N(0, 7)}},
                            {N(2, 1), {N(1, 2), N(1, 3)}},
                            {N(3, 1), {N(2, 1), N(1, 4)}},
                            {N(4, 1), {N(3, 1), N(1, 1)}},
                        },
                        {N(4, 1)});
}

std::vector<AnnotatedCDag> coverage_quadruple() {
    std::vector<AnnotatedCDag> items;
    // test item: parts {10,11} at {3,4}, {20,21} at {5,6}, remainder {30,31,32}
    items.push_back(annotate(separable_chain(), {30, 31, 10, 11, 20, 21, 32}, N(2, 1)));

    // shares part a content at positions {2,3}
    CDag xa = from_parents(7,
                           {
                               {N(1, 1), {N(0, 2), N(0, 3)}},
                               {N(1, 2), {N(0, 4), N(0, 7)}},
                               {N(1, 3), {N(0, 5), N(0, 6)}},
                               {N(2, 1), {N(1, 1), N(1, 3)}},
                               {N(3, 1), {N(2, 1), N(0, 1)}},
                               {N(4, 1), {N(3, 1), N(1, 2)}},
                           },
                           {N(4, 1)});
    items.push_back(annotate(std::move(xa), {40, 10, 11, 41, 22, 23, 42}, N(2, 1)));

    // shares part b content at positions {6,7}
    CDag xb = from_parents(7,
                           {
                               {N(1, 1), {N(0, 1), N(0, 2)}},
                               {N(1, 2), {N(0, 3), N(0, 4)}},
                               {N(1, 3), {N(0, 6), N(0, 7)}},
                               {N(2, 1), {N(1, 2), N(1, 3)}},
                               {N(3, 1), {N(2, 1), N(0, 5)}},
                               {N(4, 1), {N(3, 1), N(1, 1)}},
                           },
                           {N(4, 1)});
    items.push_back(annotate(std::move(xb), {50, 51, 12, 13, 52, 20, 21}, N(2, 1)));

    // shares the remainder content and the graph outside the split node
    CDag xr = from_parents(7,
                           {
                               {N(1, 1), {N(0, 1), N(0, 2)}},
                               {N(1, 2), {N(0, 3), N(0, 5)}},
                               {N(1, 3), {N(0, 4), N(0, 6)}},
                               {N(2, 1), {N(1, 2), N(1, 3)}},
                               {N(3, 1), {N(2, 1), N(1, 1)}},
                               {N(4, 1), {N(3, 1), N(0, 7)}},
                           },
                           {N(4, 1)});
    items.push_back(annotate(std::move(xr), {30, 31, 14, 24, 15, 25, 32}, N(2, 1)));
    return items;
}

AnnotatedCDag coverage_outside_mutated() {
    // remainder content matches the test item but token 7 attaches one level
    // earlier, so the graphs outside the split differ
    CDag xm = from_parents(7,
                           {
                               {N(1, 1), {N(0, 1), N(0, 2)}},
                               {N(1, 2), {N(0, 3), N(0, 5)}},
                               {N(1, 3), {N(0, 4), N(0, 6)}},
                               {N(2, 1), {N(1, 2), N(1, 3)}},
                               {N(3, 1), {N(2, 1), N(0, 7)}},
                               {N(4, 1), {N(3, 1), N(1, 1)}},
                           },
                           {N(4, 1)});
    return annotate(std::move(xm), {30, 31, 14, 24, 15, 25, 32}, N(2, 1));
}

}  // namespace cdaglab::ref
