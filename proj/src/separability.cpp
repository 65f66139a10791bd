#include "cdaglab/separability.hpp"

#include <algorithm>
#include <map>

#include "cdaglab/influence.hpp"
#include "cdaglab/json_io.hpp"
#include "json.hpp"

namespace cdaglab {

namespace {

// Sources with a path into `root`, including root itself when it is one.
std::vector<int> leaf_positions(const CDag& g, NodeRef root) {
    std::vector<int> out;
    std::vector<NodeRef> stack{root};
    std::set<NodeRef> seen;
    while (!stack.empty()) {
        NodeRef n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n.level == 0) {
            out.push_back(n.index);
            continue;
        }
        for (NodeRef p : g.parents(n)) stack.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

PartsDecomposition decompose_at(const CDag& g, NodeRef n) {
    const auto& ps = g.parents(n);
    if (ps.size() != 2)
        throw Error("node " + n.str() + " does not have exactly two parents");
    PartsDecomposition d;
    d.n = n;
    d.n_a = ps[0];
    d.n_b = ps[1];
    d.part_a = leaf_positions(g, d.n_a);
    d.part_b = leaf_positions(g, d.n_b);
    std::vector<int> overlap;
    std::set_intersection(d.part_a.begin(), d.part_a.end(), d.part_b.begin(), d.part_b.end(),
                          std::back_inserter(overlap));
    if (!overlap.empty())
        throw Error("parts at " + n.str() + " overlap; graph is not cleanly separable");
    std::set<int> used(d.part_a.begin(), d.part_a.end());
    used.insert(d.part_b.begin(), d.part_b.end());
    for (int i = 1; i <= g.num_tokens(); ++i)
        if (!used.count(i)) d.remainder.push_back(i);
    return d;
}

}  // namespace

std::vector<PartsDecomposition> enumerate_parts(const CDag& g) {
    StructuralStats stats = g.structural_stats();
    if (stats.q != 1 || stats.m != 1) return {};
    std::vector<PartsDecomposition> out;
    for (const NodeRef& n : g.nodes()) {
        if (n.level == 0 || g.in_degree(n) != 2) continue;
        out.push_back(decompose_at(g, n));
    }
    return out;
}

OutsideGraph contract_subdag(const CDag& g, NodeRef n) {
    if (!g.contains(n)) throw Error("unknown node " + n.str());
    // strict ancestors of n vanish; n itself stays as the placeholder
    std::set<NodeRef> dropped;
    std::vector<NodeRef> stack{n};
    while (!stack.empty()) {
        NodeRef cur = stack.back();
        stack.pop_back();
        for (NodeRef p : g.parents(cur))
            if (dropped.insert(p).second) stack.push_back(p);
    }
    dropped.erase(n);

    OutsideGraph out;
    out.placeholder = n;
    for (const NodeRef& node : g.nodes())
        if (!dropped.count(node)) out.nodes.insert(node);
    for (const Edge& e : g.edges()) {
        if (dropped.count(e.from) || dropped.count(e.to)) continue;
        if (e.to == n) continue;  // the contracted split node keeps no parents
        out.edges.insert({e.from, e.to});
    }
    out.sinks = g.sinks();
    return out;
}

AnnotatedCDag annotate(CDag dag, std::vector<int> tokens, NodeRef n) {
    dag.require_valid();
    if (static_cast<int>(tokens.size()) != dag.num_tokens())
        throw Error("token count does not match the graph");
    StructuralStats stats = dag.structural_stats();
    if (stats.q != 1 || stats.m != 1)
        throw Error("parts are only defined for graphs with q = 1 and one sink");
    PartsDecomposition parts = decompose_at(dag, n);
    return AnnotatedCDag{std::move(dag), std::move(tokens), std::move(parts)};
}

namespace {

std::vector<int> content(const std::vector<int>& tokens, const std::vector<int>& positions) {
    std::vector<int> out;
    for (int p : positions) out.push_back(tokens.at(static_cast<size_t>(p - 1)));
    std::sort(out.begin(), out.end());  // parts are token sets, not position-bound
    return out;
}

}  // namespace

CoverageReport check_assumption_coverage(const AnnotatedCDag& test,
                                         const std::vector<AnnotatedCDag>& train) {
    CoverageReport report;
    const auto a_content = content(test.tokens, test.parts.part_a);
    const auto b_content = content(test.tokens, test.parts.part_b);
    const auto r_content = content(test.tokens, test.parts.remainder);
    const OutsideGraph test_outside = contract_subdag(test.dag, test.parts.n);

    for (size_t i = 0; i < train.size(); ++i) {
        const AnnotatedCDag& item = train[i];
        if (!report.has_a_match && content(item.tokens, item.parts.part_a) == a_content) {
            report.has_a_match = true;
            report.witness_a = static_cast<int>(i);
        }
        if (!report.has_b_match && content(item.tokens, item.parts.part_b) == b_content) {
            report.has_b_match = true;
            report.witness_b = static_cast<int>(i);
        }
        if (!report.has_remainder_match &&
            content(item.tokens, item.parts.remainder) == r_content) {
            OutsideGraph item_outside = contract_subdag(item.dag, item.parts.n);
            if (item_outside == test_outside) {
                report.has_remainder_match = true;
                report.witness_remainder = static_cast<int>(i);
            }
        }
    }
    return report;
}

std::vector<AnnotatedCDag> dataset_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed dataset JSON: ") + e.what());
    }
    if (!j.is_array()) throw ParseError("dataset must be an array");
    std::vector<AnnotatedCDag> out;
    for (const auto& item : j) {
        if (!item.contains("cdag") || !item.contains("tokens") || !item.contains("parts"))
            throw ParseError("dataset item needs \"cdag\", \"tokens\" and \"parts\"");
        CDag dag = from_json(item["cdag"].dump());
        std::vector<int> tokens = item["tokens"].get<std::vector<int>>();
        const auto& p = item["parts"];
        if (!p.contains("n")) throw ParseError("parts annotation needs \"n\"");
        NodeRef n{p["n"][0].get<int>(), p["n"][1].get<int>()};
        out.push_back(annotate(std::move(dag), std::move(tokens), n));
    }
    return out;
}

std::string dataset_to_json(const std::vector<AnnotatedCDag>& items, int indent) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& item : items) {
        nlohmann::json ji;
        ji["cdag"] = nlohmann::json::parse(to_json(item.dag, 0));
        ji["tokens"] = item.tokens;
        ji["parts"]["n"] = {item.parts.n.level, item.parts.n.index};
        ji["parts"]["n_a"] = {item.parts.n_a.level, item.parts.n_a.index};
        ji["parts"]["n_b"] = {item.parts.n_b.level, item.parts.n_b.index};
        j.push_back(ji);
    }
    return j.dump(indent);
}

}  // namespace cdaglab
