#include "cdaglab/cdag.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cdaglab {

std::string NodeRef::str() const {
    return std::to_string(level) + ":" + std::to_string(index);
}

namespace {

std::string edge_str(const Edge& e) {
    return "(" + e.from.str() + ")->(" + e.to.str() + ")";
}

}  // namespace

CDag::CDag(int num_tokens,
           std::vector<NodeRef> nodes,
           std::vector<Edge> edges,
           std::vector<NodeRef> sinks)
    : num_tokens_(num_tokens),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      sinks_(std::move(sinks)) {
    if (num_tokens_ < 1)
        throw ParseError("num_tokens must be >= 1, got " + std::to_string(num_tokens_));

    std::sort(nodes_.begin(), nodes_.end());
    for (size_t i = 1; i < nodes_.size(); ++i)
        if (nodes_[i] == nodes_[i - 1])
            throw ParseError("duplicate node " + nodes_[i].str());
    for (const NodeRef& n : nodes_)
        if (n.level < 0 || n.index < 1)
            throw ParseError("node " + n.str() + " has negative level or non-positive index");

    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.to, a.arg_pos, a.from) < std::tie(b.to, b.arg_pos, b.from);
    });
    std::set<std::pair<NodeRef, NodeRef>> seen;
    for (const Edge& e : edges_) {
        if (!contains(e.from) || !contains(e.to))
            throw ParseError("edge " + edge_str(e) + " references unknown node");
        if (e.arg_pos < 1)
            throw ParseError("edge " + edge_str(e) + " has arg_pos < 1");
        if (!seen.insert({e.from, e.to}).second)
            throw ParseError("parallel edge " + edge_str(e));
    }
    for (size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i].to == edges_[i - 1].to && edges_[i].arg_pos == edges_[i - 1].arg_pos)
            throw ParseError("duplicate arg_pos " + std::to_string(edges_[i].arg_pos) +
                             " at node " + edges_[i].to.str());

    for (const NodeRef& s : sinks_)
        if (!contains(s)) throw ParseError("sink " + s.str() + " is not a node");

    parents_.assign(nodes_.size(), {});
    children_.assign(nodes_.size(), {});
    for (const Edge& e : edges_) {
        // edges_ is sorted by (to, arg_pos), so parent lists come out arg-ordered
        parents_[static_cast<size_t>(node_id(e.to))].push_back(e.from);
        children_[static_cast<size_t>(node_id(e.from))].push_back(e.to);
    }
    for (auto& ch : children_) std::sort(ch.begin(), ch.end());
}

bool CDag::contains(NodeRef n) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), n);
}

bool CDag::is_sink(NodeRef n) const {
    return std::find(sinks_.begin(), sinks_.end(), n) != sinks_.end();
}

int CDag::node_id(NodeRef n) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), n);
    if (it == nodes_.end() || *it != n)
        throw Error("unknown node " + n.str());
    return static_cast<int>(it - nodes_.begin());
}

const std::vector<NodeRef>& CDag::parents(NodeRef n) const {
    return parents_[static_cast<size_t>(node_id(n))];
}

const std::vector<NodeRef>& CDag::children(NodeRef n) const {
    return children_[static_cast<size_t>(node_id(n))];
}

int CDag::in_degree(NodeRef n) const { return static_cast<int>(parents(n).size()); }
int CDag::out_degree(NodeRef n) const { return static_cast<int>(children(n).size()); }

std::vector<std::string> CDag::validate() const {
    std::vector<std::string> v;

    // sources: exactly L of them, indices 1..L at level 0
    std::vector<int> source_indices;
    for (const NodeRef& n : nodes_)
        if (n.level == 0) source_indices.push_back(n.index);
    if (static_cast<int>(source_indices.size()) != num_tokens_)
        v.push_back("expected " + std::to_string(num_tokens_) + " sources, found " +
                    std::to_string(source_indices.size()));
    for (size_t i = 0; i < source_indices.size(); ++i)
        if (source_indices[i] != static_cast<int>(i) + 1) {
            v.push_back("source indices must be exactly 1.." + std::to_string(num_tokens_));
            break;
        }

    for (const Edge& e : edges_)
        if (e.from.level >= e.to.level)
            v.push_back("edge decreases level: " + edge_str(e));

    // per-level bookkeeping
    std::map<int, std::vector<NodeRef>> by_level;
    for (const NodeRef& n : nodes_) by_level[n.level].push_back(n);

    // arg positions must be exactly 1..in_degree; edges_ is sorted by (to, arg_pos)
    for (size_t i = 0; i < edges_.size();) {
        size_t j = i;
        int pos = 0;
        bool ok = true;
        while (j < edges_.size() && edges_[j].to == edges_[i].to)
            ok = ok && edges_[j++].arg_pos == ++pos;
        if (!ok) v.push_back("arg_pos values at " + edges_[i].to.str() + " are not 1..in_degree");
        i = j;
    }

    for (size_t id = 0; id < nodes_.size(); ++id) {
        const NodeRef n = nodes_[id];
        const auto& ps = parents_[id];

        if (n.level > 0 && ps.empty())
            v.push_back("internal node " + n.str() + " has no parents");

        if (n.level > 0 && !ps.empty()) {
            int max_parent = 0;
            for (const NodeRef& p : ps) max_parent = std::max(max_parent, p.level);
            if (n.level != max_parent + 1)
                v.push_back("level must be 1+max(parent levels): node " + n.str() +
                            " has max parent level " + std::to_string(max_parent));
        }

        const bool sink = is_sink(n);
        const int out = static_cast<int>(children_[id].size());
        if (sink && out > 0)
            v.push_back("sink " + n.str() + " has outgoing edges");
        if (!sink && n.level > 0 && out == 0)
            v.push_back("dead internal node " + n.str() + " (no outgoing edges, not a sink)");
    }

    {
        std::set<NodeRef> sink_set(sinks_.begin(), sinks_.end());
        if (sink_set.size() != sinks_.size()) v.push_back("duplicate entries in sink list");
        for (const NodeRef& s : sinks_)
            if (s.level == 0) v.push_back("source " + s.str() + " listed as sink");
    }

    // per-level index ordering: indices 1..n, sorted consistently with the
    // arg-ordered parent (level, index) tuples; equal keys collapse
    for (const auto& [level, level_nodes] : by_level) {
        if (level == 0) continue;
        for (size_t i = 0; i < level_nodes.size(); ++i)
            if (level_nodes[i].index != static_cast<int>(i) + 1) {
                v.push_back("indices at level " + std::to_string(level) + " are not 1.." +
                            std::to_string(level_nodes.size()));
                break;
            }
        std::vector<std::vector<std::pair<int, int>>> keys;
        for (const NodeRef& n : level_nodes) {
            std::vector<std::pair<int, int>> key;
            for (const NodeRef& p : parents(n)) key.emplace_back(p.level, p.index);
            keys.push_back(std::move(key));
        }
        for (size_t i = 1; i < keys.size(); ++i) {
            if (keys[i] == keys[i - 1])
                v.push_back("nodes " + level_nodes[i - 1].str() + " and " + level_nodes[i].str() +
                            " share parents and argument order (must collapse)");
            else if (keys[i] < keys[i - 1])
                v.push_back("node " + level_nodes[i].str() +
                            " breaks the within-level ordering induced by its parents");
        }
    }

    return v;
}

void CDag::require_valid() const {
    auto v = validate();
    if (v.empty()) return;
    std::ostringstream os;
    os << "invalid cdag (" << v.size() << " violations):";
    for (const auto& s : v) os << "\n  - " << s;
    throw ValidationError(os.str());
}

StructuralStats CDag::structural_stats() const {
    require_valid();
    StructuralStats s;
    s.m = static_cast<int>(sinks_.size());
    for (size_t id = 0; id < nodes_.size(); ++id) {
        s.k = std::max(s.k, static_cast<int>(parents_[id].size()));
        s.q = std::max(s.q, static_cast<int>(children_[id].size()));
        s.depth = std::max(s.depth, nodes_[id].level);
    }
    return s;
}

bool CDag::operator==(const CDag& other) const {
    return num_tokens_ == other.num_tokens_ && nodes_ == other.nodes_ &&
           edges_ == other.edges_ && sinks_ == other.sinks_;
}

}  // namespace cdaglab
