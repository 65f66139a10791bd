#include "cdaglab/cdag.hpp"

#include <algorithm>
#include <map>
#include <tuple>

// Isomorphism by joint color refinement plus backtracking bijection search.
// Node colors start from (level, in-degree, out-degree, sink position), so a
// match is level-preserving, maps sources to sources and the i-th sink to the
// i-th sink. Argument positions are deliberately not part of the invariant:
// reshaped graphs of one order-independent composition compare equal.
// The search stops at the first consistent bijection, which keeps highly
// symmetric graphs (complete bipartite attention levels) cheap.

namespace cdaglab {

namespace {

struct DenseGraph {
    std::vector<long long> seed;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<int>> children;

    explicit DenseGraph(const CDag& g) {
        const int n = g.node_count();
        seed.resize(static_cast<size_t>(n));
        parents.resize(static_cast<size_t>(n));
        children.resize(static_cast<size_t>(n));
        for (int id = 0; id < n; ++id) {
            NodeRef ref = g.node_at(id);
            for (NodeRef p : g.parents(ref))
                parents[static_cast<size_t>(id)].push_back(g.node_id(p));
            for (NodeRef c : g.children(ref))
                children[static_cast<size_t>(id)].push_back(g.node_id(c));
            std::sort(parents[static_cast<size_t>(id)].begin(), parents[static_cast<size_t>(id)].end());
        }
        for (int id = 0; id < n; ++id) {
            NodeRef ref = g.node_at(id);
            long long s = ref.level;
            s = s * 1000003 + static_cast<long long>(parents[static_cast<size_t>(id)].size());
            s = s * 1000003 + static_cast<long long>(children[static_cast<size_t>(id)].size());
            seed[static_cast<size_t>(id)] = s;
        }
        const auto& sinks = g.sinks();
        for (size_t i = 0; i < sinks.size(); ++i) {
            size_t id = static_cast<size_t>(g.node_id(sinks[i]));
            seed[id] = seed[id] * 1000003 + static_cast<long long>(i) + 1;
        }
    }

    int size() const { return static_cast<int>(seed.size()); }

    bool has_edge(int from, int to) const {
        const auto& ps = parents[static_cast<size_t>(to)];
        return std::binary_search(ps.begin(), ps.end(), from);
    }
};

// One refinement pass over the disjoint union of both graphs, so colors are
// comparable across them. Returns true if any color changed.
bool refine_step(const DenseGraph& a, const DenseGraph& b,
                 std::vector<long long>& ca, std::vector<long long>& cb) {
    using Sig = std::tuple<long long, std::vector<long long>, std::vector<long long>>;
    auto sig_of = [](const DenseGraph& g, const std::vector<long long>& c, size_t i) {
        std::vector<long long> ps, cs;
        for (int p : g.parents[i]) ps.push_back(c[static_cast<size_t>(p)]);
        for (int ch : g.children[i]) cs.push_back(c[static_cast<size_t>(ch)]);
        std::sort(ps.begin(), ps.end());
        std::sort(cs.begin(), cs.end());
        return Sig{c[i], std::move(ps), std::move(cs)};
    };
    std::vector<Sig> sa(ca.size()), sb(cb.size());
    for (size_t i = 0; i < ca.size(); ++i) sa[i] = sig_of(a, ca, i);
    for (size_t i = 0; i < cb.size(); ++i) sb[i] = sig_of(b, cb, i);
    std::map<Sig, long long> rank;
    for (const Sig& s : sa) rank.emplace(s, 0);
    for (const Sig& s : sb) rank.emplace(s, 0);
    long long r = 0;
    for (auto& [sig, value] : rank) value = r++;
    bool changed = false;
    for (size_t i = 0; i < ca.size(); ++i) {
        long long next = rank[sa[i]];
        changed = changed || next != ca[i];
        ca[i] = next;
    }
    for (size_t i = 0; i < cb.size(); ++i) {
        long long next = rank[sb[i]];
        changed = changed || next != cb[i];
        cb[i] = next;
    }
    return changed;
}

struct Matcher {
    const DenseGraph& a;
    const DenseGraph& b;
    const std::vector<long long>& ca;
    const std::vector<long long>& cb;
    std::vector<int> map_ab;  // a id -> b id or -1
    std::vector<bool> used_b;
    std::vector<int> order;   // a ids, small color classes first

    bool consistent(int u, int w) const {
        if (ca[static_cast<size_t>(u)] != cb[static_cast<size_t>(w)]) return false;
        for (int p : a.parents[static_cast<size_t>(u)]) {
            int mp = map_ab[static_cast<size_t>(p)];
            if (mp >= 0 && !b.has_edge(mp, w)) return false;
        }
        for (int c : a.children[static_cast<size_t>(u)]) {
            int mc = map_ab[static_cast<size_t>(c)];
            if (mc >= 0 && !b.has_edge(w, mc)) return false;
        }
        return true;
    }

    bool search(size_t pos) {
        if (pos == order.size()) return true;
        int u = order[pos];
        for (int w = 0; w < b.size(); ++w) {
            if (used_b[static_cast<size_t>(w)] || !consistent(u, w)) continue;
            map_ab[static_cast<size_t>(u)] = w;
            used_b[static_cast<size_t>(w)] = true;
            if (search(pos + 1)) return true;
            map_ab[static_cast<size_t>(u)] = -1;
            used_b[static_cast<size_t>(w)] = false;
        }
        return false;
    }
};

}  // namespace

bool isomorphic(const CDag& a, const CDag& b) {
    a.require_valid();
    b.require_valid();
    if (a.num_tokens() != b.num_tokens() || a.node_count() != b.node_count() ||
        a.edges().size() != b.edges().size() || a.sinks().size() != b.sinks().size())
        return false;

    DenseGraph da(a), db(b);
    std::vector<long long> ca(da.seed), cb(db.seed);
    while (refine_step(da, db, ca, cb)) {
    }

    // class sizes must agree before any search is worth running
    std::map<long long, int> count;
    for (long long c : ca) count[c]++;
    for (long long c : cb) count[c]--;
    for (const auto& [c, n] : count)
        if (n != 0) return false;

    Matcher m{da, db, ca, cb, std::vector<int>(static_cast<size_t>(da.size()), -1),
              std::vector<bool>(static_cast<size_t>(db.size()), false), {}};
    m.order.resize(static_cast<size_t>(da.size()));
    for (int i = 0; i < da.size(); ++i) m.order[static_cast<size_t>(i)] = i;
    std::map<long long, int> class_size;
    for (long long c : ca) class_size[c]++;
    std::vector<std::tuple<int, long long, int>> sort_key;
    sort_key.reserve(m.order.size());
    for (int i = 0; i < da.size(); ++i)
        sort_key.emplace_back(class_size[ca[static_cast<size_t>(i)]], ca[static_cast<size_t>(i)], i);
    std::sort(m.order.begin(), m.order.end(), [&](int x, int y) {
        return sort_key[static_cast<size_t>(x)] < sort_key[static_cast<size_t>(y)];
    });
    return m.search(0);
}

}  // namespace cdaglab
