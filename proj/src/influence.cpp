#include "cdaglab/influence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cdaglab {

Rational parse_rational(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw ParseError("empty rational");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw ParseError("rational with zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw ParseError("cannot parse rational \"" + text + "\"");
    }
}

std::string rational_str(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

Rational rat_pow(const Rational& base, int exp) {
    if (exp < 0) {
        if (base == 0) throw Error("zero to a negative power");
        return 1 / rat_pow(base, -exp);
    }
    Rational out = 1;
    Rational b = base;
    int e = exp;
    while (e > 0) {
        if (e & 1) out *= b;
        b *= b;
        e >>= 1;
    }
    return out;
}

BigInt PathHistogram::total() const {
    BigInt t = 0;
    for (const auto& [len, count] : counts) t += count;
    return t;
}

std::vector<PathHistogram> path_histograms(const CDag& g) {
    g.require_valid();
    const int n = g.node_count();
    // nodes are sorted by (level, index), so descending id is a reverse
    // topological order (edges strictly increase level)
    std::vector<PathHistogram> h(static_cast<size_t>(n));
    for (int id = n - 1; id >= 0; --id) {
        NodeRef node = g.node_at(id);
        if (g.is_sink(node)) {
            h[static_cast<size_t>(id)].counts[0] = 1;
            continue;
        }
        auto& mine = h[static_cast<size_t>(id)].counts;
        for (NodeRef child : g.children(node))
            for (const auto& [len, count] : h[static_cast<size_t>(g.node_id(child))].counts)
                mine[len + 1] += count;
    }
    std::vector<PathHistogram> out(static_cast<size_t>(g.num_tokens()));
    for (int i = 1; i <= g.num_tokens(); ++i)
        out[static_cast<size_t>(i - 1)] = h[static_cast<size_t>(g.node_id(NodeRef{0, i}))];
    return out;
}

namespace {

void dfs_paths(const CDag& g, NodeRef node, int depth, PathHistogram& h, std::uint64_t budget,
               std::uint64_t& used) {
    if (g.is_sink(node)) {
        if (++used > budget) throw BudgetError("path budget exceeded");
        h.counts[depth] += 1;
        return;
    }
    for (NodeRef child : g.children(node)) dfs_paths(g, child, depth + 1, h, budget, used);
}

}  // namespace

std::vector<PathHistogram> brute_force_histograms(const CDag& g, std::uint64_t path_budget) {
    g.require_valid();
    std::vector<PathHistogram> out(static_cast<size_t>(g.num_tokens()));
    std::uint64_t used = 0;
    for (int i = 1; i <= g.num_tokens(); ++i)
        dfs_paths(g, NodeRef{0, i}, 0, out[static_cast<size_t>(i - 1)], path_budget, used);
    return out;
}

std::map<NodeRef, BigInt> paths_from_source(const CDag& g, int source_index) {
    g.require_valid();
    if (source_index < 1 || source_index > g.num_tokens())
        throw ParseError("source index out of range");
    std::map<NodeRef, BigInt> count;
    count[NodeRef{0, source_index}] = 1;
    for (int id = 0; id < g.node_count(); ++id) {
        NodeRef node = g.node_at(id);
        auto it = count.find(node);
        if (it == count.end() || it->second == 0) continue;
        for (NodeRef child : g.children(node)) count[child] += it->second;
    }
    return count;
}

Rational absolute_influence(const PathHistogram& h, const Rational& c) {
    if (c <= 0) throw Error("influence weight c must be positive");
    Rational sum = 0;
    Rational power = 1;
    int at = 0;
    for (const auto& [len, count] : h.counts) {
        power *= rat_pow(c, len - at);
        at = len;
        sum += Rational(count) * power;
    }
    return sum;
}

std::vector<Rational> relative_influence(const std::vector<PathHistogram>& hists,
                                         const Rational& c) {
    std::vector<Rational> delta;
    Rational sum = 0;
    for (const auto& h : hists) {
        delta.push_back(absolute_influence(h, c));
        sum += delta.back();
    }
    if (sum == 0) throw Error("no source reaches a sink; relative influence undefined");
    for (auto& d : delta) d /= sum;
    return delta;
}

ComplexityProfile complexity_profile(const CDag& g, const Rational& c) {
    ComplexityProfile p;
    p.stats = g.structural_stats();
    p.c = c;
    p.histograms = path_histograms(g);
    p.delta_sum = 0;
    p.total_paths = 0;
    for (const auto& h : p.histograms) {
        p.delta.push_back(absolute_influence(h, c));
        p.delta_sum += p.delta.back();
        p.total_paths += h.total();
    }
    p.beta = relative_influence(p.histograms, c);
    p.delta_max = *std::max_element(p.delta.begin(), p.delta.end());
    p.beta_max = *std::max_element(p.beta.begin(), p.beta.end());
    return p;
}

std::string poly_string(const PathHistogram& h) {
    if (h.counts.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = h.counts.rbegin(); it != h.counts.rend(); ++it) {
        const auto& [len, count] = *it;
        if (!first) os << " + ";
        first = false;
        if (count != 1 || len == 0) os << count.str();
        if (len >= 1) {
            os << "c";
            if (len > 1) os << "^" << len;
        }
    }
    return os.str();
}

BigInt adversarial_hub_count_formula(int L, int K, int M) {
    BigInt k = K;
    BigInt km = 1;
    for (int i = 0; i < M; ++i) km *= k;
    BigInt tail = K == 1 ? BigInt(M) : (km - 1) / (k - 1);
    return k * km + BigInt(L - K) * tail;
}

ClosedForm closed_form(const ArchSpec& arch, const Rational& c) {
    if (c <= 0) throw Error("influence weight c must be positive");
    const int L = arch.L;
    ClosedForm f;
    switch (arch.family) {
        case Family::UniRnn: {
            f.delta_max = rat_pow(c, L - 1);
            f.beta_max = (rat_pow(c, L) - rat_pow(c, L - 1)) /
                         (2 * rat_pow(c, L) - rat_pow(c, L - 1) - 1);
            f.delta_exact_claim = true;
            f.beta_exact_claim = true;
            f.validity_note =
                "delta exact; beta denominator carries a constant term that direct "
                "enumeration does not produce (length-0 path)";
            break;
        }
        case Family::BiRnn: {
            f.delta_max = rat_pow(c, L - 1) + c;
            f.beta_max = (rat_pow(c, L) - rat_pow(c, L - 1) + c * c - c) /
                         (2 * (2 * rat_pow(c, L) - rat_pow(c, L - 1) - 1));
            f.delta_exact_claim = true;
            f.beta_exact_claim = true;
            f.validity_note =
                "published delta is the end-token value c^(L-1)+c; enumeration maximizes at "
                "the second token, c^(L-1)+c^2; beta denominator as for unirnn";
            break;
        }
        case Family::BalancedTree: {
            int depth = 0;
            while ((1 << depth) < L) ++depth;
            f.delta_max = rat_pow(c, depth);
            f.beta_max = Rational(1, L);
            f.delta_exact_claim = true;
            f.beta_exact_claim = true;
            f.validity_note = "exact for L a power of two";
            break;
        }
        case Family::ConvPool: {
            int depth = 0;
            while ((1 << depth) < L) ++depth;
            f.delta_max = rat_pow(c, depth);
            f.beta_max = Rational(2 * arch.pool_p, static_cast<long long>(L) * (arch.pool_p + 1));
            f.delta_exact_claim = false;
            f.beta_exact_claim = false;
            f.validity_note = "order of magnitude only; no exact comparison intended";
            break;
        }
        case Family::Transformer: {
            f.delta_max = rat_pow(Rational(L), arch.M + 1) * rat_pow(c, arch.M + 1);
            f.beta_max = Rational(1, L);
            f.delta_exact_claim = true;
            f.beta_exact_claim = true;
            f.validity_note =
                "beta exact; published delta L^(M+1)c^(M+1) counts one extra all-to-all hop, "
                "enumeration gives L^M paths per source";
            break;
        }
        case Family::SparseTransformer: {
            f.delta_max =
                Rational(L) * rat_pow(Rational(arch.K), arch.M) * rat_pow(c, arch.M + 1);
            f.beta_max = Rational(1, arch.K);
            f.delta_exact_claim = false;
            f.beta_exact_claim = false;
            f.validity_note =
                "upper bounds; the hub count expression K*K^M + (L-K)(K^M-1)/(K-1) "
                "overstates the fully-connected block by one factor of K";
            break;
        }
        case Family::DecoderTransformer: {
            f.delta_max = rat_pow(Rational(L), arch.M) * rat_pow(c, arch.M + 1);
            Rational denom = 1;
            for (int i = 1; i <= L - 1; ++i) denom += rat_pow(Rational(i, L), arch.M);
            f.beta_max = 1 / denom;
            f.delta_exact_claim = false;
            f.beta_exact_claim = false;
            f.validity_note = "order of magnitude only; per-level path counts are exact";
            break;
        }
        default:
            throw ParseError("no closed form for family " + family_name(arch.family));
    }
    return f;
}

CompareReport compare_to_closed_form(const ArchSpec& arch, const Rational& c) {
    CompareReport r;
    r.arch = arch;
    r.c = c;
    CDag g = build_arch(arch);
    ComplexityProfile p = complexity_profile(g, c);
    r.stats = p.stats;
    r.enumerated_delta_max = p.delta_max;
    r.enumerated_beta_max = p.beta_max;
    r.enumerated_delta_sum = p.delta_sum;
    r.total_paths = p.total_paths;
    r.max_source_paths = 0;
    for (const auto& h : p.histograms) r.max_source_paths = std::max(r.max_source_paths, h.total());
    r.predicted = closed_form(arch, c);
    r.delta_match = r.enumerated_delta_max == r.predicted.delta_max;
    r.beta_match = r.enumerated_beta_max == r.predicted.beta_max;
    auto ratio = [](const Rational& a, const Rational& b) {
        if (b == 0) return a == 0 ? 1.0 : std::numeric_limits<double>::infinity();
        return static_cast<double>(Rational(a / b).convert_to<double>());
    };
    r.delta_ratio = ratio(r.enumerated_delta_max, r.predicted.delta_max);
    r.beta_ratio = ratio(r.enumerated_beta_max, r.predicted.beta_max);
    return r;
}

}  // namespace cdaglab
