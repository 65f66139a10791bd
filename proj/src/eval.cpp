#include "cdaglab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cdaglab/rng.hpp"
#include "json.hpp"

namespace cdaglab {

namespace {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

double gaussian(std::mt19937_64& rng) {
    // Box-Muller on the raw generator keeps draws stable across libraries
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uni(rng);
    double u2 = uni(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Vec gaussian_vec(std::mt19937_64& rng, int dim) {
    Vec v(static_cast<size_t>(dim));
    for (double& x : v) x = gaussian(rng);
    return v;
}

Vec unit_vec(std::mt19937_64& rng, int dim) {
    Vec v = gaussian_vec(rng, dim);
    double n = norm(v);
    if (n < 1e-12) {
        v.assign(static_cast<size_t>(dim), 0.0);
        v[0] = 1.0;
        return v;
    }
    for (double& x : v) x /= n;
    return v;
}

// Largest singular value via Jacobi eigenvalues of A^T A (exact for our
// small dimensions, unlike power iteration with a weak spectral gap).
double spectral_norm(const std::vector<double>& a, int d) {
    std::vector<double> s(static_cast<size_t>(d) * static_cast<size_t>(d), 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int k = 0; k < d; ++k)
                acc += a[static_cast<size_t>(k) * d + i] * a[static_cast<size_t>(k) * d + j];
            s[static_cast<size_t>(i) * d + j] = acc;
        }
    auto at = [&](int i, int j) -> double& { return s[static_cast<size_t>(i) * d + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double cos_r = 1.0 / std::sqrt(t * t + 1.0);
                double sin_r = t * cos_r;
                for (int k = 0; k < d; ++k) {
                    double skp = at(k, p), skq = at(k, q);
                    at(k, p) = cos_r * skp - sin_r * skq;
                    at(k, q) = sin_r * skp + cos_r * skq;
                }
                for (int k = 0; k < d; ++k) {
                    double spk = at(p, k), sqk = at(q, k);
                    at(p, k) = cos_r * spk - sin_r * sqk;
                    at(q, k) = sin_r * spk + cos_r * sqk;
                }
            }
    }
    double lam = 0.0;
    for (int i = 0; i < d; ++i) lam = std::max(lam, at(i, i));
    return std::sqrt(std::max(lam, 0.0));
}

}  // namespace

TokenEncoder::TokenEncoder(const TokenEncoderSpec& spec) : spec_(spec) {
    if (spec_.vocab_size < 1 || spec_.dim < 1)
        throw ParseError("token encoder needs vocab_size >= 1 and dim >= 1");
    table_.reserve(static_cast<size_t>(spec_.vocab_size));
    for (int t = 0; t < spec_.vocab_size; ++t) {
        auto rng = make_rng(derive_seed(spec_.seed, 0x7 /*embedding stream*/, static_cast<std::uint64_t>(t)));
        table_.push_back(unit_vec(rng, spec_.dim));
    }
}

Vec TokenEncoder::positional_vec(int position) const {
    auto rng = make_rng(derive_seed(spec_.seed, 0x9 /*positional stream*/,
                                    static_cast<std::uint64_t>(position)));
    return unit_vec(rng, spec_.dim);
}

Vec TokenEncoder::encode(int token, int position) const {
    if (token < 0 || token >= spec_.vocab_size)
        throw Error("token id " + std::to_string(token) + " out of vocabulary");
    if (spec_.positional == Positional::None) return table_[static_cast<size_t>(token)];
    Vec v = table_[static_cast<size_t>(token)];
    Vec p = positional_vec(position);
    for (size_t i = 0; i < v.size(); ++i) v[i] += p[i];
    double n = norm(v);
    if (n < 1e-12) return table_[static_cast<size_t>(token)];
    for (double& x : v) x /= n;
    return v;
}

double TokenEncoder::max_pairwise_distance(int num_positions) const {
    double best = 0.0;
    int positions = spec_.positional == Positional::None ? 1 : std::max(1, num_positions);
    for (int pos = 1; pos <= positions; ++pos) {
        std::vector<Vec> encoded;
        for (int t = 0; t < spec_.vocab_size; ++t) encoded.push_back(encode(t, pos));
        for (int a = 0; a < spec_.vocab_size; ++a)
            for (int b = a + 1; b < spec_.vocab_size; ++b) {
                Vec d = encoded[static_cast<size_t>(a)];
                for (size_t i = 0; i < d.size(); ++i) d[i] -= encoded[static_cast<size_t>(b)][i];
                best = std::max(best, norm(d));
            }
    }
    return best;
}

SpanProcessor::SpanProcessor(const SpanProcessorSpec& spec) : spec_(spec) {
    if (spec_.max_arity < 1) throw ParseError("span processor needs max_arity >= 1");
    if (spec_.dim < 1) throw ParseError("span processor needs dim >= 1");
    if (spec_.c < 0) throw ParseError("span processor constant c must be >= 0");
    const int d = spec_.dim;
    for (int slot = 0; slot < spec_.max_arity; ++slot) {
        auto rng = make_rng(derive_seed(spec_.seed, 0x11, static_cast<std::uint64_t>(slot)));
        std::vector<double> a(static_cast<size_t>(d) * static_cast<size_t>(d));
        for (double& x : a) x = gaussian(rng);
        double sigma = spectral_norm(a, d);
        double per_slot = spec_.kind == SpanKind::LinearMean
                              ? spec_.c / static_cast<double>(spec_.max_arity)
                              : spec_.c;
        double scale = sigma < 1e-12 ? 0.0 : per_slot * (1.0 - 1e-12) / sigma;
        for (double& x : a) x *= scale;
        slots_.push_back(std::move(a));
    }
}

Vec SpanProcessor::level_offset(int level) const {
    auto rng = make_rng(derive_seed(spec_.seed, 0x13, static_cast<std::uint64_t>(level)));
    return unit_vec(rng, spec_.dim);
}

Vec SpanProcessor::apply(const std::vector<const Vec*>& args, int level) const {
    if (static_cast<int>(args.size()) > spec_.max_arity)
        throw Error("arity overflow: node has " + std::to_string(args.size()) +
                    " parents but the span processor takes " + std::to_string(spec_.max_arity));
    const int d = spec_.dim;
    Vec out(static_cast<size_t>(d), 0.0);
    for (size_t slot = 0; slot < args.size(); ++slot) {  // missing slots stay padded with zero
        const Vec& v = *args[slot];
        if (static_cast<int>(v.size()) != d) throw Error("argument dimension mismatch");
        const auto& a = slots_[slot];
        for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += a[static_cast<size_t>(i) * d + j] * v[static_cast<size_t>(j)];
            out[static_cast<size_t>(i)] += acc;
        }
    }
    if (spec_.level_dependent) {
        Vec off = level_offset(level);
        for (int i = 0; i < d; ++i) out[static_cast<size_t>(i)] += 0.1 * off[static_cast<size_t>(i)];
    }
    if (spec_.kind == SpanKind::TanhLinear)
        for (double& x : out) x = std::tanh(x);
    return out;
}

double effective_lipschitz(const SpanProcessor& sp, int samples, std::uint64_t seed) {
    const auto& spec = sp.spec();
    auto rng = make_rng(derive_seed(seed, 0x17));
    std::uniform_int_distribution<int> slot_pick(0, spec.max_arity - 1);
    std::uniform_real_distribution<double> mag(-3.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        std::vector<Vec> base;
        for (int j = 0; j < spec.max_arity; ++j) {
            Vec v = gaussian_vec(rng, spec.dim);
            double m = std::pow(10.0, mag(rng));
            for (double& x : v) x *= m;
            base.push_back(std::move(v));
        }
        std::vector<const Vec*> args;
        for (const Vec& v : base) args.push_back(&v);
        Vec out = sp.apply(args);

        int j = slot_pick(rng);
        Vec eps = gaussian_vec(rng, spec.dim);
        double m = std::pow(10.0, mag(rng));
        for (double& x : eps) x *= m;
        double eps_norm = norm(eps);
        if (eps_norm < 1e-12) continue;
        Vec perturbed = base[static_cast<size_t>(j)];
        for (size_t i = 0; i < perturbed.size(); ++i) perturbed[i] += eps[i];
        args[static_cast<size_t>(j)] = &perturbed;
        Vec out2 = sp.apply(args);
        for (size_t i = 0; i < out.size(); ++i) out[i] -= out2[i];
        worst = std::max(worst, norm(out) / eps_norm);
    }
    return worst;
}

Readout::Readout(const ReadoutSpec& spec) : spec_(spec) {
    if (spec_.m < 1) throw ParseError("readout needs m >= 1");
    if (spec_.gamma < 0) throw ParseError("readout gamma must be >= 0");
    for (int n = 0; n < spec_.m; ++n) {
        auto rng = make_rng(derive_seed(spec_.seed, 0x19, static_cast<std::uint64_t>(n)));
        Vec w = unit_vec(rng, spec_.dim);
        for (double& x : w) x *= spec_.gamma;
        weights_.push_back(std::move(w));
    }
}

double Readout::apply(const std::vector<Vec>& sink_values) const {
    if (static_cast<int>(sink_values.size()) != spec_.m)
        throw Error("readout arity mismatch: got " + std::to_string(sink_values.size()) +
                    " sink values, expected " + std::to_string(spec_.m));
    double out = 0.0;
    for (size_t n = 0; n < sink_values.size(); ++n) out += dot(weights_[n], sink_values[n]);
    return out;
}

std::string Valuation::to_json(int indent) const {
    nlohmann::json j;
    j["output"] = output;
    j["values"] = nlohmann::json::object();
    for (const auto& [node, vec] : values) j["values"][node.str()] = vec;
    return j.dump(indent);
}

Valuation evaluate(const CDag& g, const std::vector<int>& tokens, const TokenEncoder& enc,
                   const SpanProcessor& sp, const Readout& ro) {
    if (static_cast<int>(tokens.size()) != g.num_tokens())
        throw Error("token count " + std::to_string(tokens.size()) + " does not match graph (" +
                    std::to_string(g.num_tokens()) + ")");

    std::vector<Vec> value(static_cast<size_t>(g.node_count()));
    Valuation result;
    for (int id = 0; id < g.node_count(); ++id) {  // node ids ascend in level order
        NodeRef node = g.node_at(id);
        if (node.level == 0) {
            value[static_cast<size_t>(id)] =
                enc.encode(tokens[static_cast<size_t>(node.index - 1)], node.index);
        } else {
            std::vector<const Vec*> args;
            for (NodeRef p : g.parents(node))
                args.push_back(&value[static_cast<size_t>(g.node_id(p))]);
            value[static_cast<size_t>(id)] = sp.apply(args, node.level);
        }
        result.values[node] = value[static_cast<size_t>(id)];
    }
    std::vector<Vec> sink_values;
    for (NodeRef s : g.sinks()) sink_values.push_back(value[static_cast<size_t>(g.node_id(s))]);
    result.output = ro.apply(sink_values);
    return result;
}

}  // namespace cdaglab
