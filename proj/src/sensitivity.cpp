#include "cdaglab/sensitivity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "cdaglab/parallel.hpp"
#include "cdaglab/rng.hpp"

namespace cdaglab {

namespace {

bool input_dependent(const ArchSpec& arch) {
    return arch.family == Family::ConvPool &&
           (arch.pooling == Pooling::Max || arch.pooling == Pooling::Min);
}

// Token activations that drive max/min pool selection: the leading embedding
// coordinate, so selection flips genuinely depend on the tokens.
std::vector<double> valuation_from_tokens(const TokenEncoder& enc, const std::vector<int>& tokens) {
    std::vector<double> v;
    v.reserve(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i)
        v.push_back(enc.encode(tokens[i], static_cast<int>(i) + 1)[0]);
    return v;
}

struct Bench {
    ArchSpec arch;
    TokenEncoder enc;
    SpanProcessor sp;
    Readout ro;
    Rational c;
    std::optional<CDag> fixed_graph;       // input-agnostic families
    std::vector<double> fixed_delta;       // per-source, as double

    CDag graph_for(const std::vector<int>& tokens) const {
        if (fixed_graph) return *fixed_graph;
        ArchSpec a = arch;
        a.valuation = valuation_from_tokens(enc, tokens);
        return build_arch(a);
    }

    std::vector<double> deltas_for(const CDag& g) const {
        if (fixed_graph) return fixed_delta;
        std::vector<double> d;
        for (const auto& h : path_histograms(g))
            d.push_back(absolute_influence(h, c).convert_to<double>());
        return d;
    }
};

Bench make_bench(const ExperimentSpec& spec) {
    // Shape probe: for selective pooling take the avg-pool twin, which has the
    // same sink count and an in-degree ceiling over every selected variant.
    ArchSpec arch = spec.arch;
    if (input_dependent(arch)) {
        arch.pooling = Pooling::Avg;
        arch.valuation.clear();
    }
    CDag probe = build_arch(arch);
    StructuralStats stats = probe.structural_stats();

    TokenEncoderSpec enc = spec.enc;
    SpanProcessorSpec sp = spec.sp;
    ReadoutSpec ro = spec.ro;
    enc.dim = sp.dim;
    ro.dim = sp.dim;
    sp.c = Rational(spec.c).convert_to<double>();
    sp.max_arity = std::max(sp.max_arity, stats.k);
    ro.m = stats.m;

    Bench bench{spec.arch, TokenEncoder(enc), SpanProcessor(sp), Readout(ro), spec.c, {}, {}};
    if (!input_dependent(spec.arch)) {
        bench.fixed_graph = probe;
        for (const auto& h : path_histograms(probe))
            bench.fixed_delta.push_back(absolute_influence(h, spec.c).convert_to<double>());
    }
    return bench;
}

std::vector<int> sample_tokens(std::mt19937_64& rng, int L, int vocab) {
    std::uniform_int_distribution<int> pick(0, vocab - 1);
    std::vector<int> tokens(static_cast<size_t>(L));
    for (int& t : tokens) t = pick(rng);
    return tokens;
}

double vec_distance(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

TrialRun run_trials(const ExperimentSpec& spec, int threads) {
    Bench bench = make_bench(spec);
    const int L = spec.arch.L;
    const int vocab = bench.enc.spec().vocab_size;
    const double gamma = bench.ro.spec().gamma;

    TrialRun run;
    run.trials.resize(static_cast<size_t>(spec.num_trials));

    parallel_for(spec.num_trials, threads, [&](int t) {
        Trial& trial = run.trials[static_cast<size_t>(t)];
        trial.trial_seed = derive_seed(spec.seed, 0x31, static_cast<std::uint64_t>(t));
        auto rng = make_rng(trial.trial_seed);

        std::vector<int> tokens = sample_tokens(rng, L, vocab);
        std::uniform_int_distribution<int> pos_pick(1, L);
        std::uniform_int_distribution<int> tok_pick(0, vocab - 1);
        trial.j = pos_pick(rng);
        trial.orig_token = tokens[static_cast<size_t>(trial.j - 1)];
        trial.repl_token = tok_pick(rng);

        std::vector<int> perturbed = tokens;
        perturbed[static_cast<size_t>(trial.j - 1)] = trial.repl_token;

        CDag g = bench.graph_for(tokens);
        if (!bench.fixed_graph) {
            CDag g2 = bench.graph_for(perturbed);
            if (!(g == g2)) {
                trial.discarded = true;
                if (!spec.diagnostic_changed_graphs) return;
                // diagnostic only: evaluate each side on its own graph
                double fx = evaluate(g, tokens, bench.enc, bench.sp, bench.ro).output;
                double fy = evaluate(g2, perturbed, bench.enc, bench.sp, bench.ro).output;
                trial.lhs = std::abs(fx - fy);
                return;
            }
        }

        std::vector<double> delta = bench.deltas_for(g);
        double fx = evaluate(g, tokens, bench.enc, bench.sp, bench.ro).output;
        double fy = evaluate(g, perturbed, bench.enc, bench.sp, bench.ro).output;
        trial.lhs = std::abs(fx - fy);
        double de = vec_distance(bench.enc.encode(trial.orig_token, trial.j),
                                 bench.enc.encode(trial.repl_token, trial.j));
        trial.bound = gamma * delta[static_cast<size_t>(trial.j - 1)] * de;
        if (trial.bound > 0.0)
            trial.ratio = trial.lhs / trial.bound;
        else
            trial.ratio = trial.lhs <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    });

    TrialSummary& s = run.summary;
    s.trials = spec.num_trials;
    double sum = 0.0;
    int kept = 0;
    for (const Trial& t : run.trials) {
        if (t.discarded) {
            ++s.discarded;
            continue;
        }
        ++kept;
        sum += t.ratio;
        s.max_ratio = std::max(s.max_ratio, t.ratio);
        if (t.ratio > 1.0 + 1e-9) ++s.violations;
    }
    s.mean_ratio = kept > 0 ? sum / kept : 0.0;
    return run;
}

std::string trials_to_csv(const std::vector<Trial>& trials) {
    std::ostringstream os;
    os << "trial_seed,j,orig_token,repl_token,lhs,bound,ratio,discarded\n";
    char buf[160];
    for (const Trial& t : trials) {
        std::snprintf(buf, sizeof(buf), "%llu,%d,%d,%d,%.17g,%.17g,%.17g,%d\n",
                      static_cast<unsigned long long>(t.trial_seed), t.j, t.orig_token,
                      t.repl_token, t.lhs, t.bound, t.ratio, t.discarded ? 1 : 0);
        os << buf;
    }
    return os.str();
}

ClassBoundReport class_bound_check(const ExperimentSpec& spec, int threads) {
    Bench bench = make_bench(spec);
    const int L = spec.arch.L;
    const int vocab = bench.enc.spec().vocab_size;
    const double gamma = bench.ro.spec().gamma;

    struct Slot {
        double observed = 0.0;
        double delta_max = 0.0;
        int discarded = 0;
    };
    std::vector<Slot> slots(static_cast<size_t>(spec.num_trials));

    parallel_for(spec.num_trials, threads, [&](int t) {
        Slot& slot = slots[static_cast<size_t>(t)];
        auto rng = make_rng(derive_seed(spec.seed, 0x37, static_cast<std::uint64_t>(t)));
        std::vector<int> tokens = sample_tokens(rng, L, vocab);
        std::uniform_int_distribution<int> tok_pick(0, vocab - 1);

        CDag g = bench.graph_for(tokens);
        std::vector<double> delta = bench.deltas_for(g);
        slot.delta_max = *std::max_element(delta.begin(), delta.end());
        double fx = evaluate(g, tokens, bench.enc, bench.sp, bench.ro).output;

        for (int j = 1; j <= L; ++j) {
            std::vector<int> perturbed = tokens;
            perturbed[static_cast<size_t>(j - 1)] = tok_pick(rng);
            if (!bench.fixed_graph) {
                CDag g2 = bench.graph_for(perturbed);
                if (!(g == g2)) {
                    ++slot.discarded;
                    continue;
                }
            }
            double fy = evaluate(g, perturbed, bench.enc, bench.sp, bench.ro).output;
            slot.observed = std::max(slot.observed, std::abs(fx - fy));
        }
    });

    ClassBoundReport report;
    report.embedding_diameter = bench.enc.max_pairwise_distance(L);
    report.trials = spec.num_trials;
    for (const Slot& s : slots) {
        report.max_observed = std::max(report.max_observed, s.observed);
        report.delta_max = std::max(report.delta_max, s.delta_max);
        report.discarded += s.discarded;
    }
    report.bound = report.embedding_diameter * gamma * report.delta_max;
    return report;
}

}  // namespace cdaglab
