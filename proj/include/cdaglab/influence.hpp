#ifndef CDAGLAB_INFLUENCE_HPP
#define CDAGLAB_INFLUENCE_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cdaglab/arch.hpp"
#include "cdaglab/cdag.hpp"

namespace cdaglab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "2", "-5", "3/2"; denominator must not be zero.
Rational parse_rational(const std::string& text);
std::string rational_str(const Rational& r);
Rational rat_pow(const Rational& base, int exp);

/// Exact path-length histogram for one source: counts[len] = number of
/// distinct source-to-sink edge paths of that length. Zero counts omitted.
struct PathHistogram {
    std::map<int, BigInt> counts;

    BigInt total() const;
    bool empty() const { return counts.empty(); }
    bool operator==(const PathHistogram&) const = default;
};

/// Histogram per source, in token order, by one backward pass from the sinks
/// (each node accumulates the length-shifted sum of its children's
/// histograms). Counts are unbounded integers.
std::vector<PathHistogram> path_histograms(const CDag& g);

/// Same contract as path_histograms, by exhaustive depth-first enumeration.
/// Exists as an independent oracle; throws BudgetError past `path_budget`
/// completed paths.
std::vector<PathHistogram> brute_force_histograms(const CDag& g,
                                                  std::uint64_t path_budget = 10'000'000);

/// Number of paths from source 0:i to every node, exact.
std::map<NodeRef, BigInt> paths_from_source(const CDag& g, int source_index);

/// sum over lengths of counts[len] * c^len; c must be positive.
Rational absolute_influence(const PathHistogram& h, const Rational& c);

/// beta_i = delta_i / sum_j delta_j; the betas sum to exactly 1.
/// Throws Error when no source reaches a sink.
std::vector<Rational> relative_influence(const std::vector<PathHistogram>& hists,
                                         const Rational& c);

struct ComplexityProfile {
    StructuralStats stats;
    Rational c;
    std::vector<PathHistogram> histograms;  // per source
    std::vector<Rational> delta;
    std::vector<Rational> beta;
    Rational delta_max;
    Rational beta_max;
    Rational delta_sum;
    BigInt total_paths;
};

ComplexityProfile complexity_profile(const CDag& g, const Rational& c);

/// Histogram rendered as a polynomial in c, descending powers ("7c^4 + 10c^3").
std::string poly_string(const PathHistogram& h);

/// Predicted complexity from the published per-family formulas, evaluated
/// verbatim. The exactness flags say whether the formula is claimed exactly
/// or only up to order of magnitude / as an upper bound; the note records
/// known discrepancies against direct enumeration.
struct ClosedForm {
    Rational delta_max;
    Rational beta_max;
    bool delta_exact_claim = false;
    bool beta_exact_claim = false;
    std::string validity_note;
};

/// Supported families: unirnn, birnn, balancedtree, convpool, transformer,
/// sparsetransformer, decodertransformer. Throws ParseError otherwise.
ClosedForm closed_form(const ArchSpec& arch, const Rational& c);

/// Published hub path-count expression for the adversarial K-sparse pattern:
/// K*K^M + (L-K)*(K^M - 1)/(K - 1), with the geometric sum read as M when K=1.
BigInt adversarial_hub_count_formula(int L, int K, int M);

/// Builds the graph, enumerates exactly, evaluates the closed form and
/// reports both sides. Diagnostic: mismatches are data, not failures.
struct CompareReport {
    ArchSpec arch;
    Rational c;
    StructuralStats stats;
    Rational enumerated_delta_max;
    Rational enumerated_beta_max;
    Rational enumerated_delta_sum;
    BigInt total_paths;       // all sources
    BigInt max_source_paths;  // busiest source
    ClosedForm predicted;
    bool delta_match = false;
    bool beta_match = false;
    double delta_ratio = 0.0;  // enumerated / predicted
    double beta_ratio = 0.0;
};

CompareReport compare_to_closed_form(const ArchSpec& arch, const Rational& c);

}  // namespace cdaglab

#endif
