#include "cdaglab.h"

#include <cstring>
#include <new>
#include <string>

#include "cdaglab/arch.hpp"
#include "cdaglab/influence.hpp"
#include "cdaglab/json_io.hpp"
#include "cdaglab/report.hpp"
#include "cdaglab/sensitivity.hpp"
#include "cdaglab/separability.hpp"
#include "cdaglab/suite.hpp"
#include "json.hpp"

using namespace cdaglab;

struct cdaglab_graph {
    CDag dag;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_err(char** err, const std::string& msg) {
    if (err != nullptr) *err = dup_string(msg);
}

cdaglab_status classify(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return CDAGLAB_ERR_PARSE;
    if (dynamic_cast<const ValidationError*>(&e)) return CDAGLAB_ERR_INVALID;
    if (dynamic_cast<const BudgetError*>(&e)) return CDAGLAB_ERR_BUDGET;
    return CDAGLAB_ERR_FAILURE;
}

template <typename Fn>
cdaglab_status guarded(char** err, Fn&& fn) {
    try {
        fn();
        return CDAGLAB_OK;
    } catch (const std::exception& e) {
        set_err(err, e.what());
        const auto* as_error = dynamic_cast<const Error*>(&e);
        return as_error != nullptr ? classify(e) : CDAGLAB_ERR_FAILURE;
    } catch (...) {
        set_err(err, "unknown error");
        return CDAGLAB_ERR_FAILURE;
    }
}

CDag build_from_spec_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (!j.is_discarded() && j.is_object() && j.contains("family")) {
        std::string family = j["family"].get<std::string>();
        if (family == "example1") return build_example1();
        if (family == "example2") return build_example2();
    }
    return build_arch(ArchSpec::from_json(text));
}

}  // namespace

extern "C" {

const char* cdaglab_version(void) { return "1.0.0"; }

void cdaglab_string_free(char* s) { delete[] s; }

void cdaglab_graph_free(cdaglab_graph* g) { delete g; }

cdaglab_status cdaglab_build(const char* arch_json, cdaglab_graph** out, char** err) {
    if (arch_json == nullptr || out == nullptr) {
        set_err(err, "null argument");
        return CDAGLAB_ERR_PARSE;
    }
    return guarded(err, [&] { *out = new cdaglab_graph{build_from_spec_json(arch_json)}; });
}

cdaglab_status cdaglab_graph_from_json(const char* json, cdaglab_graph** out, char** err) {
    if (json == nullptr || out == nullptr) {
        set_err(err, "null argument");
        return CDAGLAB_ERR_PARSE;
    }
    return guarded(err, [&] { *out = new cdaglab_graph{from_json(json)}; });
}

cdaglab_status cdaglab_graph_to_json(const cdaglab_graph* g, char** out) {
    if (g == nullptr || out == nullptr) return CDAGLAB_ERR_PARSE;
    return guarded(nullptr, [&] { *out = dup_string(to_json(g->dag)); });
}

cdaglab_status cdaglab_graph_to_dot(const cdaglab_graph* g, const char* options_json, char** out,
                                    char** err) {
    if (g == nullptr || out == nullptr) {
        set_err(err, "null argument");
        return CDAGLAB_ERR_PARSE;
    }
    return guarded(err, [&] {
        DotOptions options;
        if (options_json != nullptr && options_json[0] != '\0') {
            nlohmann::json j = nlohmann::json::parse(options_json);
            options.rankdir = j.value("rankdir", options.rankdir);
            options.fill = j.value("fill", options.fill);
            options.show_arg_pos = j.value("show_arg_pos", options.show_arg_pos);
        }
        *out = dup_string(to_dot(g->dag, options));
    });
}

cdaglab_status cdaglab_graph_validate(const cdaglab_graph* g, char** violations_json) {
    if (g == nullptr || violations_json == nullptr) return CDAGLAB_ERR_PARSE;
    return guarded(nullptr, [&] {
        nlohmann::json j = nlohmann::json::array();
        for (const std::string& v : g->dag.validate()) j.push_back(v);
        *violations_json = dup_string(j.dump(2));
    });
}

cdaglab_status cdaglab_graph_stats(const cdaglab_graph* g, int* k, int* q, int* m, int* depth,
                                   char** err) {
    if (g == nullptr) {
        set_err(err, "null graph");
        return CDAGLAB_ERR_PARSE;
    }
    return guarded(err, [&] {
        StructuralStats s = g->dag.structural_stats();
        if (k != nullptr) *k = s.k;
        if (q != nullptr) *q = s.q;
        if (m != nullptr) *m = s.m;
        if (depth != nullptr) *depth = s.depth;
    });
}

cdaglab_status cdaglab_graph_equal(const cdaglab_graph* a, const cdaglab_graph* b, int* out) {
    if (a == nullptr || b == nullptr || out == nullptr) return CDAGLAB_ERR_PARSE;
    *out = a->dag == b->dag ? 1 : 0;
    return CDAGLAB_OK;
}

cdaglab_status cdaglab_graph_isomorphic(const cdaglab_graph* a, const cdaglab_graph* b, int* out,
                                        char** err) {
    if (a == nullptr || b == nullptr || out == nullptr) {
        set_err(err, "null argument");
        return CDAGLAB_ERR_PARSE;
    }
    return guarded(err, [&] { *out = isomorphic(a->dag, b->dag) ? 1 : 0; });
}

cdaglab_status cdaglab_analyze(const cdaglab_graph* g, const char* c, const char* format,
                               int symbolic, char** out, char** err) {
    if (g == nullptr || c == nullptr || out == nullptr) {
        set_err(err, "null argument");
        return CDAGLAB_ERR_PARSE;
    }
    return guarded(err, [&] {
        ComplexityProfile p = complexity_profile(g->dag, parse_rational(c));
        std::string fmt = format == nullptr ? "json" : format;
        if (fmt == "json")
            *out = dup_string(profile_json(p, symbolic != 0));
        else if (fmt == "table")
            *out = dup_string(profile_table(p, symbolic != 0));
        else if (fmt == "csv")
            *out = dup_string(profile_csv(p));
        else
            throw ParseError("unknown format \"" + fmt + "\"");
    });
}

cdaglab_status cdaglab_compare(const char* arch_json, const char* len_range, const char* c,
                               const char* format, char** out, char** err) {
    if (arch_json == nullptr || c == nullptr || out == nullptr) {
        set_err(err, "null argument");
        return CDAGLAB_ERR_PARSE;
    }
    return guarded(err, [&] {
        ArchSpec base = ArchSpec::from_json(arch_json);
        int lo = base.L, hi = base.L;
        if (len_range != nullptr && len_range[0] != '\0') {
            std::string range(len_range);
            auto dots = range.find("..");
            try {
                if (dots == std::string::npos) {
                    lo = hi = std::stoi(range);
                } else {
                    lo = std::stoi(range.substr(0, dots));
                    hi = std::stoi(range.substr(dots + 2));
                }
            } catch (const std::exception&) {
                throw ParseError("cannot parse length range \"" + range + "\"");
            }
            if (lo > hi || lo < 1) throw ParseError("bad length range \"" + range + "\"");
        }
        std::vector<CompareReport> reports;
        Rational cr = parse_rational(c);
        for (int L = lo; L <= hi; ++L) {
            ArchSpec spec = base;
            spec.L = L;
            reports.push_back(compare_to_closed_form(spec, cr));
        }
        std::string fmt = format == nullptr ? "json" : format;
        if (fmt == "json")
            *out = dup_string(compare_json(reports));
        else if (fmt == "table")
            *out = dup_string(compare_table(reports));
        else if (fmt == "csv")
            *out = dup_string(compare_csv(reports));
        else
            throw ParseError("unknown format \"" + fmt + "\"");
    });
}

cdaglab_status cdaglab_perturb(const char* experiment_json, char** summary_json, char** csv_log,
                               char** err) {
    if (experiment_json == nullptr || summary_json == nullptr) {
        set_err(err, "null argument");
        return CDAGLAB_ERR_PARSE;
    }
    return guarded(err, [&] {
        nlohmann::json j = nlohmann::json::parse(experiment_json);
        if (!j.contains("arch")) throw ParseError("experiment needs an \"arch\"");
        ExperimentSpec spec;
        spec.arch = ArchSpec::from_json(j["arch"].dump());
        spec.c = parse_rational(j.value("c", std::string("2")));
        spec.num_trials = j.value("trials", 1000);
        spec.seed = j.value("seed", std::uint64_t{1});
        spec.sp.dim = j.value("dim", 16);
        spec.ro.gamma = j.value("gamma", 1.0);
        spec.enc.vocab_size = j.value("vocab", 16);
        spec.diagnostic_changed_graphs = j.value("diagnostic_changed_graphs", false);
        std::string kind = j.value("span_kind", std::string("linearmean"));
        if (kind == "linearmean")
            spec.sp.kind = SpanKind::LinearMean;
        else if (kind == "tanhlinear")
            spec.sp.kind = SpanKind::TanhLinear;
        else if (kind == "paddedfixedarity")
            spec.sp.kind = SpanKind::PaddedFixedArity;
        else
            throw ParseError("unknown span kind \"" + kind + "\"");
        TrialRun run = run_trials(spec, j.value("threads", 0));
        *summary_json = dup_string(trial_summary_json(run.summary));
        if (csv_log != nullptr) *csv_log = dup_string(trials_to_csv(run.trials));
    });
}

cdaglab_status cdaglab_parts(const cdaglab_graph* g, const char* format, char** out, char** err) {
    if (g == nullptr || out == nullptr) {
        set_err(err, "null argument");
        return CDAGLAB_ERR_PARSE;
    }
    return guarded(err, [&] {
        auto parts = enumerate_parts(g->dag);
        std::string fmt = format == nullptr ? "json" : format;
        if (fmt == "json")
            *out = dup_string(parts_json(parts));
        else if (fmt == "table")
            *out = dup_string(parts_table(parts));
        else
            throw ParseError("unknown format \"" + fmt + "\"");
    });
}

cdaglab_status cdaglab_coverage(const char* dataset_json, char** report_json, char** err) {
    if (dataset_json == nullptr || report_json == nullptr) {
        set_err(err, "null argument");
        return CDAGLAB_ERR_PARSE;
    }
    return guarded(err, [&] {
        auto items = dataset_from_json(dataset_json);
        if (items.empty()) throw ParseError("dataset is empty");
        std::vector<AnnotatedCDag> train(items.begin() + 1, items.end());
        CoverageReport r = check_assumption_coverage(items[0], train);
        nlohmann::json j;
        j["has_a_match"] = r.has_a_match;
        j["has_b_match"] = r.has_b_match;
        j["has_remainder_match"] = r.has_remainder_match;
        j["covered"] = r.covered();
        j["witness_a"] = r.witness_a;
        j["witness_b"] = r.witness_b;
        j["witness_remainder"] = r.witness_remainder;
        *report_json = dup_string(j.dump(2));
    });
}

cdaglab_status cdaglab_suite(const char* format, int threads, char** out, int* failures) {
    return guarded(nullptr, [&] {
        SuiteResult r = run_acceptance_suite(threads);
        int failed = 0;
        for (const auto& c : r.criteria) failed += c.pass ? 0 : 1;
        if (failures != nullptr) *failures = failed;
        if (out != nullptr) {
            std::string fmt = format == nullptr ? "text" : format;
            if (fmt == "json")
                *out = dup_string(suite_json(r));
            else
                *out = dup_string(suite_text(r));
        }
    });
}

}  // extern "C"
