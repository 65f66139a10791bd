// Command-line front end over the shared-library C interface: builds graphs,
// runs influence analyses, comparison sweeps, perturbation experiments,
// separability checks and the verification suite.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdaglab.h"
#include "json.hpp"

namespace {

struct StringGuard {
    char* s = nullptr;
    ~StringGuard() { cdaglab_string_free(s); }
    std::string str() const { return s == nullptr ? std::string() : std::string(s); }
};

struct GraphGuard {
    cdaglab_graph* g = nullptr;
    ~GraphGuard() { cdaglab_graph_free(g); }
};

int fail(const StringGuard& err, const std::string& what) {
    std::cerr << "error: " << what;
    if (err.s != nullptr) std::cerr << ": " << err.s;
    std::cerr << "\n";
    return 1;
}

void write_output(const std::string& data, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << data;
        if (!data.empty() && data.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + out_path);
    f << data;
}

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

// Shared architecture flags, marshaled into the spec JSON the library takes.
struct ArchFlags {
    std::string arch;
    int len = 0;
    int blocks = 1;
    int k_sparse = 1;
    int conv = 2;
    int pool = 2;
    int m_target = 1;
    std::string pooling = "avg";
    bool padding = false;
    bool strict = false;
    std::string tree;
    std::string pattern = "adversarial";
    std::string pattern_file;
    std::uint64_t sparsity_seed = 0;
    std::string valuation;

    void attach(CLI::App* cmd, bool require_arch = true) {
        auto* opt = cmd->add_option("--arch", arch,
                                    "architecture family (flat, unirnn, birnn, balancedtree, "
                                    "parsetree, convpool, transformer, sparsetransformer, "
                                    "decodertransformer, example1, example2)");
        if (require_arch) opt->required();
        cmd->add_option("--len", len, "sequence length L");
        cmd->add_option("--blocks", blocks, "attention blocks M");
        cmd->add_option("--k", k_sparse, "attention sparsity K");
        cmd->add_option("--conv", conv, "conv window w");
        cmd->add_option("--pool", pool, "pool window p");
        cmd->add_option("--m", m_target, "requested sink count (convpool)");
        cmd->add_option("--pooling", pooling, "avg, sum, max or min");
        cmd->add_flag("--padding", padding, "pad conv windows on the left");
        cmd->add_flag("--strict", strict, "error instead of clamping mid-reduction");
        cmd->add_option("--tree", tree, "parse tree, e.g. ((1,2),((3,4),5))");
        cmd->add_option("--pattern", pattern, "sparsity source: adversarial, random, explicit");
        cmd->add_option("--pattern-file", pattern_file, "explicit sparsity pattern JSON file");
        cmd->add_option("--sparsity-seed", sparsity_seed, "seed for random sparsity");
        cmd->add_option("--valuation", valuation,
                        "comma-separated token activations for max/min pooling");
    }

    std::string to_json() const {
        nlohmann::json j;
        j["family"] = arch;
        if (len > 0) j["len"] = len;
        if (arch == "transformer" || arch == "decodertransformer" ||
            arch == "sparsetransformer") {
            j["blocks"] = blocks;
        }
        if (arch == "sparsetransformer") {
            j["k"] = k_sparse;
            nlohmann::json s;
            if (pattern == "explicit") {
                if (pattern_file.empty())
                    throw std::runtime_error("--pattern explicit needs --pattern-file");
                s = nlohmann::json::parse(read_file(pattern_file));
                s["kind"] = "explicit";
            } else {
                s["kind"] = pattern;
                if (pattern == "random") s["seed"] = sparsity_seed;
            }
            j["sparsity"] = s;
        }
        if (arch == "convpool") {
            j["conv"] = conv;
            j["pool"] = pool;
            j["m"] = m_target;
            j["pooling"] = pooling;
            j["padding"] = padding;
            j["strict"] = strict;
            if (!valuation.empty()) {
                std::vector<double> vals;
                std::stringstream ss(valuation);
                std::string item;
                while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
                j["valuation"] = vals;
            }
        }
        if (arch == "parsetree") j["tree"] = tree;
        return j.dump();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cdaglab: computation-DAG construction and exact influence analysis"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "build a graph and emit it");
    ArchFlags build_arch;
    build_arch.attach(build);
    std::string build_format = "json", build_out;
    build->add_option("--format", build_format, "json or dot");
    build->add_option("--out", build_out, "output file (default stdout)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "exact influence profile of a graph");
    ArchFlags analyze_arch;
    analyze_arch.attach(analyze, false);
    std::string analyze_in, analyze_c = "2", analyze_format = "table", analyze_out;
    bool analyze_symbolic = false;
    analyze->add_option("--in", analyze_in, "graph JSON file instead of --arch");
    analyze->add_option("--c", analyze_c, "influence weight, exact rational (2, 3/2)");
    analyze->add_option("--format", analyze_format, "table, json or csv");
    analyze->add_flag("--symbolic", analyze_symbolic, "include delta as a c-polynomial");
    analyze->add_option("--out", analyze_out, "output file");

    // compare
    auto* compare = app.add_subcommand("compare", "enumerated vs published complexity");
    ArchFlags compare_arch;
    compare_arch.attach(compare);
    std::string compare_len, compare_c = "2", compare_format = "table", compare_out;
    compare->add_option("--len-range", compare_len, "length sweep, e.g. 4..12");
    compare->add_option("--c", compare_c, "influence weight, exact rational");
    compare->add_option("--format", compare_format, "table, json or csv");
    compare->add_option("--out", compare_out, "output file");

    // perturb
    auto* perturb = app.add_subcommand("perturb", "token perturbation experiment");
    ArchFlags perturb_arch;
    perturb_arch.attach(perturb);
    std::string perturb_c = "2", perturb_out, perturb_log, perturb_kind = "linearmean";
    int trials = 1000, dim = 16, vocab = 16;
    std::uint64_t seed = 1;
    double gamma = 1.0;
    bool diagnostic = false;
    perturb->add_option("--c", perturb_c, "influence weight, exact rational");
    perturb->add_option("--trials", trials, "number of trials");
    perturb->add_option("--seed", seed, "experiment seed");
    perturb->add_option("--dim", dim, "latent dimension");
    perturb->add_option("--vocab", vocab, "vocabulary size");
    perturb->add_option("--gamma", gamma, "readout Lipschitz constant");
    perturb->add_option("--span-kind", perturb_kind,
                        "linearmean, tanhlinear or paddedfixedarity");
    perturb->add_flag("--diagnostic-changed", diagnostic,
                      "also evaluate trials whose perturbation changed the graph");
    perturb->add_option("--log", perturb_log, "write the per-trial CSV log here");
    perturb->add_option("--out", perturb_out, "summary output file");

    // parts
    auto* parts = app.add_subcommand("parts", "cleanly-separable decompositions");
    ArchFlags parts_arch;
    parts_arch.attach(parts, false);
    std::string parts_in, parts_format = "table", parts_out, parts_dataset;
    parts->add_option("--in", parts_in, "graph JSON file instead of --arch");
    parts->add_option("--dataset", parts_dataset,
                      "coverage dataset JSON (item 0 = test, rest = training)");
    parts->add_option("--format", parts_format, "table or json");
    parts->add_option("--out", parts_out, "output file");

    // export
    auto* exp = app.add_subcommand("export", "re-emit a graph JSON file as json or dot");
    std::string export_in, export_format = "dot", export_out;
    exp->add_option("--in", export_in, "graph JSON file (- for stdin)")->required();
    exp->add_option("--format", export_format, "json or dot");
    exp->add_option("--out", export_out, "output file");

    // suite
    auto* suite = app.add_subcommand("suite", "run the verification suite");
    std::string suite_format = "text", suite_out;
    int suite_threads = 0;
    suite->add_option("--format", suite_format, "text or json");
    suite->add_option("--threads", suite_threads, "worker cap (0 = auto / CDAGLAB_THREADS)");
    suite->add_option("--out", suite_out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (build->parsed()) {
            StringGuard err;
            GraphGuard g;
            if (cdaglab_build(build_arch.to_json().c_str(), &g.g, &err.s) != CDAGLAB_OK)
                return fail(err, "build failed");
            StringGuard out;
            if (build_format == "json") {
                if (cdaglab_graph_to_json(g.g, &out.s) != CDAGLAB_OK)
                    return fail(err, "serialization failed");
            } else if (build_format == "dot") {
                if (cdaglab_graph_to_dot(g.g, nullptr, &out.s, &err.s) != CDAGLAB_OK)
                    return fail(err, "dot export failed");
            } else {
                std::cerr << "error: unknown format \"" << build_format << "\"\n";
                return 2;
            }
            write_output(out.str(), build_out);
            return 0;
        }

        if (analyze->parsed()) {
            StringGuard err;
            GraphGuard g;
            if (!analyze_in.empty()) {
                if (cdaglab_graph_from_json(read_file(analyze_in).c_str(), &g.g, &err.s) !=
                    CDAGLAB_OK)
                    return fail(err, "cannot load graph");
            } else if (!analyze_arch.arch.empty()) {
                if (cdaglab_build(analyze_arch.to_json().c_str(), &g.g, &err.s) != CDAGLAB_OK)
                    return fail(err, "build failed");
            } else {
                std::cerr << "error: analyze needs --arch or --in\n";
                return 2;
            }
            StringGuard out;
            if (cdaglab_analyze(g.g, analyze_c.c_str(), analyze_format.c_str(),
                                analyze_symbolic ? 1 : 0, &out.s, &err.s) != CDAGLAB_OK)
                return fail(err, "analysis failed");
            write_output(out.str(), analyze_out);
            return 0;
        }

        if (compare->parsed()) {
            StringGuard err, out;
            if (cdaglab_compare(compare_arch.to_json().c_str(),
                                compare_len.empty() ? nullptr : compare_len.c_str(),
                                compare_c.c_str(), compare_format.c_str(), &out.s,
                                &err.s) != CDAGLAB_OK)
                return fail(err, "compare failed");
            write_output(out.str(), compare_out);
            return 0;
        }

        if (perturb->parsed()) {
            nlohmann::json j;
            j["arch"] = nlohmann::json::parse(perturb_arch.to_json());
            j["c"] = perturb_c;
            j["trials"] = trials;
            j["seed"] = seed;
            j["dim"] = dim;
            j["vocab"] = vocab;
            j["gamma"] = gamma;
            j["span_kind"] = perturb_kind;
            j["diagnostic_changed_graphs"] = diagnostic;
            StringGuard err, summary, log;
            if (cdaglab_perturb(j.dump().c_str(), &summary.s,
                                perturb_log.empty() ? nullptr : &log.s, &err.s) != CDAGLAB_OK)
                return fail(err, "perturbation experiment failed");
            if (!perturb_log.empty()) write_output(log.str(), perturb_log);
            write_output(summary.str(), perturb_out);
            return 0;
        }

        if (parts->parsed()) {
            StringGuard err;
            if (!parts_dataset.empty()) {
                StringGuard out;
                if (cdaglab_coverage(read_file(parts_dataset).c_str(), &out.s, &err.s) !=
                    CDAGLAB_OK)
                    return fail(err, "coverage check failed");
                write_output(out.str(), parts_out);
                return 0;
            }
            GraphGuard g;
            if (!parts_in.empty()) {
                if (cdaglab_graph_from_json(read_file(parts_in).c_str(), &g.g, &err.s) !=
                    CDAGLAB_OK)
                    return fail(err, "cannot load graph");
            } else if (!parts_arch.arch.empty()) {
                if (cdaglab_build(parts_arch.to_json().c_str(), &g.g, &err.s) != CDAGLAB_OK)
                    return fail(err, "build failed");
            } else {
                std::cerr << "error: parts needs --arch, --in or --dataset\n";
                return 2;
            }
            StringGuard out;
            if (cdaglab_parts(g.g, parts_format.c_str(), &out.s, &err.s) != CDAGLAB_OK)
                return fail(err, "parts enumeration failed");
            write_output(out.str(), parts_out);
            return 0;
        }

        if (exp->parsed()) {
            StringGuard err;
            GraphGuard g;
            if (cdaglab_graph_from_json(read_file(export_in).c_str(), &g.g, &err.s) != CDAGLAB_OK)
                return fail(err, "cannot load graph");
            StringGuard out;
            if (export_format == "json") {
                if (cdaglab_graph_to_json(g.g, &out.s) != CDAGLAB_OK)
                    return fail(err, "serialization failed");
            } else if (export_format == "dot") {
                if (cdaglab_graph_to_dot(g.g, nullptr, &out.s, &err.s) != CDAGLAB_OK)
                    return fail(err, "dot export failed");
            } else {
                std::cerr << "error: unknown format \"" << export_format << "\"\n";
                return 2;
            }
            write_output(out.str(), export_out);
            return 0;
        }

        if (suite->parsed()) {
            StringGuard out;
            int failures = 0;
            if (cdaglab_suite(suite_format.c_str(), suite_threads, &out.s, &failures) !=
                CDAGLAB_OK) {
                std::cerr << "error: suite execution failed\n";
                return 1;
            }
            write_output(out.str(), suite_out);
            return failures == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
