#include "cdaglab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace cdaglab {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json histogram_json(const PathHistogram& h) {
    json j = json::object();
    for (const auto& [len, count] : h.counts) j[std::to_string(len)] = count.str();
    return j;
}

std::string table(const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
    std::vector<size_t> width(header.size());
    for (size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream os;
    auto emit = [&](const std::vector<std::string>& row) {
        for (size_t c = 0; c < row.size(); ++c) {
            os << row[c];
            if (c + 1 < row.size()) os << std::string(width[c] - row[c].size() + 2, ' ');
        }
        os << "\n";
    };
    emit(header);
    std::vector<std::string> rule;
    for (size_t c = 0; c < header.size(); ++c) rule.push_back(std::string(width[c], '-'));
    emit(rule);
    for (const auto& row : rows) emit(row);
    return os.str();
}

}  // namespace

std::string profile_json(const ComplexityProfile& p, bool symbolic, int indent) {
    json j;
    j["c"] = rational_str(p.c);
    j["k"] = p.stats.k;
    j["q"] = p.stats.q;
    j["m"] = p.stats.m;
    j["depth"] = p.stats.depth;
    j["delta_max"] = rational_str(p.delta_max);
    j["beta_max"] = rational_str(p.beta_max);
    j["delta_sum"] = rational_str(p.delta_sum);
    j["total_paths"] = p.total_paths.str();
    j["per_source"] = json::array();
    for (size_t i = 0; i < p.delta.size(); ++i) {
        json s;
        s["source"] = static_cast<int>(i) + 1;
        s["paths"] = p.histograms[i].total().str();
        s["histogram"] = histogram_json(p.histograms[i]);
        s["delta"] = rational_str(p.delta[i]);
        s["beta"] = rational_str(p.beta[i]);
        s["delta_approx"] = p.delta[i].convert_to<double>();
        s["beta_approx"] = p.beta[i].convert_to<double>();
        if (symbolic) s["delta_poly"] = poly_string(p.histograms[i]);
        j["per_source"].push_back(s);
    }
    return j.dump(indent);
}

std::string profile_table(const ComplexityProfile& p, bool symbolic) {
    std::ostringstream os;
    os << "k=" << p.stats.k << "  q=" << p.stats.q << "  m=" << p.stats.m
       << "  depth=" << p.stats.depth << "  c=" << rational_str(p.c) << "\n";
    os << "delta_max=" << rational_str(p.delta_max) << "  beta_max=" << rational_str(p.beta_max)
       << "  delta_sum=" << rational_str(p.delta_sum) << "  paths=" << p.total_paths.str()
       << "\n\n";
    std::vector<std::string> header{"source", "paths", "delta", "beta", "beta~"};
    if (symbolic) header.push_back("delta(c)");
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < p.delta.size(); ++i) {
        std::vector<std::string> row{
            std::to_string(i + 1), p.histograms[i].total().str(), rational_str(p.delta[i]),
            rational_str(p.beta[i]), fmt_double(p.beta[i].convert_to<double>())};
        if (symbolic) row.push_back(poly_string(p.histograms[i]));
        rows.push_back(std::move(row));
    }
    os << table(header, rows);
    return os.str();
}

std::string profile_csv(const ComplexityProfile& p) {
    std::ostringstream os;
    os << "source,paths,delta,beta,delta_poly\n";
    for (size_t i = 0; i < p.delta.size(); ++i)
        os << i + 1 << "," << p.histograms[i].total().str() << "," << rational_str(p.delta[i])
           << "," << rational_str(p.beta[i]) << ",\"" << poly_string(p.histograms[i]) << "\"\n";
    return os.str();
}

namespace {

json compare_entry(const CompareReport& r) {
    json j;
    j["family"] = family_name(r.arch.family);
    j["len"] = r.arch.L;
    switch (r.arch.family) {
        case Family::Transformer:
        case Family::DecoderTransformer: j["blocks"] = r.arch.M; break;
        case Family::SparseTransformer:
            j["blocks"] = r.arch.M;
            j["k_sparse"] = r.arch.K;
            break;
        case Family::ConvPool:
            j["conv"] = r.arch.conv_w;
            j["pool"] = r.arch.pool_p;
            break;
        default: break;
    }
    j["c"] = rational_str(r.c);
    j["k"] = r.stats.k;
    j["q"] = r.stats.q;
    j["m"] = r.stats.m;
    j["enumerated"]["delta_max"] = rational_str(r.enumerated_delta_max);
    j["enumerated"]["beta_max"] = rational_str(r.enumerated_beta_max);
    j["enumerated"]["delta_sum"] = rational_str(r.enumerated_delta_sum);
    j["enumerated"]["total_paths"] = r.total_paths.str();
    j["enumerated"]["max_source_paths"] = r.max_source_paths.str();
    j["predicted"]["delta_max"] = rational_str(r.predicted.delta_max);
    j["predicted"]["beta_max"] = rational_str(r.predicted.beta_max);
    j["predicted"]["delta_claim"] = r.predicted.delta_exact_claim ? "exact" : "order";
    j["predicted"]["beta_claim"] = r.predicted.beta_exact_claim ? "exact" : "order";
    j["predicted"]["note"] = r.predicted.validity_note;
    j["match"]["delta"] = r.delta_match;
    j["match"]["beta"] = r.beta_match;
    j["ratio"]["delta"] = r.delta_ratio;
    j["ratio"]["beta"] = r.beta_ratio;
    return j;
}

}  // namespace

std::string compare_json(const std::vector<CompareReport>& reports, int indent) {
    json j = json::array();
    for (const auto& r : reports) j.push_back(compare_entry(r));
    return j.dump(indent);
}

std::string compare_table(const std::vector<CompareReport>& reports) {
    std::vector<std::string> header{"family", "L",       "M",          "c",
                                    "delta",  "delta^",  "d=",         "beta",
                                    "beta^",  "b=",      "paths"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
        rows.push_back({family_name(r.arch.family), std::to_string(r.arch.L),
                        std::to_string(r.arch.M), rational_str(r.c),
                        rational_str(r.enumerated_delta_max), rational_str(r.predicted.delta_max),
                        r.delta_match ? "yes" : fmt_double(r.delta_ratio),
                        rational_str(r.enumerated_beta_max), rational_str(r.predicted.beta_max),
                        r.beta_match ? "yes" : fmt_double(r.beta_ratio), r.total_paths.str()});
    }
    std::ostringstream os;
    os << table(header, rows);
    os << "\ndelta/beta: enumerated; delta^/beta^: predicted; d=/b=: exact match or ratio\n";
    for (const auto& r : reports) {
        os << family_name(r.arch.family) << " L=" << r.arch.L << ": " << r.predicted.validity_note
           << "\n";
        break;  // note is per family; one line is enough for single-family sweeps
    }
    return os.str();
}

std::string compare_csv(const std::vector<CompareReport>& reports) {
    std::ostringstream os;
    os << "family,len,blocks,c,enum_delta_max,pred_delta_max,delta_match,delta_ratio,"
          "enum_beta_max,pred_beta_max,beta_match,beta_ratio,total_paths\n";
    for (const auto& r : reports)
        os << family_name(r.arch.family) << "," << r.arch.L << "," << r.arch.M << ","
           << rational_str(r.c) << "," << rational_str(r.enumerated_delta_max) << ","
           << rational_str(r.predicted.delta_max) << "," << (r.delta_match ? 1 : 0) << ","
           << fmt_double(r.delta_ratio) << "," << rational_str(r.enumerated_beta_max) << ","
           << rational_str(r.predicted.beta_max) << "," << (r.beta_match ? 1 : 0) << ","
           << fmt_double(r.beta_ratio) << "," << r.total_paths.str() << "\n";
    return os.str();
}

std::string trial_summary_json(const TrialSummary& s, int indent) {
    json j;
    j["trials"] = s.trials;
    j["discarded"] = s.discarded;
    j["violations"] = s.violations;
    j["max_ratio"] = s.max_ratio;
    j["mean_ratio"] = s.mean_ratio;
    return j.dump(indent);
}

std::string class_bound_json(const ClassBoundReport& r, int indent) {
    json j;
    j["max_observed"] = r.max_observed;
    j["bound"] = r.bound;
    j["embedding_diameter"] = r.embedding_diameter;
    j["delta_max"] = r.delta_max;
    j["trials"] = r.trials;
    j["discarded"] = r.discarded;
    return j.dump(indent);
}

namespace {

json positions_json(const std::vector<int>& v) { return json(v); }

}  // namespace

std::string parts_json(const std::vector<PartsDecomposition>& parts, int indent) {
    json j = json::array();
    for (const auto& p : parts) {
        json jp;
        jp["n"] = {p.n.level, p.n.index};
        jp["n_a"] = {p.n_a.level, p.n_a.index};
        jp["n_b"] = {p.n_b.level, p.n_b.index};
        jp["part_a"] = positions_json(p.part_a);
        jp["part_b"] = positions_json(p.part_b);
        jp["remainder"] = positions_json(p.remainder);
        j.push_back(jp);
    }
    return j.dump(indent);
}

std::string parts_table(const std::vector<PartsDecomposition>& parts) {
    auto join = [](const std::vector<int>& v) {
        std::string s = "{";
        for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s + "}";
    };
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : parts)
        rows.push_back({p.n.str(), p.n_a.str(), p.n_b.str(), join(p.part_a), join(p.part_b),
                        join(p.remainder)});
    return table({"n", "n_a", "n_b", "part_a", "part_b", "remainder"}, rows);
}

}  // namespace cdaglab
