#include "cdaglab/json_io.hpp"

#include <sstream>

#include "json.hpp"

namespace cdaglab {

namespace {

using nlohmann::json;

json node_to_json(const NodeRef& n) { return json::array({n.level, n.index}); }

NodeRef node_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ParseError(std::string(what) + " must be a [level, index] pair");
    return NodeRef{j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

std::string to_json(const CDag& g, int indent) {
    json j;
    j["num_tokens"] = g.num_tokens();
    j["nodes"] = json::array();
    for (const NodeRef& n : g.nodes()) j["nodes"].push_back(node_to_json(n));
    j["edges"] = json::array();
    for (const Edge& e : g.edges()) {
        json je;
        je["from"] = node_to_json(e.from);
        je["to"] = node_to_json(e.to);
        je["arg_pos"] = e.arg_pos;
        j["edges"].push_back(je);
    }
    j["sinks"] = json::array();
    for (const NodeRef& s : g.sinks()) j["sinks"].push_back(node_to_json(s));
    return j.dump(indent);
}

CDag from_json(const std::string& text, bool validate) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("top-level JSON value must be an object");
    for (const char* field : {"num_tokens", "nodes", "edges", "sinks"})
        if (!j.contains(field))
            throw ParseError(std::string("missing field \"") + field + "\"");
    if (!j["num_tokens"].is_number_integer()) throw ParseError("\"num_tokens\" must be an integer");
    for (const char* field : {"nodes", "edges", "sinks"})
        if (!j[field].is_array())
            throw ParseError(std::string("\"") + field + "\" must be an array");

    std::vector<NodeRef> nodes;
    for (const auto& jn : j["nodes"]) nodes.push_back(node_from_json(jn, "node"));
    std::vector<Edge> edges;
    for (const auto& je : j["edges"]) {
        if (!je.is_object() || !je.contains("from") || !je.contains("to") || !je.contains("arg_pos"))
            throw ParseError("edge must be an object with \"from\", \"to\", \"arg_pos\"");
        if (!je["arg_pos"].is_number_integer()) throw ParseError("\"arg_pos\" must be an integer");
        edges.push_back(Edge{node_from_json(je["from"], "edge endpoint"),
                             node_from_json(je["to"], "edge endpoint"),
                             je["arg_pos"].get<int>()});
    }
    std::vector<NodeRef> sinks;
    for (const auto& js : j["sinks"]) sinks.push_back(node_from_json(js, "sink"));

    CDag g(j["num_tokens"].get<int>(), std::move(nodes), std::move(edges), std::move(sinks));
    if (validate) g.require_valid();
    return g;
}

std::string to_dot(const CDag& g, const DotOptions& options) {
    std::ostringstream os;
    os << "digraph cdag {\n";
    os << "  rankdir=" << options.rankdir << ";\n";
    os << "  node [shape=box];\n";
    for (const NodeRef& n : g.nodes()) {
        const char* cls = n.level == 0 ? "source" : (g.is_sink(n) ? "sink" : "internal");
        os << "  n_" << n.level << "_" << n.index << " [label=\"" << n.level << ":" << n.index
           << "\", class=\"" << cls << "\"";
        if (options.fill) {
            const char* color = n.level == 0 ? "#f3d1f4" : (g.is_sink(n) ? "#e8d8c3" : "#d6e4f7");
            os << ", style=filled, fillcolor=\"" << color << "\"";
        }
        os << "];\n";
    }
    for (const Edge& e : g.edges()) {
        os << "  n_" << e.from.level << "_" << e.from.index << " -> n_" << e.to.level << "_"
           << e.to.index;
        if (options.show_arg_pos) os << " [label=\"" << e.arg_pos << "\"]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace cdaglab
