#ifndef CDAGLAB_JSON_IO_HPP
#define CDAGLAB_JSON_IO_HPP

#include <string>

#include "cdaglab/cdag.hpp"

namespace cdaglab {

/// Interchange schema (UTF-8, no comments):
///   { "num_tokens": int,
///     "nodes": [[level, index], ...],
///     "edges": [{"from": [l, i], "to": [l, i], "arg_pos": int}, ...],
///     "sinks": [[l, i], ...] }
/// Serialization is deterministic: nodes sorted by (level, index), edges by
/// (to, arg_pos), keys alphabetical.
std::string to_json(const CDag& g, int indent = 2);

/// Throws ParseError on malformed JSON or schema violations, ValidationError
/// when `validate` is set and the loaded graph breaks an invariant.
CDag from_json(const std::string& text, bool validate = true);

struct DotOptions {
    std::string rankdir = "LR";
    bool fill = true;          // distinct fill per node class
    bool show_arg_pos = false; // edge labels
};

/// Emits `digraph cdag { ... }` with node ids "n_<level>_<index>", labels
/// "l:i" and a class attribute in {source, sink, internal}.
std::string to_dot(const CDag& g, const DotOptions& options = {});

}  // namespace cdaglab

#endif
