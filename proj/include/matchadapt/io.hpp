#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "matchadapt/core.hpp"
#include "matchadapt/gen.hpp"
#include "matchadapt/rotations.hpp"

namespace matchadapt {

/// Instance text format:
///
///   kind sr|sm
///   left m1 m2 ...        (sm only)
///   right w1 w2 ...       (sm only)
///   <name> : <token> ...  one line per agent, best first
///
/// A token is an agent name or a tie-group "( x y z )". '#' starts a comment.
/// Agent ids follow the order of the agent lines; for sm, agents named on a
/// side line without an agent line come last with empty lists.
/// Throws ParseError on syntax errors and ValidationError on bad content.
Instance parse_instance(std::string_view text);

/// Inverse of parse_instance. header lines are emitted as comments first.
std::string emit_instance(const Instance& instance, std::string_view header = {});

/// One "<name> <name>" pair per line.
Matching parse_matching(const Instance& instance, std::string_view text);
std::string emit_matching(const Instance& instance, const Matching& matching);

/// Sections [m1], [forced], [forbidden] with pair lines, then "k = <int>".
AdaptQuery parse_query(const Instance& instance, std::string_view text);
std::string emit_query(const Instance& instance, const AdaptQuery& query, std::string_view header = {});

/// Optional "n <count>" line, then one "u v" edge per line. Without the count
/// line the vertex count is one more than the largest endpoint.
Graph parse_graph(std::string_view text);

/// Rotation digraph: node r<k> per rotation labelled by its canonical cycle,
/// solid arcs for the covering precedence relation, dashed undirected edges
/// between duals.
std::string rotations_dot(const RotationPoset& poset);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace matchadapt
