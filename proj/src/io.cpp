#include "matchadapt/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace matchadapt {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

// Splits text into non-empty lines of whitespace separated tokens, dropping
// comments. Parentheses always form tokens of their own.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    Line line{number, {}};
    std::string current;
    auto flush = [&] {
      if (!current.empty()) line.tokens.push_back(std::move(current));
      current.clear();
    };
    for (char c : raw) {
      if (c == '(' || c == ')' || c == ':' || c == '=') {
        flush();
        line.tokens.emplace_back(1, c);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        flush();
      } else {
        current.push_back(c);
      }
    }
    flush();
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return lines;
}

AgentId lookup(const Instance& instance, const std::string& name, int line) {
  auto id = instance.find(name);
  if (!id) throw ParseError(line, "unknown agent '" + name + "'");
  return *id;
}

Pair parse_pair_line(const Instance& instance, const Line& line) {
  if (line.tokens.size() != 2) throw ParseError(line.number, "expected a pair of agent names");
  const AgentId a = lookup(instance, line.tokens[0], line.number);
  const AgentId b = lookup(instance, line.tokens[1], line.number);
  if (a == b) throw ParseError(line.number, "an agent cannot be paired with itself");
  return Pair::of(a, b);
}

long long parse_integer(const std::string& token, int line) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "expected an integer, got '" + token + "'");
  return value;
}

Matching build_matching(const Instance& instance, const std::vector<std::pair<Pair, int>>& pairs) {
  std::vector<int> seen(instance.size(), 0);
  std::vector<Pair> list;
  for (auto [p, line] : pairs) {
    for (AgentId a : {p.first, p.second}) {
      if (seen[a] != 0)
        throw ParseError(line, "agent '" + instance.name(a) + "' already matched on line " +
                                   std::to_string(seen[a]));
      seen[a] = line;
    }
    if (!instance.acceptable(p.first, p.second))
      throw ParseError(line, "pair " + format_pair(instance, p) + " is not mutually acceptable");
    list.push_back(p);
  }
  return Matching(instance.size(), list);
}

void emit_header(std::ostringstream& out, std::string_view header) {
  std::size_t pos = 0;
  while (pos < header.size()) {
    std::size_t end = header.find('\n', pos);
    if (end == std::string_view::npos) end = header.size();
    out << "# " << header.substr(pos, end - pos) << '\n';
    pos = end + 1;
  }
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw ParseError(0, "empty instance file");

  const Line& head = lines.front();
  if (head.tokens.size() != 2 || head.tokens[0] != "kind" || (head.tokens[1] != "sr" && head.tokens[1] != "sm"))
    throw ParseError(head.number, "expected 'kind sr' or 'kind sm'");

  RawInstance raw;
  raw.kind = head.tokens[1] == "sr" ? Kind::roommates : Kind::marriage;

  std::map<std::string, int> side_of;
  std::size_t i = 1;
  if (raw.kind == Kind::marriage) {
    bool seen[2] = {false, false};
    for (; i < lines.size() && i <= 2; ++i) {
      const Line& line = lines[i];
      const std::string& key = line.tokens[0];
      if (key != "left" && key != "right") break;
      const int side = key == "left" ? 0 : 1;
      if (seen[side]) throw ParseError(line.number, "duplicate '" + key + "' line");
      seen[side] = true;
      for (std::size_t t = 1; t < line.tokens.size(); ++t) {
        if (!side_of.emplace(line.tokens[t], side).second)
          throw ParseError(line.number, "agent '" + line.tokens[t] + "' listed on a side twice");
      }
    }
    if (!seen[0] || !seen[1]) throw ParseError(lines[std::min(i, lines.size() - 1)].number,
                                               "marriage instances need 'left' and 'right' lines");
  }

  std::map<std::string, AgentId> ids;
  std::vector<const Line*> agent_lines;
  for (std::size_t j = i; j < lines.size(); ++j) {
    const Line& line = lines[j];
    if (line.tokens.size() < 2 || line.tokens[1] != ":")
      throw ParseError(line.number, "expected '<name> : <preferences>'");
    const std::string& name = line.tokens[0];
    if (!ids.emplace(name, static_cast<AgentId>(raw.names.size())).second)
      throw ParseError(line.number, "second preference line for '" + name + "'");
    if (raw.kind == Kind::marriage) {
      auto it = side_of.find(name);
      if (it == side_of.end()) throw ParseError(line.number, "agent '" + name + "' is on neither side");
      raw.side.push_back(it->second);
    }
    raw.names.push_back(name);
    agent_lines.push_back(&line);
  }
  if (raw.kind == Kind::marriage) {
    for (int side : {0, 1})
      for (const auto& [name, s] : side_of)
        if (s == side && !ids.count(name)) {
          ids.emplace(name, static_cast<AgentId>(raw.names.size()));
          raw.names.push_back(name);
          raw.side.push_back(side);
          agent_lines.push_back(nullptr);
        }
  }

  raw.prefs.resize(raw.names.size());
  for (std::size_t a = 0; a < agent_lines.size(); ++a) {
    const Line* line = agent_lines[a];
    if (!line) continue;
    auto resolve = [&](const std::string& token) {
      auto it = ids.find(token);
      if (it == ids.end()) throw ParseError(line->number, "unknown agent '" + token + "'");
      return it->second;
    };
    PreferenceList& list = raw.prefs[a];
    bool in_group = false;
    for (std::size_t t = 2; t < line->tokens.size(); ++t) {
      const std::string& token = line->tokens[t];
      if (token == "(") {
        if (in_group) throw ParseError(line->number, "nested tie-group");
        in_group = true;
        list.emplace_back();
      } else if (token == ")") {
        if (!in_group) throw ParseError(line->number, "unbalanced ')'");
        if (list.back().empty()) throw ParseError(line->number, "empty tie-group");
        in_group = false;
      } else if (token == ":" || token == "=") {
        throw ParseError(line->number, "unexpected '" + token + "'");
      } else if (in_group) {
        list.back().push_back(resolve(token));
      } else {
        list.push_back({resolve(token)});
      }
    }
    if (in_group) throw ParseError(line->number, "unterminated tie-group");
  }
  return validate_instance(raw);
}

std::string emit_instance(const Instance& instance, std::string_view header) {
  std::ostringstream out;
  emit_header(out, header);
  out << "kind " << (instance.kind() == Kind::roommates ? "sr" : "sm") << '\n';
  if (instance.kind() == Kind::marriage) {
    for (int side : {0, 1}) {
      out << (side == 0 ? "left" : "right");
      for (AgentId a = 0; a < instance.size(); ++a)
        if (instance.side(a) == side) out << ' ' << instance.name(a);
      out << '\n';
    }
  }
  for (AgentId a = 0; a < instance.size(); ++a) {
    out << instance.name(a) << " :";
    for (const auto& group : instance.prefs(a)) {
      if (group.size() == 1) {
        out << ' ' << instance.name(group.front());
        continue;
      }
      out << " (";
      for (AgentId b : group) out << ' ' << instance.name(b);
      out << " )";
    }
    out << '\n';
  }
  return out.str();
}

Matching parse_matching(const Instance& instance, std::string_view text) {
  std::vector<std::pair<Pair, int>> pairs;
  for (const Line& line : tokenize(text)) pairs.emplace_back(parse_pair_line(instance, line), line.number);
  return build_matching(instance, pairs);
}

std::string emit_matching(const Instance& instance, const Matching& matching) {
  std::ostringstream out;
  for (Pair p : matching.pairs()) out << instance.name(p.first) << ' ' << instance.name(p.second) << '\n';
  return out.str();
}

AdaptQuery parse_query(const Instance& instance, std::string_view text) {
  AdaptQuery query;
  std::vector<std::pair<Pair, int>> m1;
  std::set<std::string> sections_seen;
  std::string section;
  bool have_k = false;
  for (const Line& line : tokenize(text)) {
    const auto& t = line.tokens;
    if (t.size() == 1 && t[0].size() > 2 && t[0].front() == '[' && t[0].back() == ']') {
      section = t[0].substr(1, t[0].size() - 2);
      if (section != "m1" && section != "forced" && section != "forbidden")
        throw ParseError(line.number, "unknown section '" + t[0] + "'");
      if (!sections_seen.insert(section).second) throw ParseError(line.number, "repeated section " + t[0]);
      continue;
    }
    if (!t.empty() && t[0] == "k") {
      if (t.size() != 3 || t[1] != "=") throw ParseError(line.number, "expected 'k = <int>'");
      if (have_k) throw ParseError(line.number, "k given twice");
      query.k = parse_integer(t[2], line.number);
      have_k = true;
      section.clear();
      continue;
    }
    if (section.empty()) throw ParseError(line.number, "pair outside of a section");
    const Pair p = parse_pair_line(instance, line);
    if (section == "m1")
      m1.emplace_back(p, line.number);
    else if (section == "forced")
      query.forced.push_back(p);
    else
      query.forbidden.push_back(p);
  }
  if (!have_k) throw ParseError(0, "query file lacks 'k = <int>'");
  query.m1 = build_matching(instance, m1);
  return query;
}

std::string emit_query(const Instance& instance, const AdaptQuery& query, std::string_view header) {
  std::ostringstream out;
  emit_header(out, header);
  auto section = [&](const char* name, const std::vector<Pair>& pairs) {
    out << '[' << name << "]\n";
    for (Pair p : pairs) out << instance.name(p.first) << ' ' << instance.name(p.second) << '\n';
  };
  section("m1", query.m1.pairs());
  section("forced", query.forced);
  section("forbidden", query.forbidden);
  out << "k = " << query.k << '\n';
  return out.str();
}

Graph parse_graph(std::string_view text) {
  Graph g;
  std::optional<int> declared;
  int largest = -1;
  for (const Line& line : tokenize(text)) {
    const auto& t = line.tokens;
    if (t.size() == 2 && t[0] == "n") {
      if (declared) throw ParseError(line.number, "vertex count given twice");
      declared = static_cast<int>(parse_integer(t[1], line.number));
      if (*declared < 0) throw ParseError(line.number, "negative vertex count");
      continue;
    }
    if (t.size() != 2) throw ParseError(line.number, "expected 'u v'");
    const int u = static_cast<int>(parse_integer(t[0], line.number));
    const int v = static_cast<int>(parse_integer(t[1], line.number));
    if (u < 0 || v < 0) throw ParseError(line.number, "negative vertex index");
    g.edges.emplace_back(u, v);
    largest = std::max({largest, u, v});
  }
  g.vertices = declared ? *declared : largest + 1;
  try {
    return normalize_graph(std::move(g));
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

std::string rotations_dot(const RotationPoset& poset) {
  const Instance& instance = poset.instance();
  std::ostringstream out;
  out << "digraph rotations {\n";
  for (const Rotation& r : poset.rotations()) {
    out << "  r" << r.id << " [label=\"";
    for (std::size_t i = 0; i < r.cycle.size(); ++i) {
      if (i > 0) out << ' ';
      out << '(' << instance.name(r.cycle[i].first) << ',' << instance.name(r.cycle[i].second) << ')';
    }
    out << "\"";
    if (r.singular) out << ", peripheries=2";
    out << "];\n";
  }
  for (auto [phi, rho] : poset.precedence_edges()) {
    bool covered = false;
    for (RotationId mid : poset.successors(phi))
      if (mid != rho && poset.precedes(mid, rho)) covered = true;
    if (!covered) out << "  r" << phi << " -> r" << rho << ";\n";
  }
  for (auto [x, y] : poset.dual_pairs()) out << "  r" << x << " -> r" << y << " [style=dashed, dir=none];\n";
  out << "}\n";
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace matchadapt
