#include "mpdag/meek.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <random>

#include "mpdag/error.hpp"

namespace mpdag {

namespace {

bool rule1(const EdgeMatrix& m, Node tail, Node head) {
  for (Node a = 0; a < m.size(); ++a)
    if (a != head && m.directed(a, tail) && !m.adjacent(a, head)) return true;
  return false;
}

bool rule2(const EdgeMatrix& m, Node tail, Node head) {
  for (Node a = 0; a < m.size(); ++a)
    if (m.directed(tail, a) && m.directed(a, head)) return true;
  return false;
}

bool rule3(const EdgeMatrix& m, Node tail, Node head) {
  const std::size_t n = m.size();
  for (Node c = 0; c < n; ++c) {
    if (!m.undirected(tail, c) || !m.directed(c, head)) continue;
    for (Node d = c + 1; d < n; ++d)
      if (m.undirected(tail, d) && m.directed(d, head) && !m.adjacent(c, d)) return true;
  }
  return false;
}

bool rule4(const EdgeMatrix& m, Node tail, Node head) {
  const std::size_t n = m.size();
  for (Node l = 0; l < n; ++l) {
    if (!m.undirected(tail, l) || !m.directed(l, head)) continue;
    for (Node j = 0; j < n; ++j)
      if (j != head && m.undirected(tail, j) && m.directed(j, l) && !m.adjacent(j, head))
        return true;
  }
  return false;
}

struct Orientation {
  Node tail;
  Node head;
};

// Finds the next orientation in deterministic order (rule index, then
// lexicographic (tail, head)). Returns false on conflict via `conflict`.
std::optional<Orientation> next_orientation(const EdgeMatrix& m, bool& conflict) {
  const std::size_t n = m.size();
  for (int rule = 1; rule <= 4; ++rule) {
    for (Node a = 0; a < n; ++a) {
      for (Node b = 0; b < n; ++b) {
        if (!m.undirected(a, b) || !rule_fires(m, rule, a, b)) continue;
        if (orienting_rule(m, b, a) != 0) conflict = true;
        return Orientation{a, b};
      }
    }
  }
  return std::nullopt;
}

EdgeMatrix apply_knowledge(const Pdag& g, const BackgroundKnowledge& bk) {
  EdgeMatrix m = g.edges();
  for (const auto& [tail_name, head_name] : bk.required_directed) {
    Node tail = g.id(tail_name);
    Node head = g.id(head_name);
    switch (m.link(tail, head)) {
      case Link::none:
        throw ArgumentError("background knowledge " + tail_name + " -> " + head_name +
                            " is not an adjacency of the graph");
      case Link::from:
        throw InconsistentKnowledge("background knowledge " + tail_name + " -> " + head_name +
                                    " contradicts an existing orientation");
      case Link::to: break;
      case Link::undirected: m.set_directed(tail, head); break;
    }
  }
  if (!directed_acyclic(m))
    throw InconsistentKnowledge("background knowledge creates a directed cycle");
  return m;
}

}  // namespace

bool rule_fires(const EdgeMatrix& m, int rule, Node tail, Node head) {
  switch (rule) {
    case 1: return rule1(m, tail, head);
    case 2: return rule2(m, tail, head);
    case 3: return rule3(m, tail, head);
    case 4: return rule4(m, tail, head);
    default: return false;
  }
}

int orienting_rule(const EdgeMatrix& m, Node tail, Node head) {
  if (!m.undirected(tail, head)) return 0;
  for (int rule = 1; rule <= 4; ++rule)
    if (rule_fires(m, rule, tail, head)) return rule;
  return 0;
}

bool is_mpdag(const EdgeMatrix& m) {
  if (!directed_acyclic(m)) return false;
  for (Node a = 0; a < m.size(); ++a)
    for (Node b = 0; b < m.size(); ++b)
      if (orienting_rule(m, a, b) != 0) return false;
  return true;
}

bool is_mpdag(const Pdag& g) { return is_mpdag(g.edges()); }

bool close_edges(EdgeMatrix& m) {
  bool conflict = false;
  while (auto o = next_orientation(m, conflict)) {
    if (conflict) return false;
    m.set_directed(o->tail, o->head);
  }
  return directed_acyclic(m);
}

Pdag close(const Pdag& g, const BackgroundKnowledge& bk) {
  EdgeMatrix m = apply_knowledge(g, bk);
  bool conflict = false;
  while (auto o = next_orientation(m, conflict)) {
    if (conflict)
      throw InconsistentKnowledge("orientation rules demand both orientations of " +
                                  g.name(o->tail) + " -- " + g.name(o->head));
    m.set_directed(o->tail, o->head);
  }
  if (!directed_acyclic(m))
    throw InconsistentKnowledge("closing the graph creates a directed cycle");
  return Pdag(g.names(), std::move(m), GraphClass::mpdag);
}

Pdag close_in_random_order(const Pdag& g, const BackgroundKnowledge& bk, std::uint64_t seed) {
  EdgeMatrix m = apply_knowledge(g, bk);
  std::mt19937_64 rng(seed);
  const std::size_t n = m.size();
  for (;;) {
    std::vector<Orientation> candidates;
    for (Node a = 0; a < n; ++a)
      for (Node b = 0; b < n; ++b)
        if (orienting_rule(m, a, b) != 0) candidates.push_back({a, b});
    if (candidates.empty()) break;
    const auto& o = candidates[rng() % candidates.size()];
    if (orienting_rule(m, o.head, o.tail) != 0)
      throw InconsistentKnowledge("orientation rules demand both orientations of " +
                                  g.name(o.tail) + " -- " + g.name(o.head));
    m.set_directed(o.tail, o.head);
  }
  if (!directed_acyclic(m))
    throw InconsistentKnowledge("closing the graph creates a directed cycle");
  return Pdag(g.names(), std::move(m), GraphClass::mpdag);
}

namespace {

// Skeleton plus the unshielded colliders of `m`.
EdgeMatrix collider_pattern(const EdgeMatrix& m) {
  const std::size_t n = m.size();
  EdgeMatrix out(n);
  for (Node a = 0; a < n; ++a)
    for (Node b = a + 1; b < n; ++b)
      if (m.adjacent(a, b)) out.set_undirected(a, b);
  for (Node c = 0; c < n; ++c)
    for (Node a = 0; a < n; ++a)
      for (Node b = a + 1; b < n; ++b)
        if (m.directed(a, c) && m.directed(b, c) && !m.adjacent(a, b)) {
          out.set_directed(a, c);
          out.set_directed(b, c);
        }
  return out;
}

}  // namespace

bool is_cpdag(const Pdag& g) {
  if (!is_mpdag(g)) return false;
  EdgeMatrix pattern = collider_pattern(g.edges());
  if (!close_edges(pattern)) return false;
  return pattern == g.edges();
}

Pdag cpdag_of(const Pdag& dag) {
  if (!dag.undirected_edges().empty()) throw ArgumentError("cpdag_of expects a DAG");
  EdgeMatrix pattern = collider_pattern(dag.edges());
  if (!close_edges(pattern)) throw GraphError("inconsistent collider pattern");
  return Pdag(dag.names(), std::move(pattern), GraphClass::cpdag);
}

BackgroundKnowledge parse_background_knowledge(std::string_view text) {
  // Parse line by line ourselves: both orientations of a pair may legally
  // appear in the file and are reported later as inconsistent knowledge.
  BackgroundKnowledge bk;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) tokens.push_back(line.substr(i, j - i));
      i = j;
    }
    if (tokens.empty()) continue;
    if (tokens.size() != 3 || tokens[1] != "->")
      throw ParseError(line_no, "background knowledge lines must have the form 'A -> B'");
    if (!valid_node_name(tokens[0]) || !valid_node_name(tokens[2]))
      throw ParseError(line_no, "invalid node name");
    if (tokens[0] == tokens[2]) throw ParseError(line_no, "self-loop");
    bk.required_directed.emplace_back(tokens[0], tokens[2]);
  }
  return bk;
}

}  // namespace mpdag
