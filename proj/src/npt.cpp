#include "hont/npt.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "hont/error.hpp"

namespace hont {

std::vector<std::size_t> width_profile(const Run& r) {
  std::vector<std::size_t> w(r.length() + 1);
  for (std::size_t i = 0; i <= r.length(); ++i) w[i] = top_width(r.at(i).stack);
  return w;
}

Successors node_successors(const PushdownSystem& sys, const Run& node, std::size_t jump_search_depth) {
  Successors out;
  const Configuration& c = node.back();
  for (TransitionId t : sys.candidates(c.state, c.stack.top_symbol()))
    if (auto e = node.extended(sys, t)) out.delta.push_back(std::move(*e));

  std::size_t w = top_width(c.stack);
  RunFilter f;
  f.keep = [w](const Configuration& x) { return top_width(x.stack) >= w; };
  f.extend = [w](const Run& r) { return r.empty() || top_width(r.back().stack) > w; };
  f.accept = [w](const Run& r) { return r.length() >= 2 && top_width(r.back().stack) == w; };
  RunStream stream(sys, c, jump_search_depth, f);
  while (auto ext = stream.next()) out.jumps.push_back(compose(node, *ext));
  out.jumps_complete = !stream.truncated();
  return out;
}

SpecialPredecessors special_predecessors(const std::vector<std::size_t>& widths, std::size_t len) {
  SpecialPredecessors p;
  if (len == 0) return p;
  p.delta = len - 1;
  std::size_t wl = widths[len];
  if (len >= 2 && widths[len - 1] > wl) {
    for (std::size_t i = len - 1; i-- > 0;)
      if (widths[i] <= wl) {
        if (widths[i] == wl) p.jump = i;
        break;
      }
  }
  if (wl >= 1) {
    for (std::size_t i = len; i-- > 0;)
      if (widths[i] + 1 <= wl) {
        if (widths[i] + 1 == wl) p.plus = i;
        break;
      }
  }
  return p;
}

SpecialPredecessors special_predecessors(const Run& node) {
  return special_predecessors(width_profile(node), node.length());
}

bool is_delta_edge(const Run& a, const Run& b) {
  return a.length() + 1 == b.length() && a.is_prefix_of(b);
}

bool is_jump_edge(const Run& a, const Run& b) {
  if (!a.is_prefix_of(b) || b.length() < a.length() + 2) return false;
  auto p = special_predecessors(b);
  return p.jump && *p.jump == a.length();
}

bool is_plus_edge(const Run& a, const Run& b) {
  if (!a.is_prefix_of(b) || a.length() >= b.length()) return false;
  auto p = special_predecessors(b);
  return p.plus && *p.plus == a.length();
}

std::vector<Ancestor> relevant_ancestors(const std::vector<std::size_t>& widths, std::size_t len, unsigned l) {
  std::map<std::size_t, unsigned> level;
  level[len] = 0;
  std::vector<std::size_t> current{len};
  for (unsigned k = 1; k <= l && !current.empty(); ++k) {
    std::vector<std::size_t> fresh;
    for (std::size_t x : current) {
      auto p = special_predecessors(widths, x);
      for (auto y : {p.delta, p.jump, p.plus})
        if (y && !level.count(*y)) {
          level[*y] = k;
          fresh.push_back(*y);
        }
    }
    current = std::move(fresh);
  }
  std::vector<Ancestor> out;
  for (auto [len2, k] : level) out.push_back({len2, k});
  return out;
}

std::vector<Ancestor> relevant_ancestors(const Run& node, unsigned l) {
  return relevant_ancestors(width_profile(node), node.length(), l);
}

std::optional<std::size_t> Truncation::find(const std::vector<TransitionId>& steps) const {
  auto it = index.find(format_steps(steps));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t Truncation::count(EdgeKind k) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const TreeEdge& e) { return e.kind == k; }));
}

Truncation truncate(const PushdownSystem& sys, std::size_t depth, std::size_t max_nodes) {
  Truncation t;
  t.depth = depth;
  RunStream stream(sys, sys.initial_configuration(), depth);
  while (auto r = stream.next()) {
    if (t.nodes.size() >= max_nodes) throw Error(ErrorCode::SizeLimit, "truncation exceeds the node cap");
    t.index.emplace(format_steps(r->steps()), t.nodes.size());
    t.nodes.push_back(std::move(*r));
  }
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const Run& n = t.nodes[i];
    if (n.empty()) continue;
    auto p = special_predecessors(n);
    auto at = [&](std::size_t len) {
      std::vector<TransitionId> s(n.steps().begin(), n.steps().begin() + static_cast<std::ptrdiff_t>(len));
      return *t.find(s);
    };
    t.edges.push_back({at(*p.delta), i, EdgeKind::Delta, n.steps().back()});
    if (p.jump) t.edges.push_back({at(*p.jump), i, EdgeKind::Jump, 0});
    if (p.plus) t.edges.push_back({at(*p.plus), i, EdgeKind::Plus, 0});
  }
  return t;
}

std::string dot_node_name(const Run& r) {
  std::string s = "n" + std::to_string(r.length()) + "_";
  for (std::size_t i = 0; i < r.length(); ++i) {
    if (i) s += '_';
    s += std::to_string(r.steps()[i]);
  }
  return s;
}

namespace {

std::string escape_record(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '{' || c == '}' || c == '<' || c == '>' || c == '|' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const PushdownSystem& sys, const Truncation& t) {
  std::ostringstream out;
  out << "digraph npt {\n";
  for (const auto& n : t.nodes) {
    const auto& c = n.back();
    out << "  " << dot_node_name(n) << " [shape=record,label=\"" << escape_record(sys.states()[c.state]) << '|'
        << top_width(c.stack) << '|' << escape_record(format_word(sys.alphabet(), c.stack.top_word())) << "\"];\n";
  }
  for (const auto& e : t.edges) {
    if (e.kind == EdgeKind::Plus) continue;
    out << "  " << dot_node_name(t.nodes[e.from]) << " -> " << dot_node_name(t.nodes[e.to]);
    if (e.kind == EdgeKind::Delta) out << " [label=\"" << e.label << "\"];\n";
    else out << " [style=dashed];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace hont
