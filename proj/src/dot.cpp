#include "at4ea/dot.hpp"

#include <set>

#include "at4ea/errors.hpp"
#include "at4ea/io.hpp"

namespace at4ea {

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

std::string_view shape_of(const Node& n) {
  switch (n.kind) {
    case NodeKind::Root: return "box";
    case NodeKind::Aea: return "hexagon";
    case NodeKind::Scenario: return "ellipse";
    case NodeKind::Aeml:
    case NodeKind::Cal: return "diamond";
    case NodeKind::Aem: return "note";
    case NodeKind::Ca: return "box";
  }
  return "box";
}

std::string base_label(const Node& n) {
  switch (n.kind) {
    case NodeKind::Aeml: return "AEML";
    case NodeKind::Cal: return "CAL";
    case NodeKind::Aea:
      return n.dimension
                 ? std::string(dimension_key(*n.dimension)) + ": " + n.label
                 : n.label;
    default: return n.label;
  }
}

}  // namespace

std::string render_dot(const Node& tree, const ApResult* ap,
                       const MqResult* mq) {
  const PathIndex paths(tree);

  // Annotations must belong to this tree.
  for (const PathIndex::Entry& e : paths.entries()) {
    if (ap && !ap->per_node.count(e.path)) {
      throw ContractError("render_dot: AP annotation has no entry for '" +
                          e.path + "'");
    }
    if (mq && !mq->per_node.count(e.path) && !mq->excluded.count(e.path)) {
      throw ContractError("render_dot: MQ annotation has no entry for '" +
                          e.path + "'");
    }
  }

  std::set<std::string> on_ap;
  if (ap) on_ap.insert(ap->critical_path.begin(), ap->critical_path.end());
  std::set<std::string> on_mq;
  if (mq) on_mq.insert(mq->critical_path.begin(), mq->critical_path.end());

  std::string out = "digraph at4ea {\n";
  out += "  rankdir=TB;\n";
  out += "  node [fontname=\"Helvetica\"];\n";

  const auto& entries = paths.entries();
  std::map<std::string, std::size_t> node_number;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    node_number[entries[i].path] = i;
    const Node& n = node_at(tree, entries[i].id);

    std::string label = base_label(n);
    if (ap) {
      label += "\nap=" + format_display(ap->per_node.at(entries[i].path));
    }
    if (mq && mq->per_node.count(entries[i].path)) {
      label += "\nmq=" + mq->per_node.at(entries[i].path).to_string();
    }

    out += "  n" + std::to_string(i) + " [label=\"" + dot_escape(label) +
           "\", shape=" + std::string(shape_of(n));
    if (n.kind == NodeKind::Ca) out += ", style=rounded";
    const bool red = on_ap.count(entries[i].path) > 0;
    const bool blue = on_mq.count(entries[i].path) > 0;
    if (red && blue) {
      out += ", color=purple, penwidth=2";
    } else if (red) {
      out += ", color=red, penwidth=2";
    } else if (blue) {
      out += ", color=blue, penwidth=2";
    }
    out += "];\n";
  }

  for (const PathIndex::Entry& e : entries) {
    const Node& n = node_at(tree, e.id);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      NodeId cid = e.id;
      cid.push_back(i);
      out += "  n" + std::to_string(node_number.at(e.path)) + " -> n" +
             std::to_string(node_number.at(paths.path_of(cid)));
      if (n.is_choice() && n.weights[i]) {
        out += " [label=\"w=" + format_display(*n.weights[i]) + "\"]";
      }
      out += ";\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace at4ea
