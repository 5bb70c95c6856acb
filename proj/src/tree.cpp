#include "at4ea/tree.hpp"

#include <algorithm>

#include "at4ea/errors.hpp"

namespace at4ea {

std::string_view kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Root: return "root";
    case NodeKind::Aea: return "aea";
    case NodeKind::Scenario: return "scenario";
    case NodeKind::Aeml: return "aeml";
    case NodeKind::Aem: return "aem";
    case NodeKind::Cal: return "cal";
    case NodeKind::Ca: return "ca";
  }
  return "?";
}

Node make_root(std::string label) {
  Node n;
  n.kind = NodeKind::Root;
  n.label = std::move(label);
  return n;
}

Node make_aea(Dimension d, std::string value) {
  Node n;
  n.kind = NodeKind::Aea;
  n.dimension = d;
  n.label = std::move(value);
  return n;
}

Node make_scenario(std::string name, Node aeml, Node cal) {
  Node n;
  n.kind = NodeKind::Scenario;
  n.label = std::move(name);
  n.children.push_back(std::move(aeml));
  n.children.push_back(std::move(cal));
  return n;
}

Node make_aeml(std::vector<Node> aems) {
  Node n;
  n.kind = NodeKind::Aeml;
  n.children = std::move(aems);
  return n;
}

Node make_cal(std::vector<Node> cas) {
  Node n;
  n.kind = NodeKind::Cal;
  n.children = std::move(cas);
  return n;
}

Node make_aem(std::string method) {
  Node n;
  n.kind = NodeKind::Aem;
  n.label = std::move(method);
  return n;
}

Node make_aem(std::string method, double err, double freq, std::uint64_t query) {
  Node n = make_aem(std::move(method));
  n.err = err;
  n.freq = freq;
  n.query = query;
  return n;
}

Node make_ca_leaf(std::string label) {
  Node n;
  n.kind = NodeKind::Ca;
  n.label = std::move(label);
  return n;
}

Node make_ca_leaf(std::string label, double prob, std::uint64_t query) {
  Node n = make_ca_leaf(std::move(label));
  n.prob = prob;
  n.query = query;
  return n;
}

Node make_ca_gate(std::string label, CaGate gate, std::vector<Node> children) {
  Node n;
  n.kind = NodeKind::Ca;
  n.label = std::move(label);
  n.gate = gate;
  n.children = std::move(children);
  return n;
}

void add_child(Node& parent, Node child, std::optional<double> weight) {
  parent.children.push_back(std::move(child));
  if (parent.is_choice()) parent.weights.push_back(weight);
}

bool nodes_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.label != b.label || a.dimension != b.dimension ||
      a.err != b.err || a.freq != b.freq || a.prob != b.prob ||
      a.query != b.query || a.gate != b.gate || a.weights != b.weights ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!nodes_equal(a.children[i], b.children[i])) return false;
  }
  return true;
}

const Node& node_at(const Node& root, const NodeId& id) {
  const Node* n = &root;
  for (std::size_t idx : id) {
    if (idx >= n->children.size()) throw Error("node id out of range");
    n = &n->children[idx];
  }
  return *n;
}

Node& node_at(Node& root, const NodeId& id) {
  return const_cast<Node&>(node_at(static_cast<const Node&>(root), id));
}

namespace {

// Path component of a node as seen from its parent. List nodes use fixed
// components so leaf paths read ".../<scenario>/AEML/<method>".
std::string path_component(const Node& n) {
  switch (n.kind) {
    case NodeKind::Aeml: return "AEML";
    case NodeKind::Cal: return "CAL";
    default: return n.label;
  }
}

// Components for one sibling list, with "#k" suffixes appended to every
// member of a duplicated label group, in document order.
std::vector<std::string> sibling_components(const std::vector<Node>& siblings) {
  std::vector<std::string> base(siblings.size());
  std::map<std::string, int> total;
  for (std::size_t i = 0; i < siblings.size(); ++i) {
    base[i] = path_component(siblings[i]);
    ++total[base[i]];
  }
  std::map<std::string, int> seen;
  std::vector<std::string> out(siblings.size());
  for (std::size_t i = 0; i < siblings.size(); ++i) {
    if (total[base[i]] > 1) {
      out[i] = base[i] + "#" + std::to_string(++seen[base[i]]);
    } else {
      out[i] = base[i];
    }
  }
  return out;
}

void index_rec(const Node& n, NodeId& id, std::string& path,
               std::vector<PathIndex::Entry>& out) {
  out.push_back({id, path});
  const std::vector<std::string> comps = sibling_components(n.children);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    const std::size_t mark = path.size();
    path += '/';
    path += comps[i];
    id.push_back(i);
    index_rec(n.children[i], id, path, out);
    id.pop_back();
    path.resize(mark);
  }
}

}  // namespace

std::string node_path(const Node& root, const NodeId& id) {
  const Node* n = &root;
  std::string path = path_component(root);
  for (std::size_t idx : id) {
    if (idx >= n->children.size()) throw Error("node id out of range");
    path += '/';
    path += sibling_components(n->children)[idx];
    n = &n->children[idx];
  }
  return path;
}

PathIndex::PathIndex(const Node& root) {
  NodeId id;
  std::string path = path_component(root);
  index_rec(root, id, path, entries_);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    by_id_[entries_[i].id] = i;
    by_path_[entries_[i].path] = i;
  }
}

const std::string& PathIndex::path_of(const NodeId& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error("node id not in index");
  return entries_[it->second].path;
}

const NodeId* PathIndex::find(const std::string& path) const {
  auto it = by_path_.find(path);
  if (it == by_path_.end()) return nullptr;
  return &entries_[it->second].id;
}

void visit(const Node& root,
           const std::function<void(const Node&, const NodeId&)>& fn) {
  NodeId id;
  const std::function<void(const Node&)> rec = [&](const Node& n) {
    fn(n, id);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      id.push_back(i);
      rec(n.children[i]);
      id.pop_back();
    }
  };
  rec(root);
}

}  // namespace at4ea
