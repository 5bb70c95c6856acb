#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "at4ea/attributes.hpp"

namespace at4ea {

/// Node taxonomy of the extended attack tree for evasion attacks (AT4EA).
///
/// Root and Aea nodes are weighted-choice nodes: each edge to a child
/// carries a frequency weight, and sibling weights sum to 1. A Scenario
/// owns exactly one Aeml (the usable generation methods, attacker picks the
/// best) and one Cal (the required conventional-attack steps, all must
/// succeed). Aem and leaf Ca nodes carry the numeric parameters the
/// calculus runs on.
enum class NodeKind {
  Root,
  Aea,
  Scenario,
  Aeml,
  Aem,
  Cal,
  Ca,
};

std::string_view kind_name(NodeKind k);  // lowercase keyword ("root", "aea", ...)

/// Gate semantics for conventional-attack subtrees. A leaf Ca has no gate.
enum class CaGate { And, Or };

/// A single tagged node type covering all seven kinds. Which fields are
/// meaningful depends on `kind`; `validate_structure` enforces the shape
/// invariants. Numeric parameters and edge weights are optional because
/// systematically constructed trees start unbound and are bound later.
struct Node {
  NodeKind kind = NodeKind::Root;

  /// Attack objective (Root), attribute value (Aea), scenario name
  /// (Scenario), method name (Aem) or step label (Ca). Unused for list
  /// nodes, whose path component is the fixed "AEML" / "CAL".
  std::string label;

  std::optional<Dimension> dimension;                 // Aea
  std::optional<double> err;                          // Aem
  std::optional<double> freq;                         // Aem
  std::optional<double> prob;                         // leaf Ca
  std::optional<std::uint64_t> query;                 // Aem, leaf Ca
  std::optional<CaGate> gate;                         // branching Ca

  /// Edge weights, parallel to `children`. Only meaningful on Root/Aea
  /// nodes; an unset entry means the weight awaits rebinding.
  std::vector<std::optional<double>> weights;

  std::vector<Node> children;

  bool is_choice() const { return kind == NodeKind::Root || kind == NodeKind::Aea; }
  bool is_ca_leaf() const { return kind == NodeKind::Ca && !gate.has_value(); }
};

// Construction helpers.
Node make_root(std::string label);
Node make_aea(Dimension d, std::string value);
Node make_scenario(std::string name, Node aeml, Node cal);
Node make_aeml(std::vector<Node> aems = {});
Node make_cal(std::vector<Node> cas = {});
Node make_aem(std::string method);
Node make_aem(std::string method, double err, double freq, std::uint64_t query);
Node make_ca_leaf(std::string label);
Node make_ca_leaf(std::string label, double prob, std::uint64_t query);
Node make_ca_gate(std::string label, CaGate gate, std::vector<Node> children);

/// Appends `child` to a choice node with the given edge weight.
void add_child(Node& parent, Node child, std::optional<double> weight = std::nullopt);

/// Deep structural equality: kind, labels, dimensions, parameters (exact),
/// gates, weights and children, in order.
bool nodes_equal(const Node& a, const Node& b);

/// Identifies a node by the child indexes walked from the root. The root
/// itself is the empty id.
using NodeId = std::vector<std::size_t>;

/// Follows a NodeId; throws Error if any index is out of range.
const Node& node_at(const Node& root, const NodeId& id);
Node& node_at(Node& root, const NodeId& id);

/// Canonical slash-separated path of node labels from the root. List nodes
/// contribute the fixed components "AEML" and "CAL". Siblings that share a
/// path component are disambiguated with "#1", "#2", ... in document order,
/// so paths are unique within a tree.
std::string node_path(const Node& root, const NodeId& id);

/// Precomputed path strings for every node of a tree, in document order.
/// Building the index once avoids the quadratic cost of repeated
/// node_path calls and gives reverse lookup from path to node.
class PathIndex {
 public:
  explicit PathIndex(const Node& root);

  struct Entry {
    NodeId id;
    std::string path;
  };

  const std::vector<Entry>& entries() const { return entries_; }
  const std::string& path_of(const NodeId& id) const;
  const NodeId* find(const std::string& path) const;  // null if absent

 private:
  std::vector<Entry> entries_;
  std::map<NodeId, std::size_t> by_id_;
  std::map<std::string, std::size_t> by_path_;
};

/// Depth-first visit in document order. The callback receives each node
/// together with its id; parents are visited before children.
void visit(const Node& root,
           const std::function<void(const Node&, const NodeId&)>& fn);

}  // namespace at4ea
