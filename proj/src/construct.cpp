#include "at4ea/construct.hpp"

#include <algorithm>
#include <set>

#include "at4ea/errors.hpp"
#include "at4ea/validate.hpp"

namespace at4ea {

std::vector<std::string> derive_available_methods(const AemMatrix& matrix,
                                                  const AttributeVector& attrs) {
  std::vector<std::string> out;
  for (const AemRow& row : matrix.rows) {
    if (row.attrs == attrs) out.push_back(row.name);
  }
  return out;
}

Node scenario_to_tree(const std::string& objective, const EasRecord& eas,
                      const AemMatrix& matrix) {
  EasRecord resolved = eas;
  if (resolved.auto_methods) {
    resolved.available_methods = derive_available_methods(matrix, eas.attrs);
    resolved.auto_methods = false;
  }
  const std::vector<std::string> problems = check_eas(resolved, matrix);
  if (!problems.empty()) {
    std::string msg = "scenario_to_tree: invalid scenario record:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw Error(msg);
  }

  std::vector<Node> aems;
  for (const std::string& m : resolved.available_methods) {
    aems.push_back(make_aem(m));
  }
  std::vector<Node> cas;
  for (const std::string& step : resolved.conventional_attacks) {
    cas.push_back(make_ca_leaf(step));
  }
  Node scenario = make_scenario(resolved.name, make_aeml(std::move(aems)),
                                make_cal(std::move(cas)));

  // All four AEA levels are always emitted, innermost first.
  Node inner = std::move(scenario);
  for (auto it = kDimensionOrder.rbegin(); it != kDimensionOrder.rend(); ++it) {
    Node aea = make_aea(*it, resolved.attrs.value(*it));
    add_child(aea, std::move(inner), 1.0);
    inner = std::move(aea);
  }
  Node root = make_root(objective);
  add_child(root, std::move(inner), 1.0);
  return root;
}

namespace {

bool mergeable(const Node& a, const Node& b) {
  return a.kind == b.kind && a.label == b.label && a.dimension == b.dimension;
}

void merge_into(Node& a, const Node& b, const std::string& where) {
  bool gained_child = false;
  for (const Node& bc : b.children) {
    auto it = std::find_if(a.children.begin(), a.children.end(),
                           [&](const Node& ac) { return mergeable(ac, bc); });
    if (it == a.children.end()) {
      a.children.push_back(bc);
      if (a.is_choice()) a.weights.push_back(std::nullopt);
      gained_child = true;
      continue;
    }
    if (bc.kind == NodeKind::Scenario) {
      if (!nodes_equal(*it, bc)) {
        throw MergeError("unify_trees: scenario '" + bc.label +
                         "' appears in both trees with different bodies (at " +
                         where + ")");
      }
      continue;
    }
    merge_into(*it, bc, where + "/" + (bc.label.empty()
                                           ? std::string(kind_name(bc.kind))
                                           : bc.label));
  }
  if (gained_child && a.is_choice()) {
    // Frequencies over the new sibling set are domain knowledge the merge
    // cannot invent; force explicit rebinding.
    std::fill(a.weights.begin(), a.weights.end(), std::nullopt);
  }
}

}  // namespace

Node unify_trees(const Node& a, const Node& b) {
  if (a.kind != NodeKind::Root || b.kind != NodeKind::Root) {
    throw MergeError("unify_trees: both arguments must be rooted trees");
  }
  if (!mergeable(a, b)) {
    throw MergeError("unify_trees: trees do not share a root label ('" +
                     a.label + "' vs '" + b.label + "')");
  }
  Node merged = a;
  merge_into(merged, b, a.label);
  return merged;
}

Node build_at4ea(const std::string& objective,
                 const std::vector<EasRecord>& scenarios,
                 const AemMatrix& matrix) {
  std::set<std::string> names;
  for (const EasRecord& eas : scenarios) {
    if (!names.insert(eas.name).second) {
      throw Error("build_at4ea: duplicate scenario name '" + eas.name + "'");
    }
  }
  Node tree = make_root(objective);
  bool first = true;
  for (const EasRecord& eas : scenarios) {
    Node next = scenario_to_tree(objective, eas, matrix);
    tree = first ? std::move(next) : unify_trees(tree, next);
    first = false;
  }
  return tree;
}

CoverageReport check_coverage(const AemMatrix& matrix,
                              const std::vector<EasRecord>& scenarios) {
  CoverageReport report;
  for (const AemRow& row : matrix.rows) {
    bool used = false;
    for (const EasRecord& eas : scenarios) {
      if (eas.auto_methods) {
        if (row.attrs == eas.attrs) used = true;
      } else if (std::find(eas.available_methods.begin(),
                           eas.available_methods.end(),
                           row.name) != eas.available_methods.end()) {
        used = true;
      }
      if (used) break;
    }
    if (!used) report.uncovered.push_back(row.name);
  }
  return report;
}

std::string NodeSelector::describe() const {
  if (by_path()) return "path '" + path + "'";
  return "scenario '" + scenario + "' / '" + label + "'";
}

namespace {

// Scenario name owning a node, if the node path passes through one.
const Node* enclosing_scenario(const Node& root, const NodeId& id) {
  const Node* n = &root;
  const Node* scenario = nullptr;
  for (std::size_t idx : id) {
    if (n->kind == NodeKind::Scenario) scenario = n;
    n = &n->children[idx];
  }
  return scenario;
}

std::vector<NodeId> resolve_selector(const Node& tree, const PathIndex& paths,
                                     const NodeSelector& sel, NodeKind kind,
                                     bool leaf_only) {
  std::vector<NodeId> out;
  if (sel.by_path()) {
    const NodeId* id = paths.find(sel.path);
    if (!id) return out;
    const Node& n = node_at(tree, *id);
    if (n.kind != kind) return out;
    if (leaf_only && n.gate.has_value()) return out;
    out.push_back(*id);
    return out;
  }
  for (const PathIndex::Entry& e : paths.entries()) {
    const Node& n = node_at(tree, e.id);
    if (n.kind != kind || n.label != sel.label) continue;
    if (leaf_only && n.gate.has_value()) continue;
    const Node* sc = enclosing_scenario(tree, e.id);
    if (sc && sc->label == sel.scenario) out.push_back(e.id);
  }
  return out;
}

}  // namespace

Node bind_parameters(const Node& tree, const ParameterBinding& binding,
                     std::vector<std::string>* warnings) {
  Node out = tree;
  const PathIndex paths(out);
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  for (const AemBinding& b : binding.aems) {
    const auto targets =
        resolve_selector(out, paths, b.where, NodeKind::Aem, false);
    if (targets.empty()) {
      warn("binding for " + b.where.describe() + " matched no AEM node");
      continue;
    }
    for (const NodeId& id : targets) {
      Node& n = node_at(out, id);
      n.err = b.err;
      n.freq = b.freq;
      n.query = b.query;
    }
  }

  for (const CaBinding& b : binding.cas) {
    const auto targets =
        resolve_selector(out, paths, b.where, NodeKind::Ca, true);
    if (targets.empty()) {
      warn("binding for " + b.where.describe() + " matched no CA leaf");
      continue;
    }
    for (const NodeId& id : targets) {
      Node& n = node_at(out, id);
      n.prob = b.prob;
      n.query = b.query;
    }
  }

  for (const WeightBinding& b : binding.weights) {
    const NodeId* pid = paths.find(b.parent_path);
    if (!pid) {
      warn("weight binding parent '" + b.parent_path + "' matched no node");
      continue;
    }
    Node& parent = node_at(out, *pid);
    if (!parent.is_choice()) {
      warn("weight binding parent '" + b.parent_path +
           "' is not a choice node");
      continue;
    }
    // Children are addressed by plain label or by the deduplicated path
    // component when siblings share a label.
    std::vector<std::size_t> matches;
    for (std::size_t i = 0; i < parent.children.size(); ++i) {
      NodeId cid = *pid;
      cid.push_back(i);
      const std::string& cpath = paths.path_of(cid);
      const std::string comp = cpath.substr(cpath.rfind('/') + 1);
      if (comp == b.child_label || parent.children[i].label == b.child_label) {
        matches.push_back(i);
      }
    }
    if (matches.empty()) {
      warn("weight binding child '" + b.child_label + "' under '" +
           b.parent_path + "' matched no edge");
      continue;
    }
    if (matches.size() > 1) {
      throw BindingError("bind_parameters: child label '" + b.child_label +
                         "' is ambiguous under '" + b.parent_path +
                         "'; use the #k suffixed path component");
    }
    parent.weights[matches.front()] = b.w;
  }

  // Single-child edges default to weight 1, matching the pattern's output.
  std::vector<std::string> unbound;
  const PathIndex bound_paths(out);
  for (const PathIndex::Entry& e : bound_paths.entries()) {
    Node& n = node_at(out, e.id);
    if (n.is_choice()) {
      if (n.children.size() == 1 && !n.weights[0]) n.weights[0] = 1.0;
      for (std::size_t i = 0; i < n.weights.size(); ++i) {
        if (!n.weights[i]) {
          NodeId cid = e.id;
          cid.push_back(i);
          unbound.push_back(bound_paths.path_of(cid) + " (edge weight)");
        }
      }
    }
    if (n.kind == NodeKind::Aem && (!n.err || !n.freq || !n.query)) {
      unbound.push_back(e.path + " (err/freq/query)");
    }
    if (n.is_ca_leaf() && (!n.prob || !n.query)) {
      unbound.push_back(e.path + " (prob/query)");
    }
  }
  if (!unbound.empty()) {
    std::string msg = "bind_parameters: binding does not cover:";
    for (const std::string& p : unbound) msg += "\n  " + p;
    throw BindingError(msg);
  }
  return out;
}

}  // namespace at4ea
