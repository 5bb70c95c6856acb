#include "at4ea/mitigation.hpp"

#include <algorithm>
#include <set>

#include "at4ea/errors.hpp"
#include "at4ea/validate.hpp"

namespace at4ea {

namespace {

// AEA values on the path from the root to (excluding) the node.
AttributeVector path_attrs_of(const Node& root, const NodeId& id) {
  AttributeVector attrs;
  const Node* n = &root;
  for (std::size_t idx : id) {
    if (n->kind == NodeKind::Aea && n->dimension) {
      attrs.value(*n->dimension) = n->label;
    }
    n = &n->children[idx];
  }
  return attrs;
}

bool filter_matches(const AttributeVector& on_path,
                    const std::map<Dimension, std::string>& filter) {
  for (const auto& [dim, value] : filter) {
    if (on_path.value(dim) != value) return false;
  }
  return true;
}

class Applier {
 public:
  Applier(Node& tree, std::vector<std::string>* warnings)
      : tree_(tree), warnings_(warnings) {}

  void apply(const MitigationSpec& spec) {
    for (const Transform& t : spec.transforms) {
      std::visit([&](const auto& tr) { run(spec.name, tr); }, t);
    }
  }

 private:
  void warn(const std::string& msg) {
    if (warnings_) warnings_->push_back(msg);
  }

  void run(const std::string& spec, const ReplaceErr& tr) {
    std::set<std::string> touched;
    const PathIndex paths(tree_);
    for (const PathIndex::Entry& e : paths.entries()) {
      Node& n = node_at(tree_, e.id);
      if (n.kind != NodeKind::Aem) continue;
      auto it = tr.err_by_method.find(n.label);
      if (it == tr.err_by_method.end()) continue;
      if (!filter_matches(path_attrs_of(tree_, e.id), tr.aea_filter)) continue;
      n.err = it->second;
      touched.insert(n.label);
    }
    for (const auto& [method, err] : tr.err_by_method) {
      (void)err;
      if (!touched.count(method)) {
        warn(spec + ": err replacement for '" + method +
             "' matched no AEM node");
      }
    }
  }

  void run(const std::string& spec, const ScaleCaProb& tr) {
    if (tr.factor <= 0.0) {
      throw MitigationError(spec + ": scale factor must be positive");
    }
    bool matched = false;
    const PathIndex paths(tree_);
    for (const PathIndex::Entry& e : paths.entries()) {
      Node& n = node_at(tree_, e.id);
      if (!n.is_ca_leaf() || n.label != tr.ca_label || !n.prob) continue;
      n.prob = std::clamp(*n.prob * tr.factor, 0.0, 1.0);
      matched = true;
    }
    if (!matched) {
      warn(spec + ": CA label '" + tr.ca_label + "' matched no leaf");
    }
  }

  void run(const std::string& spec, const ZeroAemIfQueryGt& tr) {
    std::uint64_t threshold = 0;
    if (tr.threshold) {
      threshold = *tr.threshold;
    } else {
      const MinQuery mq = qr_threshold(tree_);
      if (mq.is_unattainable()) {
        warn(spec +
             ": no black-box scenario exists; query restriction has no "
             "effect");
        return;
      }
      threshold = mq.value();
    }
    bool matched = false;
    const PathIndex paths(tree_);
    for (const PathIndex::Entry& e : paths.entries()) {
      Node& n = node_at(tree_, e.id);
      if (n.kind != NodeKind::Aem || !n.query) continue;
      if (*n.query > threshold) {
        n.err = 0.0;
        matched = true;
      }
    }
    if (!matched) {
      warn(spec + ": no AEM node has query > " + std::to_string(threshold));
    }
  }

  void run(const std::string& spec, const SetWeight& tr) {
    const PathIndex paths(tree_);
    const NodeId* pid = paths.find(tr.parent_path);
    if (!pid) {
      warn(spec + ": weight parent '" + tr.parent_path + "' matched no node");
      return;
    }
    Node& parent = node_at(tree_, *pid);
    if (!parent.is_choice()) {
      warn(spec + ": weight parent '" + tr.parent_path +
           "' is not a choice node");
      return;
    }
    std::vector<std::size_t> matches;
    for (std::size_t i = 0; i < parent.children.size(); ++i) {
      NodeId cid = *pid;
      cid.push_back(i);
      const std::string& cpath = paths.path_of(cid);
      const std::string comp = cpath.substr(cpath.rfind('/') + 1);
      if (comp == tr.child_label || parent.children[i].label == tr.child_label) {
        matches.push_back(i);
      }
    }
    if (matches.empty()) {
      warn(spec + ": weight child '" + tr.child_label + "' under '" +
           tr.parent_path + "' matched no edge");
      return;
    }
    if (matches.size() > 1) {
      throw MitigationError(spec + ": weight child '" + tr.child_label +
                            "' is ambiguous under '" + tr.parent_path + "'");
    }
    parent.weights[matches.front()] = tr.w;
  }

  Node& tree_;
  std::vector<std::string>* warnings_;
};

}  // namespace

Node apply_mitigation(const Node& tree, const MitigationSpec& spec,
                      std::vector<std::string>* warnings) {
  require_validated(tree, "apply_mitigation");
  Node out = tree;
  Applier(out, warnings).apply(spec);

  // A SetWeight that breaks sibling normalization is an error, not a
  // finding: the caller asked for an invalid reweighting.
  const ValidationReport report = validate_structure(out);
  if (report.has_errors()) {
    std::string msg =
        "apply_mitigation: '" + spec.name + "' left the tree invalid:\n";
    for (const Finding* f : report.errors()) {
      msg += "  [" + f->rule + "] " + f->path + ": " + f->message + "\n";
    }
    throw MitigationError(msg);
  }
  return out;
}

MinQuery qr_threshold(const Node& tree) {
  return compute_mq(tree).root_mq;
}

const TradeoffRow* TradeoffTable::find(const std::string& label) const {
  for (const TradeoffRow& row : rows) {
    if (row.label == label) return &row;
  }
  return nullptr;
}

TradeoffTable tradeoff_table(const Node& tree,
                             const std::vector<MitigationSpec>& specs,
                             const std::vector<std::vector<std::string>>& combos,
                             std::vector<std::string>* warnings) {
  TradeoffTable table;
  auto add_row = [&](const std::string& label, double ap) {
    if (table.find(label)) {
      throw MitigationError("tradeoff_table: duplicate row label '" + label +
                            "'");
    }
    table.rows.push_back({label, ap});
  };

  add_row("Plain", compute_ap(tree).root_ap);

  for (const MitigationSpec& spec : specs) {
    add_row(spec.name, compute_ap(apply_mitigation(tree, spec, warnings)).root_ap);
  }

  for (const std::vector<std::string>& combo : combos) {
    if (combo.empty()) {
      throw MitigationError("tradeoff_table: empty mitigation combination");
    }
    Node mitigated = tree;
    std::string label;
    for (const std::string& name : combo) {
      auto it = std::find_if(specs.begin(), specs.end(),
                             [&](const MitigationSpec& s) { return s.name == name; });
      if (it == specs.end()) {
        throw MitigationError("tradeoff_table: unknown mitigation '" + name +
                              "' in combination");
      }
      mitigated = apply_mitigation(mitigated, *it, warnings);
      label += (label.empty() ? "" : "+") + name;
    }
    add_row(label, compute_ap(mitigated).root_ap);
  }
  return table;
}

}  // namespace at4ea
