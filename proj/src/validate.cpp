#include "at4ea/validate.hpp"

#include <cmath>
#include <sstream>

#include "at4ea/errors.hpp"

namespace at4ea {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

bool child_kind_allowed(NodeKind parent, NodeKind child) {
  switch (parent) {
    case NodeKind::Root:
    case NodeKind::Aea:
      return child == NodeKind::Aea || child == NodeKind::Scenario;
    case NodeKind::Scenario:
      return child == NodeKind::Aeml || child == NodeKind::Cal;
    case NodeKind::Aeml:
      return child == NodeKind::Aem;
    case NodeKind::Cal:
    case NodeKind::Ca:
      return child == NodeKind::Ca;
    case NodeKind::Aem:
      return false;
  }
  return false;
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

class Validator {
 public:
  Validator(const Node& tree, const AemMatrix* matrix)
      : tree_(tree), matrix_(matrix), paths_(tree) {}

  ValidationReport run() {
    if (tree_.kind != NodeKind::Root) {
      add(Severity::Error, "root-kind", {},
          "tree must be rooted at a root node");
    }
    NodeId id;
    AttributeVector path_attrs;  // AEA values seen so far; "" = absent
    check(tree_, id, -1, path_attrs);
    return std::move(report_);
  }

 private:
  void add(Severity sev, std::string rule, const NodeId& id, std::string msg) {
    report_.findings.push_back(
        {sev, std::move(rule), paths_.path_of(id), std::move(msg)});
  }

  void check(const Node& n, NodeId& id, int last_dim_rank,
             AttributeVector path_attrs) {
    check_labels(n, id);
    check_fields(n, id);

    int dim_rank = last_dim_rank;
    if (n.kind == NodeKind::Aea) {
      if (!n.dimension) {
        add(Severity::Error, "aea-dimension", id,
            "AEA node has no attribute dimension");
      } else {
        const int r = dimension_rank(*n.dimension);
        if (r <= last_dim_rank) {
          add(Severity::Error, "aea-order", id,
              "AEA dimensions must appear at most once and in the order "
              "visibility, scope, computation, knowledge");
        }
        dim_rank = r;
        path_attrs.value(*n.dimension) = n.label;
      }
    }

    if (n.is_choice()) check_weights(n, id);
    if (n.kind == NodeKind::Scenario) check_scenario(n, id, path_attrs);
    if (n.kind == NodeKind::Ca) check_ca(n, id);
    if (n.kind == NodeKind::Aem) check_aem(n, id, path_attrs);

    for (std::size_t i = 0; i < n.children.size(); ++i) {
      id.push_back(i);
      if (!child_kind_allowed(n.kind, n.children[i].kind)) {
        add(Severity::Error, "child-kind", id,
            std::string("a ") + std::string(kind_name(n.kind)) +
                " node may not have a " +
                std::string(kind_name(n.children[i].kind)) + " child");
      }
      check(n.children[i], id, dim_rank, path_attrs);
      id.pop_back();
    }
  }

  void check_labels(const Node& n, const NodeId& id) {
    const bool labeled = n.kind != NodeKind::Aeml && n.kind != NodeKind::Cal;
    if (labeled && n.label.empty()) {
      add(Severity::Error, "label-empty", id, "node label must be nonempty");
    }
  }

  // Fields set on node kinds they do not belong to point at construction
  // bugs; report them rather than silently ignoring.
  void check_fields(const Node& n, const NodeId& id) {
    const bool aem = n.kind == NodeKind::Aem;
    const bool ca = n.kind == NodeKind::Ca;
    if ((n.err || n.freq) && !aem) {
      add(Severity::Error, "field-misuse", id,
          "err/freq are only valid on AEM nodes");
    }
    if (n.prob && !ca) {
      add(Severity::Error, "field-misuse", id, "prob is only valid on CA nodes");
    }
    if (n.query && !aem && !ca) {
      add(Severity::Error, "field-misuse", id,
          "query is only valid on AEM and CA nodes");
    }
    if (n.gate && !ca) {
      add(Severity::Error, "field-misuse", id, "gate is only valid on CA nodes");
    }
    if (n.dimension && n.kind != NodeKind::Aea) {
      add(Severity::Error, "field-misuse", id,
          "dimension is only valid on AEA nodes");
    }
    if (!n.weights.empty() && !n.is_choice()) {
      add(Severity::Error, "field-misuse", id,
          "edge weights are only valid on root and AEA nodes");
    }
  }

  void check_weights(const Node& n, const NodeId& id) {
    if (n.weights.size() != n.children.size()) {
      add(Severity::Error, "weights-shape", id,
          "choice node must carry one weight slot per child");
      return;
    }
    bool all_bound = true;
    double sum = 0.0;
    for (const auto& w : n.weights) {
      if (!w) {
        all_bound = false;
        continue;
      }
      sum += *w;
      if (!in_unit_interval(*w)) {
        add(Severity::Error, "weight-range", id,
            "edge weight must lie in [0, 1]");
      }
    }
    if (!all_bound) {
      add(Severity::Warning, "weight-unbound", id,
          "choice node has unbound edge weights; rebinding required");
    } else if (!n.children.empty() &&
               std::abs(sum - 1.0) > kWeightSumTolerance) {
      std::ostringstream msg;
      msg << "sibling weights sum to " << sum << ", expected 1";
      add(Severity::Error, "weights-sum", id, msg.str());
    }
  }

  void check_scenario(const Node& n, const NodeId& id,
                      const AttributeVector&) {
    std::size_t aeml = 0;
    std::size_t cal = 0;
    for (const Node& c : n.children) {
      if (c.kind == NodeKind::Aeml) ++aeml;
      if (c.kind == NodeKind::Cal) ++cal;
    }
    if (n.children.size() != 2 || aeml != 1 || cal != 1) {
      add(Severity::Error, "scenario-arity", id,
          "scenario node must have exactly one AEML and one CAL child");
    }
  }

  void check_ca(const Node& n, const NodeId& id) {
    if (n.gate) {
      if (n.children.empty()) {
        add(Severity::Error, "ca-gate-empty", id,
            "CA gate must have at least one child");
      }
      if (n.prob || n.query) {
        add(Severity::Error, "ca-shape", id,
            "CA gate must not carry leaf parameters");
      }
    } else {
      if (!n.children.empty()) {
        add(Severity::Error, "ca-shape", id,
            "CA leaf must not have children; set a gate to branch");
      }
      if (n.prob && !in_unit_interval(*n.prob)) {
        add(Severity::Error, "param-range", id, "prob must lie in [0, 1]");
      }
      if (!n.prob || !n.query) {
        add(Severity::Warning, "param-unbound", id,
            "CA leaf has unbound prob/query parameters");
      }
    }
  }

  void check_aem(const Node& n, const NodeId& id,
                 const AttributeVector& path_attrs) {
    if (n.err && !in_unit_interval(*n.err)) {
      add(Severity::Error, "param-range", id, "err must lie in [0, 1]");
    }
    if (n.freq && !in_unit_interval(*n.freq)) {
      add(Severity::Error, "param-range", id, "freq must lie in [0, 1]");
    }
    if (!n.err || !n.freq || !n.query) {
      add(Severity::Warning, "param-unbound", id,
          "AEM node has unbound err/freq/query parameters");
    }
    if (!matrix_) return;
    const AemRow* row = matrix_->find(n.label);
    if (!row) {
      add(Severity::Error, "matrix-missing", id,
          "method '" + n.label + "' has no matrix row");
      return;
    }
    for (Dimension d : kDimensionOrder) {
      const std::string& on_path = path_attrs.value(d);
      if (on_path.empty()) continue;  // dimension absent on this path
      if (row->attrs.value(d) != on_path) {
        add(Severity::Error, "aem-attrs", id,
            "method '" + n.label + "' has " + std::string(dimension_key(d)) +
                " '" + row->attrs.value(d) + "' but the path requires '" +
                on_path + "'");
      }
    }
  }

  const Node& tree_;
  const AemMatrix* matrix_;
  PathIndex paths_;
  ValidationReport report_;
};

}  // namespace

bool ValidationReport::has_errors() const {
  for (const Finding& f : findings) {
    if (f.severity == Severity::Error) return true;
  }
  return false;
}

std::vector<const Finding*> ValidationReport::errors() const {
  std::vector<const Finding*> out;
  for (const Finding& f : findings) {
    if (f.severity == Severity::Error) out.push_back(&f);
  }
  return out;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const Finding& f : findings) {
    os << (f.severity == Severity::Error ? "ERROR" : "WARNING") << " ["
       << f.rule << "] " << f.path << ": " << f.message << "\n";
  }
  return os.str();
}

ValidationReport validate_structure(const Node& tree) {
  return Validator(tree, nullptr).run();
}

ValidationReport validate_tree(const Node& tree, const AemMatrix& matrix) {
  return Validator(tree, &matrix).run();
}

void require_validated(const Node& tree, const char* op) {
  const ValidationReport report = validate_structure(tree);
  if (!report.has_errors()) return;
  std::string msg = std::string(op) + ": tree fails structural validation:\n";
  for (const Finding* f : report.errors()) {
    msg += "  [" + f->rule + "] " + f->path + ": " + f->message + "\n";
  }
  throw ContractError(msg);
}

}  // namespace at4ea
