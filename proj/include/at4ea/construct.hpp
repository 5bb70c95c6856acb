#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "at4ea/matrix.hpp"
#include "at4ea/tree.hpp"

namespace at4ea {

/// Matrix rows whose attribute vector equals `attrs`, in matrix order.
/// A scenario satisfying some methods' hypotheses can use every method
/// with the same attributes.
std::vector<std::string> derive_available_methods(const AemMatrix& matrix,
                                                  const AttributeVector& attrs);

/// Translates one scenario into its tree: the objective becomes the root,
/// the scenario attributes become one AEA level each in the fixed
/// dimension order, and the scenario node carries an AEML with one node
/// per available method and a CAL with one leaf per conventional attack,
/// both in declared order. Every numeric parameter starts unbound;
/// single-child edges get weight 1. Records with auto_methods resolve
/// their method list from the matrix first.
/// Throws BindingError-free construction errors (Error) when the record
/// violates its invariants, naming the offending method.
Node scenario_to_tree(const std::string& objective, const EasRecord& eas,
                      const AemMatrix& matrix);

/// Merges two trees that share a root label. Nodes with equal kind and
/// label along the shared prefix merge recursively; novel children of b
/// are appended after a's children. Scenario nodes with equal names must
/// be structurally identical. A choice node that gains a novel child has
/// all of its edge weights reset to unbound (the analyst must redistribute
/// frequencies); untouched nodes keep a's weights, so unify(t, t) == t.
/// Throws MergeError on root mismatch or scenario conflicts.
Node unify_trees(const Node& a, const Node& b);

/// Translates every scenario and folds the results left-to-right through
/// unify_trees. Scenario names must be unique across the inputs. The
/// output contains exactly one scenario node per input record.
Node build_at4ea(const std::string& objective,
                 const std::vector<EasRecord>& scenarios,
                 const AemMatrix& matrix);

/// Matrix methods that no scenario can use. An empty list means the
/// scenario set covers the whole matrix.
struct CoverageReport {
  std::vector<std::string> uncovered;

  bool covered() const { return uncovered.empty(); }
};

CoverageReport check_coverage(const AemMatrix& matrix,
                              const std::vector<EasRecord>& scenarios);

/// Addresses parameter targets either by exact node path or by
/// (scenario name, leaf label); the shorthand resolves to every matching
/// leaf under every scenario node with that name.
struct NodeSelector {
  std::string path;      // nonempty selects by exact path
  std::string scenario;  // else scenario + label
  std::string label;

  bool by_path() const { return !path.empty(); }
  std::string describe() const;
};

struct AemBinding {
  NodeSelector where;
  double err = 0.0;
  double freq = 0.0;
  std::uint64_t query = 0;
};

struct CaBinding {
  NodeSelector where;
  double prob = 0.0;
  std::uint64_t query = 0;
};

struct WeightBinding {
  std::string parent_path;
  std::string child_label;  // plain label or deduplicated path component
  double w = 0.0;
};

struct ParameterBinding {
  std::vector<AemBinding> aems;
  std::vector<CaBinding> cas;
  std::vector<WeightBinding> weights;
};

/// Returns a copy of the tree with parameters applied. Unmatched binding
/// entries become warnings (appended to *warnings when given). Single-child
/// choice edges default to weight 1. After application every AEM and leaf
/// CA parameter and every edge weight must be bound; otherwise throws
/// BindingError listing the unbound paths. Ambiguous weight child labels
/// also throw.
Node bind_parameters(const Node& tree, const ParameterBinding& binding,
                     std::vector<std::string>* warnings = nullptr);

}  // namespace at4ea
