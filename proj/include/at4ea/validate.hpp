#pragma once

#include <string>
#include <vector>

#include "at4ea/matrix.hpp"
#include "at4ea/tree.hpp"

namespace at4ea {

enum class Severity { Error, Warning };

struct Finding {
  Severity severity = Severity::Error;
  std::string rule;     // stable identifier, e.g. "weights-sum"
  std::string path;     // node path the finding is anchored to
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
  bool has_errors() const;
  std::vector<const Finding*> errors() const;

  /// One line per finding: "ERROR [rule] path: message".
  std::string to_string() const;
};

/// Checks every shape invariant that does not involve the method matrix:
/// node arities and child kinds, weight ranges and sums (tolerance 1e-9),
/// the fixed AEA dimension order along paths, parameter ranges, and gate
/// shapes. Unbound parameters and weights are reported as warnings, since
/// systematically constructed trees are legal before binding; the metric
/// operations reject them separately.
ValidationReport validate_structure(const Node& tree);

/// Full validation: structure plus matrix consistency. Every Aem node must
/// name a matrix row, and that row's attributes must equal the AEA values
/// on the path above the node's scenario for every dimension present.
/// Missing rows are findings, not exceptions.
ValidationReport validate_tree(const Node& tree, const AemMatrix& matrix);

/// Throws ContractError when the structural report has errors. Used by the
/// metric operations to enforce their preconditions.
void require_validated(const Node& tree, const char* op);

}  // namespace at4ea
