#pragma once

#include <string>
#include <vector>

#include "at4ea/attributes.hpp"

namespace at4ea {

/// One adversarial example method with its four attributes, as organized
/// from the literature.
struct AemRow {
  std::string name;
  AttributeVector attrs;
};

/// The adversarial example matrix: the method knowledge base a risk
/// analysis draws from. Row names are unique (enforced by the parsers and
/// by `check`).
struct AemMatrix {
  std::vector<AemRow> rows;

  const AemRow* find(const std::string& name) const;

  /// Returns problems with the matrix itself (duplicate names, incomplete
  /// attribute vectors), one message per finding. Empty means well formed.
  std::vector<std::string> check() const;
};

/// An evasion attack scenario: a named attack procedure, the attribute
/// vector it operates under, its conventional-attack steps in order, and
/// the matrix methods available to it.
struct EasRecord {
  std::string name;
  AttributeVector attrs;
  std::vector<std::string> conventional_attacks;
  std::vector<std::string> available_methods;

  /// True while available methods await derivation from the matrix.
  bool auto_methods = false;
};

/// Checks the EAS invariants against a matrix: every available method must
/// exist and carry attributes equal to the scenario's. Returns one message
/// per violation.
std::vector<std::string> check_eas(const EasRecord& eas, const AemMatrix& matrix);

}  // namespace at4ea
