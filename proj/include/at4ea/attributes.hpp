#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace at4ea {

/// The four attribute dimensions that characterize an adversarial example
/// method. Their declaration order is the canonical order in which AEA
/// levels appear on any root-to-scenario path.
enum class Dimension {
  Visibility,
  Scope,
  Computation,
  Knowledge,
};

inline constexpr std::array<Dimension, 4> kDimensionOrder = {
    Dimension::Visibility,
    Dimension::Scope,
    Dimension::Computation,
    Dimension::Knowledge,
};

/// Index of a dimension in the canonical order (0..3).
int dimension_rank(Dimension d);

/// Lowercase identifier used in file formats ("visibility", "scope", ...).
std::string_view dimension_key(Dimension d);

/// Column header used in matrix CSV files ("Perturbation Visibility", ...).
std::string_view dimension_header(Dimension d);

/// Parses a lowercase dimension key; empty optional if unknown.
std::optional<Dimension> dimension_from_key(std::string_view key);

/// Knowledge value marking subtrees excluded from minimum-query analysis.
inline constexpr std::string_view kWhiteBox = "White-box";

/// One value per dimension. Values are free tokens (trimmed, case-sensitive);
/// the canonical vocabulary is Physical/Digital, Individual/Universal,
/// 1-Step/Iterative, White-box/"Black-box (proxy)"/"Black-box (query)".
struct AttributeVector {
  std::string visibility;
  std::string scope;
  std::string computation;
  std::string knowledge;

  const std::string& value(Dimension d) const;
  std::string& value(Dimension d);

  bool complete() const;  // all four values nonempty

  friend bool operator==(const AttributeVector&, const AttributeVector&) = default;
};

/// Normalizes a knowledge tag: the literature uses "Full" for the white-box
/// setting, so it maps to "White-box". Other tags pass through unchanged.
std::string normalize_knowledge(std::string_view tag);

/// Strips leading and trailing ASCII whitespace.
std::string trim(std::string_view s);

}  // namespace at4ea
