#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "at4ea/metrics.hpp"
#include "at4ea/tree.hpp"

namespace at4ea {

/// Overwrites err on AEM nodes named in the table, optionally restricted
/// to paths whose AEA values match the filter. Models defenses whose
/// effect is a re-measured error rate (adversarial training, degraded
/// proxy training).
struct ReplaceErr {
  std::map<std::string, double> err_by_method;      // method name -> new err
  std::map<Dimension, std::string> aea_filter;      // empty = everywhere
};

/// Multiplies prob on CA leaves with the given label, clamped to [0, 1].
/// Models steps becoming harder (or easier) by a factor.
struct ScaleCaProb {
  std::string ca_label;
  double factor = 1.0;  // must be > 0
};

/// Sets err to 0 on AEM nodes whose query count exceeds the threshold.
/// An unset threshold means AUTO: resolve it from the tree's minimum
/// query, so the restriction blocks exactly the attacks needing more
/// queries than the cheapest black-box route.
struct ZeroAemIfQueryGt {
  std::optional<std::uint64_t> threshold;  // nullopt = AUTO
};

/// Rebinds one choice edge weight. Sibling weights must be rebound within
/// the same spec so they still sum to 1.
struct SetWeight {
  std::string parent_path;
  std::string child_label;
  double w = 0.0;
};

using Transform = std::variant<ReplaceErr, ScaleCaProb, ZeroAemIfQueryGt, SetWeight>;

struct MitigationSpec {
  std::string name;
  std::vector<Transform> transforms;  // applied in order
};

/// Returns a new tree with the spec's transforms applied in order. The
/// input must be bound and valid. Selectors that match nothing append a
/// warning; a weight rebinding that leaves sibling weights off 1 throws
/// MitigationError.
Node apply_mitigation(const Node& tree, const MitigationSpec& spec,
                      std::vector<std::string>* warnings = nullptr);

/// Threshold for a query-restriction mitigation: the tree's minimum query.
/// UNATTAINABLE when no black-box scenario exists (the restriction then
/// has nothing to block).
MinQuery qr_threshold(const Node& tree);

struct TradeoffRow {
  std::string label;  // "Plain", a spec name, or "A+B" for combinations
  double root_ap = 0.0;
};

/// Root attack probabilities under mitigation alternatives: the plain
/// tree first, then each spec alone, then each requested combination
/// (sequential composition in listed order). Row labels are unique.
struct TradeoffTable {
  std::vector<TradeoffRow> rows;

  const TradeoffRow* find(const std::string& label) const;
};

TradeoffTable tradeoff_table(const Node& tree,
                             const std::vector<MitigationSpec>& specs,
                             const std::vector<std::vector<std::string>>& combos,
                             std::vector<std::string>* warnings = nullptr);

}  // namespace at4ea
