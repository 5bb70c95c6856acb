#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "at4ea/tree.hpp"

namespace at4ea {

/// Minimum query count for a black-box evasion attack. Either a finite
/// nonnegative count or UNATTAINABLE (no black-box route exists).
/// UNATTAINABLE is a distinct state, not a sentinel number: sums absorb it,
/// minima ignore it unless every operand is unattainable.
class MinQuery {
 public:
  MinQuery() = default;  // unattainable

  static MinQuery unattainable() { return MinQuery(); }
  static MinQuery finite(std::uint64_t queries) {
    MinQuery q;
    q.value_ = queries;
    return q;
  }

  bool is_unattainable() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }

  /// Finite value; throws if unattainable.
  std::uint64_t value() const;

  friend MinQuery operator+(MinQuery a, MinQuery b);
  static MinQuery min(MinQuery a, MinQuery b);

  /// "UNATTAINABLE" or the decimal count.
  std::string to_string() const;

  friend bool operator==(const MinQuery&, const MinQuery&) = default;

 private:
  std::optional<std::uint64_t> value_;
};

/// Attack probability of every node, computed bottom-up:
///   AEM       err * freq
///   AEML      max over children (0 when empty; the attacker plays the
///             single most successful method)
///   CA leaf   prob
///   CA gate   AND: product of children, OR: max of children
///   CAL       product over children (1 when empty)
///   Scenario  ap(AEML) * ap(CAL)
///   Root/AEA  sum of w_i * ap(child_i)
struct ApResult {
  std::map<std::string, double> per_node;  // node path -> ap
  double root_ap = 0.0;

  /// Root-to-leaf selection that contributes most: argmax of w_i * ap at
  /// choice nodes, argmax ap inside the AEML, the whole CAL subtree. Ties
  /// break toward document order.
  std::vector<std::string> critical_path;
};

/// Minimum query of every node under the black-box hypothesis. Subtrees
/// below AEA nodes labeled knowledge = "White-box" are excluded from the
/// calculation entirely; their paths appear in `excluded` and have no
/// per_node entries.
///   AEM       query
///   AEML      min over children (UNATTAINABLE when empty)
///   CA leaf   query
///   CA gate   AND: sum of children, OR: min of children
///   CAL       sum over children (0 when empty)
///   Scenario  mq(AEML) + mq(CAL)
///   Root/AEA  min over non-excluded children, ignoring weights
struct MqResult {
  std::map<std::string, MinQuery> per_node;
  MinQuery root_mq;
  std::set<std::string> excluded;

  /// Cheapest root-to-leaf selection: argmin descent at choice nodes, the
  /// AEML's argmin method, all summed CAL members (OR gates descend into
  /// their argmin child). Empty when the root is UNATTAINABLE.
  std::vector<std::string> critical_path;
};

/// Computes the attack probability of every node. Requires a tree that
/// passes structural validation with no errors and has every err, freq,
/// prob and edge weight bound; otherwise throws ContractError.
ApResult compute_ap(const Node& tree);

/// Computes the black-box minimum query of every included node. Requires a
/// structurally valid tree whose included AEM and leaf CA nodes have bound
/// query parameters; otherwise throws ContractError. Edge weights play no
/// role and may be unbound.
MqResult compute_mq(const Node& tree);

struct MonteCarloResult {
  double estimate = 0.0;
  double std_error = 0.0;  // binomial standard error sqrt(p(1-p)/n)
  std::uint64_t trials = 0;
};

/// Independent simulation oracle for the attack probability. Each trial
/// samples one child per weight at every choice node on the way down,
/// then plays the attack: the attacker uses the best method in the AEML
/// (argmax err*freq) and the best alternative inside OR gates, each AEM
/// succeeds with probability err*freq, each CA leaf with prob, AND gates
/// and the CAL require all members, the scenario requires both lists.
/// Draws come from one sequential generator, so a fixed seed gives a
/// bit-identical estimate. Throws ContractError when trials is zero or the
/// tree is not computable.
MonteCarloResult monte_carlo_ap(const Node& tree, std::uint64_t trials,
                                std::uint64_t seed);

struct ScenarioMq {
  std::string path;
  MinQuery mq;
};

/// Brute-force oracle for the minimum query: flat enumeration of every
/// scenario outside white-box subtrees, each evaluated directly from its
/// AEML queries and CAL sum without the bottom-up fold. The minimum over
/// the entries equals compute_mq's root value (both UNATTAINABLE when no
/// scenario qualifies).
std::vector<ScenarioMq> enumerate_scenarios_mq(const Node& tree);

}  // namespace at4ea
