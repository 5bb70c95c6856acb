#include "at4ea/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "at4ea/errors.hpp"
#include "at4ea/validate.hpp"

namespace at4ea {

std::uint64_t MinQuery::value() const {
  if (!value_) throw Error("minimum query is unattainable");
  return *value_;
}

MinQuery operator+(MinQuery a, MinQuery b) {
  if (a.is_unattainable() || b.is_unattainable()) return MinQuery::unattainable();
  return MinQuery::finite(a.value() + b.value());
}

MinQuery MinQuery::min(MinQuery a, MinQuery b) {
  if (a.is_unattainable()) return b;
  if (b.is_unattainable()) return a;
  return finite(std::min(a.value(), b.value()));
}

std::string MinQuery::to_string() const {
  return value_ ? std::to_string(*value_) : "UNATTAINABLE";
}

namespace {

bool is_whitebox_aea(const Node& n) {
  return n.kind == NodeKind::Aea && n.dimension == Dimension::Knowledge &&
         n.label == kWhiteBox;
}

// Collects paths of nodes whose parameters an operation needs but which are
// still unbound, and raises one ContractError naming them all.
class BoundnessCheck {
 public:
  explicit BoundnessCheck(const PathIndex& paths) : paths_(paths) {}

  void missing(const NodeId& id, const char* what) {
    unbound_.push_back(paths_.path_of(id) + " (" + what + ")");
  }

  void require(const char* op) const {
    if (unbound_.empty()) return;
    std::string msg = std::string(op) + ": unbound parameters on:";
    for (const std::string& p : unbound_) msg += "\n  " + p;
    throw ContractError(msg);
  }

 private:
  const PathIndex& paths_;
  std::vector<std::string> unbound_;
};

// ---------------------------------------------------------------------------
// Attack probability
// ---------------------------------------------------------------------------

class ApEngine {
 public:
  explicit ApEngine(const Node& tree) : tree_(tree), paths_(tree) {}

  ApResult run() {
    require_validated(tree_, "compute_ap");
    BoundnessCheck bound(paths_);
    NodeId id;
    check_bound(tree_, id, bound);
    bound.require("compute_ap");

    ApResult out;
    out.root_ap = eval(tree_, id, out);
    trace_critical(tree_, id, out);
    return out;
  }

 private:
  void check_bound(const Node& n, NodeId& id, BoundnessCheck& bound) {
    if (n.is_choice()) {
      for (const auto& w : n.weights) {
        if (!w) bound.missing(id, "edge weight");
      }
    }
    if (n.kind == NodeKind::Aem) {
      if (!n.err) bound.missing(id, "err");
      if (!n.freq) bound.missing(id, "freq");
    }
    if (n.is_ca_leaf() && !n.prob) bound.missing(id, "prob");
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      id.push_back(i);
      check_bound(n.children[i], id, bound);
      id.pop_back();
    }
  }

  double eval(const Node& n, NodeId& id, ApResult& out) {
    std::vector<double> child_ap(n.children.size());
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      id.push_back(i);
      child_ap[i] = eval(n.children[i], id, out);
      id.pop_back();
    }

    double ap = 0.0;
    switch (n.kind) {
      case NodeKind::Aem:
        ap = *n.err * *n.freq;
        break;
      case NodeKind::Aeml:
        ap = child_ap.empty()
                 ? 0.0
                 : *std::max_element(child_ap.begin(), child_ap.end());
        break;
      case NodeKind::Ca:
        if (!n.gate) {
          ap = *n.prob;
        } else if (*n.gate == CaGate::And) {
          ap = 1.0;
          for (double c : child_ap) ap *= c;
        } else {
          ap = *std::max_element(child_ap.begin(), child_ap.end());
        }
        break;
      case NodeKind::Cal:
        ap = 1.0;
        for (double c : child_ap) ap *= c;
        break;
      case NodeKind::Scenario:
        ap = 1.0;
        for (double c : child_ap) ap *= c;  // exactly AEML and CAL
        break;
      case NodeKind::Root:
      case NodeKind::Aea:
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          ap += *n.weights[i] * child_ap[i];
        }
        break;
    }
    out.per_node[paths_.path_of(id)] = ap;
    return ap;
  }

  void append_subtree(const Node& n, NodeId& id, ApResult& out) {
    out.critical_path.push_back(paths_.path_of(id));
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      id.push_back(i);
      append_subtree(n.children[i], id, out);
      id.pop_back();
    }
  }

  void trace_critical(const Node& n, NodeId& id, ApResult& out) {
    out.critical_path.push_back(paths_.path_of(id));
    switch (n.kind) {
      case NodeKind::Root:
      case NodeKind::Aea: {
        if (n.children.empty()) return;
        std::size_t best = 0;
        double best_v = -1.0;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          id.push_back(i);
          const double v = *n.weights[i] * out.per_node.at(paths_.path_of(id));
          id.pop_back();
          if (v > best_v) {
            best_v = v;
            best = i;
          }
        }
        id.push_back(best);
        trace_critical(n.children[best], id, out);
        id.pop_back();
        return;
      }
      case NodeKind::Scenario: {
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          id.push_back(i);
          const Node& c = n.children[i];
          if (c.kind == NodeKind::Aeml) {
            out.critical_path.push_back(paths_.path_of(id));
            if (!c.children.empty()) {
              std::size_t best = 0;
              double best_v = -1.0;
              for (std::size_t j = 0; j < c.children.size(); ++j) {
                id.push_back(j);
                const double v = out.per_node.at(paths_.path_of(id));
                id.pop_back();
                if (v > best_v) {
                  best_v = v;
                  best = j;
                }
              }
              id.push_back(best);
              out.critical_path.push_back(paths_.path_of(id));
              id.pop_back();
            }
          } else {
            append_subtree(c, id, out);  // the whole CAL
          }
          id.pop_back();
        }
        return;
      }
      default:
        return;
    }
  }

  const Node& tree_;
  PathIndex paths_;
};

// ---------------------------------------------------------------------------
// Minimum query
// ---------------------------------------------------------------------------

class MqEngine {
 public:
  explicit MqEngine(const Node& tree) : tree_(tree), paths_(tree) {}

  MqResult run() {
    require_validated(tree_, "compute_mq");
    BoundnessCheck bound(paths_);
    NodeId id;
    check_bound(tree_, id, bound);
    bound.require("compute_mq");

    MqResult out;
    out.root_mq = eval(tree_, id, out);
    if (out.root_mq.is_finite()) trace_critical(tree_, id, out);
    return out;
  }

 private:
  // Only nodes that take part in the calculation need bound queries;
  // white-box subtrees stay untouched.
  void check_bound(const Node& n, NodeId& id, BoundnessCheck& bound) {
    if (is_whitebox_aea(n)) return;
    if (n.kind == NodeKind::Aem && !n.query) bound.missing(id, "query");
    if (n.is_ca_leaf() && !n.query) bound.missing(id, "query");
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      id.push_back(i);
      check_bound(n.children[i], id, bound);
      id.pop_back();
    }
  }

  void mark_excluded(const Node& n, NodeId& id, MqResult& out) {
    out.excluded.insert(paths_.path_of(id));
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      id.push_back(i);
      mark_excluded(n.children[i], id, out);
      id.pop_back();
    }
  }

  MinQuery eval(const Node& n, NodeId& id, MqResult& out) {
    std::vector<MinQuery> child_mq;
    child_mq.reserve(n.children.size());
    std::vector<bool> child_excluded(n.children.size(), false);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      id.push_back(i);
      if (is_whitebox_aea(n.children[i])) {
        child_excluded[i] = true;
        mark_excluded(n.children[i], id, out);
        child_mq.push_back(MinQuery::unattainable());
      } else {
        child_mq.push_back(eval(n.children[i], id, out));
      }
      id.pop_back();
    }

    MinQuery mq = MinQuery::unattainable();
    switch (n.kind) {
      case NodeKind::Aem:
        mq = MinQuery::finite(*n.query);
        break;
      case NodeKind::Aeml:
        for (const MinQuery& c : child_mq) mq = MinQuery::min(mq, c);
        break;
      case NodeKind::Ca:
        if (!n.gate) {
          mq = MinQuery::finite(*n.query);
        } else if (*n.gate == CaGate::And) {
          mq = MinQuery::finite(0);
          for (const MinQuery& c : child_mq) mq = mq + c;
        } else {
          for (const MinQuery& c : child_mq) mq = MinQuery::min(mq, c);
        }
        break;
      case NodeKind::Cal:
        mq = MinQuery::finite(0);
        for (const MinQuery& c : child_mq) mq = mq + c;
        break;
      case NodeKind::Scenario:
        mq = MinQuery::finite(0);
        for (const MinQuery& c : child_mq) mq = mq + c;
        break;
      case NodeKind::Root:
      case NodeKind::Aea:
        // Weights encode frequency, not feasibility: plain min here.
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          if (child_excluded[i]) continue;
          mq = MinQuery::min(mq, child_mq[i]);
        }
        break;
    }
    out.per_node[paths_.path_of(id)] = mq;
    return mq;
  }

  // Every node that contributes to the root value: argmin at min points
  // (choice nodes, AEML, OR gates), every member at sum points (scenario,
  // CAL, AND gates). Ties break toward document order.
  void trace_critical(const Node& n, NodeId& id, MqResult& out) {
    out.critical_path.push_back(paths_.path_of(id));
    switch (n.kind) {
      case NodeKind::Root:
      case NodeKind::Aea:
      case NodeKind::Aeml:
        descend_argmin(n, id, out);
        return;
      case NodeKind::Scenario:
      case NodeKind::Cal:
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          id.push_back(i);
          trace_critical(n.children[i], id, out);
          id.pop_back();
        }
        return;
      case NodeKind::Ca:
        if (!n.gate) return;
        if (*n.gate == CaGate::And) {
          for (std::size_t i = 0; i < n.children.size(); ++i) {
            id.push_back(i);
            trace_critical(n.children[i], id, out);
            id.pop_back();
          }
        } else {
          descend_argmin(n, id, out);
        }
        return;
      case NodeKind::Aem:
        return;
    }
  }

  void descend_argmin(const Node& n, NodeId& id, MqResult& out) {
    std::optional<std::size_t> best;
    std::uint64_t best_v = 0;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      id.push_back(i);
      const std::string& p = paths_.path_of(id);
      id.pop_back();
      if (out.excluded.count(p)) continue;
      const MinQuery mq = out.per_node.at(p);
      if (mq.is_unattainable()) continue;
      if (!best || mq.value() < best_v) {
        best = i;
        best_v = mq.value();
      }
    }
    if (!best) return;  // unreachable when this node's mq is finite
    id.push_back(*best);
    trace_critical(n.children[*best], id, out);
    id.pop_back();
  }

  const Node& tree_;
  PathIndex paths_;
};

// ---------------------------------------------------------------------------
// Monte Carlo oracle
// ---------------------------------------------------------------------------

class MonteCarlo {
 public:
  MonteCarlo(const Node& tree, std::uint64_t seed) : tree_(tree), rng_(seed) {}

  MonteCarloResult run(std::uint64_t trials) {
    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      if (play(tree_)) ++successes;
    }
    MonteCarloResult r;
    r.trials = trials;
    r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    r.std_error =
        std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials));
    return r;
  }

 private:
  // [0, 1) from the single sequential stream; bit-stable across platforms.
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  bool play(const Node& n) {
    switch (n.kind) {
      case NodeKind::Root:
      case NodeKind::Aea: {
        if (n.children.empty()) return false;
        const double u = uniform();
        double cum = 0.0;
        std::size_t pick = n.children.size() - 1;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          cum += *n.weights[i];
          if (u < cum) {
            pick = i;
            break;
          }
        }
        return play(n.children[pick]);
      }
      case NodeKind::Scenario: {
        for (const Node& c : n.children) {
          if (!play(c)) return false;
        }
        return true;
      }
      case NodeKind::Aeml: {
        if (n.children.empty()) return false;
        const Node& best = n.children[best_method(n)];
        return uniform() < *best.err * *best.freq;
      }
      case NodeKind::Cal: {
        for (const Node& c : n.children) {
          if (!play(c)) return false;
        }
        return true;
      }
      case NodeKind::Ca: {
        if (!n.gate) return uniform() < *n.prob;
        if (*n.gate == CaGate::And) {
          for (const Node& c : n.children) {
            if (!play(c)) return false;
          }
          return true;
        }
        return play(n.children[best_alternative(n)]);
      }
      case NodeKind::Aem:
        return uniform() < *n.err * *n.freq;
    }
    return false;
  }

  // Attacker plays the most successful method. Computed locally so the
  // oracle does not depend on compute_ap.
  std::size_t best_method(const Node& aeml) {
    auto it = choice_.find(&aeml);
    if (it != choice_.end()) return it->second;
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t i = 0; i < aeml.children.size(); ++i) {
      const Node& m = aeml.children[i];
      const double v = *m.err * *m.freq;
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    choice_[&aeml] = best;
    return best;
  }

  static double local_ca_ap(const Node& ca) {
    if (!ca.gate) return *ca.prob;
    if (*ca.gate == CaGate::And) {
      double p = 1.0;
      for (const Node& c : ca.children) p *= local_ca_ap(c);
      return p;
    }
    double p = 0.0;
    for (const Node& c : ca.children) p = std::max(p, local_ca_ap(c));
    return p;
  }

  // OR gates model an attacker choosing one alternative, mirroring the
  // AEML rule, so the best branch is the one played.
  std::size_t best_alternative(const Node& gate) {
    auto it = choice_.find(&gate);
    if (it != choice_.end()) return it->second;
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t i = 0; i < gate.children.size(); ++i) {
      const double v = local_ca_ap(gate.children[i]);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    choice_[&gate] = best;
    return best;
  }

  const Node& tree_;
  std::mt19937_64 rng_;
  std::map<const Node*, std::size_t> choice_;
};

}  // namespace

ApResult compute_ap(const Node& tree) {
  return ApEngine(tree).run();
}

MqResult compute_mq(const Node& tree) {
  return MqEngine(tree).run();
}

MonteCarloResult monte_carlo_ap(const Node& tree, std::uint64_t trials,
                                std::uint64_t seed) {
  if (trials == 0) throw ContractError("monte_carlo_ap: trials must be >= 1");
  // Same computability requirements as compute_ap.
  ApEngine(tree).run();
  return MonteCarlo(tree, seed).run(trials);
}

std::vector<ScenarioMq> enumerate_scenarios_mq(const Node& tree) {
  require_validated(tree, "enumerate_scenarios_mq");
  const PathIndex paths(tree);
  BoundnessCheck bound(paths);

  // Direct per-scenario evaluation, no bottom-up fold over the AEA levels.
  struct Walker {
    const PathIndex& paths;
    BoundnessCheck& bound;
    std::vector<ScenarioMq>& out;

    static MinQuery ca_queries(const Node& ca) {
      if (!ca.gate) return MinQuery::finite(*ca.query);
      if (*ca.gate == CaGate::And) {
        MinQuery sum = MinQuery::finite(0);
        for (const Node& c : ca.children) sum = sum + ca_queries(c);
        return sum;
      }
      MinQuery best = MinQuery::unattainable();
      for (const Node& c : ca.children) {
        best = MinQuery::min(best, ca_queries(c));
      }
      return best;
    }

    void check_scenario_bound(const Node& n, NodeId& id) {
      if (n.kind == NodeKind::Aem && !n.query) bound.missing(id, "query");
      if (n.is_ca_leaf() && !n.query) bound.missing(id, "query");
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        id.push_back(i);
        check_scenario_bound(n.children[i], id);
        id.pop_back();
      }
    }

    void precheck(const Node& n, NodeId& id) {
      if (is_whitebox_aea(n)) return;
      if (n.kind == NodeKind::Scenario) {
        check_scenario_bound(n, id);
        return;
      }
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        id.push_back(i);
        precheck(n.children[i], id);
        id.pop_back();
      }
    }

    void walk(const Node& n, NodeId& id) {
      if (is_whitebox_aea(n)) return;
      if (n.kind == NodeKind::Scenario) {
        MinQuery aeml = MinQuery::unattainable();
        MinQuery cal = MinQuery::finite(0);
        for (const Node& c : n.children) {
          if (c.kind == NodeKind::Aeml) {
            for (const Node& m : c.children) {
              aeml = MinQuery::min(aeml, MinQuery::finite(*m.query));
            }
          } else {
            for (const Node& ca : c.children) cal = cal + ca_queries(ca);
          }
        }
        out.push_back({paths.path_of(id), aeml + cal});
        return;
      }
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        id.push_back(i);
        walk(n.children[i], id);
        id.pop_back();
      }
    }
  };

  std::vector<ScenarioMq> out;
  Walker w{paths, bound, out};
  NodeId id;
  w.precheck(tree, id);
  bound.require("enumerate_scenarios_mq");
  w.walk(tree, id);
  return out;
}

}  // namespace at4ea
