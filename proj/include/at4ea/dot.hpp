#pragma once

#include <string>

#include "at4ea/metrics.hpp"
#include "at4ea/tree.hpp"

namespace at4ea {

/// Renders the tree as a DOT digraph. Node shapes follow the kind, choice
/// edges carry their weight labels. When results are given their values
/// appear in the node labels and the critical paths are colored: red for
/// the attack-probability path, blue for the minimum-query path, purple
/// when a node sits on both. Nodes excluded from the query analysis show
/// no mq line. Throws ContractError when an annotation was computed on a
/// different tree.
std::string render_dot(const Node& tree, const ApResult* ap = nullptr,
                       const MqResult* mq = nullptr);

}  // namespace at4ea
