#pragma once

#include "at4ea/matrix.hpp"
#include "at4ea/tree.hpp"

// Hand-checked fixtures shared by the unit and acceptance suites. The
// expected metric values are frozen from evaluating the node formulas on
// paper:
//   micro_tree      ap(AEML) = max(0.8*0.9, 0.5*0.7) = 0.72
//                   ap(CAL)  = 0.1 * 0.5 = 0.05
//                   root ap  = 1 * (0.72 * 0.05) = 0.036, method A critical
//   two_scenario    mq(S1) = min(100, 250) + 15 = 115
//                   mq(S2) = 300 + 0 = 300, root mq = 115

namespace at4ea::testing {

inline Node micro_tree() {
  Node scenario = make_scenario(
      "S",
      make_aeml({make_aem("A", 0.8, 0.9, 0), make_aem("B", 0.5, 0.7, 0)}),
      make_cal({make_ca_leaf("C1", 0.1, 0), make_ca_leaf("C2", 0.5, 0)}));
  Node root = make_root("Micro objective");
  add_child(root, std::move(scenario), 1.0);
  return root;
}

inline Node two_scenario_mq_tree() {
  Node s1 = make_scenario(
      "S1",
      make_aeml({make_aem("A1", 0.5, 0.5, 100), make_aem("A2", 0.5, 0.5, 250)}),
      make_cal({make_ca_leaf("C", 0.5, 15)}));
  Node s2 = make_scenario("S2", make_aeml({make_aem("B1", 0.5, 0.5, 300)}),
                          make_cal({make_ca_leaf("C", 0.5, 0)}));
  Node root = make_root("Two scenarios");
  add_child(root, std::move(s1), 0.5);
  add_child(root, std::move(s2), 0.5);
  return root;
}

// The road-sign sticker attack: physical stickers on a stop sign, crafted
// against full model knowledge.
inline AemMatrix road_sign_matrix() {
  AemMatrix m;
  m.rows.push_back({"RP2", {"Physical", "Individual", "Iterative", "White-box"}});
  m.rows.push_back({"FGSM", {"Digital", "Individual", "1-Step", "White-box"}});
  m.rows.push_back(
      {"Boundary Attack", {"Digital", "Individual", "Iterative", "Black-box (query)"}});
  return m;
}

inline EasRecord sticker_eas() {
  EasRecord eas;
  eas.name = "Sticker Attack";
  eas.attrs = {"Physical", "Individual", "Iterative", "White-box"};
  eas.conventional_attacks = {"Get Model Info.", "Set the Stickers"};
  eas.available_methods = {"RP2"};
  return eas;
}

inline Node fig9_subtree() {
  Node scenario = make_scenario(
      "Sticker Attack", make_aeml({make_aem("RP2")}),
      make_cal({make_ca_leaf("Get Model Info."), make_ca_leaf("Set the Stickers")}));
  Node knowledge = make_aea(Dimension::Knowledge, "White-box");
  add_child(knowledge, std::move(scenario), 1.0);
  Node computation = make_aea(Dimension::Computation, "Iterative");
  add_child(computation, std::move(knowledge), 1.0);
  Node scope = make_aea(Dimension::Scope, "Individual");
  add_child(scope, std::move(computation), 1.0);
  Node visibility = make_aea(Dimension::Visibility, "Physical");
  add_child(visibility, std::move(scope), 1.0);
  Node root = make_root("Misclassify the stop sign");
  add_child(root, std::move(visibility), 1.0);
  return root;
}

}  // namespace at4ea::testing
