#include <doctest.h>

#include <algorithm>

#include "at4ea/construct.hpp"
#include "at4ea/errors.hpp"
#include "at4ea/io.hpp"
#include "at4ea/validate.hpp"
#include "support/fixtures.hpp"
#include "support/random_tree.hpp"

using namespace at4ea;
using namespace at4ea::testing;

TEST_CASE("derive_available_methods filters by exact attribute equality") {
  const AemMatrix m = road_sign_matrix();
  CHECK(derive_available_methods(
            m, {"Physical", "Individual", "Iterative", "White-box"}) ==
        std::vector<std::string>{"RP2"});
  CHECK(derive_available_methods(
            m, {"Digital", "Individual", "1-Step", "White-box"}) ==
        std::vector<std::string>{"FGSM"});
  CHECK(derive_available_methods(AemMatrix{}, {"a", "b", "c", "d"}).empty());
}

TEST_CASE("the pattern reproduces the sticker-attack subtree") {
  const Node t =
      scenario_to_tree("Misclassify the stop sign", sticker_eas(), road_sign_matrix());
  CHECK(nodes_equal(t, fig9_subtree()));

  // Four AEA levels in canonical order, then the scenario.
  const Node* n = &t;
  for (Dimension d : kDimensionOrder) {
    REQUIRE(n->children.size() == 1);
    n = &n->children[0];
    CHECK(n->kind == NodeKind::Aea);
    CHECK(n->dimension == d);
  }
  CHECK(n->children[0].kind == NodeKind::Scenario);

  // Every root-to-leaf path has 7 edges.
  std::vector<std::size_t> leaf_depths;
  visit(t, [&](const Node& node, const NodeId& id) {
    if (node.children.empty()) leaf_depths.push_back(id.size());
  });
  REQUIRE_FALSE(leaf_depths.empty());
  for (std::size_t depth : leaf_depths) CHECK(depth == 7);
}

TEST_CASE("pattern output is valid before binding") {
  const Node t =
      scenario_to_tree("Objective", sticker_eas(), road_sign_matrix());
  CHECK_FALSE(validate_tree(t, road_sign_matrix()).has_errors());
}

TEST_CASE("a scenario without conventional attacks gets an empty CAL") {
  EasRecord eas = sticker_eas();
  eas.conventional_attacks.clear();
  const Node t = scenario_to_tree("O", eas, road_sign_matrix());
  const Node& cal = node_at(t, {0, 0, 0, 0, 0, 1});
  CHECK(cal.kind == NodeKind::Cal);
  CHECK(cal.children.empty());
}

TEST_CASE("AUTO method lists resolve against the matrix") {
  EasRecord eas = sticker_eas();
  eas.available_methods.clear();
  eas.auto_methods = true;
  const Node t = scenario_to_tree("O", eas, road_sign_matrix());
  const Node& aeml = node_at(t, {0, 0, 0, 0, 0, 0});
  REQUIRE(aeml.children.size() == 1);
  CHECK(aeml.children[0].label == "RP2");
}

TEST_CASE("invalid scenario records name the offending method") {
  EasRecord eas = sticker_eas();
  eas.available_methods.push_back("NoSuchMethod");
  CHECK_THROWS_WITH_AS(
      scenario_to_tree("O", eas, road_sign_matrix()),
      doctest::Contains("NoSuchMethod"), Error);

  EasRecord wrong = sticker_eas();
  wrong.available_methods = {"FGSM"};  // attributes differ from the scenario
  CHECK_THROWS_WITH_AS(scenario_to_tree("O", wrong, road_sign_matrix()),
                       doctest::Contains("FGSM"), Error);
}

namespace {

EasRecord digital_eas(const std::string& name, const std::string& computation,
                      const std::string& method) {
  EasRecord eas;
  eas.name = name;
  eas.attrs = {"Digital", "Individual", computation, "White-box"};
  eas.conventional_attacks = {"Get Model Info."};
  eas.available_methods = {method};
  return eas;
}

AemMatrix digital_matrix() {
  AemMatrix m;
  m.rows.push_back({"FGSM", {"Digital", "Individual", "1-Step", "White-box"}});
  m.rows.push_back({"CW", {"Digital", "Individual", "Iterative", "White-box"}});
  return m;
}

}  // namespace

TEST_CASE("unification merges the shared prefix and appends the new branch") {
  const AemMatrix m = digital_matrix();
  const Node a = scenario_to_tree("O", digital_eas("Fast", "1-Step", "FGSM"), m);
  const Node b = scenario_to_tree("O", digital_eas("Slow", "Iterative", "CW"), m);
  const Node u = unify_trees(a, b);

  // Shared prefix: root / Digital / Individual.
  const Node& individual = node_at(u, {0, 0});
  CHECK(individual.label == "Individual");
  REQUIRE(individual.children.size() == 2);
  CHECK(individual.children[0].label == "1-Step");
  CHECK(individual.children[1].label == "Iterative");

  // The split point needs fresh frequencies; the untouched prefix keeps w=1.
  CHECK_FALSE(individual.weights[0].has_value());
  CHECK_FALSE(individual.weights[1].has_value());
  CHECK(u.weights[0] == 1.0);
  CHECK(node_at(u, {0}).weights[0] == 1.0);
}

TEST_CASE("unify is idempotent") {
  const Node t = scenario_to_tree("Misclassify the stop sign", sticker_eas(),
                                  road_sign_matrix());
  CHECK(nodes_equal(unify_trees(t, t), t));

  TreeGen gen(777, TreeGenOptions::wide());
  for (int i = 0; i < 25; ++i) {
    const Node r = gen();
    CHECK(nodes_equal(unify_trees(r, r), r));
  }
}

TEST_CASE("unify rejects mismatched roots and conflicting scenarios") {
  const AemMatrix m = digital_matrix();
  const Node a = scenario_to_tree("O1", digital_eas("S", "1-Step", "FGSM"), m);
  const Node b = scenario_to_tree("O2", digital_eas("S", "1-Step", "FGSM"), m);
  CHECK_THROWS_AS(unify_trees(a, b), MergeError);

  // Same scenario name, different body.
  Node c = scenario_to_tree("O1", digital_eas("S", "1-Step", "FGSM"), m);
  node_at(c, {0, 0, 0, 0, 0, 1, 0}).label = "Different step";
  CHECK_THROWS_AS(unify_trees(a, c), MergeError);
}

TEST_CASE("trees diverging at visibility split directly under the root") {
  AemMatrix m = digital_matrix();
  m.rows.push_back({"RP2", {"Physical", "Individual", "Iterative", "White-box"}});
  EasRecord phys;
  phys.name = "Sticker";
  phys.attrs = {"Physical", "Individual", "Iterative", "White-box"};
  phys.available_methods = {"RP2"};
  const Node a = scenario_to_tree("O", digital_eas("Fast", "1-Step", "FGSM"), m);
  const Node b = scenario_to_tree("O", phys, m);
  const Node u = unify_trees(a, b);
  REQUIRE(u.children.size() == 2);
  CHECK(u.children[0].label == "Digital");
  CHECK(u.children[1].label == "Physical");
  CHECK_FALSE(u.weights[0].has_value());
}

TEST_CASE("build_at4ea folds every scenario into one tree") {
  const AemMatrix m = digital_matrix();
  const std::vector<EasRecord> scenarios = {
      digital_eas("Fast", "1-Step", "FGSM"),
      digital_eas("Slow", "Iterative", "CW"),
  };
  const Node t = build_at4ea("O", scenarios, m);
  std::size_t count = 0;
  visit(t, [&](const Node& n, const NodeId&) {
    if (n.kind == NodeKind::Scenario) ++count;
  });
  CHECK(count == 2);

  // Single scenario builds are exactly the pattern output.
  const Node single = build_at4ea("O", {scenarios[0]}, m);
  CHECK(nodes_equal(single, scenario_to_tree("O", scenarios[0], m)));
}

TEST_CASE("build_at4ea rejects duplicate scenario names") {
  const AemMatrix m = digital_matrix();
  const std::vector<EasRecord> scenarios = {
      digital_eas("S", "1-Step", "FGSM"),
      digital_eas("S", "Iterative", "CW"),
  };
  CHECK_THROWS_AS(build_at4ea("O", scenarios, m), Error);
}

TEST_CASE("unification is associative up to child order on disjoint scenarios") {
  AemMatrix m = digital_matrix();
  m.rows.push_back(
      {"Boundary", {"Digital", "Individual", "Iterative", "Black-box (query)"}});
  EasRecord q;
  q.name = "Query";
  q.attrs = {"Digital", "Individual", "Iterative", "Black-box (query)"};
  q.available_methods = {"Boundary"};

  const Node a = scenario_to_tree("O", digital_eas("Fast", "1-Step", "FGSM"), m);
  const Node b = scenario_to_tree("O", digital_eas("Slow", "Iterative", "CW"), m);
  const Node c = scenario_to_tree("O", q, m);
  const Node left = unify_trees(unify_trees(a, b), c);
  const Node right = unify_trees(a, unify_trees(b, c));
  CHECK(serialize_tree(left) == serialize_tree(right));
}

TEST_CASE("coverage reporting") {
  const AemMatrix m = road_sign_matrix();
  std::vector<EasRecord> scenarios = {sticker_eas()};

  SUBCASE("uncovered methods are listed") {
    const CoverageReport r = check_coverage(m, scenarios);
    CHECK_FALSE(r.covered());
    CHECK(std::find(r.uncovered.begin(), r.uncovered.end(), "FGSM") !=
          r.uncovered.end());
  }
  SUBCASE("empty matrix is vacuously covered") {
    CHECK(check_coverage(AemMatrix{}, {}).covered());
  }
  SUBCASE("AUTO scenarios cover what they would derive") {
    EasRecord fgsm;
    fgsm.name = "Fast";
    fgsm.attrs = {"Digital", "Individual", "1-Step", "White-box"};
    fgsm.auto_methods = true;
    scenarios.push_back(fgsm);
    const CoverageReport r = check_coverage(m, scenarios);
    CHECK(std::find(r.uncovered.begin(), r.uncovered.end(), "FGSM") ==
          r.uncovered.end());
  }
}

TEST_CASE("bind_parameters fills a pattern tree") {
  const Node t = scenario_to_tree("Misclassify the stop sign", sticker_eas(),
                                  road_sign_matrix());
  ParameterBinding binding;
  binding.aems.push_back({{"", "Sticker Attack", "RP2"}, 0.72, 0.7, 0});
  binding.cas.push_back({{"", "Sticker Attack", "Get Model Info."}, 0.02, 0});
  binding.cas.push_back({{"", "Sticker Attack", "Set the Stickers"}, 0.1, 0});

  std::vector<std::string> warnings;
  const Node bound = bind_parameters(t, binding, &warnings);
  CHECK(warnings.empty());
  CHECK(validate_tree(bound, road_sign_matrix()).ok());
  CHECK(node_at(bound, {0, 0, 0, 0, 0, 0, 0}).err == 0.72);

  SUBCASE("path-form selectors work too") {
    ParameterBinding by_path = binding;
    by_path.aems[0].where = {
        "Misclassify the stop sign/Physical/Individual/Iterative/White-box/"
        "Sticker Attack/AEML/RP2",
        "", ""};
    by_path.aems[0].err = 0.5;
    const Node b2 = bind_parameters(t, by_path, nullptr);
    CHECK(node_at(b2, {0, 0, 0, 0, 0, 0, 0}).err == 0.5);
  }
  SUBCASE("missing required bindings throw with the unbound paths") {
    ParameterBinding partial;
    partial.aems = binding.aems;
    CHECK_THROWS_WITH_AS(bind_parameters(t, partial, nullptr),
                         doctest::Contains("Get Model Info."), BindingError);
  }
  SUBCASE("unknown keys warn") {
    ParameterBinding extra = binding;
    extra.cas.push_back({{"", "Sticker Attack", "No Such Step"}, 0.1, 0});
    std::vector<std::string> w;
    bind_parameters(t, extra, &w);
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("No Such Step") != std::string::npos);
  }
}

TEST_CASE("shorthand selectors bind every matching leaf") {
  // Two CAs with the same label inside one scenario.
  Node s = make_scenario("S", make_aeml({make_aem("M", 0.5, 0.5, 0)}),
                         make_cal({make_ca_leaf("Access"), make_ca_leaf("Access")}));
  Node root = make_root("R");
  add_child(root, std::move(s), 1.0);

  ParameterBinding binding;
  binding.cas.push_back({{"", "S", "Access"}, 0.25, 3});
  const Node bound = bind_parameters(root, binding, nullptr);
  CHECK(node_at(bound, {0, 1, 0}).prob == 0.25);
  CHECK(node_at(bound, {0, 1, 1}).prob == 0.25);
}

TEST_CASE("weight binding") {
  const AemMatrix m = digital_matrix();
  const Node t = build_at4ea("O",
                             {digital_eas("Fast", "1-Step", "FGSM"),
                              digital_eas("Slow", "Iterative", "CW")},
                             m);
  ParameterBinding binding;
  binding.aems.push_back({{"", "Fast", "FGSM"}, 0.4, 0.9, 0});
  binding.aems.push_back({{"", "Slow", "CW"}, 0.6, 0.9, 0});
  binding.cas.push_back({{"", "Fast", "Get Model Info."}, 0.02, 0});
  binding.cas.push_back({{"", "Slow", "Get Model Info."}, 0.02, 0});
  binding.weights.push_back({"O/Digital/Individual", "1-Step", 0.3});
  binding.weights.push_back({"O/Digital/Individual", "Iterative", 0.7});

  const Node bound = bind_parameters(t, binding, nullptr);
  const Node& individual = node_at(bound, {0, 0});
  CHECK(individual.weights[0] == 0.3);
  CHECK(individual.weights[1] == 0.7);
  CHECK_FALSE(validate_structure(bound).has_errors());

  SUBCASE("ambiguous child labels are rejected") {
    Node dup = make_root("R");
    add_child(dup, make_scenario("S", make_aeml({make_aem("M", 1, 1, 0)}),
                                 make_cal({})));
    add_child(dup, make_scenario("S", make_aeml({make_aem("M", 1, 1, 0)}),
                                 make_cal({})));
    ParameterBinding wb;
    wb.weights.push_back({"R", "S", 0.5});
    CHECK_THROWS_AS(bind_parameters(dup, wb, nullptr), BindingError);
  }
}

TEST_CASE("bound probabilities survive serialization exactly") {
  Node root = make_root("R");
  Node s = make_scenario("S", make_aeml({make_aem("M")}),
                         make_cal({make_ca_leaf("C")}));
  add_child(root, std::move(s), 1.0);

  ParameterBinding binding;
  binding.aems.push_back({{"", "S", "M"}, 0.3, 0.9, 5});
  binding.cas.push_back({{"", "S", "C"}, 0.1, 0});
  const Node bound = bind_parameters(root, binding, nullptr);
  const Node reparsed = parse_tree(serialize_tree(bound));
  CHECK(*node_at(reparsed, {0, 1, 0}).prob == 0.1);
  CHECK(nodes_equal(reparsed, bound));
}
