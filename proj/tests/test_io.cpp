#include <doctest.h>

#include <filesystem>

#include "at4ea/dot.hpp"
#include "at4ea/errors.hpp"
#include "at4ea/io.hpp"
#include "at4ea/metrics.hpp"
#include "at4ea/validate.hpp"
#include "support/fixtures.hpp"

using namespace at4ea;
using namespace at4ea::testing;

static const char* kDataDir = AT4EA_DATA_DIR;

TEST_CASE("matrix CSV parsing") {
  SUBCASE("one row with knowledge normalization") {
    const std::string text =
        std::string(kMatrixCsvHeader) + "\nFGSM,Digital,Individual,1-Step,Full\n";
    const AemMatrix m = parse_matrix_csv(text);
    REQUIRE(m.rows.size() == 1);
    CHECK(m.rows[0].name == "FGSM");
    CHECK(m.rows[0].attrs.knowledge == "White-box");
  }
  SUBCASE("whitespace is trimmed") {
    const std::string text = std::string(kMatrixCsvHeader) +
                             "\n  FGSM , Digital , Individual , 1-Step , "
                             "White-box \n";
    CHECK(parse_matrix_csv(text).rows[0].attrs.visibility == "Digital");
  }
  SUBCASE("header-only file gives an empty matrix") {
    CHECK(parse_matrix_csv(std::string(kMatrixCsvHeader) + "\n").rows.empty());
  }
  SUBCASE("wrong header") {
    CHECK_THROWS_AS(parse_matrix_csv("Attack,Vis\nFGSM,Digital\n"), ParseError);
  }
  SUBCASE("duplicate names carry the line number") {
    const std::string text = std::string(kMatrixCsvHeader) +
                             "\nFGSM,Digital,Individual,1-Step,White-box\n"
                             "FGSM,Digital,Individual,1-Step,White-box\n";
    try {
      parse_matrix_csv(text, "m.csv");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 3);
    }
  }
  SUBCASE("empty cell") {
    const std::string text =
        std::string(kMatrixCsvHeader) + "\nFGSM,,Individual,1-Step,White-box\n";
    CHECK_THROWS_AS(parse_matrix_csv(text), ParseError);
  }
  SUBCASE("round trip") {
    const AemMatrix m = road_sign_matrix();
    const AemMatrix again = parse_matrix_csv(serialize_matrix_csv(m));
    REQUIRE(again.rows.size() == m.rows.size());
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      CHECK(again.rows[i].name == m.rows[i].name);
      CHECK(again.rows[i].attrs == m.rows[i].attrs);
    }
    CHECK(serialize_matrix_csv(again) == serialize_matrix_csv(m));
  }
}

TEST_CASE("scenario JSON parsing") {
  SUBCASE("the sticker attack record") {
    const std::string text = R"([{
      "name": "Sticker Attack",
      "visibility": "Physical", "scope": "Individual",
      "computation": "Iterative", "knowledge": "White-box",
      "conventional_attacks": ["Get Model Info.", "Set the Stickers"],
      "available_methods": ["RP2"]
    }])";
    const auto records = parse_scenarios_json(text);
    REQUIRE(records.size() == 1);
    const EasRecord& r = records[0];
    CHECK(r.name == "Sticker Attack");
    CHECK(r.attrs ==
          AttributeVector{"Physical", "Individual", "Iterative", "White-box"});
    CHECK(r.conventional_attacks ==
          std::vector<std::string>{"Get Model Info.", "Set the Stickers"});
    CHECK(r.available_methods == std::vector<std::string>{"RP2"});
    CHECK_FALSE(r.auto_methods);
  }
  SUBCASE("AUTO method derivation marker") {
    const std::string text = R"([{
      "name": "S", "visibility": "Digital", "scope": "Individual",
      "computation": "1-Step", "knowledge": "Full",
      "conventional_attacks": [], "available_methods": "AUTO"
    }])";
    const auto records = parse_scenarios_json(text);
    CHECK(records[0].auto_methods);
    CHECK(records[0].attrs.knowledge == "White-box");
  }
  SUBCASE("empty document") {
    CHECK(parse_scenarios_json("[]").empty());
  }
  SUBCASE("missing keys and unknown dimensions fail") {
    CHECK_THROWS_AS(parse_scenarios_json(R"([{"name": "S"}])"), ParseError);
    CHECK_THROWS_AS(parse_scenarios_json(R"([{
      "name": "S", "visibility": "Digital", "scope": "Individual",
      "computation": "1-Step", "knowledge": "Full", "color": "red",
      "conventional_attacks": [], "available_methods": "AUTO"
    }])"),
                    ParseError);
  }
  SUBCASE("round trip") {
    std::vector<EasRecord> records = {sticker_eas()};
    EasRecord auto_rec;
    auto_rec.name = "Auto";
    auto_rec.attrs = {"Digital", "Individual", "1-Step", "White-box"};
    auto_rec.auto_methods = true;
    records.push_back(auto_rec);
    const auto again = parse_scenarios_json(serialize_scenarios_json(records));
    REQUIRE(again.size() == 2);
    CHECK(again[0].name == records[0].name);
    CHECK(again[0].attrs == records[0].attrs);
    CHECK(again[0].conventional_attacks == records[0].conventional_attacks);
    CHECK(again[0].available_methods == records[0].available_methods);
    CHECK(again[1].auto_methods);
    CHECK(serialize_scenarios_json(again) == serialize_scenarios_json(records));
  }
}

TEST_CASE("tree format round trips") {
  Node t = fig9_subtree();
  Node& aem = node_at(t, {0, 0, 0, 0, 0, 0, 0});
  aem.err = 0.1;  // deliberately awkward decimals
  aem.freq = 0.3;
  aem.query = 17;

  const std::string text = serialize_tree(t);
  const Node parsed = parse_tree(text);
  CHECK(nodes_equal(parsed, t));
  CHECK(serialize_tree(parsed) == text);

  SUBCASE("decimal weights reparse exactly") {
    Node w = micro_tree();
    w.weights[0] = 0.1;
    // 0.1 breaks the sum rule, but serialization is value-faithful anyway.
    const Node again = parse_tree(serialize_tree(w));
    CHECK(*again.weights[0] == 0.1);
  }
  SUBCASE("gates survive the round trip") {
    Node gate = make_ca_gate(
        "Access", CaGate::Or,
        {make_ca_leaf("Physical", 0.3, 0), make_ca_leaf("Remote", 0.2, 10)});
    Node root = make_root("R");
    Node s = make_scenario("S", make_aeml({make_aem("M", 0.5, 0.5, 0)}),
                           make_cal({}));
    s.children[1].children.push_back(std::move(gate));
    add_child(root, std::move(s), 1.0);
    CHECK(nodes_equal(parse_tree(serialize_tree(root)), root));
  }
  SUBCASE("labels with quotes and newlines survive") {
    Node root = make_root("Say \"stop\"\nplease\\now");
    add_child(root, make_scenario("S", make_aeml({}), make_cal({})), 1.0);
    CHECK(nodes_equal(parse_tree(serialize_tree(root)), root));
  }
}

TEST_CASE("tree format rejects malformed input") {
  SUBCASE("missing header") {
    CHECK_THROWS_AS(parse_tree("root \"R\"\n"), ParseError);
  }
  SUBCASE("two AEML blocks under one scenario") {
    const std::string text =
        "at4ea v1\n"
        "root \"R\"\n"
        "  scenario \"S\" w=1\n"
        "    aeml\n"
        "    aeml\n";
    CHECK_THROWS_WITH_AS(parse_tree(text), doctest::Contains("AEML"),
                         ParseError);
  }
  SUBCASE("unknown node kind with location") {
    const std::string text = "at4ea v1\nroot \"R\"\n  widget \"X\"\n";
    try {
      parse_tree(text, "t.at4ea");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 3);
      CHECK(std::string(e.what()).find("widget") != std::string::npos);
    }
  }
  SUBCASE("indentation jump") {
    const std::string text = "at4ea v1\nroot \"R\"\n      scenario \"S\"\n";
    CHECK_THROWS_AS(parse_tree(text), ParseError);
  }
  SUBCASE("weight under a non-choice parent") {
    const std::string text =
        "at4ea v1\n"
        "root \"R\"\n"
        "  scenario \"S\" w=1\n"
        "    aeml\n"
        "      aem \"M\" w=0.5\n";
    CHECK_THROWS_AS(parse_tree(text), ParseError);
  }
  SUBCASE("negative query") {
    const std::string text =
        "at4ea v1\n"
        "root \"R\"\n"
        "  scenario \"S\" w=1\n"
        "    aeml\n"
        "      aem \"M\" err=0.5 freq=0.5 query=-3\n";
    CHECK_THROWS_AS(parse_tree(text), ParseError);
  }
}

TEST_CASE("binding and mitigation files parse") {
  const std::string binding_text = R"({
    "aem": [{"scenario": "S", "method": "M", "err": 0.5, "freq": 0.9, "query": 10}],
    "ca": [{"path": "R/S/CAL/C", "prob": 0.1, "query": 0}],
    "weights": [{"parent": "R", "child": "S", "w": 1.0}]
  })";
  const ParameterBinding b = parse_binding_json(binding_text);
  REQUIRE(b.aems.size() == 1);
  CHECK(b.aems[0].where.scenario == "S");
  CHECK(b.aems[0].query == 10);
  REQUIRE(b.cas.size() == 1);
  CHECK(b.cas[0].where.by_path());
  REQUIRE(b.weights.size() == 1);

  CHECK_THROWS_AS(parse_binding_json(R"({"aem": [{"scenario": "S"}]})"),
                  ParseError);

  const std::string mit_text = R"([
    {"name": "QR", "transforms": [{"type": "zero_aem_if_query_gt", "threshold": "AUTO"}]},
    {"name": "CQ", "transforms": [{"type": "scale_ca_prob", "label": "X", "factor": 0.5}]}
  ])";
  const auto specs = parse_mitigations_json(mit_text);
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].name == "QR");
  CHECK(std::holds_alternative<ZeroAemIfQueryGt>(specs[0].transforms[0]));

  CHECK_THROWS_AS(
      parse_mitigations_json(R"([{"name": "X", "transforms": [{"type": "?"}]}])"),
      ParseError);
  CHECK_THROWS_AS(parse_mitigations_json(R"([
    {"name": "A", "transforms": []}, {"name": "A", "transforms": []}
  ])"),
                  ParseError);
}

TEST_CASE("bundled projects load and validate") {
  for (const char* name : {"item_classification", "road_sign"}) {
    const std::string path =
        std::string(kDataDir) + "/" + name + "/project.json";
    const Project project = load_project(path);
    CHECK_FALSE(project.matrix.rows.empty());
    CHECK_FALSE(project.scenarios.empty());
    REQUIRE(project.binding.has_value());

    Node tree =
        build_at4ea(project.objective, project.scenarios, project.matrix);
    tree = bind_parameters(tree, *project.binding, nullptr);
    CHECK(validate_tree(tree, project.matrix).ok());
  }
}

TEST_CASE("project file must name its inputs") {
  CHECK_THROWS_AS(parse_project_json(R"({"matrix": "m.csv"})"), ParseError);
  CHECK_THROWS_AS(parse_project_json(R"({"objective": "x"})"), ParseError);
  CHECK_THROWS_AS(load_project("/nonexistent/project.json"), IoError);
}

TEST_CASE("DOT rendering") {
  const Node t = micro_tree();
  const ApResult ap = compute_ap(t);
  const MqResult mq = compute_mq(t);

  SUBCASE("critical-path coloring") {
    const std::string dot = render_dot(t, &ap, &mq);
    CHECK(dot.find("digraph at4ea {") == 0);
    // The argmax method A is red (it is not on the query path: that one
    // runs through A as well here, so accept purple too).
    bool a_styled = false;
    std::istringstream lines(dot);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find("label=\"A\\n") != std::string::npos) {
        a_styled = line.find("color=red") != std::string::npos ||
                   line.find("color=purple") != std::string::npos;
      }
      // B is the worse method: never on a critical path.
      if (line.find("label=\"B\\n") != std::string::npos) {
        CHECK(line.find("color=") == std::string::npos);
      }
    }
    CHECK(a_styled);
  }
  SUBCASE("no annotations, no colors") {
    const std::string dot = render_dot(t);
    CHECK(dot.find("color=") == std::string::npos);
    CHECK(dot.find("ap=") == std::string::npos);
  }
  SUBCASE("weights label the choice edges") {
    const std::string dot = render_dot(t);
    CHECK(dot.find("[label=\"w=1\"]") != std::string::npos);
  }
  SUBCASE("structural well-formedness") {
    const std::string dot = render_dot(t, &ap, nullptr);
    int braces = 0;
    for (char c : dot) {
      if (c == '{') ++braces;
      if (c == '}') --braces;
    }
    CHECK(braces == 0);
    CHECK(dot.back() == '\n');
  }
  SUBCASE("annotations from another tree are rejected") {
    const ApResult other = compute_ap(two_scenario_mq_tree());
    CHECK_THROWS_AS(render_dot(t, &other, nullptr), ContractError);
  }
}

TEST_CASE("csv escaping quotes fields with separators") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("format_double is shortest-round-trip") {
  for (double v : {0.1, 0.3, 1.0 / 3.0, 1e-12, 123456.789}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.1) == "0.1");
}
