#include "at4ea/cli.hpp"

#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "at4ea/construct.hpp"
#include "at4ea/dot.hpp"
#include "at4ea/errors.hpp"
#include "at4ea/io.hpp"
#include "at4ea/metrics.hpp"
#include "at4ea/mitigation.hpp"
#include "at4ea/validate.hpp"

namespace at4ea {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnalysis = 1;
constexpr int kExitParse = 2;

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
}

// Builds and, when a binding is present, binds the project tree.
Node assemble_tree(const Project& project, std::ostream& out, std::ostream& err) {
  const CoverageReport coverage =
      check_coverage(project.matrix, project.scenarios);
  for (const std::string& m : coverage.uncovered) {
    err << "warning: method '" << m << "' is not covered by any scenario\n";
  }
  Node tree = build_at4ea(project.objective, project.scenarios, project.matrix);
  if (project.binding) {
    std::vector<std::string> warnings;
    tree = bind_parameters(tree, *project.binding, &warnings);
    print_warnings(warnings, err);
  }
  (void)out;
  return tree;
}

int cmd_validate(const std::string& project_file, std::ostream& out,
                 std::ostream& err) {
  const Project project = load_project(project_file);
  const Node tree = assemble_tree(project, out, err);
  const ValidationReport report = validate_tree(tree, project.matrix);
  if (report.ok()) {
    out << "OK: tree is valid (" << PathIndex(tree).entries().size()
        << " nodes)\n";
    return kExitOk;
  }
  out << report.to_string();
  return report.has_errors() ? kExitAnalysis : kExitOk;
}

int cmd_methods(const std::string& project_file, const AttributeVector& attrs,
                std::ostream& out, std::ostream&) {
  const Project project = load_project(project_file);
  for (const std::string& name :
       derive_available_methods(project.matrix, attrs)) {
    out << name << "\n";
  }
  return kExitOk;
}

int cmd_build(const std::string& project_file, std::string output,
              std::ostream& out, std::ostream& err) {
  const Project project = load_project(project_file);
  const Node tree = assemble_tree(project, out, err);
  const ValidationReport report = validate_tree(tree, project.matrix);
  for (const Finding& f : report.findings) {
    err << (f.severity == Severity::Error ? "error" : "warning") << " ["
        << f.rule << "] " << f.path << ": " << f.message << "\n";
  }
  if (report.has_errors()) return kExitAnalysis;
  if (output.empty()) output = project.default_tree_output;
  if (output.empty()) {
    throw IoError("no output file: pass -o or set output.tree in the project");
  }
  write_file(output, serialize_tree(tree));
  std::size_t scenario_count = 0;
  visit(tree, [&](const Node& n, const NodeId&) {
    if (n.kind == NodeKind::Scenario) ++scenario_count;
  });
  out << "wrote " << output << " (" << PathIndex(tree).entries().size()
      << " nodes, " << scenario_count << " scenarios)\n";
  return kExitOk;
}

void print_path(const std::vector<std::string>& path, std::ostream& out) {
  for (const std::string& p : path) out << "    " << p << "\n";
}

int cmd_analyze(const std::string& tree_file, const std::string& metric,
                std::uint64_t mc_trials, std::uint64_t seed,
                const std::string& csv_file, std::ostream& out,
                std::ostream&) {
  const Node tree = parse_tree(read_file(tree_file), tree_file);
  const bool want_ap = metric == "ap" || metric == "both";
  const bool want_mq = metric == "mq" || metric == "both";

  std::optional<ApResult> ap;
  std::optional<MqResult> mq;
  if (want_ap) ap = compute_ap(tree);
  if (want_mq) mq = compute_mq(tree);

  if (ap) {
    out << "Attack probability\n";
    out << "  root ap: " << format_display(ap->root_ap) << "\n";
    out << "  critical path:\n";
    print_path(ap->critical_path, out);
    if (mc_trials > 0) {
      const MonteCarloResult mc = monte_carlo_ap(tree, mc_trials, seed);
      const double delta = std::abs(mc.estimate - ap->root_ap);
      out << "  monte carlo (" << mc_trials << " trials, seed " << seed
          << "): estimate " << format_display(mc.estimate) << ", std error "
          << format_display(mc.std_error) << ", |delta| "
          << format_display(delta) << " ("
          << (delta <= 3.0 * mc.std_error ? "within" : "OUTSIDE")
          << " 3 std errors)\n";
    }
  }
  if (mq) {
    out << "Minimum query (black-box)\n";
    out << "  root mq: " << mq->root_mq.to_string() << "\n";
    if (!mq->excluded.empty()) {
      out << "  excluded white-box nodes: " << mq->excluded.size() << "\n";
    }
    if (!mq->critical_path.empty()) {
      out << "  critical path:\n";
      print_path(mq->critical_path, out);
    }
  }

  if (!csv_file.empty()) {
    std::set<std::string> on_ap;
    if (ap) on_ap.insert(ap->critical_path.begin(), ap->critical_path.end());
    std::set<std::string> on_mq;
    if (mq) on_mq.insert(mq->critical_path.begin(), mq->critical_path.end());
    std::string csv = "path,kind,ap,mq,ap_critical,mq_critical\n";
    const PathIndex paths(tree);
    for (const PathIndex::Entry& e : paths.entries()) {
      const Node& n = node_at(tree, e.id);
      csv += csv_escape(e.path);
      csv += ',';
      csv += kind_name(n.kind);
      csv += ',';
      if (ap) csv += format_double(ap->per_node.at(e.path));
      csv += ',';
      if (mq) {
        csv += mq->excluded.count(e.path) ? "excluded"
                                          : mq->per_node.at(e.path).to_string();
      }
      csv += ',';
      csv += on_ap.count(e.path) ? "1" : "0";
      csv += ',';
      csv += on_mq.count(e.path) ? "1" : "0";
      csv += '\n';
    }
    write_file(csv_file, csv);
    out << "wrote " << csv_file << "\n";
  }
  return kExitOk;
}

std::vector<std::vector<std::string>> parse_combos(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<std::string> names;
    std::stringstream ss(group);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const std::string t = trim(name);
      if (!t.empty()) names.push_back(t);
    }
    if (!names.empty()) out.push_back(std::move(names));
  }
  return out;
}

int cmd_whatif(const std::string& tree_file, const std::string& mitigation_file,
               const std::string& combos_text, const std::string& csv_file,
               std::ostream& out, std::ostream& err) {
  const Node tree = parse_tree(read_file(tree_file), tree_file);
  const std::vector<MitigationSpec> specs =
      parse_mitigations_json(read_file(mitigation_file), mitigation_file);

  std::vector<std::string> warnings;
  const TradeoffTable table =
      tradeoff_table(tree, specs, parse_combos(combos_text), &warnings);
  print_warnings(warnings, err);

  std::size_t width = 0;
  for (const TradeoffRow& row : table.rows) {
    width = std::max(width, row.label.size());
  }
  out << std::left << std::setw(static_cast<int>(width) + 2) << "System"
      << "Attack prob.\n";
  for (const TradeoffRow& row : table.rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << row.label
        << format_display(row.root_ap) << "\n";
  }

  if (!csv_file.empty()) {
    std::string csv = "label,root_ap\n";
    for (const TradeoffRow& row : table.rows) {
      csv += csv_escape(row.label) + ',' + format_double(row.root_ap) + '\n';
    }
    write_file(csv_file, csv);
    out << "wrote " << csv_file << "\n";
  }
  return kExitOk;
}

int cmd_render(const std::string& tree_file, const std::string& annotate,
               const std::string& output, std::ostream& out, std::ostream&) {
  const Node tree = parse_tree(read_file(tree_file), tree_file);
  std::optional<ApResult> ap;
  std::optional<MqResult> mq;
  std::stringstream ss(annotate);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const std::string t = trim(token);
    if (t == "ap") {
      ap = compute_ap(tree);
    } else if (t == "mq") {
      mq = compute_mq(tree);
    } else if (!t.empty()) {
      throw Error("unknown annotation '" + t + "' (expected ap, mq)");
    }
  }
  const std::string dot =
      render_dot(tree, ap ? &*ap : nullptr, mq ? &*mq : nullptr);
  if (output.empty()) {
    out << dot;
  } else {
    write_file(output, dot);
    out << "wrote " << output << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Quantitative risk analysis of ML evasion attacks with "
               "extended attack trees"};
  app.name("at4ea");
  app.require_subcommand(1);

  std::string project_file;
  std::string tree_file;
  std::string output;
  std::string metric = "both";
  std::string csv_file;
  std::string mitigation_file;
  std::string combos_text;
  std::string annotate;
  std::uint64_t mc_trials = 0;
  std::uint64_t seed = 0;
  AttributeVector attrs;

  CLI::App* validate = app.add_subcommand(
      "validate", "Build the project tree and report every finding");
  validate->add_option("project", project_file, "project bundle (JSON)")
      ->required();

  CLI::App* methods = app.add_subcommand(
      "methods", "List matrix methods matching an attribute vector");
  methods->add_option("project", project_file, "project bundle (JSON)")
      ->required();
  methods->add_option("--visibility", attrs.visibility)->required();
  methods->add_option("--scope", attrs.scope)->required();
  methods->add_option("--computation", attrs.computation)->required();
  methods->add_option("--knowledge", attrs.knowledge)->required();

  CLI::App* build = app.add_subcommand(
      "build", "Construct, bind and serialize the project tree");
  build->add_option("project", project_file, "project bundle (JSON)")
      ->required();
  build->add_option("-o,--output", output, "tree output file");

  CLI::App* analyze =
      app.add_subcommand("analyze", "Compute AP and minimum-query metrics");
  analyze->add_option("tree", tree_file, "tree file")->required();
  analyze->add_option("--metric", metric, "ap, mq or both")
      ->check(CLI::IsMember({"ap", "mq", "both"}));
  analyze->add_option("--mc-trials", mc_trials,
                      "Monte Carlo cross-check trial count");
  analyze->add_option("--seed", seed, "Monte Carlo seed");
  analyze->add_option("--csv", csv_file, "per-node metrics CSV output");

  CLI::App* whatif =
      app.add_subcommand("whatif", "Mitigation trade-off table");
  whatif->add_option("tree", tree_file, "tree file")->required();
  whatif->add_option("--mitigations", mitigation_file, "mitigation spec file")
      ->required();
  whatif->add_option("--combos", combos_text,
                     "combinations, e.g. \"AT,QR;DP,CQ\"");
  whatif->add_option("--csv", csv_file, "table CSV output");

  CLI::App* render = app.add_subcommand("render", "Emit a DOT graph");
  render->add_option("tree", tree_file, "tree file")->required();
  render->add_option("--annotate", annotate, "comma list of ap, mq");
  render->add_option("-o,--output", output, "DOT output file (default stdout)");

  std::vector<const char*> argv;
  argv.push_back("at4ea");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (validate->parsed()) return cmd_validate(project_file, out, err);
    if (methods->parsed()) {
      attrs.knowledge = normalize_knowledge(attrs.knowledge);
      return cmd_methods(project_file, attrs, out, err);
    }
    if (build->parsed()) return cmd_build(project_file, output, out, err);
    if (analyze->parsed()) {
      return cmd_analyze(tree_file, metric, mc_trials, seed, csv_file, out, err);
    }
    if (whatif->parsed()) {
      return cmd_whatif(tree_file, mitigation_file, combos_text, csv_file, out,
                        err);
    }
    if (render->parsed()) {
      return cmd_render(tree_file, annotate, output, out, err);
    }
  } catch (const ParseError& e) {
    err << "at4ea: error: " << e.what() << "\n";
    return kExitParse;
  } catch (const IoError& e) {
    err << "at4ea: error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << "at4ea: error: " << e.what() << "\n";
    return kExitAnalysis;
  }
  return kExitParse;  // unreachable with require_subcommand(1)
}

}  // namespace at4ea
