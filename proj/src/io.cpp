#include "at4ea/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "at4ea/errors.hpp"

namespace at4ea {

namespace {

using ordered_json = nlohmann::ordered_json;

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

ordered_json parse_json_document(const std::string& text,
                                 const std::string& filename) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(filename, line_of_byte(text, e.byte), e.what());
  }
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

}  // namespace

// ---------------------------------------------------------------------------
// Matrix CSV
// ---------------------------------------------------------------------------

AemMatrix parse_matrix_csv(const std::string& text, const std::string& filename) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != kMatrixCsvHeader) {
    throw ParseError(filename, 1,
                     "matrix header must be exactly \"" +
                         std::string(kMatrixCsvHeader) + "\"");
  }
  AemMatrix matrix;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i + 1);
    if (trim(lines[i]).empty()) continue;
    const std::vector<std::string> cells = split_csv_row(lines[i]);
    if (cells.size() != 5) {
      throw ParseError(filename, lineno,
                       "expected 5 cells, got " + std::to_string(cells.size()));
    }
    for (const std::string& c : cells) {
      if (c.empty()) throw ParseError(filename, lineno, "empty cell");
    }
    if (matrix.find(cells[0])) {
      throw ParseError(filename, lineno,
                       "duplicate method name '" + cells[0] + "'");
    }
    AemRow row;
    row.name = cells[0];
    row.attrs.visibility = cells[1];
    row.attrs.scope = cells[2];
    row.attrs.computation = cells[3];
    row.attrs.knowledge = normalize_knowledge(cells[4]);
    matrix.rows.push_back(std::move(row));
  }
  return matrix;
}

std::string serialize_matrix_csv(const AemMatrix& matrix) {
  std::string out(kMatrixCsvHeader);
  out += '\n';
  for (const AemRow& r : matrix.rows) {
    out += r.name + ',' + r.attrs.visibility + ',' + r.attrs.scope + ',' +
           r.attrs.computation + ',' + r.attrs.knowledge + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scenarios JSON
// ---------------------------------------------------------------------------

std::vector<EasRecord> parse_scenarios_json(const std::string& text,
                                            const std::string& filename) {
  const ordered_json doc = parse_json_document(text, filename);
  if (!doc.is_array()) {
    throw ParseError(filename, 1, "scenario document must be a JSON array");
  }
  std::vector<EasRecord> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const ordered_json& s = doc[i];
    const std::string at = "scenario #" + std::to_string(i + 1);
    if (!s.is_object()) throw ParseError(filename, 1, at + " must be an object");
    auto need = [&](const char* key) -> const ordered_json& {
      if (!s.contains(key)) {
        throw ParseError(filename, 1, at + " is missing key \"" + key + "\"");
      }
      return s.at(key);
    };
    EasRecord rec;
    rec.name = need("name").get<std::string>();
    for (const auto& [key, value] : s.items()) {
      if (key == "name" || key == "conventional_attacks" ||
          key == "available_methods") {
        continue;
      }
      const auto dim = dimension_from_key(key);
      if (!dim) {
        throw ParseError(filename, 1,
                         at + " has unknown attribute dimension \"" + key +
                             "\"");
      }
      rec.attrs.value(*dim) = trim(value.get<std::string>());
    }
    rec.attrs.knowledge = normalize_knowledge(rec.attrs.knowledge);
    for (Dimension d : kDimensionOrder) {
      if (rec.attrs.value(d).empty()) {
        throw ParseError(filename, 1,
                         at + " is missing attribute \"" +
                             std::string(dimension_key(d)) + "\"");
      }
    }
    for (const ordered_json& ca : need("conventional_attacks")) {
      rec.conventional_attacks.push_back(ca.get<std::string>());
    }
    const ordered_json& methods = need("available_methods");
    if (methods.is_string() && methods.get<std::string>() == "AUTO") {
      rec.auto_methods = true;
    } else if (methods.is_array()) {
      for (const ordered_json& m : methods) {
        rec.available_methods.push_back(m.get<std::string>());
      }
    } else {
      throw ParseError(filename, 1,
                       at + ": \"available_methods\" must be a list or "
                            "\"AUTO\"");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string serialize_scenarios_json(const std::vector<EasRecord>& scenarios) {
  ordered_json doc = ordered_json::array();
  for (const EasRecord& s : scenarios) {
    ordered_json j;
    j["name"] = s.name;
    for (Dimension d : kDimensionOrder) {
      j[std::string(dimension_key(d))] = s.attrs.value(d);
    }
    j["conventional_attacks"] = s.conventional_attacks;
    if (s.auto_methods) {
      j["available_methods"] = "AUTO";
    } else {
      j["available_methods"] = s.available_methods;
    }
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Tree format
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kTreeHeader = "at4ea v1";

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void serialize_node(const Node& n, const Node* parent, std::size_t child_index,
                    int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  switch (n.kind) {
    case NodeKind::Root:
      out += "root " + quote(n.label);
      break;
    case NodeKind::Aea:
      out += "aea ";
      out += n.dimension ? dimension_key(*n.dimension) : "?";
      out += ' ';
      out += quote(n.label);
      break;
    case NodeKind::Scenario:
      out += "scenario " + quote(n.label);
      break;
    case NodeKind::Aeml:
      out += "aeml";
      break;
    case NodeKind::Aem:
      out += "aem " + quote(n.label);
      if (n.err) out += " err=" + format_double(*n.err);
      if (n.freq) out += " freq=" + format_double(*n.freq);
      if (n.query) out += " query=" + std::to_string(*n.query);
      break;
    case NodeKind::Cal:
      out += "cal";
      break;
    case NodeKind::Ca:
      out += "ca " + quote(n.label);
      if (n.gate) {
        out += *n.gate == CaGate::And ? " gate=AND" : " gate=OR";
      } else {
        if (n.prob) out += " prob=" + format_double(*n.prob);
        if (n.query) out += " query=" + std::to_string(*n.query);
      }
      break;
  }
  if (parent && parent->is_choice() && parent->weights[child_index]) {
    out += " w=" + format_double(*parent->weights[child_index]);
  }
  out += '\n';
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    serialize_node(n.children[i], &n, i, depth + 1, out);
  }
}

struct TreeParser {
  const std::string& filename;
  std::vector<std::string> lines;

  [[noreturn]] void fail(int lineno, const std::string& msg) const {
    throw ParseError(filename, lineno, msg);
  }

  struct Attr {
    std::string key;
    std::string value;
  };

  struct ParsedLine {
    int depth = 0;
    std::string keyword;
    std::string label;
    bool has_label = false;
    std::string dim_key;  // aea only
    std::vector<Attr> attrs;
  };

  ParsedLine parse_line(const std::string& line, int lineno) const {
    ParsedLine out;
    std::size_t pos = 0;
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos % 2 != 0) fail(lineno, "indentation must be a multiple of 2 spaces");
    out.depth = static_cast<int>(pos / 2);

    auto skip_ws = [&] {
      while (pos < line.size() && line[pos] == ' ') ++pos;
    };
    auto read_word = [&]() -> std::string {
      std::string w;
      while (pos < line.size() && line[pos] != ' ') w += line[pos++];
      return w;
    };

    out.keyword = read_word();
    skip_ws();

    if (out.keyword == "aea") {
      out.dim_key = read_word();
      skip_ws();
    }

    if (pos < line.size() && line[pos] == '"') {
      out.has_label = true;
      ++pos;
      while (true) {
        if (pos >= line.size()) fail(lineno, "unterminated string");
        const char c = line[pos++];
        if (c == '"') break;
        if (c == '\\') {
          if (pos >= line.size()) fail(lineno, "dangling escape");
          const char e = line[pos++];
          switch (e) {
            case '"': out.label += '"'; break;
            case '\\': out.label += '\\'; break;
            case 'n': out.label += '\n'; break;
            case 't': out.label += '\t'; break;
            default: fail(lineno, std::string("unknown escape \\") + e);
          }
        } else {
          out.label += c;
        }
      }
      skip_ws();
    }

    while (pos < line.size()) {
      std::string token = read_word();
      skip_ws();
      const std::size_t eq = token.find('=');
      if (eq == std::string::npos || eq == 0) {
        fail(lineno, "expected key=value, got '" + token + "'");
      }
      Attr a{token.substr(0, eq), token.substr(eq + 1)};
      for (const Attr& prev : out.attrs) {
        if (prev.key == a.key) fail(lineno, "duplicate attribute " + a.key);
      }
      out.attrs.push_back(std::move(a));
    }
    return out;
  }

  double parse_number(const std::string& s, int lineno, const char* what) const {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
      fail(lineno, std::string("invalid ") + what + " value '" + s + "'");
    }
    return v;
  }

  std::uint64_t parse_count(const std::string& s, int lineno,
                            const char* what) const {
    if (!s.empty() && s[0] == '-') {
      fail(lineno, std::string(what) + " must be a nonnegative integer");
    }
    std::uint64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
      fail(lineno, std::string("invalid ") + what + " value '" + s + "'");
    }
    return v;
  }

  Node make_node(const ParsedLine& pl, int lineno,
                 std::optional<double>& weight) const {
    Node n;
    if (pl.keyword == "root") {
      n.kind = NodeKind::Root;
    } else if (pl.keyword == "aea") {
      n.kind = NodeKind::Aea;
      const auto dim = dimension_from_key(pl.dim_key);
      if (!dim) fail(lineno, "unknown AEA dimension '" + pl.dim_key + "'");
      n.dimension = *dim;
    } else if (pl.keyword == "scenario") {
      n.kind = NodeKind::Scenario;
    } else if (pl.keyword == "aeml") {
      n.kind = NodeKind::Aeml;
    } else if (pl.keyword == "aem") {
      n.kind = NodeKind::Aem;
    } else if (pl.keyword == "cal") {
      n.kind = NodeKind::Cal;
    } else if (pl.keyword == "ca") {
      n.kind = NodeKind::Ca;
    } else {
      fail(lineno, "unknown node kind '" + pl.keyword + "'");
    }

    const bool wants_label =
        n.kind != NodeKind::Aeml && n.kind != NodeKind::Cal;
    if (wants_label != pl.has_label) {
      fail(lineno, wants_label ? "node needs a quoted label"
                               : "list nodes take no label");
    }
    n.label = pl.label;

    for (const Attr& a : pl.attrs) {
      if (a.key == "w") {
        // Whether a weight is legal here depends on the parent; checked
        // when the node is attached.
        weight = parse_number(a.value, lineno, "weight");
      } else if (a.key == "err" && n.kind == NodeKind::Aem) {
        n.err = parse_number(a.value, lineno, "err");
      } else if (a.key == "freq" && n.kind == NodeKind::Aem) {
        n.freq = parse_number(a.value, lineno, "freq");
      } else if (a.key == "prob" && n.kind == NodeKind::Ca) {
        n.prob = parse_number(a.value, lineno, "prob");
      } else if (a.key == "query" &&
                 (n.kind == NodeKind::Aem || n.kind == NodeKind::Ca)) {
        n.query = parse_count(a.value, lineno, "query");
      } else if (a.key == "gate" && n.kind == NodeKind::Ca) {
        if (a.value == "AND") {
          n.gate = CaGate::And;
        } else if (a.value == "OR") {
          n.gate = CaGate::Or;
        } else {
          fail(lineno, "gate must be AND or OR");
        }
      } else {
        fail(lineno, "attribute '" + a.key + "' is not valid on a " +
                         pl.keyword + " node");
      }
    }
    return n;
  }
};

bool tree_child_allowed(NodeKind parent, NodeKind child) {
  switch (parent) {
    case NodeKind::Root:
    case NodeKind::Aea:
      return child == NodeKind::Aea || child == NodeKind::Scenario;
    case NodeKind::Scenario:
      return child == NodeKind::Aeml || child == NodeKind::Cal;
    case NodeKind::Aeml:
      return child == NodeKind::Aem;
    case NodeKind::Cal:
    case NodeKind::Ca:
      return child == NodeKind::Ca;
    case NodeKind::Aem:
      return false;
  }
  return false;
}

}  // namespace

std::string serialize_tree(const Node& tree) {
  std::string out(kTreeHeader);
  out += '\n';
  serialize_node(tree, nullptr, 0, 0, out);
  return out;
}

Node parse_tree(const std::string& text, const std::string& filename) {
  TreeParser parser{filename, split_lines(text)};
  const auto& lines = parser.lines;

  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first >= lines.size() || trim(lines[first]) != kTreeHeader) {
    parser.fail(static_cast<int>(first + 1),
                "tree file must start with \"" + std::string(kTreeHeader) +
                    "\"");
  }

  Node root;
  bool have_root = false;
  std::vector<Node*> stack;  // stack[d] = last node seen at depth d

  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i + 1);
    const std::string stripped = trim(lines[i]);
    if (stripped.empty() || stripped[0] == '#') continue;

    const TreeParser::ParsedLine pl = parser.parse_line(lines[i], lineno);
    std::optional<double> weight;
    Node node = parser.make_node(pl, lineno, weight);

    if (pl.depth == 0) {
      if (have_root) parser.fail(lineno, "multiple root nodes");
      if (node.kind != NodeKind::Root) {
        parser.fail(lineno, "top-level node must be a root node");
      }
      if (weight) parser.fail(lineno, "root node cannot carry a weight");
      root = std::move(node);
      have_root = true;
      stack.assign(1, &root);
      continue;
    }
    if (!have_root) parser.fail(lineno, "node before the root line");
    if (static_cast<std::size_t>(pl.depth) > stack.size()) {
      parser.fail(lineno, "indentation jumps more than one level");
    }
    Node& parent = *stack[pl.depth - 1];
    if (!tree_child_allowed(parent.kind, node.kind)) {
      parser.fail(lineno, "a " + std::string(kind_name(parent.kind)) +
                              " node cannot have a " +
                              std::string(kind_name(node.kind)) + " child");
    }
    if (parent.kind == NodeKind::Scenario) {
      for (const Node& sibling : parent.children) {
        if (sibling.kind == node.kind) {
          parser.fail(lineno, "scenario already has " +
                                  (node.kind == NodeKind::Aeml
                                       ? std::string("an AEML block")
                                       : std::string("a CAL block")));
        }
      }
    }
    if (weight && !parent.is_choice()) {
      parser.fail(lineno, "w= is only valid under root and AEA nodes");
    }
    parent.children.push_back(std::move(node));
    if (parent.is_choice()) parent.weights.push_back(weight);
    stack.resize(static_cast<std::size_t>(pl.depth) + 1);
    stack[pl.depth] = &parent.children.back();
  }

  if (!have_root) {
    parser.fail(static_cast<int>(lines.size()), "file contains no tree");
  }
  return root;
}

// ---------------------------------------------------------------------------
// Binding JSON
// ---------------------------------------------------------------------------

namespace {

NodeSelector selector_from(const ordered_json& j, const char* label_key,
                           const std::string& filename, const std::string& at) {
  NodeSelector sel;
  if (j.contains("path")) {
    sel.path = j.at("path").get<std::string>();
    return sel;
  }
  if (!j.contains("scenario") || !j.contains(label_key)) {
    throw ParseError(filename, 1,
                     at + " needs either \"path\" or \"scenario\" + \"" +
                         label_key + "\"");
  }
  sel.scenario = j.at("scenario").get<std::string>();
  sel.label = j.at(label_key).get<std::string>();
  return sel;
}

double number_field(const ordered_json& j, const char* key,
                    const std::string& filename, const std::string& at) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ParseError(filename, 1,
                     at + " is missing numeric field \"" + key + "\"");
  }
  return j.at(key).get<double>();
}

std::uint64_t count_field(const ordered_json& j, const char* key,
                          const std::string& filename, const std::string& at) {
  if (!j.contains(key) || !j.at(key).is_number_integer() ||
      j.at(key).get<double>() < 0) {
    throw ParseError(
        filename, 1, at + " field \"" + key + "\" must be a nonnegative integer");
  }
  return j.at(key).get<std::uint64_t>();
}

}  // namespace

ParameterBinding parse_binding_json(const std::string& text,
                                    const std::string& filename) {
  const ordered_json doc = parse_json_document(text, filename);
  if (!doc.is_object()) {
    throw ParseError(filename, 1, "binding document must be a JSON object");
  }
  ParameterBinding binding;
  if (doc.contains("aem")) {
    std::size_t i = 0;
    for (const ordered_json& j : doc.at("aem")) {
      const std::string at = "aem binding #" + std::to_string(++i);
      AemBinding b;
      b.where = selector_from(j, "method", filename, at);
      b.err = number_field(j, "err", filename, at);
      b.freq = number_field(j, "freq", filename, at);
      b.query = count_field(j, "query", filename, at);
      binding.aems.push_back(std::move(b));
    }
  }
  if (doc.contains("ca")) {
    std::size_t i = 0;
    for (const ordered_json& j : doc.at("ca")) {
      const std::string at = "ca binding #" + std::to_string(++i);
      CaBinding b;
      b.where = selector_from(j, "label", filename, at);
      b.prob = number_field(j, "prob", filename, at);
      b.query = count_field(j, "query", filename, at);
      binding.cas.push_back(std::move(b));
    }
  }
  if (doc.contains("weights")) {
    std::size_t i = 0;
    for (const ordered_json& j : doc.at("weights")) {
      const std::string at = "weight binding #" + std::to_string(++i);
      WeightBinding b;
      if (!j.contains("parent") || !j.contains("child")) {
        throw ParseError(filename, 1, at + " needs \"parent\" and \"child\"");
      }
      b.parent_path = j.at("parent").get<std::string>();
      b.child_label = j.at("child").get<std::string>();
      b.w = number_field(j, "w", filename, at);
      binding.weights.push_back(std::move(b));
    }
  }
  return binding;
}

// ---------------------------------------------------------------------------
// Mitigations JSON
// ---------------------------------------------------------------------------

std::vector<MitigationSpec> parse_mitigations_json(const std::string& text,
                                                   const std::string& filename) {
  const ordered_json doc = parse_json_document(text, filename);
  if (!doc.is_array()) {
    throw ParseError(filename, 1, "mitigation document must be a JSON array");
  }
  std::vector<MitigationSpec> out;
  for (const ordered_json& j : doc) {
    MitigationSpec spec;
    if (!j.contains("name")) {
      throw ParseError(filename, 1, "mitigation is missing \"name\"");
    }
    spec.name = j.at("name").get<std::string>();
    const std::string at = "mitigation '" + spec.name + "'";
    for (const auto& existing : out) {
      if (existing.name == spec.name) {
        throw ParseError(filename, 1, "duplicate mitigation name '" +
                                          spec.name + "'");
      }
    }
    if (!j.contains("transforms") || !j.at("transforms").is_array()) {
      throw ParseError(filename, 1, at + " needs a \"transforms\" array");
    }
    for (const ordered_json& t : j.at("transforms")) {
      const std::string type = t.value("type", "");
      if (type == "replace_err") {
        ReplaceErr tr;
        if (!t.contains("err") || !t.at("err").is_object()) {
          throw ParseError(filename, 1,
                           at + ": replace_err needs an \"err\" table");
        }
        for (const auto& [method, err] : t.at("err").items()) {
          const double v = err.get<double>();
          if (v < 0.0 || v > 1.0) {
            throw ParseError(filename, 1,
                             at + ": replacement err for '" + method +
                                 "' must lie in [0, 1]");
          }
          tr.err_by_method[method] = v;
        }
        if (t.contains("where")) {
          for (const auto& [key, value] : t.at("where").items()) {
            const auto dim = dimension_from_key(key);
            if (!dim) {
              throw ParseError(filename, 1,
                               at + ": unknown dimension \"" + key +
                                   "\" in \"where\"");
            }
            tr.aea_filter[*dim] = value.get<std::string>();
          }
        }
        spec.transforms.emplace_back(std::move(tr));
      } else if (type == "scale_ca_prob") {
        ScaleCaProb tr;
        tr.ca_label = t.value("label", "");
        if (tr.ca_label.empty()) {
          throw ParseError(filename, 1,
                           at + ": scale_ca_prob needs a \"label\"");
        }
        tr.factor = number_field(t, "factor", filename, at);
        if (tr.factor <= 0.0) {
          throw ParseError(filename, 1, at + ": factor must be positive");
        }
        spec.transforms.emplace_back(std::move(tr));
      } else if (type == "zero_aem_if_query_gt") {
        ZeroAemIfQueryGt tr;
        if (!t.contains("threshold")) {
          throw ParseError(filename, 1, at + ": needs a \"threshold\"");
        }
        const ordered_json& th = t.at("threshold");
        if (th.is_string() && th.get<std::string>() == "AUTO") {
          tr.threshold = std::nullopt;
        } else if (th.is_number_integer() && th.get<double>() >= 0) {
          tr.threshold = th.get<std::uint64_t>();
        } else {
          throw ParseError(filename, 1,
                           at + ": threshold must be \"AUTO\" or a "
                                "nonnegative integer");
        }
        spec.transforms.emplace_back(std::move(tr));
      } else if (type == "set_weight") {
        SetWeight tr;
        if (!t.contains("parent") || !t.contains("child")) {
          throw ParseError(filename, 1,
                           at + ": set_weight needs \"parent\" and \"child\"");
        }
        tr.parent_path = t.at("parent").get<std::string>();
        tr.child_label = t.at("child").get<std::string>();
        tr.w = number_field(t, "w", filename, at);
        spec.transforms.emplace_back(std::move(tr));
      } else {
        throw ParseError(filename, 1,
                         at + ": unknown transform type \"" + type + "\"");
      }
    }
    out.push_back(std::move(spec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Project bundle
// ---------------------------------------------------------------------------

ProjectBundle parse_project_json(const std::string& text,
                                 const std::string& filename) {
  const ordered_json doc = parse_json_document(text, filename);
  if (!doc.is_object()) {
    throw ParseError(filename, 1, "project must be a JSON object");
  }
  ProjectBundle bundle;
  bundle.objective = doc.value("objective", "");
  if (bundle.objective.empty()) {
    throw ParseError(filename, 1, "project needs a nonempty \"objective\"");
  }
  if (!doc.contains("matrix")) {
    throw ParseError(filename, 1, "project needs a \"matrix\" file");
  }
  bundle.matrix_file = doc.at("matrix").get<std::string>();
  if (!doc.contains("scenarios")) {
    throw ParseError(filename, 1, "project needs a \"scenarios\" file list");
  }
  if (doc.at("scenarios").is_string()) {
    bundle.scenario_files.push_back(doc.at("scenarios").get<std::string>());
  } else {
    for (const ordered_json& f : doc.at("scenarios")) {
      bundle.scenario_files.push_back(f.get<std::string>());
    }
  }
  bundle.binding_file = doc.value("binding", "");
  if (doc.contains("mitigations")) {
    if (doc.at("mitigations").is_string()) {
      bundle.mitigation_files.push_back(doc.at("mitigations").get<std::string>());
    } else {
      for (const ordered_json& f : doc.at("mitigations")) {
        bundle.mitigation_files.push_back(f.get<std::string>());
      }
    }
  }
  if (doc.contains("output") && doc.at("output").contains("tree")) {
    bundle.default_tree_output = doc.at("output").at("tree").get<std::string>();
  }
  return bundle;
}

Project load_project(const std::string& path) {
  namespace fs = std::filesystem;
  const std::string text = read_file(path);
  const ProjectBundle bundle = parse_project_json(text, path);
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& rel) {
    const fs::path p(rel);
    return p.is_absolute() ? p.string() : (base / p).string();
  };

  Project project;
  project.objective = bundle.objective;
  project.default_tree_output = bundle.default_tree_output;
  {
    const std::string file = resolve(bundle.matrix_file);
    project.matrix = parse_matrix_csv(read_file(file), file);
  }
  for (const std::string& rel : bundle.scenario_files) {
    const std::string file = resolve(rel);
    auto records = parse_scenarios_json(read_file(file), file);
    project.scenarios.insert(project.scenarios.end(),
                             std::make_move_iterator(records.begin()),
                             std::make_move_iterator(records.end()));
  }
  if (!bundle.binding_file.empty()) {
    const std::string file = resolve(bundle.binding_file);
    project.binding = parse_binding_json(read_file(file), file);
  }
  for (const std::string& rel : bundle.mitigation_files) {
    const std::string file = resolve(rel);
    auto specs = parse_mitigations_json(read_file(file), file);
    project.mitigations.insert(project.mitigations.end(),
                               std::make_move_iterator(specs.begin()),
                               std::make_move_iterator(specs.end()));
  }
  return project;
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string format_display(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace at4ea
