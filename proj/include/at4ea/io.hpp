#pragma once

#include <optional>
#include <string>
#include <vector>

#include "at4ea/construct.hpp"
#include "at4ea/matrix.hpp"
#include "at4ea/mitigation.hpp"
#include "at4ea/tree.hpp"

namespace at4ea {

// ---------------------------------------------------------------------------
// Method matrix (CSV)
// ---------------------------------------------------------------------------

/// Exact header line every matrix file must carry.
inline constexpr std::string_view kMatrixCsvHeader =
    "Attack,Perturbation Visibility,Perturbation Scope,Attack Computation,"
    "Attacker's Knowledge";

/// Parses a method matrix from CSV. Cells are comma separated with no
/// quoting (names must not contain commas), whitespace is trimmed, the
/// knowledge value "Full" normalizes to "White-box". Wrong header, empty
/// cells and duplicate names raise ParseError with the line number.
AemMatrix parse_matrix_csv(const std::string& text,
                           const std::string& filename = "<matrix>");

std::string serialize_matrix_csv(const AemMatrix& matrix);

// ---------------------------------------------------------------------------
// Scenarios (JSON)
// ---------------------------------------------------------------------------

/// Parses scenario records from a JSON array. Each object carries "name",
/// the four dimension keys, an ordered "conventional_attacks" list and
/// "available_methods" (a list, or the string "AUTO" to derive the list
/// from the matrix at build time).
std::vector<EasRecord> parse_scenarios_json(
    const std::string& text, const std::string& filename = "<scenarios>");

std::string serialize_scenarios_json(const std::vector<EasRecord>& scenarios);

// ---------------------------------------------------------------------------
// Tree (canonical nested text format)
// ---------------------------------------------------------------------------

/// Canonical text form: a header line "at4ea v1", then one line per node,
/// children indented two spaces below their parent. Numeric values use
/// the shortest representation that reparses to the same double, so
/// serialize and parse invert each other on validated trees.
std::string serialize_tree(const Node& tree);

Node parse_tree(const std::string& text, const std::string& filename = "<tree>");

// ---------------------------------------------------------------------------
// Parameter bindings and mitigation specs (JSON)
// ---------------------------------------------------------------------------

ParameterBinding parse_binding_json(const std::string& text,
                                    const std::string& filename = "<binding>");

std::vector<MitigationSpec> parse_mitigations_json(
    const std::string& text, const std::string& filename = "<mitigations>");

// ---------------------------------------------------------------------------
// Project bundle
// ---------------------------------------------------------------------------

/// References the input files of one analysis. Paths are resolved
/// relative to the bundle file's directory.
struct ProjectBundle {
  std::string objective;
  std::string matrix_file;
  std::vector<std::string> scenario_files;
  std::string binding_file;                  // optional (empty = none)
  std::vector<std::string> mitigation_files;
  std::string default_tree_output;           // optional
};

ProjectBundle parse_project_json(const std::string& text,
                                 const std::string& filename = "<project>");

/// A bundle with every referenced file loaded and parsed.
struct Project {
  std::string objective;
  AemMatrix matrix;
  std::vector<EasRecord> scenarios;
  std::optional<ParameterBinding> binding;
  std::vector<MitigationSpec> mitigations;
  std::string default_tree_output;
};

Project load_project(const std::string& path);

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path);           // IoError on failure
void write_file(const std::string& path, const std::string& content);

/// Shortest decimal form that reparses to exactly the same double.
std::string format_double(double v);

/// Compact display form for reports ("%.6g").
std::string format_display(double v);

/// RFC-4180 style field quoting for emitted report CSVs.
std::string csv_escape(const std::string& field);

}  // namespace at4ea
