#include "at4ea/matrix.hpp"

#include <set>

namespace at4ea {

const AemRow* AemMatrix::find(const std::string& name) const {
  for (const AemRow& row : rows) {
    if (row.name == name) return &row;
  }
  return nullptr;
}

std::vector<std::string> AemMatrix::check() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const AemRow& row : rows) {
    if (row.name.empty()) out.push_back("matrix row with empty method name");
    if (!seen.insert(row.name).second) {
      out.push_back("duplicate matrix row '" + row.name + "'");
    }
    if (!row.attrs.complete()) {
      out.push_back("matrix row '" + row.name + "' has an empty attribute");
    }
  }
  return out;
}

std::vector<std::string> check_eas(const EasRecord& eas, const AemMatrix& matrix) {
  std::vector<std::string> out;
  if (eas.name.empty()) out.push_back("scenario with empty name");
  if (!eas.attrs.complete()) {
    out.push_back("scenario '" + eas.name + "' has an empty attribute");
  }
  if (eas.auto_methods) return out;  // derived methods match by construction
  for (const std::string& m : eas.available_methods) {
    const AemRow* row = matrix.find(m);
    if (!row) {
      out.push_back("scenario '" + eas.name + "': method '" + m +
                    "' is not in the matrix");
    } else if (!(row->attrs == eas.attrs)) {
      out.push_back("scenario '" + eas.name + "': method '" + m +
                    "' has attributes different from the scenario's");
    }
  }
  return out;
}

}  // namespace at4ea
