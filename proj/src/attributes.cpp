#include "at4ea/attributes.hpp"

#include <cctype>

namespace at4ea {

int dimension_rank(Dimension d) {
  return static_cast<int>(d);
}

std::string_view dimension_key(Dimension d) {
  switch (d) {
    case Dimension::Visibility: return "visibility";
    case Dimension::Scope: return "scope";
    case Dimension::Computation: return "computation";
    case Dimension::Knowledge: return "knowledge";
  }
  return "?";
}

std::string_view dimension_header(Dimension d) {
  switch (d) {
    case Dimension::Visibility: return "Perturbation Visibility";
    case Dimension::Scope: return "Perturbation Scope";
    case Dimension::Computation: return "Attack Computation";
    case Dimension::Knowledge: return "Attacker's Knowledge";
  }
  return "?";
}

std::optional<Dimension> dimension_from_key(std::string_view key) {
  for (Dimension d : kDimensionOrder) {
    if (dimension_key(d) == key) return d;
  }
  return std::nullopt;
}

const std::string& AttributeVector::value(Dimension d) const {
  switch (d) {
    case Dimension::Visibility: return visibility;
    case Dimension::Scope: return scope;
    case Dimension::Computation: return computation;
    case Dimension::Knowledge: return knowledge;
  }
  return visibility;
}

std::string& AttributeVector::value(Dimension d) {
  switch (d) {
    case Dimension::Visibility: return visibility;
    case Dimension::Scope: return scope;
    case Dimension::Computation: return computation;
    case Dimension::Knowledge: return knowledge;
  }
  return visibility;
}

bool AttributeVector::complete() const {
  return !visibility.empty() && !scope.empty() && !computation.empty() &&
         !knowledge.empty();
}

std::string normalize_knowledge(std::string_view tag) {
  std::string t = trim(tag);
  if (t == "Full") return std::string(kWhiteBox);
  return t;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace at4ea
