#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccm/group.hpp"

namespace ccm {

// Sectioned key-value batch format:
//
//   # comment
//   [group]
//   class = builtin
//   name = dihedral(4)
//
// Sections hold ordered key = value entries; values keep interior spacing.
// Parse failures carry line/column positions.
struct SpecFile {
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };
  struct Section {
    std::string name;
    int line = 0;
    std::vector<Entry> entries;
  };
  std::vector<Section> sections;

  const Section* find(const std::string& name) const;
  const Section& require(const std::string& name) const;
};

std::optional<std::string> section_get(const SpecFile::Section& s, const std::string& key);
std::string section_require(const SpecFile::Section& s, const std::string& key);

SpecFile parse_spec_text(const std::string& text);

// [group] section -> concrete handle; supports builtin names and the three
// explicit class schemas.
GroupPtr group_from_spec(const SpecFile& spec);

// Class-specific element literals:
//   finite Cayley:     label or #index
//   virtually abelian: (v1,...,vn|qlabel)
//   central pairing:   (nu1,...|a1,...)
Element parse_element(const GroupPtr& g, const std::string& text, int line);
std::vector<Element> parse_element_list(const GroupPtr& g, const std::string& text, int line);

Rational parse_rational(const std::string& text, int line);

}  // namespace ccm
