#include "ccm/specfile.hpp"

#include <algorithm>
#include <sstream>

#include "ccm/builders.hpp"
#include "ccm/errors.hpp"

namespace ccm {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
  std::ostringstream os;
  os << "line " << line << ", column " << col << ": " << msg;
  throw ParseError(os.str());
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(trim(s.substr(pos)));
      break;
    }
    out.push_back(trim(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

i64 to_int(const std::string& s, int line) {
  try {
    size_t used = 0;
    i64 v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    parse_fail(line, 1, "expected an integer, got '" + s + "'");
  }
}

std::vector<i64> int_list(const std::string& s, int line) {
  std::vector<i64> out;
  if (trim(s).empty()) return out;
  for (const std::string& tok : split(s, ','))
    out.push_back(to_int(tok, line));
  return out;
}

Mat parse_matrix(const std::string& s, int line) {
  Mat m;
  for (const std::string& row : split(s, ';')) {
    Vec r;
    std::istringstream is(row);
    std::string tok;
    while (is >> tok) r.push_back(to_int(tok, line));
    if (!r.empty()) m.push_back(std::move(r));
  }
  return m;
}

}  // namespace

const SpecFile::Section* SpecFile::find(const std::string& name) const {
  for (const Section& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const SpecFile::Section& SpecFile::require(const std::string& name) const {
  const Section* s = find(name);
  if (!s) throw SchemaError("missing required section [" + name + "]");
  return *s;
}

std::optional<std::string> section_get(const SpecFile::Section& s, const std::string& key) {
  for (const auto& e : s.entries)
    if (e.key == key) return e.value;
  return std::nullopt;
}

std::string section_require(const SpecFile::Section& s, const std::string& key) {
  auto v = section_get(s, key);
  if (!v) throw SchemaError("section [" + s.name + "] is missing key '" + key + "'");
  return *v;
}

SpecFile parse_spec_text(const std::string& text) {
  SpecFile spec;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  SpecFile::Section* cur = nullptr;
  while (std::getline(is, raw)) {
    ++lineno;
    size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        parse_fail(lineno, (int)raw.find('[') + 1, "unterminated section header");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) parse_fail(lineno, 1, "empty section name");
      spec.sections.push_back({name, lineno, {}});
      cur = &spec.sections.back();
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      parse_fail(lineno, (int)raw.find(line.front()) + 1, "expected 'key = value'");
    if (!cur) parse_fail(lineno, 1, "entry outside any [section]");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(lineno, 1, "empty key");
    cur->entries.push_back({key, value, lineno});
  }
  return spec;
}

GroupPtr group_from_spec(const SpecFile& spec) {
  const auto& sec = spec.require("group");
  std::string cls = section_require(sec, "class");
  if (cls == "builtin") return builders::by_name(section_require(sec, "name"));

  if (cls == "finite_cayley") {
    std::vector<std::string> labels;
    for (auto& l : split(section_require(sec, "labels"), ',')) labels.push_back(l);
    Mat rows = parse_matrix(section_require(sec, "table"), sec.line);
    std::vector<uint16_t> table;
    for (const Vec& r : rows)
      for (i64 x : r) {
        if (x < 0 || x >= (i64)labels.size()) throw SchemaError("table index out of range");
        table.push_back((uint16_t)x);
      }
    return Group::make_finite_cayley(std::move(labels), std::move(table));
  }

  if (cls == "virtually_abelian") {
    i64 rank = to_int(section_require(sec, "rank"), sec.line);
    std::vector<std::string> qlabels;
    for (auto& l : split(section_require(sec, "point_labels"), ',')) qlabels.push_back(l);
    Mat rows = parse_matrix(section_require(sec, "point_table"), sec.line);
    std::vector<uint16_t> table;
    for (const Vec& r : rows)
      for (i64 x : r) {
        if (x < 0 || x >= (i64)qlabels.size()) throw SchemaError("point table index out of range");
        table.push_back((uint16_t)x);
      }
    GroupPtr q = Group::make_finite_cayley(qlabels, std::move(table));
    std::vector<Mat> action(qlabels.size());
    for (size_t i = 0; i < qlabels.size(); ++i) {
      auto v = section_get(sec, "action_" + qlabels[i]);
      if (!v) throw SchemaError("missing action_" + qlabels[i]);
      action[i] = parse_matrix(*v, sec.line);
    }
    return Group::make_virtually_abelian((int)rank, std::move(q), std::move(action));
  }

  if (cls == "central_pairing") {
    AbelianCoords base{(int)to_int(section_require(sec, "base_free"), sec.line),
                       int_list(section_get(sec, "base_torsion").value_or(""), sec.line)};
    AbelianCoords central{(int)to_int(section_require(sec, "central_free"), sec.line),
                          int_list(section_get(sec, "central_torsion").value_or(""), sec.line)};
    int n = base.ngens();
    std::vector<Vec> beta((size_t)n * n, Vec(central.ngens(), 0));
    for (const auto& e : sec.entries) {
      if (e.key.rfind("pairing_", 0) != 0) continue;
      auto parts = split(e.key.substr(8), '_');
      if (parts.size() != 2) throw SchemaError("pairing keys look like pairing_<i>_<j>");
      i64 i = to_int(parts[0], e.line) - 1;
      i64 j = to_int(parts[1], e.line) - 1;
      if (i < 0 || j < 0 || i >= n || j >= n) throw SchemaError("pairing index out of range");
      Vec val = int_list(e.value, e.line);
      if ((int)val.size() != central.ngens())
        throw SchemaError("pairing value needs one coordinate per central generator");
      beta[(size_t)i * n + j] = val;
      beta[(size_t)j * n + i] = central.reduce(lat::neg(val));
    }
    return Group::make_central_pairing(std::move(base), std::move(central), std::move(beta));
  }

  throw SchemaError("unknown group class: " + cls);
}

Element parse_element(const GroupPtr& g, const std::string& raw, int line) {
  std::string text = trim(raw);
  if (text.empty()) parse_fail(line, 1, "empty element literal");
  switch (g->cls()) {
    case GroupClass::FiniteCayley: {
      if (text[0] == '#') {
        i64 idx = to_int(text.substr(1), line);
        if (idx < 0 || idx >= (i64)g->fc_order()) throw SchemaError("element index out of range");
        return g->make_fc((uint32_t)idx);
      }
      for (uint32_t i = 0; i < g->fc_order(); ++i)
        if (g->labels()[i] == text) return g->make_fc(i);
      throw SchemaError("unknown element label: " + text);
    }
    case GroupClass::VirtuallyAbelian: {
      if (text.front() != '(' || text.back() != ')')
        parse_fail(line, 1, "expected (v1,...,vn|q)");
      std::string inner = text.substr(1, text.size() - 2);
      size_t bar = inner.find('|');
      if (bar == std::string::npos) parse_fail(line, 1, "expected '|' in element literal");
      Vec v = int_list(inner.substr(0, bar), line);
      if ((int)v.size() != g->rank()) throw SchemaError("wrong coordinate count");
      std::string ql = trim(inner.substr(bar + 1));
      const auto& labels = g->point_group()->labels();
      for (uint32_t q = 0; q < labels.size(); ++q)
        if (labels[q] == ql) return g->make_va(std::move(v), q);
      throw SchemaError("unknown point-group label: " + ql);
    }
    case GroupClass::CentralPairing: {
      if (text.front() != '(' || text.back() != ')')
        parse_fail(line, 1, "expected (nu|a)");
      std::string inner = text.substr(1, text.size() - 2);
      size_t bar = inner.find('|');
      if (bar == std::string::npos) parse_fail(line, 1, "expected '|' in element literal");
      Vec nu = int_list(inner.substr(0, bar), line);
      Vec a = int_list(inner.substr(bar + 1), line);
      if ((int)nu.size() != g->central().ngens() || (int)a.size() != g->base().ngens())
        throw SchemaError("wrong coordinate count");
      return g->make_cp(std::move(nu), std::move(a));
    }
  }
  throw Error("unreachable");
}

std::vector<Element> parse_element_list(const GroupPtr& g, const std::string& raw, int line) {
  std::vector<Element> out;
  std::string text = trim(raw);
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    size_t end;
    if (text[pos] == '(') {
      end = text.find(')', pos);
      if (end == std::string::npos) parse_fail(line, (int)pos + 1, "unterminated '('");
      ++end;
    } else {
      end = pos;
      while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
    }
    out.push_back(parse_element(g, text.substr(pos, end - pos), line));
    pos = end;
  }
  return out;
}

Rational parse_rational(const std::string& raw, int line) {
  std::string text = trim(raw);
  size_t slash = text.find('/');
  if (slash == std::string::npos) return Rational(to_int(text, line));
  return Rational(to_int(text.substr(0, slash), line), to_int(text.substr(slash + 1), line));
}

}  // namespace ccm
