#include "rsg/formats.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "rsg/dlo.hpp"
#include "rsg/errors.hpp"

namespace rsg {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream in(body);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

[[noreturn]] void bail(const std::string& source, int line_no, const std::string& what) {
  throw ParseError(source + ":" + std::to_string(line_no) + ": " + what);
}

int parse_int(const std::string& source, int line_no, const std::string& tok) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    bail(source, line_no, "expected an integer, got '" + tok + "'");
  }
}

}  // namespace

FiniteOrderedAlgebra parse_algebra_file(std::istream& in, const std::string& source) {
  std::vector<std::string> elements;
  std::map<std::string, int> index;
  std::vector<std::pair<int, int>> le_pairs;
  // one slot per ordered pair per table, -1 while unset
  std::vector<int> comp_tab, rres_tab, lres_tab;
  bool saw_elements = false;

  auto elem = [&](const std::string& tok, int line_no) {
    auto it = index.find(tok);
    if (it == index.end()) bail(source, line_no, "unknown element '" + tok + "'");
    return it->second;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& head = tokens[0];
    if (head == "elements") {
      if (tokens.size() < 2) bail(source, line_no, "elements line needs at least one name");
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (index.count(tokens[i])) bail(source, line_no, "duplicate element name '" + tokens[i] + "'");
        index[tokens[i]] = static_cast<int>(elements.size());
        elements.push_back(tokens[i]);
      }
      saw_elements = true;
      std::size_t mm = elements.size() * elements.size();
      comp_tab.assign(mm, -1);
      rres_tab.assign(mm, -1);
      lres_tab.assign(mm, -1);
    } else if (head == "le") {
      if (!saw_elements) bail(source, line_no, "le before elements");
      if (tokens.size() != 3) bail(source, line_no, "le needs two names");
      le_pairs.emplace_back(elem(tokens[1], line_no), elem(tokens[2], line_no));
    } else if (head == "comp" || head == "rres" || head == "lres") {
      if (!saw_elements) bail(source, line_no, head + " before elements");
      if (tokens.size() != 4) bail(source, line_no, head + " needs three names");
      int x = elem(tokens[1], line_no), y = elem(tokens[2], line_no), z = elem(tokens[3], line_no);
      auto& tab = head == "comp" ? comp_tab : head == "rres" ? rres_tab : lres_tab;
      int& slot = tab[static_cast<std::size_t>(x) * elements.size() + static_cast<std::size_t>(y)];
      if (slot >= 0)
        bail(source, line_no, "duplicate " + head + " entry for (" + tokens[1] + ", " + tokens[2] + ")");
      slot = z;
    } else {
      bail(source, line_no, "unknown directive '" + head + "'");
    }
  }
  if (!saw_elements) throw ParseError(source + ": no elements line");

  for (auto [tab, label] : {std::pair{&comp_tab, "comp"}, {&rres_tab, "rres"}, {&lres_tab, "lres"}})
    for (std::size_t i = 0; i < tab->size(); ++i)
      if ((*tab)[i] < 0)
        throw ParseError(source + ": " + label + " table is not total: missing entry for (" +
                         elements[i / elements.size()] + ", " + elements[i % elements.size()] + ")");

  auto alg = FiniteOrderedAlgebra::make(elements);
  for (auto [x, y] : le_pairs) alg.set_le(x, y);
  alg.comp_tab = std::move(comp_tab);
  alg.rres_tab = std::move(rres_tab);
  alg.lres_tab = std::move(lres_tab);
  check_structure(alg);
  return alg;
}

void write_algebra_file(std::ostream& out, const FiniteOrderedAlgebra& alg) {
  out << "elements";
  for (const auto& name : alg.elements) out << " " << name;
  out << "\n";
  int m = alg.size();
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      if (alg.le(x, y))
        out << "le " << alg.elements[static_cast<std::size_t>(x)] << " "
            << alg.elements[static_cast<std::size_t>(y)] << "\n";
  const struct {
    const char* label;
    const std::vector<int>* tab;
  } tables[3] = {{"comp", &alg.comp_tab}, {"rres", &alg.rres_tab}, {"lres", &alg.lres_tab}};
  for (const auto& t : tables)
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        out << t.label << " " << alg.elements[static_cast<std::size_t>(x)] << " "
            << alg.elements[static_cast<std::size_t>(y)] << " "
            << alg.elements[static_cast<std::size_t>(
                   (*t.tab)[static_cast<std::size_t>(x) * static_cast<std::size_t>(m) + y])]
            << "\n";
}

RelationalContext parse_rel_file(std::istream& in, const std::string& source) {
  int base = -1;
  std::vector<std::pair<int, int>> unit_pairs;
  std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>> rels;

  auto point = [&](const std::string& tok, int line_no) {
    int v = parse_int(source, line_no, tok);
    if (v < 0 || v >= base) bail(source, line_no, "point " + tok + " outside base 0.." + std::to_string(base - 1));
    return v;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& head = tokens[0];
    if (head == "base") {
      if (base >= 0) bail(source, line_no, "duplicate base line");
      if (tokens.size() != 2) bail(source, line_no, "base needs one integer");
      base = parse_int(source, line_no, tokens[1]);
      if (base < 1 || base > kMaxBasePoints) bail(source, line_no, "base must be between 1 and 64");
    } else if (head == "unit") {
      if (base < 0) bail(source, line_no, "unit before base");
      if (tokens.size() != 3) bail(source, line_no, "unit needs two points");
      unit_pairs.emplace_back(point(tokens[1], line_no), point(tokens[2], line_no));
    } else if (head == "rel") {
      if (base < 0) bail(source, line_no, "rel before base");
      if (tokens.size() != 4) bail(source, line_no, "rel needs a name and two points");
      const std::string& name = tokens[1];
      auto it = std::find_if(rels.begin(), rels.end(), [&](const auto& r) { return r.first == name; });
      if (it == rels.end()) {
        rels.push_back({name, {}});
        it = rels.end() - 1;
      }
      it->second.emplace_back(point(tokens[2], line_no), point(tokens[3], line_no));
    } else {
      bail(source, line_no, "unknown directive '" + head + "'");
    }
  }
  if (base < 0) throw ParseError(source + ": no base line");

  try {
    Relation unit = Relation::from_pairs(base, unit_pairs);
    std::vector<std::pair<std::string, Relation>> named;
    for (const auto& [name, pairs] : rels) named.emplace_back(name, Relation::from_pairs(base, pairs));
    return RelationalContext(base, unit, named);
  } catch (const StructuralError& e) {
    throw ParseError(source + ": " + e.what());
  }
}

void write_rel_file(std::ostream& out, const RelationalContext& ctx) {
  out << "base " << ctx.base_size << "\n";
  for (auto [i, j] : ctx.unit.pairs()) out << "unit " << i << " " << j << "\n";
  for (const auto& [name, rel] : ctx.named)
    for (auto [i, j] : rel.pairs()) out << "rel " << name << " " << i << " " << j << "\n";
}

FiniteOrderedAlgebra load_algebra(const std::string& path) {
  if (path == "builtin:paper") return witness_algebra().algebra;
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return parse_algebra_file(in, path);
}

RelationalContext load_rel_context(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return parse_rel_file(in, path);
}

}  // namespace rsg
