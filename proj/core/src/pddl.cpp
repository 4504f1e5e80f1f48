#include "oak/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "oak/errors.hpp"

namespace oak {
namespace {

struct SExpr {
  std::string atom;  // empty for lists
  std::vector<SExpr> items;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_list() const { return atom.empty(); }
};

[[noreturn]] void fail(const SExpr& at, const std::string& what) {
  throw ParseError(what, at.line, at.column);
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  SExpr read_top() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty input", line_, col_);
    SExpr e = read();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError("trailing text after definition", line_, col_);
    return e;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    SExpr e;
    e.line = line_;
    e.column = col_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '(') {
      advance();
      for (;;) {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unbalanced '(' opened here", e.line, e.column);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
      e.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(d)));
      advance();
    }
    return e;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

const std::string& head(const SExpr& e) {
  static const std::string none;
  if (!e.is_list() || e.items.empty() || e.items[0].is_list()) return none;
  return e.items[0].atom;
}

const std::string& atom_of(const SExpr& e, const std::string& what) {
  if (e.is_list()) fail(e, "expected " + what);
  return e.atom;
}

// "a b - t c - u d" -> typed names; untyped names default to `object`.
std::vector<TypedName> typed_list(const SExpr& list, std::size_t from, bool allow_either = false) {
  std::vector<TypedName> out;
  std::vector<std::string> pending;
  for (std::size_t i = from; i < list.items.size(); ++i) {
    const SExpr& it = list.items[i];
    if (!it.is_list() && it.atom == "-") {
      if (i + 1 >= list.items.size()) fail(it, "missing type after '-'");
      const SExpr& t = list.items[++i];
      if (t.is_list()) {
        if (head(t) == "either" && !allow_either) throw UnsupportedFeature("either types");
        fail(t, "expected type name");
      }
      for (auto& p : pending) out.push_back({std::move(p), t.atom});
      pending.clear();
    } else {
      pending.push_back(atom_of(it, "name"));
    }
  }
  for (auto& p : pending) out.push_back({std::move(p), kRootSort});
  return out;
}

void reject_keyword(const SExpr& e) {
  static const std::map<std::string, std::string> unsupported = {
      {"not", "negative preconditions"},      {"or", "disjunctive preconditions"},
      {"imply", "disjunctive preconditions"}, {"exists", "existential preconditions"},
      {"forall", "universal preconditions"},  {"when", "conditional effects"},
      {"=", "equality"},                      {"increase", "numeric fluents"},
      {"decrease", "numeric fluents"},        {"assign", "numeric fluents"},
      {"scale-up", "numeric fluents"},        {"scale-down", "numeric fluents"},
      {"<", "numeric fluents"},               {">", "numeric fluents"},
      {"<=", "numeric fluents"},              {">=", "numeric fluents"},
      {"preference", "preferences"}};
  auto it = unsupported.find(head(e));
  if (it != unsupported.end()) throw UnsupportedFeature(it->second);
}

AtomTemplate read_atom(const SExpr& e) {
  if (!e.is_list() || e.items.empty()) fail(e, "expected atom");
  reject_keyword(e);
  AtomTemplate a;
  a.predicate = atom_of(e.items[0], "predicate name");
  for (std::size_t i = 1; i < e.items.size(); ++i) a.args.push_back(atom_of(e.items[i], "argument"));
  return a;
}

// Conjunction of atoms: (and a b ...), a single atom, or ().
std::vector<AtomTemplate> read_conjunction(const SExpr& e) {
  if (!e.is_list()) fail(e, "expected condition");
  if (e.items.empty()) return {};
  if (head(e) == "and") {
    std::vector<AtomTemplate> out;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const SExpr& sub = e.items[i];
      if (head(sub) == "and") {
        auto nested = read_conjunction(sub);
        out.insert(out.end(), nested.begin(), nested.end());
      } else {
        out.push_back(read_atom(sub));
      }
    }
    return out;
  }
  return {read_atom(e)};
}

void read_effect(const SExpr& e, OperatorSchema& op) {
  if (!e.is_list()) fail(e, "expected effect");
  if (e.items.empty()) return;
  if (head(e) == "and") {
    for (std::size_t i = 1; i < e.items.size(); ++i) read_effect(e.items[i], op);
    return;
  }
  if (head(e) == "not") {
    if (e.items.size() != 2) fail(e, "malformed delete effect");
    op.del.push_back(read_atom(e.items[1]));
    return;
  }
  op.add.push_back(read_atom(e));
}

void check_requirements(const SExpr& e) {
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const std::string& r = atom_of(e.items[i], "requirement");
    if (r != ":strips" && r != ":typing") throw UnsupportedFeature("requirement " + r);
  }
}

OperatorSchema read_action(const SExpr& e) {
  if (e.items.size() < 2) fail(e, "action without name");
  OperatorSchema op;
  op.name = atom_of(e.items[1], "action name");
  for (std::size_t i = 2; i < e.items.size(); ++i) {
    const SExpr& key = e.items[i];
    const std::string& k = atom_of(key, "action keyword");
    if (i + 1 >= e.items.size()) fail(key, "missing value for " + k);
    const SExpr& val = e.items[++i];
    if (k == ":parameters") {
      if (!val.is_list()) fail(val, "expected parameter list");
      op.params = typed_list(val, 0);
      for (const auto& p : op.params)
        if (p.name.empty() || p.name[0] != '?') fail(val, "parameter must start with '?': " + p.name);
    } else if (k == ":precondition") {
      op.pre = read_conjunction(val);
    } else if (k == ":effect") {
      read_effect(val, op);
    } else {
      fail(key, "unknown action keyword " + k);
    }
  }
  return op;
}

void expect_define(const SExpr& root, const std::string& kind) {
  if (head(root) != "define") fail(root, "expected (define ...)");
  if (root.items.size() < 2 || head(root.items[1]) != kind || root.items[1].items.size() != 2)
    fail(root, "expected (" + kind + " <name>)");
}

}  // namespace

std::shared_ptr<const Domain> parse_domain(const std::string& text) {
  Reader reader(text);
  SExpr root = reader.read_top();
  expect_define(root, "domain");
  auto dom = std::make_shared<Domain>();
  dom->name = atom_of(root.items[1].items[1], "domain name");

  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& sec = root.items[i];
    const std::string& h = head(sec);
    if (h == ":requirements") {
      check_requirements(sec);
    } else if (h == ":types") {
      for (auto& t : typed_list(sec, 1)) {
        if (t.name == kRootSort) continue;
        if (!dom->has_sort(t.name)) dom->sorts.push_back(t.name);
        if (!dom->has_sort(t.sort)) dom->sorts.push_back(t.sort);
        dom->supersort[t.name] = t.sort;
      }
    } else if (h == ":constants") {
      dom->constants = typed_list(sec, 1);
    } else if (h == ":predicates") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        const SExpr& p = sec.items[j];
        if (!p.is_list() || p.items.empty()) fail(p, "expected predicate declaration");
        Predicate pred;
        pred.name = atom_of(p.items[0], "predicate name");
        for (auto& v : typed_list(p, 1)) pred.param_sorts.push_back(v.sort);
        dom->predicates.push_back(std::move(pred));
      }
    } else if (h == ":action") {
      dom->operators.push_back(read_action(sec));
    } else if (h == ":functions") {
      throw UnsupportedFeature("numeric fluents");
    } else if (h == ":durative-action") {
      throw UnsupportedFeature("durative actions");
    } else if (h == ":derived") {
      throw UnsupportedFeature("derived predicates");
    } else if (h == ":constraints") {
      throw UnsupportedFeature("constraints");
    } else {
      fail(sec, "unknown domain section " + (h.empty() ? std::string("<list>") : h));
    }
  }
  for (const auto& c : dom->constants)
    if (!dom->has_sort(c.sort)) throw SortError("undeclared sort " + c.sort + " of constant " + c.name);
  dom->check();
  return dom;
}

Problem parse_problem(std::shared_ptr<const Domain> domain, const std::string& text) {
  Reader reader(text);
  SExpr root = reader.read_top();
  expect_define(root, "problem");
  std::string name = atom_of(root.items[1].items[1], "problem name");
  std::vector<TypedName> objects;
  std::vector<Fact> init, goals;

  auto to_fact = [](const AtomTemplate& a, const SExpr& at) {
    for (const auto& arg : a.args)
      if (!arg.empty() && arg[0] == '?') fail(at, "variable in ground fact: " + arg);
    return Fact{a.predicate, a.args};
  };

  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& sec = root.items[i];
    const std::string& h = head(sec);
    if (h == ":domain") {
      if (sec.items.size() != 2) fail(sec, "malformed :domain");
      const std::string& dn = atom_of(sec.items[1], "domain name");
      if (dn != domain->name) throw SortError("problem is for domain " + dn + ", not " + domain->name);
    } else if (h == ":requirements") {
      check_requirements(sec);
    } else if (h == ":objects") {
      objects = typed_list(sec, 1);
    } else if (h == ":init") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        const SExpr& f = sec.items[j];
        if (head(f) == "=") throw UnsupportedFeature("numeric fluents");
        if (f.is_list() && std::any_of(f.items.begin() + (f.items.empty() ? 0 : 1), f.items.end(),
                                       [](const SExpr& x) { return x.is_list(); }))
          throw UnsupportedFeature("timed literals");
        AtomTemplate a = read_atom(f);
        init.push_back(to_fact(a, f));
      }
    } else if (h == ":goal") {
      if (sec.items.size() != 2) fail(sec, "malformed :goal");
      for (const auto& a : read_conjunction(sec.items[1])) goals.push_back(to_fact(a, sec.items[1]));
    } else if (h == ":metric") {
      throw UnsupportedFeature("plan metrics");
    } else if (h == ":constraints") {
      throw UnsupportedFeature("constraints");
    } else {
      fail(sec, "unknown problem section " + (h.empty() ? std::string("<list>") : h));
    }
  }
  return Problem(std::move(domain), std::move(name), std::move(objects), std::move(init), std::move(goals));
}

Problem parse_problem(const std::string& domain_text, const std::string& problem_text) {
  return parse_problem(parse_domain(domain_text), problem_text);
}

namespace {

void print_typed(std::ostream& out, const std::vector<TypedName>& names) {
  // Group consecutive names of the same sort: "a b - block".
  for (std::size_t i = 0; i < names.size();) {
    std::size_t j = i;
    while (j < names.size() && names[j].sort == names[i].sort) {
      out << (j == i ? "" : " ") << names[j].name;
      ++j;
    }
    out << " - " << names[i].sort;
    i = j;
    if (i < names.size()) out << ' ';
  }
}

void print_atom(std::ostream& out, const std::string& pred, const std::vector<std::string>& args) {
  out << '(' << pred;
  for (const auto& a : args) out << ' ' << a;
  out << ')';
}

void print_conjunction(std::ostream& out, const std::vector<AtomTemplate>& atoms, bool negate) {
  for (const auto& a : atoms) {
    out << ' ';
    if (negate) out << "(not ";
    print_atom(out, a.predicate, a.args);
    if (negate) out << ')';
  }
}

}  // namespace

std::string format_domain(const Domain& d) {
  std::ostringstream out;
  out << "(define (domain " << d.name << ")\n";
  out << "  (:requirements :strips :typing)\n";
  out << "  (:types";
  // name order, so printing does not depend on declaration order
  std::vector<std::string> sorts(d.sorts.begin() + (d.sorts.empty() ? 0 : 1), d.sorts.end());
  std::sort(sorts.begin(), sorts.end());
  for (const auto& s : sorts) {
    auto it = d.supersort.find(s);
    out << ' ' << s << " - " << (it == d.supersort.end() ? kRootSort : it->second);
  }
  out << ")\n";
  if (!d.constants.empty()) {
    out << "  (:constants ";
    print_typed(out, d.constants);
    out << ")\n";
  }
  out << "  (:predicates";
  for (const auto& p : d.predicates) {
    out << " (" << p.name;
    for (std::size_t i = 0; i < p.param_sorts.size(); ++i) out << " ?x" << i << " - " << p.param_sorts[i];
    out << ')';
  }
  out << ")\n";
  for (const auto& op : d.operators) {
    out << "  (:action " << op.name << "\n    :parameters (";
    print_typed(out, op.params);
    out << ")\n    :precondition (and";
    print_conjunction(out, op.pre, false);
    out << ")\n    :effect (and";
    print_conjunction(out, op.add, false);
    print_conjunction(out, op.del, true);
    out << "))\n";
  }
  out << ")\n";
  return out.str();
}

std::string format_problem(const Problem& p) {
  std::ostringstream out;
  out << "(define (problem " << p.name() << ")\n";
  out << "  (:domain " << p.domain().name << ")\n";
  out << "  (:objects ";
  auto objs = p.own_objects();
  std::stable_sort(objs.begin(), objs.end(),
                   [](const TypedName& a, const TypedName& b) { return a.sort < b.sort; });
  print_typed(out, objs);
  out << ")\n  (:init";
  for (const auto& f : p.init()) {
    out << "\n    ";
    print_atom(out, f.predicate, f.args);
  }
  out << ")\n  (:goal (and";
  for (const auto& f : p.goals()) {
    out << "\n    ";
    print_atom(out, f.predicate, f.args);
  }
  out << ")))\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oak
