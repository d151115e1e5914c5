#include "mg/metagrammar.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mg/errors.hpp"
#include "mg/hash.hpp"
#include "mg/sexpr.hpp"

namespace mg {
namespace {

const std::vector<std::string> kBoolCoreItems = {"true", "false", "not", "and", "or"};

std::string nonterminal_name(const Sort& s, const Sort& return_sort) {
  if (s == return_sort) return "Start";
  if (s.is_bool()) return "B";
  return "BV" + std::to_string(s.width());
}

struct Draft {
  std::string name;
  Sort sort;
  std::vector<Production> productions;
};

class GrammarDraft {
 public:
  explicit GrammarDraft(const SynthProblem& p) : return_sort_(p.target.return_sort) {
    std::set<Sort> sorts = p.signature_sorts();
    sorts.insert(Sort::boolean());
    add(return_sort_);
    for (const auto& s : sorts) {
      if (s.is_bitvec() && s != return_sort_) add(s);
    }
    if (!return_sort_.is_bool()) add(Sort::boolean());
    signature_sorts_ = p.signature_sorts();
  }

  Draft* find(const Sort& s) {
    for (auto& d : drafts_) {
      if (d.sort == s) return &d;
    }
    return nullptr;
  }
  Draft& boolean() { return *find(Sort::boolean()); }
  std::vector<Draft>& drafts() { return drafts_; }
  const std::set<Sort>& signature_sorts() const { return signature_sorts_; }

  std::vector<Draft*> bitvectors() {
    std::vector<Draft*> out;
    for (auto& d : drafts_) {
      if (d.sort.is_bitvec()) out.push_back(&d);
    }
    return out;
  }

 private:
  void add(const Sort& s) { drafts_.push_back({nonterminal_name(s, return_sort_), s, {}}); }

  Sort return_sort_;
  std::set<Sort> signature_sorts_;
  std::vector<Draft> drafts_;
};

OperatorProduction repeat_operand(Op op, const std::string& nt) {
  return {op, std::vector<std::string>(op_info(op).min_arity, nt)};
}

struct RuleApplier {
  GrammarDraft& draft;
  const SynthProblem& problem;

  void operator()(const ArgumentVariables&) const {
    for (const auto& prm : problem.target.params) {
      draft.find(prm.sort)->productions.push_back(TerminalProduction{Term::variable(prm.name, prm.sort)});
    }
  }

  void operator()(const ZeroOneConstants& r) const {
    for (const auto& s : draft.signature_sorts()) {
      for (auto v : r.values) draft.find(s)->productions.push_back(TerminalProduction{Term::literal(s, v)});
    }
  }

  void operator()(const Operators& r) const {
    if (r.sort_kind == SortKind::BitVec) {
      for (Draft* bv : draft.bitvectors()) {
        for (Op op : r.ops) {
          if (op == Op::Ite) {
            bv->productions.push_back(OperatorProduction{op, {draft.boolean().name, bv->name, bv->name}});
          } else {
            bv->productions.push_back(repeat_operand(op, bv->name));
          }
        }
      }
      return;
    }
    Draft& b = draft.boolean();
    for (Op op : r.ops) b.productions.push_back(repeat_operand(op, b.name));
  }

  void operator()(const Predicates& r) const {
    Draft& b = draft.boolean();
    const auto bvs = draft.bitvectors();
    for (Op op : r.ops) {
      if (bvs.empty()) {
        if (op_info(op).cls == OpClass::Equality) b.productions.push_back(repeat_operand(op, b.name));
        continue;
      }
      for (Draft* bv : bvs) b.productions.push_back(repeat_operand(op, bv->name));
    }
  }

  void operator()(const BoolCore& r) const {
    Draft& b = draft.boolean();
    for (const auto& item : r.items) {
      if (item == "true" || item == "false") {
        b.productions.push_back(TerminalProduction{Term::boolean(item == "true")});
      } else {
        b.productions.push_back(repeat_operand(*op_from_name(item), b.name));
      }
    }
  }

  void operator()(const ConstantsFromSpec& r) const {
    std::map<Sort, std::size_t> taken;
    // extract_literals is ordered by (sort, value), so the first `cap` per sort are the smallest.
    for (const auto& lit : extract_literals(problem)) {
      Draft* d = draft.find(lit.sort);
      if (d == nullptr || taken[lit.sort] >= r.cap) continue;
      ++taken[lit.sort];
      d->productions.push_back(TerminalProduction{Term::literal(lit.sort, lit.value)});
    }
  }
};

std::string sort_kind_name(SortKind k) { return k == SortKind::BitVec ? "bv" : "bool"; }

std::string op_list(const std::vector<Op>& ops) {
  std::string s;
  for (Op op : ops) s += " " + std::string(op_name(op));
  return s;
}

std::vector<Op> parse_ops(const SExpr& e, std::size_t from) {
  std::vector<Op> ops;
  for (std::size_t i = from; i < e.items.size(); ++i) {
    const auto& item = e.items[i];
    auto op = item.is_symbol() ? op_from_name(item.text) : std::nullopt;
    if (!op) throw ParseError("unknown operator " + item.to_string(), item.line, item.column);
    ops.push_back(*op);
  }
  return ops;
}

RuleKind parse_rule_kind(const SExpr& e) {
  if (e.is_symbol("argument-variables")) return ArgumentVariables{};
  const auto head = e.head();
  if (head == "constants") {
    ZeroOneConstants c{{}};
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      if (e.items[i].kind != SExpr::Kind::Numeral) {
        throw ParseError("expected 0 or 1", e.items[i].line, e.items[i].column);
      }
      c.values.push_back(std::stoull(e.items[i].text));
    }
    return c;
  }
  if (head == "operators") {
    if (e.items.size() < 2 || !e.items[1].is_symbol()) throw ParseError("expected sort kind", e.line, e.column);
    Operators o;
    if (e.items[1].text == "bv") {
      o.sort_kind = SortKind::BitVec;
    } else if (e.items[1].text == "bool") {
      o.sort_kind = SortKind::Bool;
    } else {
      throw ParseError("sort kind must be bv or bool", e.items[1].line, e.items[1].column);
    }
    o.ops = parse_ops(e, 2);
    return o;
  }
  if (head == "predicates") return Predicates{parse_ops(e, 1)};
  if (head == "bool-core") {
    BoolCore b;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      if (!e.items[i].is_symbol()) throw ParseError("expected symbol", e.items[i].line, e.items[i].column);
      b.items.push_back(e.items[i].text);
    }
    return b;
  }
  if (head == "constants-from-spec") {
    ConstantsFromSpec c;
    if (e.items.size() == 2 && e.items[1].kind == SExpr::Kind::Numeral) {
      c.cap = std::stoull(e.items[1].text);
    } else if (e.items.size() != 1) {
      throw ParseError("expected (constants-from-spec CAP)", e.line, e.column);
    }
    return c;
  }
  if (e.is_symbol("constants-from-spec")) return ConstantsFromSpec{};
  throw ParseError("unknown rule kind " + e.to_string(), e.line, e.column);
}

}  // namespace

void Rule::validate() const {
  if (id.empty()) throw std::invalid_argument("rule id must be nonempty");
  const auto bad = [&](const std::string& why) { throw std::invalid_argument("rule " + id + ": " + why); };
  if (const auto* c = std::get_if<ZeroOneConstants>(&kind)) {
    for (auto v : c->values) {
      if (v > 1) bad("constants must be 0 or 1");
    }
  } else if (const auto* o = std::get_if<Operators>(&kind)) {
    for (Op op : o->ops) {
      const auto cls = op_info(op).cls;
      const bool ok = o->sort_kind == SortKind::BitVec
                          ? (cls == OpClass::BvArith || cls == OpClass::Ite)
                          : (cls == OpClass::Boolean || cls == OpClass::Ite || cls == OpClass::Equality);
      if (!ok || op == Op::Call) bad(std::string(op_name(op)) + " is not an operator of this sort kind");
    }
  } else if (const auto* pr = std::get_if<Predicates>(&kind)) {
    for (Op op : pr->ops) {
      const auto cls = op_info(op).cls;
      if (cls != OpClass::BvPredicate && cls != OpClass::Equality) bad(std::string(op_name(op)) + " is not a predicate");
    }
  } else if (const auto* b = std::get_if<BoolCore>(&kind)) {
    for (const auto& item : b->items) {
      if (std::find(kBoolCoreItems.begin(), kBoolCoreItems.end(), item) == kBoolCoreItems.end()) {
        bad("'" + item + "' is not a bool-core item");
      }
    }
  }
}

Metagrammar::Metagrammar(std::string id, std::vector<Rule> rules) : id_(std::move(id)), rules_(std::move(rules)) {
  for (const auto& r : rules_) r.validate();
  std::sort(rules_.begin(), rules_.end(), [](const Rule& a, const Rule& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < rules_.size(); ++i) {
    if (rules_[i].id == rules_[i - 1].id) throw std::invalid_argument("duplicate rule id " + rules_[i].id);
  }
}

bool Metagrammar::contains(std::string_view rule_id) const { return find(rule_id) != nullptr; }

const Rule* Metagrammar::find(std::string_view rule_id) const {
  for (const auto& r : rules_) {
    if (r.id == rule_id) return &r;
  }
  return nullptr;
}

std::vector<std::string> Metagrammar::rule_ids() const {
  std::vector<std::string> ids;
  for (const auto& r : rules_) ids.push_back(r.id);
  return ids;
}

std::string Metagrammar::digest() const {
  std::string canonical;
  for (const auto& r : rules_) canonical += rule_to_string(r) + "\n";
  return content_hash(canonical);
}

Metagrammar default_metagrammar(const std::set<Sort>& problem_sorts) {
  const bool has_bv = std::any_of(problem_sorts.begin(), problem_sorts.end(), [](const Sort& s) { return s.is_bitvec(); });
  std::vector<Rule> rules = {
      {"args", ArgumentVariables{}},
      {"const01", ZeroOneConstants{{0, 1}}},
      {"bool-core", BoolCore{{"true", "false", "not", "and", "or"}}},
      {"predicates-eq", Predicates{{Op::Eq}}},
  };
  if (has_bv) {
    rules.push_back({"bv-arith", Operators{SortKind::BitVec, {Op::BvAdd, Op::BvSub, Op::BvMul, Op::BvUdiv, Op::BvUrem}}});
    rules.push_back({"bv-bitwise", Operators{SortKind::BitVec, {Op::BvNot, Op::BvAnd, Op::BvOr, Op::BvXor}}});
    rules.push_back({"bv-shifts", Operators{SortKind::BitVec, {Op::BvShl, Op::BvLshr, Op::BvAshr}}});
    rules.push_back({"ite", Operators{SortKind::BitVec, {Op::Ite}}});
    rules.push_back({"predicates-cmp", Predicates{{Op::BvUlt, Op::BvUle, Op::BvSlt, Op::BvSle}}});
  }
  return Metagrammar("default", std::move(rules));
}

Metagrammar enhanced_metagrammar(const std::set<Sort>& problem_sorts) {
  auto rules = default_metagrammar(problem_sorts).rules();
  rules.push_back({"constants-from-spec", ConstantsFromSpec{}});
  return Metagrammar("enhanced", std::move(rules));
}

Grammar materialize(const Metagrammar& m, const SynthProblem& p) {
  GrammarDraft draft(p);
  RuleApplier apply{draft, p};
  for (const auto& r : m.rules()) std::visit(apply, r.kind);

  auto& drafts = draft.drafts();
  for (auto& d : drafts) {
    std::sort(d.productions.begin(), d.productions.end(), production_less);
    d.productions.erase(std::unique(d.productions.begin(), d.productions.end()), d.productions.end());
  }

  // Least fixed point of "can derive a finite term".
  std::set<std::string> productive;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& d : drafts) {
      if (productive.contains(d.name)) continue;
      for (const auto& prod : d.productions) {
        const auto* o = std::get_if<OperatorProduction>(&prod);
        const bool ok = o == nullptr || std::all_of(o->operands.begin(), o->operands.end(),
                                                    [&](const std::string& n) { return productive.contains(n); });
        if (ok) {
          productive.insert(d.name);
          changed = true;
          break;
        }
      }
    }
  }
  const std::string& start = drafts.front().name;
  if (!productive.contains(start)) {
    throw MaterializeError("empty nonterminal: " + start + " has no productions under metagrammar " + m.id());
  }
  for (auto& d : drafts) {
    std::erase_if(d.productions, [&](const Production& prod) {
      const auto* o = std::get_if<OperatorProduction>(&prod);
      return o != nullptr && !std::all_of(o->operands.begin(), o->operands.end(),
                                          [&](const std::string& n) { return productive.contains(n); });
    });
  }

  std::set<std::string> reachable{start};
  std::vector<std::string> work{start};
  while (!work.empty()) {
    const std::string name = work.back();
    work.pop_back();
    for (const auto& d : drafts) {
      if (d.name != name) continue;
      for (const auto& prod : d.productions) {
        if (const auto* o = std::get_if<OperatorProduction>(&prod)) {
          for (const auto& n : o->operands) {
            if (reachable.insert(n).second) work.push_back(n);
          }
        }
      }
    }
  }

  std::vector<Nonterminal> nts;
  for (auto& d : drafts) {
    if (reachable.contains(d.name) && productive.contains(d.name)) {
      nts.push_back({d.name, d.sort, std::move(d.productions)});
    }
  }
  return Grammar(std::move(nts));
}

std::vector<Metagrammar> neighbors(const Metagrammar& m) {
  std::vector<Metagrammar> out;
  out.reserve(m.size());
  for (const auto& removed : m.rules()) {
    std::vector<Rule> rest;
    for (const auto& r : m.rules()) {
      if (r.id != removed.id) rest.push_back(r);
    }
    out.emplace_back(m.id() + "~" + removed.id, std::move(rest));
  }
  return out;
}

std::string rule_to_string(const Rule& r) {
  std::string body = std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ArgumentVariables>) {
          return "argument-variables";
        } else if constexpr (std::is_same_v<K, ZeroOneConstants>) {
          std::string s = "(constants";
          for (auto v : k.values) s += " " + std::to_string(v);
          return s + ")";
        } else if constexpr (std::is_same_v<K, Operators>) {
          return "(operators " + sort_kind_name(k.sort_kind) + op_list(k.ops) + ")";
        } else if constexpr (std::is_same_v<K, Predicates>) {
          return "(predicates" + op_list(k.ops) + ")";
        } else if constexpr (std::is_same_v<K, BoolCore>) {
          std::string s = "(bool-core";
          for (const auto& item : k.items) s += " " + item;
          return s + ")";
        } else {
          return "(constants-from-spec " + std::to_string(k.cap) + ")";
        }
      },
      r.kind);
  return "(rule " + r.id + " " + body + ")";
}

std::string serialize_metagrammar(const Metagrammar& m) {
  std::ostringstream out;
  out << "(metagrammar " << m.id();
  for (const auto& r : m.rules()) out << "\n  " << rule_to_string(r);
  out << ")\n";
  return out.str();
}

Metagrammar parse_metagrammar(std::string_view text) {
  const auto exprs = read_sexprs(text);
  if (exprs.size() != 1 || exprs[0].head() != "metagrammar" || exprs[0].items.size() < 2 ||
      !exprs[0].items[1].is_symbol()) {
    throw ParseError("expected (metagrammar ID RULE...)", 1, 1);
  }
  const SExpr& top = exprs[0];
  std::vector<Rule> rules;
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const SExpr& r = top.items[i];
    if (r.head() != "rule" || r.items.size() != 3 || !r.items[1].is_symbol()) {
      throw ParseError("expected (rule ID KIND)", r.line, r.column);
    }
    rules.push_back({r.items[1].text, parse_rule_kind(r.items[2])});
  }
  try {
    return Metagrammar(top.items[1].text, std::move(rules));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), top.line, top.column);
  }
}

Metagrammar load_metagrammar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metagrammar file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_metagrammar(buf.str());
}

void save_metagrammar(const Metagrammar& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metagrammar file " + path);
  out << serialize_metagrammar(m);
}

Metagrammar resolve_metagrammar(const std::string& spec, const std::set<Sort>& problem_sorts) {
  if (spec == "default") return default_metagrammar(problem_sorts);
  if (spec == "enhanced") return enhanced_metagrammar(problem_sorts);
  return load_metagrammar(spec);
}

}  // namespace mg
