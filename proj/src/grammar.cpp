#include "mg/grammar.hpp"

#include <map>
#include <set>

#include "mg/errors.hpp"

namespace mg {

Grammar::Grammar(std::vector<Nonterminal> nonterminals) : nonterminals_(std::move(nonterminals)) {
  if (nonterminals_.empty()) throw TypeError("grammar has no nonterminals");
  std::map<std::string, Sort> sorts;
  for (const auto& nt : nonterminals_) {
    if (!sorts.emplace(nt.name, nt.sort).second) throw TypeError("duplicate nonterminal " + nt.name);
  }
  for (const auto& nt : nonterminals_) {
    for (const auto& p : nt.productions) {
      if (const auto* t = std::get_if<TerminalProduction>(&p)) {
        if (t->term.is_apply()) throw TypeError("terminal production must be a variable or literal");
        if (t->term.sort() != nt.sort) {
          throw TypeError("terminal of sort " + t->term.sort().to_string() + " in nonterminal " + nt.name);
        }
        continue;
      }
      const auto& o = std::get<OperatorProduction>(p);
      std::vector<Term> probes;
      for (const auto& operand : o.operands) {
        auto it = sorts.find(operand);
        if (it == sorts.end()) throw TypeError("production references undeclared nonterminal " + operand);
        probes.push_back(Term::variable(operand, it->second));
      }
      // Sort-check the production by building it over placeholder operands.
      const Term shape = Term::apply(o.op, std::move(probes));
      if (shape.sort() != nt.sort) {
        throw TypeError("production (" + std::string(op_name(o.op)) + " ...) has sort " + shape.sort().to_string() +
                        " but nonterminal " + nt.name + " is " + nt.sort.to_string());
      }
    }
  }
}

const Nonterminal* Grammar::find(const std::string& name) const {
  for (const auto& nt : nonterminals_) {
    if (nt.name == name) return &nt;
  }
  return nullptr;
}

std::size_t Grammar::production_count() const {
  std::size_t n = 0;
  for (const auto& nt : nonterminals_) n += nt.productions.size();
  return n;
}

namespace {

bool derives_impl(const Grammar& g, const std::string& nt_name, const Term& t,
                  std::map<std::pair<std::string, const void*>, bool>& memo) {
  const auto key = std::make_pair(nt_name, t.id());
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  bool result = false;
  const Nonterminal* nt = g.find(nt_name);
  if (nt != nullptr && nt->sort == t.sort()) {
    for (const auto& p : nt->productions) {
      if (const auto* term = std::get_if<TerminalProduction>(&p)) {
        if (term->term == t) {
          result = true;
          break;
        }
        continue;
      }
      const auto& o = std::get<OperatorProduction>(p);
      if (!t.is_apply() || t.op() != o.op || t.args().size() != o.operands.size()) continue;
      bool all = true;
      for (std::size_t i = 0; i < o.operands.size() && all; ++i) {
        all = derives_impl(g, o.operands[i], t.args()[i], memo);
      }
      if (all) {
        result = true;
        break;
      }
    }
  }
  memo[key] = result;
  return result;
}

int production_rank(const Production& p) {
  if (const auto* t = std::get_if<TerminalProduction>(&p)) return t->term.is_variable() ? 0 : 1;
  return 2;
}

}  // namespace

bool Grammar::derives(const std::string& nonterminal, const Term& t) const {
  std::map<std::pair<std::string, const void*>, bool> memo;
  return derives_impl(*this, nonterminal, t, memo);
}

bool Grammar::derives(const Term& t) const {
  if (empty()) return false;
  return derives(start().name, t);
}

bool production_less(const Production& a, const Production& b) {
  const int ra = production_rank(a);
  const int rb = production_rank(b);
  if (ra != rb) return ra < rb;
  if (ra == 0) {
    const auto& x = std::get<TerminalProduction>(a).term;
    const auto& y = std::get<TerminalProduction>(b).term;
    return x.name() < y.name();
  }
  if (ra == 1) {
    const auto& x = std::get<TerminalProduction>(a).term;
    const auto& y = std::get<TerminalProduction>(b).term;
    if (x.value() != y.value()) return x.value() < y.value();
    return x.sort() < y.sort();
  }
  const auto& x = std::get<OperatorProduction>(a);
  const auto& y = std::get<OperatorProduction>(b);
  const auto nx = op_name(x.op);
  const auto ny = op_name(y.op);
  if (nx != ny) return nx < ny;
  return x.operands < y.operands;
}

}  // namespace mg
