#include "mg/problem.hpp"

#include <functional>
#include <map>

#include "mg/errors.hpp"

namespace mg {

const FunctionDef* SynthProblem::find_helper(const std::string& name) const {
  for (const auto& h : helper_defs) {
    if (h.name() == name) return &h;
  }
  return nullptr;
}

std::set<Sort> SynthProblem::signature_sorts() const {
  std::set<Sort> sorts{target.return_sort};
  for (const auto& p : target.params) sorts.insert(p.sort);
  return sorts;
}

namespace {

void collect_literals(const Term& t, std::set<Literal>& out) {
  if (t.is_literal()) {
    out.insert({t.sort(), t.value()});
    return;
  }
  for (const auto& a : t.args()) collect_literals(a, out);
}

using SignatureLookup = std::function<const FunctionSignature*(const std::string&)>;

void check_term(const Term& t, const std::map<std::string, Sort>& vars, const SignatureLookup& lookup,
                const std::string& where) {
  switch (t.kind()) {
    case Term::Kind::Literal:
      return;
    case Term::Kind::Variable: {
      auto it = vars.find(t.name());
      if (it == vars.end()) throw TypeError(where + ": free variable '" + t.name() + "' is not in scope");
      if (it->second != t.sort()) throw TypeError(where + ": variable '" + t.name() + "' used at the wrong sort");
      return;
    }
    case Term::Kind::Apply:
      break;
  }
  if (t.op() == Op::Call) {
    const FunctionSignature* sig = lookup(t.name());
    if (sig == nullptr) throw TypeError(where + ": unknown function '" + t.name() + "'");
    if (sig->params.size() != t.args().size()) throw TypeError(where + ": arity mismatch calling '" + t.name() + "'");
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (t.args()[i].sort() != sig->params[i].sort) {
        throw TypeError(where + ": argument sort mismatch calling '" + t.name() + "'");
      }
    }
    if (sig->return_sort != t.sort()) throw TypeError(where + ": result sort mismatch calling '" + t.name() + "'");
  }
  for (const auto& a : t.args()) check_term(a, vars, lookup, where);
}

void check_distinct(const std::vector<Param>& params, const std::string& where) {
  std::set<std::string> seen;
  for (const auto& p : params) {
    if (!seen.insert(p.name).second) throw TypeError(where + ": duplicate name '" + p.name + "'");
  }
}

std::map<std::string, Sort> as_scope(const std::vector<Param>& params) {
  std::map<std::string, Sort> m;
  for (const auto& p : params) m.emplace(p.name, p.sort);
  return m;
}

}  // namespace

std::set<Literal> extract_literals(const SynthProblem& p) {
  std::set<Literal> out;
  for (const auto& c : p.constraints) collect_literals(c, out);
  for (const auto& h : p.helper_defs) collect_literals(h.body, out);
  return out;
}

void validate(const SynthProblem& p) {
  check_distinct(p.target.params, "synth-fun " + p.target.name);
  check_distinct(p.universal_vars, "declare-var");

  for (std::size_t i = 0; i < p.helper_defs.size(); ++i) {
    const auto& h = p.helper_defs[i];
    check_distinct(h.signature.params, "define-fun " + h.name());
    if (h.body.sort() != h.signature.return_sort) throw TypeError("define-fun " + h.name() + ": body sort mismatch");
    auto earlier = [&](const std::string& name) -> const FunctionSignature* {
      for (std::size_t j = 0; j < i; ++j) {
        if (p.helper_defs[j].name() == name) return &p.helper_defs[j].signature;
      }
      return nullptr;
    };
    check_term(h.body, as_scope(h.signature.params), earlier, "define-fun " + h.name());
  }

  auto any_function = [&](const std::string& name) -> const FunctionSignature* {
    if (name == p.target.name) return &p.target;
    const FunctionDef* h = p.find_helper(name);
    return h ? &h->signature : nullptr;
  };
  const auto universal = as_scope(p.universal_vars);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    const std::string where = "constraint " + std::to_string(i + 1);
    if (!c.sort().is_bool()) throw TypeError(where + ": not Bool");
    check_term(c, universal, any_function, where);
  }

  if (p.attached_grammar) {
    const Grammar& g = *p.attached_grammar;
    if (g.start().sort != p.target.return_sort) throw TypeError("grammar start sort differs from the return sort");
    const auto params = as_scope(p.target.params);
    for (const auto& nt : g.nonterminals()) {
      for (const auto& prod : nt.productions) {
        const auto* t = std::get_if<TerminalProduction>(&prod);
        if (t && t->term.is_variable()) check_term(t->term, params, any_function, "grammar " + nt.name);
      }
    }
  }
}

}  // namespace mg
