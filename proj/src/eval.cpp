#include "mg/eval.hpp"

#include "mg/errors.hpp"

namespace mg {
namespace {

const FunctionDef* lookup(const std::string& name, std::span<const FunctionDef> helpers, const FunctionDef* candidate) {
  if (candidate != nullptr && candidate->name() == name) return candidate;
  for (const auto& h : helpers) {
    if (h.name() == name) return &h;
  }
  return nullptr;
}

}  // namespace

Value eval_term(const Term& t, const Env& env, std::span<const FunctionDef> helpers, const FunctionDef* candidate) {
  switch (t.kind()) {
    case Term::Kind::Literal:
      return {t.sort(), t.value()};
    case Term::Kind::Variable: {
      auto it = env.find(t.name());
      if (it == env.end()) throw EvalError("unbound variable '" + t.name() + "'");
      if (it->second.sort != t.sort()) throw EvalError("variable '" + t.name() + "' bound at the wrong sort");
      return it->second;
    }
    case Term::Kind::Apply:
      break;
  }

  std::vector<Value> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(eval_term(a, env, helpers, candidate));

  if (t.op() == Op::Call) {
    const FunctionDef* f = lookup(t.name(), helpers, candidate);
    if (f == nullptr) throw EvalError("unbound function '" + t.name() + "'");
    const auto& params = f->signature.params;
    if (params.size() != args.size()) throw EvalError("arity mismatch calling '" + t.name() + "'");
    Env local;
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].sort != args[i].sort) throw EvalError("argument sort mismatch calling '" + t.name() + "'");
      local.insert_or_assign(params[i].name, args[i]);
    }
    // A function body sees its own parameters and the helpers, never the caller's variables.
    return eval_term(f->body, local, helpers, candidate);
  }

  if (!arity_ok(t.op(), args.size())) throw EvalError("arity mismatch for " + std::string(op_name(t.op())));
  std::vector<std::uint64_t> bits;
  bits.reserve(args.size());
  for (const auto& a : args) bits.push_back(a.bits);
  const unsigned operand_width = args[t.op() == Op::Ite ? 1 : 0].sort.width();
  return {t.sort(), apply_bits(t.op(), operand_width, bits)};
}

Term substitute(const Term& t, const std::map<std::string, Term>& bindings) {
  switch (t.kind()) {
    case Term::Kind::Literal:
      return t;
    case Term::Kind::Variable: {
      auto it = bindings.find(t.name());
      return it == bindings.end() ? t : it->second;
    }
    case Term::Kind::Apply:
      break;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, bindings));
  if (t.op() == Op::Call) return Term::call(t.name(), std::move(args), t.sort());
  return Term::apply(t.op(), std::move(args));
}

Term inline_helpers(const Term& t, std::span<const FunctionDef> helpers) {
  if (!t.is_apply()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(inline_helpers(a, helpers));
  if (t.op() != Op::Call) return Term::apply(t.op(), std::move(args));
  for (const auto& h : helpers) {
    if (h.name() != t.name()) continue;
    std::map<std::string, Term> bindings;
    for (std::size_t i = 0; i < h.signature.params.size(); ++i) bindings.emplace(h.signature.params[i].name, args[i]);
    return substitute(inline_helpers(h.body, helpers), bindings);
  }
  return Term::call(t.name(), std::move(args), t.sort());
}

}  // namespace mg
