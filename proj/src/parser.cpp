#include "mg/parser.hpp"

#include <algorithm>
#include <set>

#include "mg/errors.hpp"

namespace mg {
namespace {

[[noreturn]] void fail_at(const SExpr& e, const std::string& message) {
  throw ParseError(message, e.line, e.column);
}

// SyGuS/SMT-LIB names that are well-formed but outside the supported fragment.
const std::set<std::string, std::less<>> kUnsupportedCommands = {
    "synth-inv", "inv-constraint", "declare-primed-var", "declare-datatype", "declare-datatypes",
    "declare-sort", "define-sort", "assume", "chc-constraint", "oracle-constraint", "oracle-assume",
    "declare-oracle-fun", "optimize-synth", "declare-weight", "set-feature", "synth-fun-with-grammar",
    "declare-fun", "define-fun-rec", "define-funs-rec", "declare-const"};

const std::set<std::string, std::less<>> kUnsupportedOperators = {
    "bvnand", "bvnor", "bvxnor", "bvcomp", "bvsdiv", "bvsrem", "bvsmod", "concat", "extract",
    "zero_extend", "sign_extend", "rotate_left", "rotate_right", "repeat", "bvsgt", "bvsge",
    "+", "-", "*", "div", "mod", "abs", "<", "<=", ">", ">=", "str.++", "str.len", "!", "exists", "forall"};

std::uint64_t parse_digits(const SExpr& e, unsigned radix) {
  std::uint64_t v = 0;
  for (char c : e.text) {
    const unsigned d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : (std::tolower(c) - 'a' + 10);
    v = v * radix + d;
  }
  return v;
}

Term parse_bv_literal(const SExpr& e) {
  const unsigned bits_per_digit = e.kind == SExpr::Kind::Binary ? 1 : 4;
  const std::size_t width = e.text.size() * bits_per_digit;
  if (width > Sort::kMaxWidth) throw UnsupportedError("bitvector literal wider than 64 bits");
  return Term::literal(Sort::bitvec(static_cast<unsigned>(width)), parse_digits(e, bits_per_digit == 1 ? 2 : 16));
}

struct Scope {
  std::map<std::string, Term> bindings;  // variables and let-bound terms
};

class TermBuilder {
 public:
  TermBuilder(const FunctionSignature* target, const std::vector<FunctionDef>* helpers)
      : target_(target), helpers_(helpers) {}

  Term build(const SExpr& e, const Scope& scope) const {
    switch (e.kind) {
      case SExpr::Kind::Binary:
      case SExpr::Kind::Hex:
        return parse_bv_literal(e);
      case SExpr::Kind::Numeral:
        throw UnsupportedError("integer numeral '" + e.text + "' (only bitvector literals are supported)");
      case SExpr::Kind::String:
        throw UnsupportedError("string literal");
      case SExpr::Kind::Keyword:
        fail_at(e, "unexpected keyword " + e.text);
      case SExpr::Kind::Symbol:
        return build_symbol(e, scope);
      case SExpr::Kind::List:
        return build_list(e, scope);
    }
    fail_at(e, "unreachable");
  }

 private:
  Term build_symbol(const SExpr& e, const Scope& scope) const {
    if (e.text == "true") return Term::boolean(true);
    if (e.text == "false") return Term::boolean(false);
    if (auto it = scope.bindings.find(e.text); it != scope.bindings.end()) return it->second;
    if (const auto* sig = function(e.text); sig != nullptr && sig->params.empty()) {
      return Term::call(e.text, {}, sig->return_sort);
    }
    fail_at(e, "unbound symbol '" + e.text + "'");
  }

  const FunctionSignature* function(const std::string& name) const {
    if (target_ != nullptr && target_->name == name) return target_;
    if (helpers_ != nullptr) {
      for (const auto& h : *helpers_) {
        if (h.name() == name) return &h.signature;
      }
    }
    return nullptr;
  }

  Term build_list(const SExpr& e, const Scope& scope) const {
    if (e.items.empty()) fail_at(e, "empty application");
    const SExpr& head = e.items.front();
    if (head.is_list()) {
      if (head.head() == "_") throw UnsupportedError("indexed operator " + head.to_string());
      fail_at(head, "application head must be a symbol");
    }
    if (!head.is_symbol()) fail_at(head, "application head must be a symbol");
    const std::string& name = head.text;

    if (name == "_") return build_indexed_literal(e);
    if (name == "let") return build_let(e, scope);

    std::vector<Term> args;
    args.reserve(e.items.size() - 1);
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(build(e.items[i], scope));

    if (const auto* sig = function(name)) {
      if (args.size() != sig->params.size()) {
        fail_at(e, "function '" + name + "' expects " + std::to_string(sig->params.size()) + " arguments");
      }
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].sort() != sig->params[i].sort) {
          fail_at(e.items[i + 1], "argument " + std::to_string(i + 1) + " of '" + name + "' has sort " +
                                      args[i].sort().to_string() + ", expected " + sig->params[i].sort.to_string());
        }
      }
      return Term::call(name, std::move(args), sig->return_sort);
    }
    if (auto op = op_from_name(name)) {
      try {
        return Term::apply(*op, std::move(args));
      } catch (const TypeError& err) {
        fail_at(e, err.what());
      }
    }
    if (kUnsupportedOperators.contains(name)) throw UnsupportedError("operator '" + name + "'");
    fail_at(head, "unknown function '" + name + "'");
  }

  Term build_indexed_literal(const SExpr& e) const {
    // (_ bvN w)
    if (e.items.size() != 3 || !e.items[1].is_symbol() || e.items[1].text.rfind("bv", 0) != 0 ||
        e.items[2].kind != SExpr::Kind::Numeral) {
      throw UnsupportedError("indexed term " + e.to_string());
    }
    const std::string digits = e.items[1].text.substr(2);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      fail_at(e.items[1], "malformed bitvector literal");
    }
    const unsigned width = static_cast<unsigned>(std::stoul(e.items[2].text));
    const Sort s = Sort::bitvec(width);
    const std::uint64_t v = std::stoull(digits);
    if (!s.fits(v)) fail_at(e, "literal does not fit its width");
    return Term::literal(s, v);
  }

  Term build_let(const SExpr& e, const Scope& scope) const {
    if (e.items.size() != 3 || !e.items[1].is_list()) fail_at(e, "malformed let");
    Scope inner = scope;
    for (const auto& binding : e.items[1].items) {
      if (!binding.is_list() || binding.items.size() != 2 || !binding.items[0].is_symbol()) {
        fail_at(binding, "malformed let binding");
      }
      // Parallel let: bindings see the outer scope only.
      inner.bindings.insert_or_assign(binding.items[0].text, build(binding.items[1], scope));
    }
    return build(e.items[2], inner);
  }

  const FunctionSignature* target_;
  const std::vector<FunctionDef>* helpers_;
};

std::vector<Param> parse_params(const SExpr& e) {
  if (!e.is_list()) fail_at(e, "expected parameter list");
  std::vector<Param> params;
  std::set<std::string> seen;
  for (const auto& p : e.items) {
    if (!p.is_list() || p.items.size() != 2 || !p.items[0].is_symbol()) fail_at(p, "malformed parameter");
    if (!seen.insert(p.items[0].text).second) fail_at(p, "duplicate parameter '" + p.items[0].text + "'");
    params.push_back({p.items[0].text, parse_sort(p.items[1])});
  }
  return params;
}

std::string symbol_at(const SExpr& cmd, std::size_t i, const char* what) {
  if (cmd.items.size() <= i || !cmd.items[i].is_symbol()) fail_at(cmd, std::string("expected ") + what);
  return cmd.items[i].text;
}

Production parse_gterm(const SExpr& g, const std::map<std::string, Sort>& nonterminals,
                       const std::vector<Param>& params) {
  if (g.is_symbol()) {
    if (g.text == "true" || g.text == "false") return TerminalProduction{Term::boolean(g.text == "true")};
    if (nonterminals.contains(g.text)) {
      throw UnsupportedError("chain production '" + g.text + "' in grammar");
    }
    for (const auto& p : params) {
      if (p.name == g.text) return TerminalProduction{Term::variable(p.name, p.sort)};
    }
    fail_at(g, "unknown grammar symbol '" + g.text + "'");
  }
  if (g.kind == SExpr::Kind::Binary || g.kind == SExpr::Kind::Hex) return TerminalProduction{parse_bv_literal(g)};
  if (g.kind == SExpr::Kind::Numeral) throw UnsupportedError("integer literal in grammar");
  if (!g.is_list() || g.items.empty()) fail_at(g, "malformed grammar term");
  const auto head = g.head();
  if (head == "Constant" || head == "Variable") throw UnsupportedError("(" + std::string(head) + " ...) grammar term");
  if (head == "_") {
    TermBuilder builder(nullptr, nullptr);
    return TerminalProduction{builder.build(g, Scope{})};
  }
  auto op = op_from_name(head);
  if (!op) {
    if (kUnsupportedOperators.contains(head)) throw UnsupportedError("operator '" + std::string(head) + "'");
    fail_at(g, "unknown grammar operator '" + std::string(head) + "'");
  }
  OperatorProduction prod{*op, {}};
  for (std::size_t i = 1; i < g.items.size(); ++i) {
    const auto& operand = g.items[i];
    if (!operand.is_symbol() || !nonterminals.contains(operand.text)) {
      throw UnsupportedError("nested grammar term " + g.to_string());
    }
    prod.operands.push_back(operand.text);
  }
  if (!arity_ok(*op, prod.operands.size())) fail_at(g, "wrong arity for '" + std::string(head) + "'");
  return prod;
}

Grammar parse_grammar(const SExpr& decls, const SExpr& rules, const FunctionSignature& target) {
  if (!decls.is_list() || !rules.is_list()) fail_at(decls, "malformed grammar block");
  std::map<std::string, Sort> sorts;
  std::vector<Nonterminal> nts;
  for (const auto& d : decls.items) {
    if (!d.is_list() || d.items.size() != 2 || !d.items[0].is_symbol()) fail_at(d, "malformed nonterminal declaration");
    const Sort s = parse_sort(d.items[1]);
    if (!sorts.emplace(d.items[0].text, s).second) fail_at(d, "duplicate nonterminal '" + d.items[0].text + "'");
    nts.push_back({d.items[0].text, s, {}});
  }
  if (rules.items.size() != nts.size()) fail_at(rules, "grammar rules do not match nonterminal declarations");
  for (std::size_t i = 0; i < rules.items.size(); ++i) {
    const auto& r = rules.items[i];
    if (!r.is_list() || r.items.size() != 3 || !r.items[0].is_symbol() || !r.items[2].is_list()) {
      fail_at(r, "malformed grouped rule");
    }
    if (r.items[0].text != nts[i].name) fail_at(r, "grouped rules must follow declaration order");
    if (parse_sort(r.items[1]) != nts[i].sort) fail_at(r, "grouped rule sort differs from declaration");
    for (const auto& g : r.items[2].items) nts[i].productions.push_back(parse_gterm(g, sorts, target.params));
  }
  if (nts.empty()) fail_at(decls, "empty grammar");
  if (nts.front().sort != target.return_sort) fail_at(decls, "start symbol sort differs from the return sort");
  try {
    return Grammar(std::move(nts));
  } catch (const TypeError& err) {
    fail_at(rules, err.what());
  }
}

}  // namespace

Sort parse_sort(const SExpr& e) {
  if (e.is_symbol()) {
    if (e.text == "Bool") return Sort::boolean();
    if (e.text == "Int" || e.text == "Real" || e.text == "String") throw UnsupportedError("sort " + e.text);
    throw UnsupportedError("sort " + e.text);
  }
  if (e.is_list() && e.items.size() == 3 && e.items[0].is_symbol("_") && e.items[1].is_symbol("BitVec") &&
      e.items[2].kind == SExpr::Kind::Numeral) {
    const unsigned long w = std::stoul(e.items[2].text);
    if (w == 0) fail_at(e, "zero-width bitvector");
    if (w > Sort::kMaxWidth) throw UnsupportedError("bitvector width " + e.items[2].text);
    return Sort::bitvec(static_cast<unsigned>(w));
  }
  if (e.is_list() && !e.items.empty() && e.items[0].is_symbol("BitVec")) {
    throw UnsupportedError("SyGuS v1 sort syntax " + e.to_string());
  }
  if (e.is_list() && !e.items.empty() && e.items[0].is_symbol()) throw UnsupportedError("sort " + e.to_string());
  fail_at(e, "malformed sort");
}

SynthProblem parse_problem(std::string_view text) {
  const auto commands = read_sexprs(text);
  SynthProblem p;
  bool have_logic = false;
  bool have_target = false;
  bool have_check = false;
  std::set<std::string> names;
  Scope universal;

  for (const auto& cmd : commands) {
    if (!cmd.is_list() || cmd.items.empty() || !cmd.items[0].is_symbol()) fail_at(cmd, "expected a command");
    const std::string name = cmd.items[0].text;
    if (have_check) fail_at(cmd, "command after check-synth");

    if (name == "set-logic") {
      if (have_logic) fail_at(cmd, "duplicate set-logic");
      p.logic = symbol_at(cmd, 1, "logic name");
      have_logic = true;
    } else if (name == "set-info" || name == "set-option") {
      // no semantic effect
    } else if (name == "synth-fun") {
      if (have_target) throw UnsupportedError("more than one synth-fun");
      if (cmd.items.size() != 4 && cmd.items.size() != 6) fail_at(cmd, "malformed synth-fun");
      p.target.name = symbol_at(cmd, 1, "function name");
      if (!names.insert(p.target.name).second) fail_at(cmd, "redeclared symbol '" + p.target.name + "'");
      p.target.params = parse_params(cmd.items[2]);
      p.target.return_sort = parse_sort(cmd.items[3]);
      if (cmd.items.size() == 6) p.attached_grammar = parse_grammar(cmd.items[4], cmd.items[5], p.target);
      have_target = true;
    } else if (name == "declare-var") {
      if (cmd.items.size() != 3) fail_at(cmd, "malformed declare-var");
      const std::string var = symbol_at(cmd, 1, "variable name");
      if (!names.insert(var).second) fail_at(cmd, "redeclared symbol '" + var + "'");
      const Sort s = parse_sort(cmd.items[2]);
      p.universal_vars.push_back({var, s});
      universal.bindings.emplace(var, Term::variable(var, s));
    } else if (name == "define-fun") {
      if (cmd.items.size() != 5) fail_at(cmd, "malformed define-fun");
      FunctionSignature sig;
      sig.name = symbol_at(cmd, 1, "function name");
      if (!names.insert(sig.name).second) fail_at(cmd, "redeclared symbol '" + sig.name + "'");
      sig.params = parse_params(cmd.items[2]);
      sig.return_sort = parse_sort(cmd.items[3]);
      Scope local;
      for (const auto& prm : sig.params) local.bindings.emplace(prm.name, Term::variable(prm.name, prm.sort));
      // Helper bodies may use earlier helpers but not the target.
      TermBuilder builder(nullptr, &p.helper_defs);
      Term body = builder.build(cmd.items[4], local);
      if (body.sort() != sig.return_sort) fail_at(cmd.items[4], "define-fun body sort differs from declared sort");
      p.helper_defs.push_back({std::move(sig), std::move(body)});
    } else if (name == "constraint") {
      if (cmd.items.size() != 2) fail_at(cmd, "malformed constraint");
      if (!have_target) fail_at(cmd, "constraint before synth-fun");
      TermBuilder builder(&p.target, &p.helper_defs);
      Term c = builder.build(cmd.items[1], universal);
      if (!c.sort().is_bool()) fail_at(cmd.items[1], "constraint is not Bool");
      p.constraints.push_back(std::move(c));
    } else if (name == "check-synth") {
      have_check = true;
    } else if (kUnsupportedCommands.contains(name)) {
      throw UnsupportedError("command '" + name + "'");
    } else {
      fail_at(cmd, "unknown command '" + name + "'");
    }
  }
  if (!have_logic) throw ParseError("missing set-logic", 1, 1);
  if (!have_target) throw ParseError("missing synth-fun", 1, 1);
  if (!have_check) throw ParseError("missing check-synth", 1, 1);
  validate(p);
  return p;
}

Term parse_term(std::string_view text, const SynthProblem& context, const std::vector<Param>& scope_vars) {
  const auto exprs = read_sexprs(text);
  if (exprs.size() != 1) throw ParseError("expected exactly one term", 1, 1);
  Scope scope;
  for (const auto& v : scope_vars) scope.bindings.emplace(v.name, Term::variable(v.name, v.sort));
  TermBuilder builder(&context.target, &context.helper_defs);
  return builder.build(exprs.front(), scope);
}

FunctionDef parse_solver_answer(std::string_view output, const SynthProblem& p) {
  const auto exprs = read_sexprs(output);
  std::vector<const SExpr*> defs;
  for (const auto& e : exprs) {
    if (e.head() == "define-fun") {
      defs.push_back(&e);
    } else if (e.is_list()) {
      for (const auto& inner : e.items) {
        if (inner.head() == "define-fun") defs.push_back(&inner);
      }
    }
  }
  for (const SExpr* d : defs) {
    if (d->items.size() != 5 || !d->items[1].is_symbol(p.target.name)) continue;
    const auto params = parse_params(d->items[2]);
    if (params.size() != p.target.params.size()) fail_at(*d, "answer has the wrong number of parameters");
    Scope local;
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].sort != p.target.params[i].sort) fail_at(*d, "answer parameter sort mismatch");
      // Rename to the target's parameter names so grammar terminals line up.
      local.bindings.insert_or_assign(params[i].name, Term::variable(p.target.params[i].name, params[i].sort));
    }
    if (parse_sort(d->items[3]) != p.target.return_sort) fail_at(*d, "answer return sort mismatch");
    TermBuilder builder(nullptr, &p.helper_defs);
    Term body = builder.build(d->items[4], local);
    if (body.sort() != p.target.return_sort) fail_at(d->items[4], "answer body has the wrong sort");
    return {p.target, std::move(body)};
  }
  throw ParseError("no define-fun for '" + p.target.name + "' in solver output", 1, 1);
}

}  // namespace mg
