#include "mg/printer.hpp"

#include <sstream>

namespace mg {
namespace {

std::string params_text(const std::vector<Param>& params) {
  std::string s = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) s += ' ';
    s += "(" + params[i].name + " " + print_sort(params[i].sort) + ")";
  }
  return s + ")";
}

void write_term(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      out += t.name();
      return;
    case Term::Kind::Literal:
      out += print_literal(t.sort(), t.value());
      return;
    case Term::Kind::Apply:
      break;
  }
  if (t.op() == Op::Call && t.args().empty()) {
    out += t.name();
    return;
  }
  out += '(';
  out += t.op() == Op::Call ? std::string_view(t.name()) : op_name(t.op());
  for (const auto& a : t.args()) {
    out += ' ';
    write_term(a, out);
  }
  out += ')';
}

}  // namespace

std::string print_sort(const Sort& s) { return s.to_string(); }

std::string print_literal(const Sort& s, std::uint64_t value) {
  if (s.is_bool()) return value ? "true" : "false";
  const unsigned w = s.width();
  std::string digits;
  if (w % 4 == 0 && w >= 8) {
    static constexpr char kHex[] = "0123456789abcdef";
    for (unsigned i = w / 4; i-- > 0;) digits += kHex[(value >> (4 * i)) & 0xf];
    return "#x" + digits;
  }
  for (unsigned i = w; i-- > 0;) digits += ((value >> i) & 1) ? '1' : '0';
  return "#b" + digits;
}

std::string print_term(const Term& t) {
  std::string out;
  write_term(t, out);
  return out;
}

std::string print_production(const Production& p) {
  if (const auto* t = std::get_if<TerminalProduction>(&p)) return print_term(t->term);
  const auto& o = std::get<OperatorProduction>(p);
  std::string s = "(" + std::string(op_name(o.op));
  for (const auto& operand : o.operands) s += " " + operand;
  return s + ")";
}

std::string print_grammar(const Grammar& g, const std::string& indent) {
  std::ostringstream out;
  out << indent << "(";
  for (std::size_t i = 0; i < g.nonterminals().size(); ++i) {
    const auto& nt = g.nonterminals()[i];
    if (i) out << ' ';
    out << "(" << nt.name << " " << print_sort(nt.sort) << ")";
  }
  out << ")\n" << indent << "(";
  for (std::size_t i = 0; i < g.nonterminals().size(); ++i) {
    const auto& nt = g.nonterminals()[i];
    if (i) out << "\n" << indent << " ";
    out << "(" << nt.name << " " << print_sort(nt.sort) << " (";
    for (std::size_t j = 0; j < nt.productions.size(); ++j) {
      if (j) out << ' ';
      out << print_production(nt.productions[j]);
    }
    out << "))";
  }
  out << ")";
  return out.str();
}

std::string print_function_def(const FunctionDef& f) {
  return "(define-fun " + f.name() + " " + params_text(f.signature.params) + " " +
         print_sort(f.signature.return_sort) + " " + print_term(f.body) + ")";
}

std::string print_problem(const SynthProblem& p) {
  std::ostringstream out;
  out << "(set-logic " << p.logic << ")\n";
  for (const auto& h : p.helper_defs) out << print_function_def(h) << "\n";
  out << "(synth-fun " << p.target.name << " " << params_text(p.target.params) << " "
      << print_sort(p.target.return_sort);
  if (p.attached_grammar) out << "\n" << print_grammar(*p.attached_grammar);
  out << ")\n";
  for (const auto& v : p.universal_vars) out << "(declare-var " << v.name << " " << print_sort(v.sort) << ")\n";
  for (const auto& c : p.constraints) out << "(constraint " << print_term(c) << ")\n";
  out << "(check-synth)\n";
  return out.str();
}

}  // namespace mg
