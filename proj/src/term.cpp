#include "mg/term.hpp"

#include "mg/errors.hpp"

namespace mg {

struct Term::Node {
  Kind kind;
  Sort sort;
  std::string name;
  std::uint64_t value = 0;
  Op op = Op::Call;
  std::vector<Term> args;
  std::size_t size = 1;
};

namespace {

std::string describe(Op op) { return std::string(op_name(op)); }

Sort infer_sort(Op op, const std::vector<Term>& args) {
  const auto& info = op_info(op);
  if (!arity_ok(op, args.size())) {
    throw TypeError("operator " + describe(op) + " applied to " + std::to_string(args.size()) + " arguments");
  }
  auto all_same = [&](std::size_t from) {
    for (std::size_t i = from + 1; i < args.size(); ++i) {
      if (args[i].sort() != args[from].sort()) return false;
    }
    return true;
  };
  switch (info.cls) {
    case OpClass::BvArith:
      if (!args[0].sort().is_bitvec() || !all_same(0)) {
        throw TypeError(describe(op) + " expects bitvector operands of one width");
      }
      return args[0].sort();
    case OpClass::BvPredicate:
      if (!args[0].sort().is_bitvec() || !all_same(0)) {
        throw TypeError(describe(op) + " expects bitvector operands of one width");
      }
      return Sort::boolean();
    case OpClass::Equality:
      if (!all_same(0)) throw TypeError(describe(op) + " expects operands of one sort");
      return Sort::boolean();
    case OpClass::Boolean:
      for (const auto& a : args) {
        if (!a.sort().is_bool()) throw TypeError(describe(op) + " expects Bool operands");
      }
      return Sort::boolean();
    case OpClass::Ite:
      if (!args[0].sort().is_bool()) throw TypeError("ite condition must be Bool");
      if (args[1].sort() != args[2].sort()) throw TypeError("ite branches differ in sort");
      return args[1].sort();
    case OpClass::Call:
      break;
  }
  throw TypeError("Term::apply cannot build a user-function call");
}

}  // namespace

Term Term::variable(std::string name, Sort sort) {
  if (name.empty()) throw TypeError("empty variable name");
  auto n = std::make_shared<Node>(Node{Kind::Variable, sort, std::move(name), 0, Op::Call, {}, 1});
  return Term(std::move(n));
}

Term Term::literal(Sort sort, std::uint64_t value) {
  if (!sort.fits(value)) {
    throw TypeError("literal " + std::to_string(value) + " does not fit " + sort.to_string());
  }
  auto n = std::make_shared<Node>(Node{Kind::Literal, sort, {}, value, Op::Call, {}, 1});
  return Term(std::move(n));
}

Term Term::apply(Op op, std::vector<Term> args) {
  Sort s = infer_sort(op, args);
  std::size_t size = 1;
  for (const auto& a : args) size += a.size();
  auto n = std::make_shared<Node>(Node{Kind::Apply, s, {}, 0, op, std::move(args), size});
  return Term(std::move(n));
}

Term Term::call(std::string function, std::vector<Term> args, Sort result) {
  if (function.empty()) throw TypeError("empty function name");
  std::size_t size = 1;
  for (const auto& a : args) size += a.size();
  auto n = std::make_shared<Node>(Node{Kind::Apply, result, std::move(function), 0, Op::Call, std::move(args), size});
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const Sort& Term::sort() const { return node_->sort; }
const std::string& Term::name() const { return node_->name; }
std::uint64_t Term::value() const { return node_->value; }
Op Term::op() const { return node_->op; }
std::span<const Term> Term::args() const { return node_->args; }
std::size_t Term::size() const { return node_->size; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.sort == y.sort && x.name == y.name && x.value == y.value && x.op == y.op &&
         x.size == y.size && x.args == y.args;
}

}  // namespace mg
