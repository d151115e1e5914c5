// Bottom-up enumerative solver over a concrete grammar.
//
// Every enumerated term is represented by its value vector ("signature") on a
// fixed list of evaluation points for the target's parameters. Terms of one
// nonterminal with equal signatures are interchangeable in every context, so
// only the first one (in canonical order) is kept.

#include <algorithm>
#include <chrono>
#include <map>
#include <unordered_set>

#include "mg/errors.hpp"
#include "mg/eval.hpp"
#include "mg/solver.hpp"

namespace mg {
namespace {

using Clock = std::chrono::steady_clock;

// Post-order flattening of a helper-free constraint.
struct CompiledExpr {
  enum class Kind : std::uint8_t { Var, Lit, App, Call };
  struct Node {
    Kind kind;
    Op op;
    unsigned operand_width;
    std::uint32_t slot;  // Var: universal slot
    std::uint64_t literal;
    std::uint32_t first_arg;
    std::uint32_t nargs;
    bool has_call;  // subtree contains a target call
  };
  std::vector<Node> nodes;
  std::vector<std::uint32_t> args;
  std::uint32_t root = 0;
};

class Compiler {
 public:
  Compiler(const std::map<std::string, std::uint32_t>& slots, const std::string& target)
      : slots_(slots), target_(target) {}

  CompiledExpr compile(const Term& t) {
    expr_ = {};
    memo_.clear();
    expr_.root = visit(t);
    return std::move(expr_);
  }

 private:
  std::uint32_t visit(const Term& t) {
    if (auto it = memo_.find(t.id()); it != memo_.end()) return it->second;
    CompiledExpr::Node n{};
    switch (t.kind()) {
      case Term::Kind::Variable: {
        auto it = slots_.find(t.name());
        if (it == slots_.end()) throw EvalError("unbound variable '" + t.name() + "'");
        n.kind = CompiledExpr::Kind::Var;
        n.slot = it->second;
        break;
      }
      case Term::Kind::Literal:
        n.kind = CompiledExpr::Kind::Lit;
        n.literal = t.value();
        break;
      case Term::Kind::Apply: {
        std::vector<std::uint32_t> kids;
        for (const auto& a : t.args()) kids.push_back(visit(a));
        if (t.op() == Op::Call) {
          if (t.name() != target_) throw EvalError("unexpected call to '" + t.name() + "'");
          n.kind = CompiledExpr::Kind::Call;
          n.has_call = true;
        } else {
          n.kind = CompiledExpr::Kind::App;
          n.op = t.op();
          n.operand_width = t.args()[t.op() == Op::Ite ? 1 : 0].sort().width();
        }
        n.first_arg = static_cast<std::uint32_t>(expr_.args.size());
        n.nargs = static_cast<std::uint32_t>(kids.size());
        for (auto k : kids) {
          n.has_call = n.has_call || expr_.nodes[k].has_call;
          expr_.args.push_back(k);
        }
        break;
      }
    }
    expr_.nodes.push_back(n);
    const auto idx = static_cast<std::uint32_t>(expr_.nodes.size() - 1);
    memo_.emplace(t.id(), idx);
    return idx;
  }

  const std::map<std::string, std::uint32_t>& slots_;
  const std::string& target_;
  CompiledExpr expr_;
  std::map<const void*, std::uint32_t> memo_;
};

// Evaluates in post order, so target calls happen in a fixed sequence.
template <class CallFn>
std::uint64_t run(const CompiledExpr& e, const std::uint64_t* env, CallFn&& call, std::vector<std::uint64_t>& vals,
                  std::vector<std::uint64_t>& argbuf) {
  vals.resize(e.nodes.size());
  for (std::size_t i = 0; i < e.nodes.size(); ++i) {
    const auto& n = e.nodes[i];
    switch (n.kind) {
      case CompiledExpr::Kind::Var:
        vals[i] = env[n.slot];
        break;
      case CompiledExpr::Kind::Lit:
        vals[i] = n.literal;
        break;
      case CompiledExpr::Kind::App:
      case CompiledExpr::Kind::Call:
        argbuf.resize(n.nargs);
        for (std::uint32_t k = 0; k < n.nargs; ++k) argbuf[k] = vals[e.args[n.first_arg + k]];
        vals[i] = n.kind == CompiledExpr::Kind::Call ? call(std::span<const std::uint64_t>(argbuf))
                                                     : apply_bits(n.op, n.operand_width, argbuf);
        break;
    }
  }
  return vals[e.root];
}

std::uint64_t domain_size(const Sort& s) { return s.is_bool() ? 2 : (std::uint64_t{1} << s.width()); }

struct Entry {
  std::uint32_t production;
  std::uint32_t kids_offset;
  std::uint32_t size;
};

struct Bank {
  const Nonterminal* nt = nullptr;
  std::vector<Entry> entries;
  std::vector<std::uint32_t> kids;
  std::vector<std::uint64_t> sigs;
  std::vector<std::vector<std::uint32_t>> by_size;
};

class Enumerator {
 public:
  Enumerator(const SynthProblem& p, const Grammar& g, std::size_t max_size, std::uint64_t max_candidates,
             std::optional<Deadline> deadline)
      : problem_(p), grammar_(g), max_size_(max_size), max_candidates_(max_candidates), deadline_(deadline) {}

  SolveOutcome run_search() {
    if (!exhaustively_checkable(problem_)) return SolveOutcome::error("input space too large");
    prepare_constraints();
    if (!prepare_points()) return SolveOutcome::error("input space too large");
    prepare_banks();

    for (std::size_t size = 1; size <= max_size_; ++size) {
      for (std::size_t b = 0; b < banks_.size(); ++b) {
        auto& bank = banks_[b];
        bank.by_size.resize(size + 1);
        const auto& prods = bank.nt->productions;
        for (std::uint32_t pi = 0; pi < prods.size(); ++pi) {
          if (auto r = expand(b, pi, size)) return std::move(*r);
        }
      }
      if (size == 1 && !has_operators_) break;
    }
    SolveOutcome o;
    o.status = SolveStatus::Infeasible;
    o.cost = cost_;
    o.message = "search space exhausted up to term size " + std::to_string(max_size_);
    return o;
  }

 private:
  void prepare_constraints() {
    for (std::uint32_t i = 0; i < problem_.universal_vars.size(); ++i) slots_.emplace(problem_.universal_vars[i].name, i);
    Compiler compiler(slots_, problem_.target.name);
    for (const auto& c : problem_.constraints) {
      compiled_.push_back(compiler.compile(inline_helpers(c, problem_.helper_defs)));
    }
    assignments_ = 1;
    for (const auto& v : problem_.universal_vars) assignments_ *= domain_size(v.sort);
  }

  void decode(std::uint64_t u, std::vector<std::uint64_t>& env) const {
    const auto& vars = problem_.universal_vars;
    env.resize(vars.size());
    for (std::size_t i = vars.size(); i-- > 0;) {
      const auto d = domain_size(vars[i].sort);
      env[i] = u % d;
      u /= d;
    }
  }

  // Chooses the evaluation points. When every target call has call-free
  // arguments, the points are exactly the argument tuples that occur;
  // otherwise the full parameter space is used.
  bool prepare_points() {
    bool nested = false;
    for (const auto& e : compiled_) {
      for (const auto& n : e.nodes) {
        if (n.kind != CompiledExpr::Kind::Call) continue;
        for (std::uint32_t k = 0; k < n.nargs; ++k) nested = nested || e.nodes[e.args[n.first_arg + k]].has_call;
      }
    }
    const auto& params = problem_.target.params;
    if (!nested) {
      full_space_ = false;
      std::map<std::vector<std::uint64_t>, std::uint32_t> index;
      std::vector<std::uint64_t> env;
      call_offsets_.push_back(0);
      for (std::uint64_t u = 0; u < assignments_; ++u) {
        decode(u, env);
        for (const auto& e : compiled_) {
          run(e, env.data(),
              [&](std::span<const std::uint64_t> args) -> std::uint64_t {
                std::vector<std::uint64_t> key(args.begin(), args.end());
                auto [it, inserted] = index.emplace(key, static_cast<std::uint32_t>(points_.size()));
                if (inserted) points_.push_back(std::move(key));
                call_points_.push_back(it->second);
                return 0;
              },
              vals_, argbuf_);
        }
        call_offsets_.push_back(call_points_.size());
      }
      return true;
    }
    full_space_ = true;
    std::uint64_t space = 1;
    for (const auto& prm : params) {
      if (prm.sort.is_bitvec() && prm.sort.width() > 8) return false;
      space *= domain_size(prm.sort);
      if (space > kMaxInputSpace) return false;
    }
    for (std::uint64_t i = 0; i < space; ++i) {
      std::vector<std::uint64_t> pt(params.size());
      std::uint64_t rest = i;
      for (std::size_t k = params.size(); k-- > 0;) {
        pt[k] = rest % domain_size(params[k].sort);
        rest /= domain_size(params[k].sort);
      }
      points_.push_back(std::move(pt));
    }
    return true;
  }

  void prepare_banks() {
    for (const auto& nt : grammar_.nonterminals()) {
      Bank b;
      b.nt = &nt;
      banks_.push_back(std::move(b));
      for (const auto& p : nt.productions) has_operators_ = has_operators_ || std::holds_alternative<OperatorProduction>(p);
    }
    for (std::size_t i = 0; i < banks_.size(); ++i) {
      seen_.emplace_back(16, SigHash{this, static_cast<std::uint32_t>(i)}, SigEq{this, static_cast<std::uint32_t>(i)});
    }
  }

  std::uint32_t bank_index(const std::string& name) const {
    for (std::uint32_t i = 0; i < grammar_.nonterminals().size(); ++i) {
      if (grammar_.nonterminals()[i].name == name) return i;
    }
    throw EvalError("unknown nonterminal " + name);
  }

  const std::uint64_t* sig(std::uint32_t bank, std::uint32_t entry) const {
    return banks_[bank].sigs.data() + static_cast<std::size_t>(entry) * points_.size();
  }

  struct SigHash {
    const Enumerator* self;
    std::uint32_t bank;
    std::size_t operator()(std::uint32_t entry) const {
      const std::uint64_t* s = self->sig(bank, entry);
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (std::size_t k = 0; k < self->points_.size(); ++k) {
        h ^= s[k] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return static_cast<std::size_t>(h);
    }
  };
  struct SigEq {
    const Enumerator* self;
    std::uint32_t bank;
    bool operator()(std::uint32_t a, std::uint32_t b) const {
      return std::equal(self->sig(bank, a), self->sig(bank, a) + self->points_.size(), self->sig(bank, b));
    }
  };

  // Generates every size-`size` term of production `pi` of bank `b`.
  std::optional<SolveOutcome> expand(std::size_t b, std::uint32_t pi, std::size_t size) {
    const Production& prod = banks_[b].nt->productions[pi];
    if (const auto* t = std::get_if<TerminalProduction>(&prod)) {
      if (size != 1) return std::nullopt;
      return offer(b, pi, {}, 1, [&](std::uint64_t* out) {
        for (std::size_t k = 0; k < points_.size(); ++k) out[k] = terminal_value(t->term, k);
      });
    }
    const auto& op = std::get<OperatorProduction>(prod);
    const std::size_t arity = op.operands.size();
    if (size < arity + 1) return std::nullopt;
    std::vector<std::uint32_t> operand_banks;
    for (const auto& name : op.operands) operand_banks.push_back(bank_index(name));
    const unsigned width = grammar_.nonterminals()[operand_banks[op.op == Op::Ite ? 1 : 0]].sort.width();

    std::vector<std::size_t> parts(arity, 1);
    parts.back() = size - 1 - (arity - 1);
    // Lexicographic enumeration of compositions of size-1 into `arity` parts.
    while (true) {
      if (auto r = expand_composition(b, pi, op.op, width, operand_banks, parts, size)) return r;
      if (!next_composition(parts)) break;
    }
    return std::nullopt;
  }

  static bool next_composition(std::vector<std::size_t>& parts) {
    // Find the rightmost position (excluding the last) that can grow by taking from the tail.
    const std::size_t n = parts.size();
    if (n < 2) return false;
    std::size_t total_tail = parts[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
      if (total_tail > (n - 1 - i)) {
        ++parts[i];
        std::size_t remaining = total_tail - 1;
        for (std::size_t j = i + 1; j < n - 1; ++j) {
          parts[j] = 1;
          --remaining;
        }
        parts[n - 1] = remaining;
        return true;
      }
      total_tail += parts[i];
      parts[i] = 1;
    }
    return false;
  }

  std::optional<SolveOutcome> expand_composition(std::size_t b, std::uint32_t pi, Op op, unsigned width,
                                                 const std::vector<std::uint32_t>& operand_banks,
                                                 const std::vector<std::size_t>& parts, std::size_t size) {
    const std::size_t arity = parts.size();
    std::vector<const std::vector<std::uint32_t>*> lists(arity);
    for (std::size_t i = 0; i < arity; ++i) {
      const auto& bs = banks_[operand_banks[i]].by_size;
      if (parts[i] >= bs.size() || bs[parts[i]].empty()) return std::nullopt;
      lists[i] = &bs[parts[i]];
    }
    std::vector<std::size_t> idx(arity, 0);
    std::vector<std::uint32_t> kids(arity);
    std::vector<const std::uint64_t*> operands(arity);
    while (true) {
      for (std::size_t i = 0; i < arity; ++i) kids[i] = (*lists[i])[idx[i]];
      auto r = offer(b, pi, kids, size, [&](std::uint64_t* out) {
        for (std::size_t i = 0; i < arity; ++i) operands[i] = sig(operand_banks[i], kids[i]);
        apply_pointwise(op, width, operands, out, points_.size());
      });
      if (r) return r;
      std::size_t i = arity;
      while (i-- > 0) {
        if (++idx[i] < lists[i]->size()) break;
        idx[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return std::nullopt;
  }

  std::uint64_t terminal_value(const Term& t, std::size_t point) const {
    if (t.is_literal()) return t.value();
    const auto& params = problem_.target.params;
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].name == t.name()) return points_[point][i];
    }
    throw EvalError("grammar terminal '" + t.name() + "' is not a parameter");
  }

  template <class Fill>
  std::optional<SolveOutcome> offer(std::size_t b, std::uint32_t pi, const std::vector<std::uint32_t>& kids,
                                    std::size_t size, Fill&& fill) {
    ++cost_;
    if (cost_ > max_candidates_) {
      SolveOutcome o;
      o.status = SolveStatus::Infeasible;
      o.cost = max_candidates_;
      o.message = "candidate budget exhausted";
      return o;
    }
    if (deadline_ && (cost_ & 255) == 0 && Clock::now() > *deadline_) {
      SolveOutcome o;
      o.status = SolveStatus::Timeout;
      o.cost = cost_;
      return o;
    }
    Bank& bank = banks_[b];
    const auto entry = static_cast<std::uint32_t>(bank.entries.size());
    const std::size_t n = points_.size();
    bank.sigs.resize(bank.sigs.size() + n);
    fill(bank.sigs.data() + static_cast<std::size_t>(entry) * n);
    bank.entries.push_back({pi, static_cast<std::uint32_t>(bank.kids.size()), static_cast<std::uint32_t>(size)});
    if (!seen_[b].insert(entry).second) {
      bank.entries.pop_back();
      bank.sigs.resize(bank.sigs.size() - n);
      return std::nullopt;
    }
    bank.kids.insert(bank.kids.end(), kids.begin(), kids.end());
    bank.by_size[size].push_back(entry);
    stored_words_ += n;
    if (stored_words_ > kMaxStoredWords) {
      SolveOutcome o;
      o.status = SolveStatus::Infeasible;
      o.cost = cost_;
      o.message = "signature memory budget exhausted";
      return o;
    }
    if (b == 0 && satisfies(sig(0, entry))) {
      SolveOutcome o;
      o.status = SolveStatus::Solved;
      o.solution = build(0, entry);
      o.cost = cost_;
      return o;
    }
    return std::nullopt;
  }

  bool satisfies(const std::uint64_t* table) {
    auto check = [&](std::uint64_t u) {
      decode(u, env_);
      std::size_t k = full_space_ ? 0 : call_offsets_[u];
      for (const auto& e : compiled_) {
        const std::uint64_t ok = run(
            e, env_.data(),
            [&](std::span<const std::uint64_t> args) -> std::uint64_t {
              if (!full_space_) return table[call_points_[k++]];
              std::uint64_t index = 0;
              const auto& params = problem_.target.params;
              for (std::size_t i = 0; i < args.size(); ++i) index = index * domain_size(params[i].sort) + args[i];
              return table[index];
            },
            vals_, argbuf_);
        if (!ok) return false;
      }
      return true;
    };
    // Recent counterexamples first: they reject most wrong candidates early.
    for (std::size_t i = counterexamples_.size(); i-- > 0;) {
      if (!check(counterexamples_[i])) {
        const auto u = counterexamples_[i];
        counterexamples_.erase(counterexamples_.begin() + static_cast<std::ptrdiff_t>(i));
        counterexamples_.push_back(u);
        return false;
      }
    }
    for (std::uint64_t u = 0; u < assignments_; ++u) {
      if (!check(u)) {
        if (counterexamples_.size() >= kMaxCounterexamples) counterexamples_.erase(counterexamples_.begin());
        counterexamples_.push_back(u);
        return false;
      }
    }
    return true;
  }

  Term build(std::uint32_t b, std::uint32_t entry) const {
    const Bank& bank = banks_[b];
    const Entry& e = bank.entries[entry];
    const Production& prod = bank.nt->productions[e.production];
    if (const auto* t = std::get_if<TerminalProduction>(&prod)) return t->term;
    const auto& op = std::get<OperatorProduction>(prod);
    std::vector<Term> args;
    for (std::size_t i = 0; i < op.operands.size(); ++i) {
      args.push_back(build(bank_index(op.operands[i]), bank.kids[e.kids_offset + i]));
    }
    return Term::apply(op.op, std::move(args));
  }

  static constexpr std::size_t kMaxCounterexamples = 64;
  static constexpr std::size_t kMaxStoredWords = std::size_t{1} << 23;

  const SynthProblem& problem_;
  const Grammar& grammar_;
  std::size_t max_size_;
  std::uint64_t max_candidates_;
  std::optional<Deadline> deadline_;

  std::map<std::string, std::uint32_t> slots_;
  std::vector<CompiledExpr> compiled_;
  std::uint64_t assignments_ = 1;

  bool full_space_ = false;
  std::vector<std::vector<std::uint64_t>> points_;
  std::vector<std::uint32_t> call_points_;
  std::vector<std::size_t> call_offsets_;

  std::vector<Bank> banks_;
  std::vector<std::unordered_set<std::uint32_t, SigHash, SigEq>> seen_;
  bool has_operators_ = false;

  std::uint64_t cost_ = 0;
  std::size_t stored_words_ = 0;
  std::vector<std::uint64_t> counterexamples_;
  std::vector<std::uint64_t> env_;
  std::vector<std::uint64_t> vals_;
  std::vector<std::uint64_t> argbuf_;
};

}  // namespace

SolveOutcome enumerate_solve(const SynthProblem& p, const Grammar& g, std::size_t max_term_size,
                             std::uint64_t max_candidates, std::optional<Deadline> deadline) {
  if (g.empty()) return SolveOutcome::error("empty grammar");
  if (g.start().sort != p.target.return_sort) return SolveOutcome::error("grammar start sort differs from the return sort");
  const auto t0 = Clock::now();
  Enumerator e(p, g, max_term_size, max_candidates, deadline);
  SolveOutcome o = e.run_search();
  o.runtime_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return o;
}

}  // namespace mg
