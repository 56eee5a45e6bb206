#pragma once

// SMT-LIB2 gateway: decides satisfiability of formulas by driving an external
// solver process over pipes.

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dmt/logic.hpp"

namespace dmt {

struct SmtError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The solver answered unknown or ran out of time. Callers treat this as a
// budget event, never as unsat.
struct SolverUnknown : SmtError {
  using SmtError::SmtError;
};

struct ModelInsufficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Background theory: signature, optional arithmetic, ground facts and groups
// of pairwise distinct constants.
struct TheoryContext {
  Signature signature;
  bool arithmetic = false;
  std::vector<Formula> facts;
  std::vector<std::vector<std::string>> distinct;

  friend bool operator==(const TheoryContext&, const TheoryContext&) = default;
};

// Element label of an uninterpreted sort or an exact rational.
using Value = std::variant<std::string, Rational>;
std::string to_string(const Value& v);

struct ModelFragment {
  std::map<std::string, Value> constants;
  std::map<Var, Value> variables;
  std::map<std::string, std::set<std::vector<Value>>> relations;  // closed world
  std::map<std::string, std::map<std::vector<Value>, Value>> functions;
};

// Evaluates a quantifier-free formula. Throws ModelInsufficient when a symbol
// or function entry is missing.
bool evaluate(const Formula& f, const ModelFragment& m);
Value evaluate(const Term& t, const ModelFragment& m);

enum class SatVerdict { Sat, Unsat, Unknown };
std::string to_string(SatVerdict v);

struct SatResult {
  SatVerdict verdict = SatVerdict::Unknown;
  std::optional<ModelFragment> model;
  // The quantifier-free formula actually asserted (existentials skolemized).
  std::optional<Formula> dispatched;
  std::string diagnostic;
};

struct PhaseStats {
  std::uint64_t count = 0;
  std::chrono::nanoseconds time{0};
};

struct SolverStats {
  std::uint64_t checks = 0;
  std::chrono::nanoseconds wall{0};
  std::map<std::string, PhaseStats> phases;
  std::uint64_t max_phase_checks() const;
};

// Shared, thread-safe accumulator. Several gateways may report into one sink.
class StatsSink {
 public:
  void record(const std::string& phase, std::chrono::nanoseconds d);
  SolverStats snapshot() const;
  SolverStats reset();

 private:
  mutable std::mutex mu_;
  SolverStats stats_;
};

struct SolverConfig {
  std::string binary = "z3";
  std::vector<std::string> args = {"-in"};
  std::chrono::milliseconds timeout{10000};
  // SOLVER_BIN and SOLVER_ARGS (whitespace separated) override the defaults.
  static SolverConfig from_env();
  void apply_env();
};

class SolverProcess;

// A single-client connection to one solver process.
class Gateway {
 public:
  explicit Gateway(TheoryContext ctx, SolverConfig cfg = SolverConfig::from_env(),
                   std::shared_ptr<StatsSink> sink = nullptr);
  ~Gateway();
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  const TheoryContext& context() const { return ctx_; }
  const SolverConfig& config() const { return cfg_; }

  SatResult check_sat(const Formula& f, bool want_model = false);
  // Throw SolverUnknown on unknown.
  bool is_sat(const Formula& f);
  bool entails(const Formula& f, const Formula& g);
  bool check_equiv(const Formula& f, const Formula& g);

  // Incremental interface.
  void push();
  void pop();
  void add(const Formula& f);
  SatResult check(bool want_model = false);
  std::size_t depth() const { return scopes_.size(); }

  void set_phase(std::string label) { phase_ = std::move(label); }
  const std::string& phase() const { return phase_; }
  SolverStats stats() const { return sink_->snapshot(); }
  SolverStats reset_and_stats() { return sink_->reset(); }
  const std::shared_ptr<StatsSink>& sink() const { return sink_; }

  // SMT-LIB2 text of the background declarations (for debugging and tests).
  std::string preamble() const;

 private:
  struct Scope {
    std::set<Var> declared;
    std::vector<Formula> asserted;
  };
  void restart();
  std::string declare_and_assert(const Formula& qf);
  std::optional<ModelFragment> read_model(const std::vector<Formula>& fs);

  TheoryContext ctx_;
  SolverConfig cfg_;
  std::shared_ptr<StatsSink> sink_;
  std::unique_ptr<SolverProcess> proc_;
  std::vector<Scope> scopes_;
  std::string phase_ = "default";
};

class PhaseScope {
 public:
  PhaseScope(Gateway& g, std::string label) : g_(g), saved_(g.phase()) { g_.set_phase(std::move(label)); }
  ~PhaseScope() { g_.set_phase(saved_); }
  PhaseScope(const PhaseScope&) = delete;
  PhaseScope& operator=(const PhaseScope&) = delete;

 private:
  Gateway& g_;
  std::string saved_;
};

// Fixed set of gateways over one context, sharing a stats sink.
class GatewayPool {
 public:
  GatewayPool(const TheoryContext& ctx, std::size_t size, SolverConfig cfg = SolverConfig::from_env());

  class Lease {
   public:
    Lease(GatewayPool& p, Gateway* g) : p_(&p), g_(g) {}
    Lease(Lease&& o) noexcept : p_(o.p_), g_(o.g_) { o.g_ = nullptr; }
    Lease(const Lease&) = delete;
    ~Lease();
    Gateway& operator*() const { return *g_; }
    Gateway* operator->() const { return g_; }

   private:
    GatewayPool* p_;
    Gateway* g_;
  };

  Lease acquire();
  std::size_t size() const { return all_.size(); }
  SolverStats stats() const { return sink_->snapshot(); }

 private:
  std::shared_ptr<StatsSink> sink_;
  std::vector<std::unique_ptr<Gateway>> all_;
  std::vector<Gateway*> free_;
  std::mutex mu_;
  std::condition_variable cv_;
};

// SMT-LIB2 rendering used by the gateway.
std::string smt_symbol(const Var& v);
std::string smt_term(const Term& t);
std::string smt_formula(const Formula& f);

}  // namespace dmt
