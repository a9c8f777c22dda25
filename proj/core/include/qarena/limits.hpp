#pragma once

// ε–δ and ε–N limit claims: certification of δ choices by interval
// subdivision, δ/N/M strategies for the existential player, and witnesses
// for the universal player.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qarena/expr.hpp"
#include "qarena/interval.hpp"

namespace qarena::limits {

enum class ProblemKind { SequenceLimit, FunctionLimitAtPoint, FunctionLimitAtInfinity };

/// "sequence", "point", "infinity".
std::string_view to_string(ProblemKind k);
std::optional<ProblemKind> parse_problem_kind(std::string_view text);

struct LimitProblem {
    ProblemKind kind = ProblemKind::FunctionLimitAtPoint;
    Expr expr;         // f(x) or a_n
    double x0 = 0.0;   // point kind only
    double limit = 0;  // claimed limit a
};

enum class VerdictKind { Proved, Refuted, Unknown };
std::string_view to_string(VerdictKind k);

struct Witness {
    double x = 0;         // argument (or index n)
    double value = 0;     // f(x)
    double distance = 0;  // |f(x) - a|
};

struct CertifiedPiece {
    Interval domain;
    Interval enclosure;  // of f over domain
};

struct Certificate {
    std::vector<CertifiedPiece> pieces;
    /// Neighbourhood of x0 too small to subdivide further, left uncertified.
    std::optional<Interval> core;
};

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::optional<Witness> witness;  // Refuted
    Certificate certificate;         // Proved
    std::string reason;
    std::size_t boxes = 0;
};

struct Effort {
    std::size_t max_boxes = 200'000;
    int max_depth = 64;
    /// Boxes touching x0 narrower than delta * 2^-core_depth (or 4096 ulps
    /// of x0, whichever is wider) join the core.
    int core_depth = 48;
};

/// Checks 0 < |x - x0| < delta  =>  |f(x) - a| < eps over the closed
/// neighbourhood [x0 - delta, x0 + delta] minus a core at x0.
/// Throws std::invalid_argument for nonpositive eps/delta or a non-point problem.
Verdict verify_delta(const LimitProblem& p, double eps, double delta, const Effort& effort = {});

/// JSON export of a verdict and its certificate ("schema": "certificate/1").
std::string certificate_json(const LimitProblem& p, double eps, double delta, const Verdict& v);

struct DeltaSearch {
    VerdictKind status = VerdictKind::Unknown;  // Proved or Unknown
    double delta = 0;
    Verdict verdict;
    int halvings = 0;
};

/// Halves delta from 1 until verify_delta proves it.
DeltaSearch find_delta(const LimitProblem& p, double eps, const Effort& effort = {}, int max_halvings = 60);

// ---------------------------------------------------------------------------
// registry of problems with known limits and closed-form strategies

class registry_error : public std::invalid_argument {
public:
    registry_error(const std::string& what, int line);
    int line() const noexcept { return line_; }

private:
    int line_;
};

class unregistered_problem : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RegistryEntry {
    ProblemKind kind = ProblemKind::FunctionLimitAtPoint;
    Expr expr;
    std::optional<double> x0;
    double limit = 0;
    /// delta(eps), N(eps) or M(eps), in the variable eps.
    std::optional<Expr> closed_form;
};

/// Line format: `kind; expr; x0 or -; limit; closed form in eps or -`.
/// Blank lines and lines starting with '#' are ignored.
class Registry {
public:
    static const Registry& builtin();
    static Registry parse(std::string_view text);
    static Registry load(const std::filesystem::path& path);

    void add(RegistryEntry e) { entries_.push_back(std::move(e)); }
    const std::vector<RegistryEntry>& entries() const { return entries_; }

    /// Entry for the same kind, expression and (point kind) x0.
    const RegistryEntry* find(const LimitProblem& p) const;

private:
    std::vector<RegistryEntry> entries_;
};

extern const char* const kBuiltinRegistry;

/// Closed-form delta(eps) for a registered point problem whose claimed limit
/// is the registered one.
double closed_form_delta(const LimitProblem& p, double eps, const Registry& r = Registry::builtin());

enum class Basis { Analytic, Empirical };
std::string_view to_string(Basis b);

struct Threshold {
    std::optional<double> value;  // nullopt: nothing found within the scan budget
    Basis basis = Basis::Empirical;
};

struct ScanOptions {
    /// Consecutive good terms required by the empirical N check.
    long long window = 10'000;
    long long max_index = 10'000'000;
    std::size_t max_evaluations = 100'000;
};

/// Least N with |a - a_n| < eps for n > N: analytic for registered
/// sequences, otherwise the least N whose next `window` terms all comply.
Threshold find_N(const LimitProblem& p, double eps, const Registry& r = Registry::builtin(),
                 const ScanOptions& scan = {});

/// M with |f(x) - a| < eps for x >= M: analytic for registered entries,
/// otherwise sampled on a geometric grid.
Threshold find_M(const LimitProblem& p, double eps, const Registry& r = Registry::builtin(),
                 const ScanOptions& scan = {});

/// A point refuting the claimed limit `a` for this eps against the
/// opponent's bound (delta, N or M): 0<|x-x0|<delta, n>N or x>=M with
/// |f - a| >= eps. nullopt when the search budget finds none.
std::optional<Witness> find_witness(const LimitProblem& p, double a, double eps, double bound,
                                    const ScanOptions& scan = {});

struct EpsilonChoice {
    double epsilon = 1.0;
    std::string basis;  // "registry", "sampled" or "default"
};

/// Opening eps against a claimed limit a: half the distance to the
/// registered limit, else a sampled estimate, else 1.
EpsilonChoice choose_epsilon(const LimitProblem& p, double a, const Registry& r = Registry::builtin());

/// Registered limit, else a sampled estimate near x0 / far out.
std::optional<double> estimate_limit(const LimitProblem& p, const Registry& r = Registry::builtin());

}  // namespace qarena::limits
