#pragma once

#include "cpsa/signals.hpp"
#include "cpsa/zeros.hpp"

#include <optional>

namespace cpsa {

enum class MonitorClass { Static, Dynamic, Active };

/// Witness for static verdicts: Cx + D_K u = 0 with (x, u) as below.
struct StaticWitness {
    Vector x;  // n
    Vector u;  // k, ordered like the attack set
};

struct DetectabilityVerdict {
    bool undetectable = false;
    MonitorClass monitor_class = MonitorClass::Dynamic;
    std::optional<InvariantZero> witness;       // dynamic verdicts
    std::optional<StaticWitness> static_witness;  // static verdicts
};

/// Static monitor limitations: a pure state attack never shows in the
/// single-time residual; an output attack hides iff Im(D_K) meets Im(C).
DetectabilityVerdict static_undetectable(const DescriptorSystem& sys, const AttackSet& K,
                                         double tol = -1.0);

/// Search for an output-attack set of exactly k channels hidden from a static
/// monitor, i.e. a vector x with ||C x||_0 = k (canonical form). The search
/// enumerates supports of x (column subsets of C) and, when the generic image
/// support overshoots, cancellation row subsets, within an evaluation budget.
struct CardinalitySearch {
    std::optional<AttackSet> found;
    std::optional<Vector> witness_x;  // ||C witness_x||_0 = k
    bool budget_exhausted = false;    // true: "unknown", not "no"
    std::size_t evaluations = 0;
};
CardinalitySearch static_exists_undetectable_of_cardinality(const DescriptorSystem& sys, int k,
                                                            std::size_t budget = 100000,
                                                            double tol = -1.0);

/// Can the attack set K be confused with some other set R, |R| <= |K|, under a
/// static monitor? Uses the mixed residual condition
/// C x + D_K u_K + D_R u_R = 0 with both modes active.
struct StaticIdentResult {
    bool unidentifiable = false;
    std::optional<AttackSet> confusable_with;  // the R found (may be empty set)
    bool budget_exhausted = false;
    std::size_t evaluations = 0;
};
StaticIdentResult static_unidentifiable(const DescriptorSystem& sys, const AttackSet& K,
                                        std::size_t budget = 100000, double tol = -1.0);

/// Dynamic monitor: K is undetectable iff P(s)[x; g] = 0 for some s and x != 0,
/// covering both the rank-deficient pencil (generic s) and the invariant-zero
/// case. Always decides. Verdicts quantify over smooth attack signals and
/// consistent initial conditions; for an inconsistent start they hold for
/// t > 0 only (impulsive inputs are out of scope).
DetectabilityVerdict dynamic_undetectable(const DescriptorSystem& sys, const AttackSet& K,
                                          const ZeroOptions& opts = {});

/// Search for an attack set of cardinality k undetectable by a dynamic
/// monitor: generalized eigen-directions first (state supports), then subset
/// enumeration in lexicographic order, within a budget.
struct DynamicCardinalitySearch {
    std::optional<AttackSet> found;
    std::optional<InvariantZero> witness;
    bool budget_exhausted = false;
    std::size_t evaluations = 0;
};
DynamicCardinalitySearch dynamic_exists_undetectable_of_cardinality(const DescriptorSystem& sys,
                                                                    int k,
                                                                    std::size_t budget = 100000,
                                                                    const ZeroOptions& opts = {});

/// Enumerates candidate sets R (|R| <= |K|, R != K, lexicographic by size then
/// order) and reports the first R whose combined signature with K has a zero
/// with x != 0. R = {} means K itself is undetectable (indistinguishable from
/// no attack). Full certification of identifiability needs up to
/// C(n+p, 2k) pencil tests; the budget caps that combinatorial cost.
struct DynamicIdentResult {
    bool unidentifiable = false;
    std::optional<AttackSet> confusable_with;
    std::optional<InvariantZero> witness;
    bool budget_exhausted = false;
    std::size_t evaluations = 0;
};
DynamicIdentResult dynamic_unidentifiable(const DescriptorSystem& sys, const AttackSet& K,
                                          std::size_t budget = 100000,
                                          const ZeroOptions& opts = {});

/// Numerically confirm, by three simulations, that the response decomposes as
/// y(x1 + x2, u, w, t) - y(x2, 0, w, t) = y(x1, u, 0, t): the monitor input w
/// cannot change whether the synthesized undetectable attack for K is visible.
bool active_equivalence_check(const DescriptorSystem& sys, const AttackSet& K,
                              const TimeSignal& w, double horizon, double dt = 0.01,
                              double tol = 1e-6);

/// With the listed output rows attack-proof, no output-only attack of any
/// cardinality is dynamically undetectable iff every generalized eigenvector
/// of (E, A) is visible in the protected rows.
struct ImmunityResult {
    bool immune = false;
    std::optional<Complex> eigenvalue;  // violating eigenvalue when not immune
    std::optional<CVector> eigenvector;
};
ImmunityResult output_attack_immunity(const DescriptorSystem& sys,
                                      const std::vector<int>& protected_outputs,
                                      double tol = -1.0);

/// All finite generalized eigenvalues of the pencil (E, A) with eigenvectors.
std::vector<std::pair<Complex, CVector>> finite_eigenpairs(const Matrix& E, const Matrix& A,
                                                           double tol = -1.0);

}  // namespace cpsa
