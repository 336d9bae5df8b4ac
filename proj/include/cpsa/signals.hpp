#pragma once

#include "cpsa/descriptor.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace cpsa {

/// Vector-valued time signal. The structured kinds serialize to JSON; Custom
/// is for in-process use (monitor probes, recorded traces).
class TimeSignal {
public:
    enum class Kind { Zero, Constant, Step, Sinusoid, Custom };

    TimeSignal() = default;

    static TimeSignal zero(Index dim);
    static TimeSignal constant(Vector value);
    static TimeSignal step(Vector amplitude, double t0 = 0.0);
    static TimeSignal sinusoid(Vector amplitude, Vector omega, Vector phase);
    static TimeSignal custom(Index dim, std::function<Vector(double)> f);

    Vector operator()(double t) const;
    Index dim() const { return dim_; }
    Kind kind() const { return kind_; }
    const Vector& amplitude() const { return amplitude_; }
    double t0() const { return t0_; }
    const Vector& omega() const { return omega_; }
    const Vector& phase() const { return phase_; }

private:
    Kind kind_ = Kind::Zero;
    Index dim_ = 0;
    Vector amplitude_;
    double t0_ = 0.0;
    Vector omega_, phase_;
    std::function<Vector(double)> custom_;
};

/// One exponential attack term. Real-valued evaluation convention:
///   complex s: contributes 2 Re(g e^{st}) (the conjugate pair is implied),
///   real s (|Im s| ~ 0): contributes Re(g) e^{st}, no doubling.
struct Mode {
    Complex s;
    CVector g;
};

/// Additive state-feedback term u += F * x_sel(t), where x_sel selects
/// original-coordinate state entries. "Dynamic" selects the dynamic block of
/// the index-one partition.
struct FeedbackTerm {
    enum class Source { Dynamic, FullState, Indices };
    Matrix F;
    Source source = Source::FullState;
    std::vector<int> indices;  // 1-based state indices when source == Indices
};

/// LTI filter block co-integrated with the plant:
///   xf' = A xf + B r(t),  contributes  u += C xf + D r(t),
/// with r the filter's reference input.
struct LtiFilter {
    Matrix A, B, C, D;
    TimeSignal input;
};

/// Attack signal on the channels of an attack set:
///   u(t) = sum(modes) + constant + sum(feedback) + filter contribution.
/// Always real-valued by the Mode convention above.
struct AttackSignal {
    AttackSet attack_set;
    std::vector<Mode> modes;
    Vector constant;  // size k or 0
    std::vector<FeedbackTerm> feedback;
    std::optional<LtiFilter> filter;

    Index k() const { return static_cast<Index>(attack_set.k()); }
    bool has_feedback() const { return !feedback.empty(); }

    /// Modes + constant only (the part that is a pure function of time).
    Vector open_loop(double t) const;
};

/// Evaluate the mode sum at time t (helper shared by signal code).
Vector eval_modes(const std::vector<Mode>& modes, Index k, double t);

}  // namespace cpsa
