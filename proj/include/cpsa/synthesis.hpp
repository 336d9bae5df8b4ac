#pragma once

#include "cpsa/detect.hpp"
#include "cpsa/models.hpp"
#include "cpsa/poly.hpp"
#include "cpsa/simulate.hpp"

namespace cpsa {

/// Output-nulling attack built from a zero-dynamics witness (s, x, g):
/// start at x0 = 2 Re(x) (Re(x) for real s) and inject u(t) = 2 Re(g e^{st}).
struct ZeroDynamicsAttack {
    Vector x0;
    AttackSignal signal;
    InvariantZero witness;
};
ZeroDynamicsAttack synth_zero_dynamics_attack(const DescriptorSystem& sys, const AttackSet& K,
                                              const ZeroOptions& opts = {});

/// Constant output attack with D_K u in Im(C): invisible to the static
/// residual r(t) = (I - C C^+) y(t) at every instant. Any time profile of the
/// witness direction stays stealthy; the constant is the canonical choice.
AttackSignal synth_static_stealth_attack(const DescriptorSystem& sys, const AttackSet& K_output);

/// Right null vector of the transfer matrix G(s) as rational functions in s,
/// normalized so the last entry is 1 (first nonzero entry otherwise).
struct RationalNullVector {
    std::vector<RationalFunction> entries;
    double residual = 0.0;  // max relative |G(s) N(s)| over sample points

    CVector eval(Complex s) const;
    /// State-space filter with scalar input realizing u = N(d/dt) ubar.
    LtiFilter realize(const TimeSignal& ubar) const;
};

RationalNullVector transfer_nullspace(const DescriptorSystem& sys, const AttackSignature& sig,
                                      const ZeroOptions& opts = {});

/// Attack u(t) = N(s) ubar driving only the zero dynamics: from x(0) = 0 the
/// output stays at zero for any ubar while internal states move.
struct TransferNullspaceAttack {
    AttackSignal signal;
    RationalNullVector nullvector;
};
TransferNullspaceAttack synth_transfer_nullspace_attack(const DescriptorSystem& sys,
                                                        const AttackSet& K,
                                                        const TimeSignal& ubar,
                                                        const ZeroOptions& opts = {});

enum class PrototypeKind { Stealth, Replay, Covert, FalseData };

struct PrototypeParams {
    // stealth
    AttackSet output_set;
    // replay
    double record_start = 0.0;
    double replay_start = 5.0;
    double window = 3.0;
    int replay_state_channel = 1;
    double replay_magnitude = 1.0;
    // covert
    std::vector<int> state_channels;
    TimeSignal covert_input;  // u_x profile; defaults to a unit step per channel
};

/// A synthesized prototypical attack. Replay is trajectory-dependent and is
/// returned as a scenario script for the simulation harness rather than a
/// closed-form signal.
struct PrototypeAttack {
    PrototypeKind kind;
    AttackSignal signal;
    Vector x0;  // zero unless the construction pins an initial condition
    std::optional<ReplayScenario> scenario;
    std::string description;
};
PrototypeAttack synth_prototype(const DescriptorSystem& sys, PrototypeKind kind,
                                const PrototypeParams& params = {});

/// The composed water-theft attack on the demo network:
/// u1 = -1 on the storage balance, u2 = -A31 x1 on the pump-side junction,
/// u3 = -x1 on the storage sensor. Excites only zero dynamics.
AttackSignal synth_water_theft_attack(const WaterDemo& demo);

}  // namespace cpsa
