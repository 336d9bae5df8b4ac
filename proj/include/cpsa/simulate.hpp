#pragma once

#include "cpsa/kron.hpp"
#include "cpsa/signals.hpp"

#include <optional>

namespace cpsa {

struct SimulationOptions {
    double horizon = 10.0;
    double dt = 0.01;
    double overflow_guard = 1e9;  // ||state|| beyond this throws StepUnstableError
    bool project_initial = true;  // recompute x2 from the algebraic constraint at t = 0
};

/// Uniform-grid trajectory. Row i of each matrix belongs to t(i).
struct SimulationTrace {
    Vector t;
    Matrix x;  // steps x n, original coordinates
    Matrix y;  // steps x p
    Matrix u;  // steps x k (attack channels; 0 columns when unattacked)
    Matrix w;  // steps x (n+p) (0 columns when no monitor input)
    double dt = 0.0;
    std::string integrator = "rk4";
    double algebraic_residual_max = 0.0;

    Index steps() const { return t.size(); }
};

/// Integrate the attacked index-one descriptor system:
/// x0 is projected onto the consistent manifold, the Kron-reduced ODE is
/// advanced with classical fixed-step RK4, and the algebraic state is
/// recovered every step. Feedback terms in the attack may close an algebraic
/// loop through the recovered state; the loop is solved once (linear).
/// w, when present, is the monitor input (w_x on states, w_y on outputs).
SimulationTrace simulate(const DescriptorSystem& sys, const Vector& x0,
                         const AttackSignal* attack, const TimeSignal* w,
                         const SimulationOptions& opts);

/// Step size heuristic: two decades below the slowest time constant, capped by
/// RK4 stability for the fastest mode.
double suggest_dt(const DescriptorSystem& sys);

/// Record-and-replay scenario: measurements are recorded on
/// [record_start, record_start + window) in a clean pass and substituted over
/// [replay_start, replay_start + window) while the state attack runs.
struct ReplayScenario {
    double record_start = 0.0;
    double replay_start = 0.0;
    double window = 1.0;
    AttackSignal state_attack;  // runs during the replay window
};

/// Both passes use the same monitor input w. The returned trace carries the
/// substituted measurements; u holds the state-attack values.
SimulationTrace run_replay(const DescriptorSystem& sys, const Vector& x0,
                           const ReplayScenario& scenario, const TimeSignal* w,
                           const SimulationOptions& opts);

}  // namespace cpsa
