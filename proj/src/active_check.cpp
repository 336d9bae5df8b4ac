#include "cpsa/detect.hpp"
#include "cpsa/synthesis.hpp"

#include <cmath>

namespace cpsa {

bool active_equivalence_check(const DescriptorSystem& sys, const AttackSet& K,
                              const TimeSignal& w, double horizon, double dt, double tol) {
    ZeroDynamicsAttack atk = synth_zero_dynamics_attack(sys, K);

    // A consistent reference initial condition for the monitor-driven part.
    Matrix basis = consistent_basis(sys);
    Vector x2 = basis.cols() > 0 ? Vector(basis.col(0)) : Vector(Vector::Zero(sys.n()));

    SimulationOptions opts;
    opts.horizon = horizon;
    opts.dt = dt;

    Vector x_sum = atk.x0 + x2;
    SimulationTrace full = simulate(sys, x_sum, &atk.signal, &w, opts);
    SimulationTrace probe = simulate(sys, x2, nullptr, &w, opts);
    SimulationTrace attack_only = simulate(sys, atk.x0, &atk.signal, nullptr, opts);

    double worst = 0.0;
    double yscale = 0.0;
    for (Index i = 0; i < full.steps(); ++i) {
        Vector lhs = full.y.row(i) - probe.y.row(i);
        Vector rhs = attack_only.y.row(i);
        worst = std::max(worst, (lhs - rhs).norm());
        yscale = std::max(yscale, full.y.row(i).norm());
    }
    return worst <= tol * (1.0 + yscale);
}

}  // namespace cpsa
