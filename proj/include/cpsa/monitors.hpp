#pragma once

#include "cpsa/simulate.hpp"

#include <vector>

namespace cpsa {

/// (psi1, psi2) monitor output. psi1 flags an attack, psi2 is the identified
/// channel set (1-based canonical channels). psi1 == false forces psi2 empty.
struct MonitorVerdict {
    bool psi1 = false;
    std::vector<int> psi2;
    double residual_norm = 0.0;
    double threshold = 0.0;
    bool budget_exhausted = false;
    std::vector<AttackSet> ambiguity;  // identification: all sets explaining the trace
};

/// Default decision threshold: 1e-6 * (1 + max_t ||y||).
double default_threshold(const SimulationTrace& trace);

/// Single-snapshot residual r(t) = (I - C C^+) y(t). Attribution of flagged
/// residual rows to output channels is a labeled heuristic; the monitor class
/// only guarantees psi1.
MonitorVerdict static_monitor(const SimulationTrace& trace, const Matrix& C,
                              double threshold = -1.0);

/// Oracle dynamic monitor: least-squares fit of the best consistent initial
/// condition over the unattacked model's output map; flags when no attack-free
/// trajectory explains the trace.
MonitorVerdict dynamic_monitor_oracle(const DescriptorSystem& sys, const SimulationTrace& trace,
                                      double threshold = -1.0);

/// Dynamic oracle that additionally subtracts the response to its own known
/// probe signal w before fitting.
MonitorVerdict active_monitor(const DescriptorSystem& sys, const SimulationTrace& trace,
                              const TimeSignal& w, double threshold = -1.0);

/// Fits initial condition plus a sampled input basis through every candidate
/// signature R, |R| <= k_max (budgeted, lexicographic). psi2 is the first
/// best-fit set; near-ties are returned in `ambiguity`.
MonitorVerdict identification_oracle(const DescriptorSystem& sys, const SimulationTrace& trace,
                                     int k_max, std::size_t budget = 10000,
                                     double threshold = -1.0);

}  // namespace cpsa
