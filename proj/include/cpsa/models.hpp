#pragma once

#include "cpsa/structural.hpp"

#include <string>
#include <vector>

namespace cpsa {

/// Structure-preserving small-signal power network:
/// states (delta_1..g, omega_1..g, theta_1..m),
///   delta' = omega
///   M omega' = -Lgg delta - Dg omega - Lgl theta
///   0       = -Llg delta - Lll theta
/// with L the susceptance-weighted Laplacian over generator and bus nodes.
struct GeneratorSpec {
    double inertia = 0.1;          // M_i > 0
    double damping = 0.05;         // D_i >= 0
    double tie_susceptance = 0.1;  // generator-to-bus transient susceptance
    int bus = 0;                   // 1-based bus the generator ties to
};

struct PowerLine {
    int from = 0, to = 0;  // 1-based bus indices
    double susceptance = 0.1;
};

struct PowerNetworkSpec {
    std::vector<GeneratorSpec> generators;
    int bus_count = 0;
    std::vector<PowerLine> lines;
    std::vector<int> measured_states;  // 1-based state indices
};

struct PowerModel {
    DescriptorSystem sys;      // canonical attack form
    StructuredSystem pattern;  // [E],[A],[C] sparsity with polytope ranges; [B],[D] empty
    Matrix laplacian;          // (g+m) x (g+m) susceptance Laplacian
};

PowerModel build_power_descriptor(const PowerNetworkSpec& spec);

/// Attach canonical attack columns for K to a pattern emitted by a builder.
StructuredSystem with_attack_pattern(StructuredSystem pattern, const AttackSet& K);

/// Linearized municipal water network. Pipe flows follow the Hazen-Williams
/// relation Q = g |dh|^{1/1.85 - 1} dh, linearized at the operating drop:
///   c = g (1/1.85) |dh*|^{1/1.85 - 1}.
/// Pumps hold a set flow on the suction side (no pressure coupling there);
/// delivery reacts to suction head with the given sensitivity. Valves enter
/// with their linearized flow sensitivity like pipes. Reservoirs hold fixed
/// head and are eliminated; tanks integrate net inflow over their area.
struct WaterNode {
    enum class Kind { Reservoir, Junction, Tank };
    Kind kind = Kind::Junction;
    double head = 0.0;    // reservoir
    double demand = 0.0;  // junction
    double area = 1.0;    // tank
    std::string name;
};

struct WaterEdge {
    enum class Kind { Pipe, Pump, Valve };
    Kind kind = Kind::Pipe;
    int from = 0, to = 0;      // 1-based node indices
    double conductance = 1.0;  // pipe: Hazen-Williams g
    double operating_drop = 1.0;  // pipe: dh* at the linearization point
    double boost = 0.0;        // pump/valve head offset (drops out at delta level)
    double sensitivity = 0.0;  // pump: dQ/dh_suction; valve: dQ/d(dh)
};

struct WaterNetworkSpec {
    std::vector<WaterNode> nodes;
    std::vector<WaterEdge> edges;
    std::vector<int> pressure_sensors;  // 1-based node indices
};

struct WaterModel {
    DescriptorSystem sys;  // canonical attack form; states = non-reservoir nodes in order
    std::vector<int> state_node;  // state i (0-based) -> node index (1-based)
};

WaterModel build_water_descriptor(const WaterNetworkSpec& spec);

/// Hazen-Williams linearization slope.
double hazen_williams_slope(double conductance, double operating_drop);

/// WSSC 3-machine 6-bus example with the two measurement choices used in the
/// analyses: (delta1, omega1) or (delta1, theta6).
enum class WsscOutputs { Delta1Omega1, Delta1Theta6 };
PowerModel wssc_demo(WsscOutputs outputs);
PowerModel wssc_demo(const std::vector<int>& measured_states);

/// IEEE 14-bus case built from the bundled branch/machine data file.
/// The measurement recipe is: real power injection at every bus, real power
/// flow at both ends of every branch, and one (protected) rotor angle.
struct Ieee14Model {
    DescriptorSystem sys;  // canonical attack form
    int protected_output = 0;   // 1-based output row of the rotor angle
    bool rotor_observable = false;  // PBH check through the protected row, done at load
    int buses = 0;
    int branches = 0;
    int machines = 0;
};
Ieee14Model ieee14_demo(const std::string& data_path);

/// Small water network with the theft-attack block structure: a storage node
/// R2 whose only connection is a metered pump into junction P2, a sensor S1
/// on R2's pressure, and a tank/junction cluster behind P2.
struct WaterDemo {
    DescriptorSystem sys;  // canonical attack form
    WaterModel model;
    int x1_state = 0;    // 1-based state index of R2's pressure
    int p2_state = 0;    // 1-based state index of the P2 junction
    int s1_output = 0;   // 1-based output row of sensor S1
    double pump_sensitivity = 0.0;  // A(p2, x1)
    AttackSet theft_set;            // {x1 channel, p2 channel, S1 output channel}
};
WaterDemo water_theft_demo(bool with_flow_sensor = false);

}  // namespace cpsa
