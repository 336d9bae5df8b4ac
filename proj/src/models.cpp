#include "cpsa/models.hpp"

#include "cpsa/detect.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

namespace cpsa {

namespace {

// Union-find connectivity over an undirected edge list.
bool connected(int nodes, const std::vector<std::pair<int, int>>& edges) {
    if (nodes <= 1) return true;
    std::vector<int> parent(static_cast<size_t>(nodes));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };
    int comps = nodes;
    for (auto [a, b] : edges) {
        int ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[static_cast<size_t>(ra)] = rb;
            --comps;
        }
    }
    return comps == 1;
}

}  // namespace

PowerModel build_power_descriptor(const PowerNetworkSpec& spec) {
    const int g = static_cast<int>(spec.generators.size());
    const int mb = spec.bus_count;
    if (g < 1 || mb < 1) throw ModelShapeError("power network needs generators and buses");

    std::vector<std::pair<int, int>> und;
    for (int i = 0; i < g; ++i) {
        const GeneratorSpec& gen = spec.generators[static_cast<size_t>(i)];
        if (gen.inertia <= 0.0) throw ModelShapeError("nonpositive generator inertia");
        if (gen.bus < 1 || gen.bus > mb) throw ModelShapeError("generator bus out of range");
        if (gen.tie_susceptance <= 0.0) throw ModelShapeError("nonpositive tie susceptance");
        und.emplace_back(i, g + gen.bus - 1);
    }
    for (const PowerLine& l : spec.lines) {
        if (l.from < 1 || l.from > mb || l.to < 1 || l.to > mb || l.from == l.to)
            throw ModelShapeError("line endpoints out of range");
        if (l.susceptance <= 0.0) throw ModelShapeError("nonpositive line susceptance");
        und.emplace_back(g + l.from - 1, g + l.to - 1);
    }
    if (!connected(g + mb, und))
        throw ModelShapeError("susceptance graph is disconnected");

    // Susceptance Laplacian over generator nodes 0..g-1 and bus nodes g..g+mb-1.
    Matrix L = Matrix::Zero(g + mb, g + mb);
    auto add_edge = [&](int a, int b, double w) {
        L(a, a) += w;
        L(b, b) += w;
        L(a, b) -= w;
        L(b, a) -= w;
    };
    for (int i = 0; i < g; ++i)
        add_edge(i, g + spec.generators[static_cast<size_t>(i)].bus - 1,
                 spec.generators[static_cast<size_t>(i)].tie_susceptance);
    for (const PowerLine& l : spec.lines) add_edge(g + l.from - 1, g + l.to - 1, l.susceptance);

    const int n = 2 * g + mb;
    Matrix E = Matrix::Zero(n, n);
    E.topLeftCorner(g, g) = Matrix::Identity(g, g);
    for (int i = 0; i < g; ++i) E(g + i, g + i) = spec.generators[static_cast<size_t>(i)].inertia;

    Matrix Lgg = L.topLeftCorner(g, g);
    Matrix Lgl = L.topRightCorner(g, mb);
    Matrix Llg = L.bottomLeftCorner(mb, g);
    Matrix Lll = L.bottomRightCorner(mb, mb);

    Matrix A = Matrix::Zero(n, n);
    A.block(0, g, g, g) = Matrix::Identity(g, g);
    A.block(g, 0, g, g) = -Lgg;
    for (int i = 0; i < g; ++i) A(g + i, g + i) = -spec.generators[static_cast<size_t>(i)].damping;
    A.block(g, 2 * g, g, mb) = -Lgl;
    A.block(2 * g, 0, mb, g) = -Llg;
    A.block(2 * g, 2 * g, mb, mb) = -Lll;

    Matrix C = Matrix::Zero(static_cast<Index>(spec.measured_states.size()), n);
    for (size_t r = 0; r < spec.measured_states.size(); ++r) {
        const int s = spec.measured_states[r];
        if (s < 1 || s > n) throw ModelShapeError("measured state out of range");
        C(static_cast<Index>(r), s - 1) = 1.0;
    }

    PowerModel model;
    model.sys = canonical_attack_form(E, A, C);
    model.laplacian = L;

    // Sparsity pattern with polytope ranges; Laplacian diagonals are derived
    // from the free off-diagonal couplings so every sample keeps zero row sums.
    StructuredSystem& pat = model.pattern;
    pat.E = PatternMatrix::zero(n, n);
    pat.A = PatternMatrix::zero(n, n);
    pat.B = PatternMatrix::zero(n, 0);
    pat.C = PatternMatrix::zero(C.rows(), n);
    pat.D = PatternMatrix::zero(C.rows(), 0);
    for (int i = 0; i < g; ++i) {
        pat.E.at(i, i) = PatternEntry::pinned(1.0);
        pat.E.at(g + i, g + i) = PatternEntry::ranged(0.1, 1.0);       // inertia
        pat.A.at(i, g + i) = PatternEntry::pinned(1.0);                // delta' = omega
        pat.A.at(g + i, g + i) = PatternEntry::ranged(-1.0, -0.1);     // damping
    }
    // Off-diagonal couplings (positive A entries from -L off-diagonals);
    // the Laplacian diagonal of each row is derived so samples keep zero sums.
    auto arow = [&](int lap_node) { return lap_node < g ? g + lap_node : 2 * g + (lap_node - g); };
    auto acol = [&](int lap_node) { return lap_node < g ? lap_node : 2 * g + (lap_node - g); };
    for (int r = 0; r < g + mb; ++r) {
        DerivedTie tie;
        tie.matrix = 'A';
        tie.ti = arow(r);
        tie.tj = acol(r);
        tie.scale = -1.0;
        for (int c = 0; c < g + mb; ++c) {
            if (c == r || L(r, c) == 0.0) continue;
            pat.A.at(arow(r), acol(c)) = PatternEntry::ranged(0.1, 1.0);
            tie.sources.emplace_back(arow(r), acol(c));
        }
        pat.A.at(tie.ti, tie.tj) = PatternEntry::free_default();
        pat.ties.push_back(tie);
    }
    for (Index r = 0; r < C.rows(); ++r)
        for (Index c = 0; c < n; ++c)
            if (C(r, c) != 0.0) pat.C.at(r, c) = PatternEntry::pinned(1.0);
    return model;
}

StructuredSystem with_attack_pattern(StructuredSystem pattern, const AttackSet& K) {
    const Index n = pattern.n();
    const Index p = pattern.p();
    const Index k = static_cast<Index>(K.k());
    pattern.B = PatternMatrix::zero(n, k);
    pattern.D = PatternMatrix::zero(p, k);
    for (size_t j = 0; j < K.k(); ++j) {
        const int idx = K.indices[j];
        if (idx < 1 || idx > n + p) throw DimensionError("attack index out of range");
        if (idx <= n)
            pattern.B.at(idx - 1, static_cast<Index>(j)) = PatternEntry::free_default();
        else
            pattern.D.at(idx - n - 1, static_cast<Index>(j)) = PatternEntry::free_default();
    }
    return pattern;
}

double hazen_williams_slope(double conductance, double operating_drop) {
    if (operating_drop == 0.0)
        throw ModelShapeError("zero operating drop: Hazen-Williams linearization undefined");
    const double expo = 1.0 / 1.85 - 1.0;
    return conductance * (1.0 / 1.85) * std::pow(std::abs(operating_drop), expo);
}

WaterModel build_water_descriptor(const WaterNetworkSpec& spec) {
    const int nn = static_cast<int>(spec.nodes.size());
    if (nn < 2) throw ModelShapeError("water network needs at least two nodes");

    std::vector<std::pair<int, int>> und;
    for (const WaterEdge& e : spec.edges) {
        if (e.from < 1 || e.from > nn || e.to < 1 || e.to > nn || e.from == e.to)
            throw ModelShapeError("edge endpoints out of range");
        und.emplace_back(e.from - 1, e.to - 1);
    }
    if (!connected(nn, und)) throw ModelShapeError("water network graph is disconnected");

    WaterModel model;
    std::vector<int> state_of_node(static_cast<size_t>(nn), -1);
    for (int i = 0; i < nn; ++i) {
        if (spec.nodes[static_cast<size_t>(i)].kind != WaterNode::Kind::Reservoir) {
            state_of_node[static_cast<size_t>(i)] = static_cast<int>(model.state_node.size());
            model.state_node.push_back(i + 1);
        }
    }
    const int ns = static_cast<int>(model.state_node.size());
    if (ns < 1) throw ModelShapeError("every node is a fixed-head reservoir");

    Matrix E = Matrix::Zero(ns, ns);
    Matrix A = Matrix::Zero(ns, ns);
    for (int s = 0; s < ns; ++s) {
        const WaterNode& node = spec.nodes[static_cast<size_t>(model.state_node[static_cast<size_t>(s)] - 1)];
        if (node.kind == WaterNode::Kind::Tank) {
            if (node.area <= 0.0) throw ModelShapeError("tank area must be positive");
            E(s, s) = node.area;
        }
    }

    // Node balance contributions: edge (i -> j) carries dQ; -dQ at i, +dQ at j.
    auto add_term = [&](int node, int wrt_node, double coeff) {
        const int r = state_of_node[static_cast<size_t>(node - 1)];
        if (r < 0) return;  // reservoir balances are not modeled
        if (wrt_node >= 1) {
            const int c = state_of_node[static_cast<size_t>(wrt_node - 1)];
            if (c < 0) return;  // reservoir head is fixed: no delta coupling
            A(r, c) += coeff;
        }
    };
    for (const WaterEdge& e : spec.edges) {
        switch (e.kind) {
            case WaterEdge::Kind::Pipe: {
                if (e.conductance <= 0.0) throw ModelShapeError("pipe conductance must be positive");
                const double c = hazen_williams_slope(e.conductance, e.operating_drop);
                add_term(e.from, e.from, -c);
                add_term(e.from, e.to, +c);
                add_term(e.to, e.from, +c);
                add_term(e.to, e.to, -c);
                break;
            }
            case WaterEdge::Kind::Valve: {
                const double c = e.sensitivity;
                if (c <= 0.0) throw ModelShapeError("valve needs a positive linearized sensitivity");
                add_term(e.from, e.from, -c);
                add_term(e.from, e.to, +c);
                add_term(e.to, e.from, +c);
                add_term(e.to, e.to, -c);
                break;
            }
            case WaterEdge::Kind::Pump:
                // Metered draw: no coupling into the suction node's balance.
                // Delivery follows the suction head with the given sensitivity.
                add_term(e.to, e.from, +e.sensitivity);
                break;
        }
    }

    Matrix C = Matrix::Zero(static_cast<Index>(spec.pressure_sensors.size()), ns);
    for (size_t r = 0; r < spec.pressure_sensors.size(); ++r) {
        const int node = spec.pressure_sensors[r];
        if (node < 1 || node > nn) throw ModelShapeError("sensor node out of range");
        const int s = state_of_node[static_cast<size_t>(node - 1)];
        if (s < 0) throw ModelShapeError("pressure sensor on a fixed-head reservoir");
        C(static_cast<Index>(r), s) = 1.0;
    }

    model.sys = canonical_attack_form(E, A, C);
    for (int s = 0; s < ns; ++s)
        model.sys.state_labels.push_back(
            spec.nodes[static_cast<size_t>(model.state_node[static_cast<size_t>(s)] - 1)].name);
    return model;
}

namespace {

// Bus ordering matches the channel indices used in the reported analyses:
// the two attackable load buses sit at positions 2 and 3 (states 8 and 9),
// the generators tie to buses 1, 4 and 5, and the remaining load bus is 6
// (state 12). Susceptance data is unchanged under the relabeling.
PowerNetworkSpec wssc_spec(const std::vector<int>& measured) {
    PowerNetworkSpec spec;
    spec.generators = {
        {0.125, 0.125, 0.058, 1},
        {0.034, 0.068, 0.063, 4},
        {0.016, 0.048, 0.059, 5},
    };
    spec.bus_count = 6;
    spec.lines = {
        {1, 2, 0.085}, {1, 3, 0.092}, {4, 2, 0.161},
        {4, 6, 0.072}, {5, 3, 0.170}, {5, 6, 0.101},
    };
    spec.measured_states = measured;
    return spec;
}

}  // namespace

PowerModel wssc_demo(const std::vector<int>& measured_states) {
    return build_power_descriptor(wssc_spec(measured_states));
}

PowerModel wssc_demo(WsscOutputs outputs) {
    // States: delta 1-3, omega 4-6, theta 7-12.
    const std::vector<int> measured =
        outputs == WsscOutputs::Delta1Omega1 ? std::vector<int>{1, 4} : std::vector<int>{1, 12};
    return wssc_demo(measured);
}

Ieee14Model ieee14_demo(const std::string& data_path) {
    std::ifstream in(data_path);
    if (!in) throw DataFileError("cannot open IEEE-14 data file: " + data_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataFileError(std::string("malformed IEEE-14 data file: ") + e.what());
    }

    PowerNetworkSpec spec;
    spec.bus_count = j.at("buses").get<int>();
    for (const auto& br : j.at("branches")) {
        PowerLine l;
        l.from = br.at("from").get<int>();
        l.to = br.at("to").get<int>();
        l.susceptance = 1.0 / br.at("x").get<double>();
        spec.lines.push_back(l);
    }
    for (const auto& gen : j.at("generators")) {
        GeneratorSpec gs;
        gs.bus = gen.at("bus").get<int>();
        gs.inertia = gen.at("inertia").get<double>();
        gs.damping = gen.at("damping").get<double>();
        gs.tie_susceptance = 1.0 / gen.at("xd_transient").get<double>();
        spec.generators.push_back(gs);
    }

    const int g = static_cast<int>(spec.generators.size());
    const int mb = spec.bus_count;
    const int n = 2 * g + mb;

    // Measurement recipe: injections at all buses, flows at both ends of every
    // branch, one rotor angle.
    PowerModel base = build_power_descriptor({spec.generators, spec.bus_count, spec.lines, {}});
    const Matrix& L = base.laplacian;
    const int rows = mb + 2 * static_cast<int>(spec.lines.size()) + 1;
    Matrix C = Matrix::Zero(rows, n);
    // Injection at bus b: row of [Llg 0 Lll] (power leaving the bus).
    for (int b = 0; b < mb; ++b) {
        for (int c = 0; c < g; ++c) C(b, c) = L(g + b, c);
        for (int c = 0; c < mb; ++c) C(b, 2 * g + c) = L(g + b, g + c);
    }
    int r = mb;
    for (const PowerLine& l : spec.lines) {
        const double b = l.susceptance;
        C(r, 2 * g + l.from - 1) = b;
        C(r, 2 * g + l.to - 1) = -b;
        ++r;
        C(r, 2 * g + l.from - 1) = -b;
        C(r, 2 * g + l.to - 1) = b;
        ++r;
    }
    const int rotor_gen = j.value("rotor_angle_of_generator", 1);
    C(r, rotor_gen - 1) = 1.0;

    Ieee14Model model;
    model.sys = canonical_attack_form(base.sys.E, base.sys.A, C);
    model.protected_output = rows;  // rotor angle row is last
    model.buses = mb;
    model.branches = static_cast<int>(spec.lines.size());
    model.machines = g;
    model.rotor_observable =
        output_attack_immunity(model.sys, {model.protected_output}).immune;
    return model;
}

WaterDemo water_theft_demo(bool with_flow_sensor) {
    // Nodes: 1 R2 (storage), 2 R1, 3 T1, 4 T2, 5 T3 (tanks),
    //        6 P2 junction, 7 J1, 8 J2.
    WaterNetworkSpec spec;
    spec.nodes = {
        {WaterNode::Kind::Tank, 0, 0, 1.0, "R2"},
        {WaterNode::Kind::Tank, 0, 0, 1.0, "R1"},
        {WaterNode::Kind::Tank, 0, 0, 2.0, "T1"},
        {WaterNode::Kind::Tank, 0, 0, 3.0, "T2"},
        {WaterNode::Kind::Tank, 0, 0, 1.5, "T3"},
        {WaterNode::Kind::Junction, 0, 0.4, 0, "P2"},
        {WaterNode::Kind::Junction, 0, 0.3, 0, "J1"},
        {WaterNode::Kind::Junction, 0, 0.2, 0, "J2"},
    };
    auto pipe = [](int a, int b, double gcond, double drop) {
        WaterEdge e;
        e.kind = WaterEdge::Kind::Pipe;
        e.from = a;
        e.to = b;
        e.conductance = gcond;
        e.operating_drop = drop;
        return e;
    };
    WaterEdge pump;
    pump.kind = WaterEdge::Kind::Pump;
    pump.from = 1;
    pump.to = 6;
    pump.boost = 12.0;
    pump.sensitivity = 0.8;
    spec.edges = {
        pump,
        pipe(6, 7, 1.4, 2.0),
        pipe(6, 8, 1.1, 2.5),
        pipe(7, 2, 0.9, 1.5),
        pipe(7, 3, 1.2, 1.8),
        pipe(8, 4, 1.0, 2.2),
        pipe(8, 5, 0.7, 1.2),
    };
    spec.pressure_sensors = {1, 2, 3, 4, 5};  // S1 on R2 first

    WaterModel wm = build_water_descriptor(spec);

    WaterDemo demo;
    demo.x1_state = 1;
    demo.p2_state = 6;
    demo.s1_output = 1;
    demo.pump_sensitivity = wm.sys.A(5, 0);

    if (with_flow_sensor) {
        // Extra row measuring the pump's delivered flow (= sensitivity * h_R2).
        Matrix C(wm.sys.C.rows() + 1, wm.sys.n());
        C << wm.sys.C, Matrix::Zero(1, wm.sys.n());
        C(C.rows() - 1, 0) = demo.pump_sensitivity;
        wm.sys = canonical_attack_form(wm.sys.E, wm.sys.A, C);
    }

    demo.model = wm;
    demo.sys = wm.sys;
    const int n = static_cast<int>(demo.sys.n());
    demo.theft_set = AttackSet::of({demo.x1_state, demo.p2_state, n + demo.s1_output});
    return demo;
}

}  // namespace cpsa
