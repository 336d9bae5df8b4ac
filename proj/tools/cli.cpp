#include "cli.hpp"

#include "cpsa/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace cpsa {
namespace {

AttackSet parse_attack_set(const std::string& csv) {
    std::vector<int> idx;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        idx.push_back(std::stoi(tok));
    }
    return AttackSet::of(idx);
}

std::vector<int> parse_outputs(const std::string& csv) {
    // "e1,e12" -> {1, 12}
    std::vector<int> states;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok[0] == 'e') tok = tok.substr(1);
        states.push_back(std::stoi(tok));
    }
    return states;
}

PowerNetworkSpec power_spec_from_json(const Json& j) {
    PowerNetworkSpec spec;
    int default_bus = 1;
    for (const Json& gj : j.at("generators")) {
        GeneratorSpec g;
        g.inertia = gj.at("M").get<double>();
        g.damping = gj.at("D").get<double>();
        g.tie_susceptance = gj.at("tie_susceptance").get<double>();
        g.bus = gj.value("bus", default_bus);
        ++default_bus;
        spec.generators.push_back(g);
    }
    for (const Json& lj : j.at("lines")) {
        PowerLine l;
        l.from = lj.at("i").get<int>();
        l.to = lj.at("j").get<int>();
        l.susceptance = lj.at("b").get<double>();
        spec.lines.push_back(l);
    }
    int max_bus = 0;
    for (const PowerLine& l : spec.lines) max_bus = std::max({max_bus, l.from, l.to});
    for (const GeneratorSpec& g : spec.generators) max_bus = std::max(max_bus, g.bus);
    spec.bus_count = j.value("bus_count", max_bus);
    spec.measured_states = j.value("measurements", std::vector<int>{});
    return spec;
}

WaterNetworkSpec water_spec_from_json(const Json& j) {
    WaterNetworkSpec spec;
    for (const Json& nj : j.at("nodes")) {
        WaterNode n;
        const std::string type = nj.at("type").get<std::string>();
        if (type == "reservoir") {
            n.kind = WaterNode::Kind::Reservoir;
            n.head = nj.value("head", 0.0);
        } else if (type == "junction") {
            n.kind = WaterNode::Kind::Junction;
            n.demand = nj.value("demand", 0.0);
        } else if (type == "tank") {
            n.kind = WaterNode::Kind::Tank;
            n.area = nj.at("area").get<double>();
        } else {
            throw DataFileError("unknown water node type: " + type);
        }
        n.name = nj.value("name", std::string{});
        spec.nodes.push_back(n);
    }
    for (const Json& ej : j.at("edges")) {
        WaterEdge e;
        const std::string type = ej.at("type").get<std::string>();
        e.from = ej.at("from").get<int>();
        e.to = ej.at("to").get<int>();
        if (type == "pipe") {
            e.kind = WaterEdge::Kind::Pipe;
            e.conductance = ej.at("g").get<double>();
            e.operating_drop = ej.at("dh").get<double>();
        } else if (type == "pump") {
            e.kind = WaterEdge::Kind::Pump;
            e.boost = ej.value("boost", 0.0);
            e.sensitivity = ej.value("sensitivity", 0.0);
        } else if (type == "valve") {
            e.kind = WaterEdge::Kind::Valve;
            e.boost = ej.value("drop", 0.0);
            e.sensitivity = ej.at("sensitivity").get<double>();
        } else {
            throw DataFileError("unknown water edge type: " + type);
        }
        spec.edges.push_back(e);
    }
    spec.pressure_sensors = j.value("sensors", std::vector<int>{});
    return spec;
}

TimeSignal make_probe(Index dim, std::uint64_t seed) {
    Rng rng(seed);
    Vector amp(dim), omega(dim), phase(dim);
    for (Index i = 0; i < dim; ++i) {
        amp(i) = rng.uniform(0.2, 1.0);
        omega(i) = rng.uniform(0.5, 3.0);
        phase(i) = rng.uniform(0.0, 2.0 * M_PI);
    }
    return TimeSignal::sinusoid(amp, omega, phase);
}

int run(int argc, const char* const* argv) {
    CLI::App app{
        "attack detectability analysis for descriptor-system models\n"
        "exit codes: 0 success (verdicts are payload, not judgement); 1 analysis\n"
        "failed or inconclusive where a positive result is demanded (validate:\n"
        "irregular/higher-index systems); 2 usage error; 3 data error"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "seed for every randomized step");

    // validate
    auto* validate = app.add_subcommand("validate", "check regularity and index of a system file");
    std::string v_system;
    validate->add_option("--system", v_system, "system JSON file")->required();

    // build
    auto* build = app.add_subcommand("build", "build a system from a power or water spec");
    std::string b_kind, b_spec, b_out, b_pattern_out;
    build->add_option("kind", b_kind, "power|water")->required();
    build->add_option("--spec", b_spec, "spec JSON file")->required();
    build->add_option("--out", b_out, "output system JSON")->required();
    build->add_option("--pattern-out", b_pattern_out, "also write the sparsity pattern");

    // reduce
    auto* reduce = app.add_subcommand("reduce", "Kron-reduce the algebraic states");
    std::string r_system, r_set, r_out;
    reduce->add_option("--system", r_system)->required();
    reduce->add_option("--attack-set", r_set, "1-based channels, comma separated")->required();
    reduce->add_option("--out", r_out, "output JSON (stdout when omitted)");

    // zeros
    auto* zeros_cmd = app.add_subcommand("zeros", "finite invariant zeros of the attack pencil");
    std::string z_system, z_set, z_out;
    zeros_cmd->add_option("--system", z_system)->required();
    zeros_cmd->add_option("--attack-set", z_set)->required();
    zeros_cmd->add_option("--out", z_out);

    // detect
    auto* detect = app.add_subcommand("detect", "detectability verdict for an attack set");
    std::string d_system, d_set, d_monitor = "dynamic";
    double d_horizon = 10.0, d_dt = 0.01;
    detect->add_option("--system", d_system)->required();
    detect->add_option("--attack-set", d_set)->required();
    detect->add_option("--monitor", d_monitor, "static|dynamic|active");
    detect->add_option("--horizon", d_horizon, "active check horizon");
    detect->add_option("--dt", d_dt, "active check step");

    // identify
    auto* identify = app.add_subcommand("identify", "identifiability verdict for an attack set");
    std::string i_system, i_set, i_monitor = "dynamic";
    std::size_t i_budget = 100000;
    identify->add_option("--system", i_system)->required();
    identify->add_option("--attack-set", i_set)->required();
    identify->add_option("--monitor", i_monitor, "static|dynamic");
    identify->add_option("--budget", i_budget, "subset evaluation budget");

    // structural
    auto* structural = app.add_subcommand("structural", "generic linking/left-invertibility tests");
    std::string s_system, s_pattern, s_set;
    structural->add_option("--system", s_system, "derive the pattern from a system file");
    structural->add_option("--pattern", s_pattern, "or load a pattern file");
    structural->add_option("--attack-set", s_set)->required();

    // synthesize
    auto* synth = app.add_subcommand("synthesize", "construct an attack signal");
    std::string sy_system, sy_kind, sy_set, sy_out;
    synth->add_option("--system", sy_system)->required();
    synth->add_option("--kind", sy_kind, "zero-dynamics|stealth|covert|false-data|nullspace")
        ->required();
    synth->add_option("--attack-set", sy_set);
    synth->add_option("--out", sy_out, "attack bundle JSON")->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "integrate a (possibly attacked) trajectory");
    std::string m_system, m_attack, m_out, m_svg, m_monitor;
    double m_horizon = 10.0, m_dt = 0.01;
    bool m_probe = false;
    sim->add_option("--system", m_system)->required();
    sim->add_option("--attack", m_attack, "attack bundle JSON");
    sim->add_option("--horizon", m_horizon);
    sim->add_option("--dt", m_dt);
    sim->add_option("--out", m_out, "trace CSV")->required();
    sim->add_option("--svg", m_svg, "also write a quick-look SVG plot");
    sim->add_option("--monitor", m_monitor, "run a monitor on the trace: static|dynamic|active");
    sim->add_flag("--probe", m_probe, "inject a seeded sinusoidal monitor signal w");

    // demo
    auto* demo = app.add_subcommand("demo", "bundled example systems and analyses");
    std::string de_which, de_outputs = "e1,e12", de_analysis = "zeros", de_data = "data/ieee14.json";
    bool de_flow_sensor = false;
    demo->add_option("which", de_which, "wssc|ieee14|water")->required();
    demo->add_option("--outputs", de_outputs, "wssc measured states, e.g. e1,e12");
    demo->add_option("--analysis", de_analysis,
                     "wssc: zeros|structural|attack; ieee14: static-search|immunity; water: theft");
    demo->add_option("--data", de_data, "ieee14 data file");
    demo->add_flag("--flow-sensor", de_flow_sensor, "water demo: add the pump flow sensor");

    // report
    auto* report = app.add_subcommand("report", "merge per-step JSONs into one analysis report");
    std::vector<std::string> rp_steps;
    std::string rp_out, rp_system;
    bool rp_no_timings = false;
    report->add_option("--system", rp_system, "system the steps refer to")->required();
    report->add_option("--out", rp_out)->required();
    report->add_option("steps", rp_steps, "step JSON files");
    report->add_flag("--no-timings", rp_no_timings, "omit wall-clock fields (byte-stable output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        Json err{{"error", e.what()}, {"kind", "usage"}};
        std::cerr << err.dump() << "\n";
        return 2;
    }

    auto emit = [&](const Json& j, const std::string& path) {
        if (path.empty()) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::ofstream out(path);
            if (!out) throw DataFileError("cannot write " + path);
            out << j.dump(2) << "\n";
        }
    };

    if (validate->parsed()) {
        DescriptorSystem sys = load_system(v_system);
        Json j;
        j["n"] = sys.n();
        j["p"] = sys.p();
        j["m"] = sys.m();
        j["canonical_attack_form"] = sys.is_canonical_attack_form();
        j["fingerprint"] = system_fingerprint(sys);
        const bool regular = check_regular(sys, 5, seed);
        j["regular"] = regular;
        bool index_one = false;
        if (regular) {
            try {
                index_one = partition_index_one(sys).certified_index_one;
            } catch (const NotIndexOneError&) {
                index_one = false;
            }
        }
        j["index_one"] = index_one;
        emit(j, "");
        return regular && index_one ? 0 : 1;
    }

    if (build->parsed()) {
        Json spec_json;
        {
            std::ifstream in(b_spec);
            if (!in) throw DataFileError("cannot open " + b_spec);
            try {
                in >> spec_json;
            } catch (const std::exception& e) {
                throw DataFileError(std::string("malformed spec: ") + e.what());
            }
        }
        if (b_kind == "power") {
            PowerModel model = build_power_descriptor(power_spec_from_json(spec_json));
            save_system(model.sys, b_out);
            if (!b_pattern_out.empty()) emit(pattern_to_json(model.pattern), b_pattern_out);
        } else if (b_kind == "water") {
            WaterModel model = build_water_descriptor(water_spec_from_json(spec_json));
            save_system(model.sys, b_out);
        } else {
            Json err{{"error", "build kind must be power or water"}, {"kind", "usage"}};
            std::cerr << err.dump() << "\n";
            return 2;
        }
        return 0;
    }

    if (reduce->parsed()) {
        DescriptorSystem sys = load_system(r_system);
        AttackSignature sig = signature(sys, parse_attack_set(r_set));
        KronReducedSystem kr = kron_reduce(sys, sig);
        Json j;
        auto mat = [&](const Matrix& M) {
            Json rows = Json::array();
            for (Index i = 0; i < M.rows(); ++i) {
                Json row = Json::array();
                for (Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
                rows.push_back(row);
            }
            return rows;
        };
        j["A_til"] = mat(kr.A_til);
        j["B_til"] = mat(kr.B_til);
        j["C_til"] = mat(kr.C_til);
        j["D_til"] = mat(kr.D_til);
        j["recovery_state"] = mat(kr.recovery_state);
        j["recovery_input"] = mat(kr.recovery_input);
        j["a22_condition"] = kr.a22_condition;
        j["ill_conditioned"] = kr.ill_conditioned;
        emit(j, r_out);
        return 0;
    }

    if (zeros_cmd->parsed()) {
        DescriptorSystem sys = load_system(z_system);
        ZeroOptions opts;
        opts.seed = seed;
        auto zs = invariant_zeros(sys, signature(sys, parse_attack_set(z_set)), opts);
        Json j;
        j["zeros"] = zeros_to_json(zs);
        j["count"] = zs.size();
        emit(j, z_out);
        return 0;
    }

    if (detect->parsed()) {
        DescriptorSystem sys = load_system(d_system);
        AttackSet K = parse_attack_set(d_set);
        ZeroOptions opts;
        opts.seed = seed;
        Json j;
        if (d_monitor == "static") {
            j = verdict_to_json(static_undetectable(sys, K));
        } else if (d_monitor == "dynamic") {
            j = verdict_to_json(dynamic_undetectable(sys, K, opts));
        } else if (d_monitor == "active") {
            DetectabilityVerdict v = dynamic_undetectable(sys, K, opts);
            j = verdict_to_json(v);
            j["monitor"] = "active";
            if (v.undetectable) {
                TimeSignal w = make_probe(sys.n() + sys.p(), seed + 7);
                j["probe_invariant"] = active_equivalence_check(sys, K, w, d_horizon, d_dt);
            }
        } else {
            Json err{{"error", "monitor must be static, dynamic or active"}, {"kind", "usage"}};
            std::cerr << err.dump() << "\n";
            return 2;
        }
        emit(j, "");
        return 0;
    }

    if (identify->parsed()) {
        DescriptorSystem sys = load_system(i_system);
        AttackSet K = parse_attack_set(i_set);
        Json j;
        if (i_monitor == "static") {
            StaticIdentResult res = static_unidentifiable(sys, K, i_budget);
            j["unidentifiable"] = res.unidentifiable;
            j["budget_exhausted"] = res.budget_exhausted;
            if (res.confusable_with) j["confusable_with"] = res.confusable_with->indices;
        } else {
            ZeroOptions opts;
            opts.seed = seed;
            DynamicIdentResult res = dynamic_unidentifiable(sys, K, i_budget, opts);
            j["unidentifiable"] = res.unidentifiable;
            j["budget_exhausted"] = res.budget_exhausted;
            if (res.confusable_with) j["confusable_with"] = res.confusable_with->indices;
            if (res.witness) {
                j["witness"] = Json{{"s", Json::array({res.witness->s.real(), res.witness->s.imag()})},
                                    {"residual", res.witness->residual}};
            }
        }
        emit(j, "");
        return 0;
    }

    if (structural->parsed()) {
        StructuredSystem pattern;
        if (!s_pattern.empty()) {
            pattern = load_pattern(s_pattern);
        } else if (!s_system.empty()) {
            pattern = StructuredSystem::from_system(load_system(s_system));
        } else {
            Json err{{"error", "structural needs --system or --pattern"}, {"kind", "usage"}};
            std::cerr << err.dump() << "\n";
            return 2;
        }
        pattern = with_attack_pattern(pattern, parse_attack_set(s_set));
        SystemDigraph g = build_digraph(pattern);
        Json j;
        j["nondegenerate"] = structurally_nondegenerate(pattern);
        LeftInvertibilityResult res = structurally_left_invertible(pattern);
        j["max_linking"] = res.max_linking;
        j["left_invertible"] = res.left_invertible;
        Json paths = Json::array();
        for (const auto& path : res.witness.paths) {
            Json pj = Json::array();
            for (int v : path) pj.push_back(g.vertex_name(v));
            paths.push_back(pj);
        }
        j["witness_paths"] = paths;
        if (!res.left_invertible) {
            Json cut = Json::array();
            for (int v : res.cut) cut.push_back(g.vertex_name(v));
            j["cut"] = cut;
        }
        emit(j, "");
        return 0;
    }

    if (synth->parsed()) {
        DescriptorSystem sys = load_system(sy_system);
        ZeroOptions opts;
        opts.seed = seed;
        Json j;
        if (sy_kind == "zero-dynamics") {
            ZeroDynamicsAttack atk = synth_zero_dynamics_attack(sys, parse_attack_set(sy_set), opts);
            j = attack_to_json(atk.signal);
            Json x0 = Json::array();
            for (Index i = 0; i < atk.x0.size(); ++i) x0.push_back(atk.x0(i));
            j["x0"] = x0;
        } else if (sy_kind == "stealth") {
            j = attack_to_json(synth_static_stealth_attack(sys, parse_attack_set(sy_set)));
        } else if (sy_kind == "covert") {
            PrototypeParams params;
            for (int idx : parse_attack_set(sy_set).indices) params.state_channels.push_back(idx);
            j = attack_to_json(synth_prototype(sys, PrototypeKind::Covert, params).signal);
        } else if (sy_kind == "false-data") {
            PrototypeAttack atk = synth_prototype(sys, PrototypeKind::FalseData);
            j = attack_to_json(atk.signal);
            Json x0 = Json::array();
            for (Index i = 0; i < atk.x0.size(); ++i) x0.push_back(atk.x0(i));
            j["x0"] = x0;
        } else if (sy_kind == "nullspace") {
            TransferNullspaceAttack atk = synth_transfer_nullspace_attack(
                sys, parse_attack_set(sy_set), TimeSignal::step(Vector::Ones(1)), opts);
            j = attack_to_json(atk.signal);
        } else {
            Json err{{"error", "unknown synthesis kind " + sy_kind}, {"kind", "usage"}};
            std::cerr << err.dump() << "\n";
            return 2;
        }
        emit(j, sy_out);
        return 0;
    }

    if (sim->parsed()) {
        DescriptorSystem sys = load_system(m_system);
        std::optional<AttackSignal> attack;
        Vector x0 = Vector::Zero(sys.n());
        if (!m_attack.empty()) {
            std::ifstream in(m_attack);
            if (!in) throw DataFileError("cannot open " + m_attack);
            Json aj;
            try {
                in >> aj;
            } catch (const std::exception& e) {
                throw DataFileError(std::string("malformed attack file: ") + e.what());
            }
            attack = attack_from_json(aj);
            if (aj.contains("x0")) {
                // synthesized bundles pin the initial condition of their witness
                const auto vals = aj.at("x0").get<std::vector<double>>();
                if (static_cast<Index>(vals.size()) != sys.n())
                    throw DataFileError("attack x0 does not match the system dimension");
                for (Index i = 0; i < sys.n(); ++i) x0(i) = vals[static_cast<size_t>(i)];
            }
        }
        std::optional<TimeSignal> w;
        if (m_probe) w = make_probe(sys.n() + sys.p(), seed + 7);
        SimulationOptions opts;
        opts.horizon = m_horizon;
        opts.dt = m_dt;
        SimulationTrace tr = simulate(sys, x0, attack ? &*attack : nullptr,
                                      w ? &*w : nullptr, opts);
        write_trace_csv(tr, m_out);
        if (!m_svg.empty()) write_trace_svg(tr, m_svg);
        Json j;
        j["steps"] = tr.steps();
        j["algebraic_residual_max"] = tr.algebraic_residual_max;
        if (!m_monitor.empty()) {
            MonitorVerdict v;
            if (m_monitor == "static")
                v = static_monitor(tr, sys.C);
            else if (m_monitor == "dynamic")
                v = dynamic_monitor_oracle(sys, tr);
            else if (m_monitor == "active")
                v = active_monitor(sys, tr, w ? *w : TimeSignal::zero(sys.n() + sys.p()));
            else {
                Json err{{"error", "unknown monitor " + m_monitor}, {"kind", "usage"}};
                std::cerr << err.dump() << "\n";
                return 2;
            }
            j["monitor"] = monitor_verdict_to_json(v);
        }
        emit(j, "");
        return 0;
    }

    if (demo->parsed()) {
        Json j;
        j["demo"] = de_which;
        j["analysis"] = de_analysis;
        if (de_which == "wssc") {
            PowerModel model = wssc_demo(parse_outputs(de_outputs));
            j["fingerprint"] = system_fingerprint(model.sys);
            if (de_analysis == "zeros") {
                ZeroOptions opts;
                opts.seed = seed;
                auto zs = invariant_zeros(model.sys, signature(model.sys, AttackSet::of({8, 9})), opts);
                j["zeros"] = zeros_to_json(zs);
            } else if (de_analysis == "structural") {
                StructuredSystem pat = with_attack_pattern(model.pattern, AttackSet::of({8, 9}));
                LeftInvertibilityResult res = structurally_left_invertible(pat);
                j["max_linking"] = res.max_linking;
                j["left_invertible"] = res.left_invertible;
            } else if (de_analysis == "attack") {
                ZeroOptions opts;
                opts.seed = seed;
                TransferNullspaceAttack atk = synth_transfer_nullspace_attack(
                    model.sys, AttackSet::of({8, 9}), TimeSignal::step(Vector::Ones(1)), opts);
                j["attack"] = attack_to_json(atk.signal);
                Json entries = Json::array();
                for (const auto& e : atk.nullvector.entries) {
                    entries.push_back(Json{{"num", e.num.coeffs()}, {"den", e.den.coeffs()}});
                }
                j["nullspace"] = entries;
            } else {
                Json err{{"error", "unknown wssc analysis " + de_analysis}, {"kind", "usage"}};
                std::cerr << err.dump() << "\n";
                return 2;
            }
        } else if (de_which == "ieee14") {
            Ieee14Model model = ieee14_demo(de_data);
            j["fingerprint"] = system_fingerprint(model.sys);
            j["rotor_observable"] = model.rotor_observable;
            if (de_analysis == "static-search") {
                CardinalitySearch res = static_exists_undetectable_of_cardinality(model.sys, 4);
                j["found"] = res.found.has_value();
                if (res.found) j["attack_set"] = res.found->indices;
                j["budget_exhausted"] = res.budget_exhausted;
            } else if (de_analysis == "immunity") {
                ImmunityResult res = output_attack_immunity(model.sys, {model.protected_output});
                j["immune"] = res.immune;
            } else {
                Json err{{"error", "unknown ieee14 analysis " + de_analysis}, {"kind", "usage"}};
                std::cerr << err.dump() << "\n";
                return 2;
            }
        } else if (de_which == "water") {
            WaterDemo wd = water_theft_demo(de_flow_sensor);
            j["fingerprint"] = system_fingerprint(wd.sys);
            AttackSignal atk = synth_water_theft_attack(wd);
            j["attack"] = attack_to_json(atk);
            SimulationOptions opts;
            opts.horizon = 50.0;
            opts.dt = 0.01;
            SimulationTrace attacked = simulate(wd.sys, Vector::Zero(wd.sys.n()), &atk, nullptr, opts);
            MonitorVerdict v = dynamic_monitor_oracle(wd.sys, attacked);
            j["monitor"] = monitor_verdict_to_json(v);
            j["final_storage_pressure"] = attacked.x(attacked.steps() - 1, wd.x1_state - 1);
        } else {
            Json err{{"error", "unknown demo " + de_which}, {"kind", "usage"}};
            std::cerr << err.dump() << "\n";
            return 2;
        }
        emit(j, "");
        return 0;
    }

    if (report->parsed()) {
        AnalysisReport rep;
        rep.fingerprint = system_fingerprint(load_system(rp_system));
        rep.settings["seed"] = seed;
        for (const std::string& path : rp_steps) {
            std::ifstream in(path);
            if (!in) throw DataFileError("cannot open " + path);
            Json step;
            try {
                in >> step;
            } catch (const std::exception& e) {
                throw DataFileError("malformed step file " + path + ": " + e.what());
            }
            rep.steps.push_back(step);
        }
        emit(rep.to_json(!rp_no_timings), rp_out);
        return 0;
    }

    return 2;
}

}  // namespace
}  // namespace cpsa

int cmd_dispatch(int argc, const char* const* argv) {
    try {
        return cpsa::run(argc, argv);
    } catch (const cpsa::Error& e) {
        const char* kind = "analysis";
        int code = 1;
        switch (e.kind()) {
            case cpsa::ErrorKind::Data:
                kind = "data";
                code = 3;
                break;
            case cpsa::ErrorKind::Dimension:
                kind = "usage";
                code = 2;
                break;
            case cpsa::ErrorKind::Analysis:
            case cpsa::ErrorKind::Numeric:
                break;
        }
        nlohmann::json err{{"error", e.what()}, {"kind", kind}};
        std::cerr << err.dump() << "\n";
        return code;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", e.what()}, {"kind", "internal"}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
