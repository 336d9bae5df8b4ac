#include "cpsa/io.hpp"
#include "cpsa/models.hpp"
#include "../tools/cli.hpp"

#include <doctest.h>

#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace cpsa;
using namespace cpsa::testing;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("cpsa_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

struct CliResult {
    int exit_code;
    std::string out;
    Json json() const { return Json::parse(out); }
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"cpsa"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream captured;
    std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(captured.rdbuf());
    int code = cmd_dispatch(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old);
    std::cerr.rdbuf(old_err);
    return {code, captured.str()};
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    Json j;
    in >> j;
    return j;
}

const std::string kSchemas = std::string(CPSA_SOURCE_DIR) + "/schemas";

}  // namespace

TEST_CASE("system files round trip") {
    PowerModel model = wssc_demo(WsscOutputs::Delta1Theta6);
    Json j = system_to_json(model.sys);
    CHECK_FALSE(j.contains("B"));  // canonical form is implied
    DescriptorSystem back = system_from_json(j);
    CHECK((back.E - model.sys.E).norm() == 0.0);
    CHECK((back.A - model.sys.A).norm() == 0.0);
    CHECK((back.C - model.sys.C).norm() == 0.0);
    CHECK(back.is_canonical_attack_form());

    SUBCASE("ragged matrices are data errors") {
        Json bad = j;
        bad["A"][3].push_back(1.0);
        CHECK_THROWS_AS(system_from_json(bad), DataFileError);
    }
    SUBCASE("declared dimensions must agree") {
        Json bad = j;
        bad["n"] = 13;
        CHECK_THROWS_AS(system_from_json(bad), DataFileError);
    }
}

TEST_CASE("pattern files round trip with ranges and ties") {
    PowerModel model = wssc_demo(WsscOutputs::Delta1Omega1);
    StructuredSystem pat = with_attack_pattern(model.pattern, AttackSet::of({8, 9}));
    Json j = pattern_to_json(pat);
    StructuredSystem back = pattern_from_json(j);
    CHECK(back.A.rows == pat.A.rows);
    CHECK(back.d() == pat.d());
    CHECK(back.ties.size() == pat.ties.size());
    // sampling with equal seeds agrees
    DescriptorSystem a = sample_realization(pat, 3);
    DescriptorSystem b = sample_realization(back, 3);
    CHECK((a.A - b.A).norm() == 0.0);
    CHECK((a.E - b.E).norm() == 0.0);
}

TEST_CASE("attack bundles round trip") {
    WaterDemo demo = water_theft_demo();
    AttackSignal atk = synth_water_theft_attack(demo);
    Json j = attack_to_json(atk);
    AttackSignal back = attack_from_json(j);
    CHECK(back.attack_set.indices == atk.attack_set.indices);
    CHECK((back.constant - atk.constant).norm() == 0.0);
    REQUIRE(back.feedback.size() == 1);
    CHECK((back.feedback[0].F - atk.feedback[0].F).norm() == 0.0);
    CHECK(back.feedback[0].indices == atk.feedback[0].indices);

    SUBCASE("filter attacks keep their realization") {
        PowerModel model = wssc_demo(WsscOutputs::Delta1Omega1);
        TransferNullspaceAttack tn = synth_transfer_nullspace_attack(
            model.sys, AttackSet::of({8, 9}), TimeSignal::step(Vector::Ones(1)));
        Json fj = attack_to_json(tn.signal);
        AttackSignal fback = attack_from_json(fj);
        REQUIRE(fback.filter);
        CHECK((fback.filter->A - tn.signal.filter->A).norm() == 0.0);
        CHECK((fback.filter->D - tn.signal.filter->D).norm() == 0.0);
        CHECK(fback.filter->input.kind() == TimeSignal::Kind::Step);
    }
}

TEST_CASE("trace csv round trip and svg emission") {
    TempDir tmp;
    Rng rng(5);
    DescriptorSystem sys = random_index_one(rng, 2, 1, 1, true);
    AttackSignal atk;
    atk.attack_set = AttackSet::of({1});
    atk.constant = Vector::Ones(1);
    SimulationOptions opts;
    opts.horizon = 1.0;
    opts.dt = 0.01;
    SimulationTrace tr = simulate(sys, Vector::Zero(3), &atk, nullptr, opts);

    const std::string csv = tmp.file("trace.csv");
    write_trace_csv(tr, csv);
    SimulationTrace back = read_trace_csv(csv);
    CHECK(back.steps() == tr.steps());
    CHECK((back.x - tr.x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.y - tr.y).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(back.dt == doctest::Approx(tr.dt));

    const std::string svg = tmp.file("trace.svg");
    write_trace_svg(tr, svg, {"x_1", "y_1"});
    std::ifstream in(svg);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content.find("<svg") != std::string::npos);
    CHECK(content.find("polyline") != std::string::npos);

    SUBCASE("column selection subsets the csv") {
        const std::string sel = tmp.file("sel.csv");
        write_trace_csv(tr, sel, {"y_1"});
        std::ifstream fin(sel);
        std::string header;
        std::getline(fin, header);
        CHECK(header == "t,y_1");
    }
}

TEST_CASE("emitted documents validate against the shipped schemas") {
    PowerModel model = wssc_demo(WsscOutputs::Delta1Theta6);
    std::string err;

    Json sys_schema = load_json(kSchemas + "/system.schema.json");
    CHECK(validate_schema(system_to_json(model.sys), sys_schema, &err));

    Json verdict_schema = load_json(kSchemas + "/verdict.schema.json");
    DetectabilityVerdict v = dynamic_undetectable(model.sys, AttackSet::of({8, 9}));
    CHECK(validate_schema(verdict_to_json(v), verdict_schema, &err));

    Json attack_schema = load_json(kSchemas + "/attack.schema.json");
    WaterDemo demo = water_theft_demo();
    CHECK(validate_schema(attack_to_json(synth_water_theft_attack(demo)), attack_schema, &err));

    Json report_schema = load_json(kSchemas + "/report.schema.json");
    AnalysisReport rep;
    rep.fingerprint = system_fingerprint(model.sys);
    rep.steps.push_back(Json{{"step", "zeros"}, {"count", 4}});
    CHECK(validate_schema(rep.to_json(), report_schema, &err));
    AnalysisReport back = AnalysisReport::from_json(rep.to_json());
    CHECK(back.to_json() == rep.to_json());  // lossless round trip

    // and the validator itself rejects broken documents
    Json broken = Json{{"undetectable", "yes"}};
    CHECK_FALSE(validate_schema(broken, verdict_schema, &err));
}

TEST_CASE("cli: demo wssc zeros reports the four reported zeros") {
    CliResult res = run_cli({"demo", "wssc", "--outputs", "e1,e12", "--analysis", "zeros"});
    REQUIRE(res.exit_code == 0);
    Json j = res.json();
    REQUIRE(j.at("zeros").size() == 4);
    bool found = false;
    for (const Json& z : j.at("zeros")) {
        const double re = z.at("s").at(0).get<double>();
        const double im = z.at("s").at(1).get<double>();
        if (std::abs(re + 0.8136) < 1e-2 && std::abs(im - 0.2258) < 1e-2) found = true;
    }
    CHECK(found);
}

TEST_CASE("cli: detect on a saved system") {
    TempDir tmp;
    PowerModel model = wssc_demo(WsscOutputs::Delta1Theta6);
    const std::string sys_path = tmp.file("wssc.json");
    save_system(model.sys, sys_path);

    CliResult res = run_cli({"detect", "--system", sys_path, "--attack-set", "8,9",
                             "--monitor", "dynamic"});
    REQUIRE(res.exit_code == 0);
    Json j = res.json();
    CHECK(j.at("undetectable").get<bool>());
    CHECK(j.contains("witness"));
    CHECK_FALSE(j.at("budget_exhausted").get<bool>());
}

TEST_CASE("cli: exit codes") {
    SUBCASE("missing data file is a data error") {
        CliResult res = run_cli({"zeros", "--system", "/nonexistent.json", "--attack-set", "1"});
        CHECK(res.exit_code == 3);
        CHECK(res.out.find("\"kind\":\"data\"") != std::string::npos);
    }
    SUBCASE("bad usage") {
        CliResult res = run_cli({"zeros"});
        CHECK(res.exit_code == 2);
    }
    SUBCASE("validate returns 1 on irregular systems") {
        TempDir tmp;
        Json j;
        j["E"] = Json::array({Json::array({0.0})});
        j["A"] = Json::array({Json::array({0.0})});
        j["C"] = Json::array({Json::array({1.0})});
        std::ofstream(tmp.file("bad.json")) << j.dump();
        CliResult res = run_cli({"validate", "--system", tmp.file("bad.json")});
        CHECK(res.exit_code == 1);
    }
}

TEST_CASE("cli: build, reduce, simulate, report pipeline") {
    TempDir tmp;
    // power spec file
    Json spec;
    spec["generators"] = Json::array({Json{{"M", 0.1}, {"D", 0.05}, {"tie_susceptance", 0.2}, {"bus", 1}}});
    spec["lines"] = Json::array({Json{{"i", 1}, {"j", 2}, {"b", 0.3}}});
    spec["bus_count"] = 2;
    spec["measurements"] = Json::array({1});
    std::ofstream(tmp.file("spec.json")) << spec.dump();

    CliResult built = run_cli({"build", "power", "--spec", tmp.file("spec.json"), "--out",
                               tmp.file("sys.json"), "--pattern-out", tmp.file("pat.json")});
    REQUIRE(built.exit_code == 0);
    CHECK(fs::exists(tmp.file("sys.json")));
    CHECK(fs::exists(tmp.file("pat.json")));

    CliResult reduced = run_cli({"reduce", "--system", tmp.file("sys.json"), "--attack-set", "1",
                                 "--out", tmp.file("red.json")});
    REQUIRE(reduced.exit_code == 0);
    Json rj = load_json(tmp.file("red.json"));
    CHECK(rj.at("A_til").size() == 2);  // one generator: delta, omega dynamic

    CliResult sim = run_cli({"simulate", "--system", tmp.file("sys.json"), "--horizon", "1",
                             "--dt", "0.01", "--out", tmp.file("trace.csv"), "--monitor",
                             "dynamic"});
    REQUIRE(sim.exit_code == 0);
    CHECK(fs::exists(tmp.file("trace.csv")));
    CHECK_FALSE(sim.json().at("monitor").at("psi1").get<bool>());

    // two detect steps merged into one report, byte-stable without timings
    std::ofstream(tmp.file("step1.json")) << Json{{"step", "detect"}, {"undetectable", false}}.dump();
    std::ofstream(tmp.file("step2.json")) << Json{{"step", "zeros"}, {"count", 0}}.dump();
    CliResult rep1 = run_cli({"report", "--system", tmp.file("sys.json"), "--out",
                              tmp.file("r1.json"), "--no-timings", tmp.file("step1.json"),
                              tmp.file("step2.json")});
    CliResult rep2 = run_cli({"report", "--system", tmp.file("sys.json"), "--out",
                              tmp.file("r2.json"), "--no-timings", tmp.file("step1.json"),
                              tmp.file("step2.json")});
    REQUIRE(rep1.exit_code == 0);
    REQUIRE(rep2.exit_code == 0);
    std::ifstream f1(tmp.file("r1.json")), f2(tmp.file("r2.json"));
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);  // determinism
    Json merged = Json::parse(s1);
    CHECK(merged.at("steps").size() == 2);
    CHECK(merged.at("tool_version").get<std::string>() == std::string(kVersion));
}

TEST_CASE("cli: synthesize and replay an attack from disk") {
    TempDir tmp;
    PowerModel model = wssc_demo(WsscOutputs::Delta1Omega1);
    const std::string sys_path = tmp.file("wssc.json");
    save_system(model.sys, sys_path);

    CliResult synth = run_cli({"synthesize", "--system", sys_path, "--kind", "nullspace",
                               "--attack-set", "8,9", "--out", tmp.file("attack.json")});
    REQUIRE(synth.exit_code == 0);

    CliResult sim = run_cli({"simulate", "--system", sys_path, "--attack", tmp.file("attack.json"),
                             "--horizon", "10", "--dt", "0.01", "--out", tmp.file("trace.csv"),
                             "--svg", tmp.file("trace.svg"), "--monitor", "dynamic"});
    REQUIRE(sim.exit_code == 0);
    CHECK_FALSE(sim.json().at("monitor").at("psi1").get<bool>());  // stealthy by construction
    CHECK(fs::exists(tmp.file("trace.svg")));
}
