#include "cpsa/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cpsa {

namespace {

Json matrix_to_json(const Matrix& M) {
    Json rows = Json::array();
    for (Index i = 0; i < M.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const char* name) {
    if (!j.is_array()) throw DataFileError(std::string(name) + " must be an array of arrays");
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0) return Matrix(0, 0);
    const Index cols = static_cast<Index>(j.at(0).size());
    Matrix M(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const Json& row = j.at(static_cast<size_t>(i));
        if (static_cast<Index>(row.size()) != cols)
            throw DataFileError(std::string(name) + " has ragged rows");
        for (Index c = 0; c < cols; ++c) M(i, c) = row.at(static_cast<size_t>(c)).get<double>();
    }
    return M;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

Json cvector_to_json(const CVector& v) {
    Json arr = Json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
    return arr;
}

CVector cvector_from_json(const Json& j) {
    CVector v(static_cast<Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j.at(i));
    return v;
}

Json vector_to_json(const Vector& v) {
    Json arr = Json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Vector vector_from_json(const Json& j) {
    Vector v(static_cast<Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j.at(i).get<double>();
    return v;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataFileError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataFileError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataFileError("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace

Json system_to_json(const DescriptorSystem& sys) {
    Json j;
    j["n"] = sys.n();
    j["p"] = sys.p();
    j["E"] = matrix_to_json(sys.E);
    j["A"] = matrix_to_json(sys.A);
    j["C"] = matrix_to_json(sys.C);
    if (!sys.is_canonical_attack_form()) {
        j["B"] = matrix_to_json(sys.B);
        j["D"] = matrix_to_json(sys.D);
    }
    if (!sys.state_labels.empty() || !sys.output_labels.empty()) {
        j["labels"] = Json::object();
        if (!sys.state_labels.empty()) j["labels"]["states"] = sys.state_labels;
        if (!sys.output_labels.empty()) j["labels"]["outputs"] = sys.output_labels;
    }
    return j;
}

DescriptorSystem system_from_json(const Json& j) {
    try {
        Matrix E = matrix_from_json(j.at("E"), "E");
        Matrix A = matrix_from_json(j.at("A"), "A");
        Matrix C = matrix_from_json(j.at("C"), "C");
        DescriptorSystem sys;
        if (j.contains("B") || j.contains("D")) {
            Matrix B = matrix_from_json(j.at("B"), "B");
            Matrix D = matrix_from_json(j.at("D"), "D");
            sys = DescriptorSystem::make(E, A, B, C, D);
        } else {
            sys = canonical_attack_form(E, A, C);
        }
        if (j.contains("labels")) {
            const Json& lab = j.at("labels");
            if (lab.contains("states")) sys.state_labels = lab.at("states").get<std::vector<std::string>>();
            if (lab.contains("outputs"))
                sys.output_labels = lab.at("outputs").get<std::vector<std::string>>();
        }
        if (j.contains("n") && j.at("n").get<Index>() != sys.n())
            throw DataFileError("declared n disagrees with the matrices");
        if (j.contains("p") && j.at("p").get<Index>() != sys.p())
            throw DataFileError("declared p disagrees with the matrices");
        return sys;
    } catch (const Json::exception& e) {
        throw DataFileError(std::string("bad system file: ") + e.what());
    } catch (const DimensionError& e) {
        throw DataFileError(std::string("bad system file: ") + e.what());
    }
}

DescriptorSystem load_system(const std::string& path) { return system_from_json(read_json_file(path)); }

void save_system(const DescriptorSystem& sys, const std::string& path) {
    write_json_file(system_to_json(sys), path);
}

namespace {

Json pattern_matrix_to_json(const PatternMatrix& p) {
    Json rows = Json::array();
    for (Index i = 0; i < p.rows; ++i) {
        Json row = Json::array();
        for (Index j = 0; j < p.cols; ++j) {
            const PatternEntry& e = p.at(i, j);
            if (!e.free)
                row.push_back(0);
            else if (e.lo == 0.1 && e.hi == 1.0)
                row.push_back("free");
            else
                row.push_back(Json{{"range", {e.lo, e.hi}}});
        }
        rows.push_back(row);
    }
    return rows;
}

PatternMatrix pattern_matrix_from_json(const Json& j, const char* name) {
    if (!j.is_array()) throw DataFileError(std::string(name) + " must be an array");
    const Index rows = static_cast<Index>(j.size());
    const Index cols = rows > 0 ? static_cast<Index>(j.at(0).size()) : 0;
    PatternMatrix p = PatternMatrix::zero(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index c = 0; c < cols; ++c) {
            const Json& e = j.at(static_cast<size_t>(i)).at(static_cast<size_t>(c));
            if (e.is_number()) {
                if (e.get<double>() != 0.0)
                    throw DataFileError(std::string(name) + ": numeric entries must be 0");
            } else if (e.is_string() && e.get<std::string>() == "free") {
                p.at(i, c) = PatternEntry::free_default();
            } else if (e.is_object() && e.contains("range")) {
                p.at(i, c) = PatternEntry::ranged(e.at("range").at(0).get<double>(),
                                                  e.at("range").at(1).get<double>());
            } else {
                throw DataFileError(std::string(name) + ": entry must be 0, \"free\" or {range}");
            }
        }
    return p;
}

}  // namespace

Json pattern_to_json(const StructuredSystem& s) {
    Json j;
    j["E_pattern"] = pattern_matrix_to_json(s.E);
    j["A_pattern"] = pattern_matrix_to_json(s.A);
    j["B_pattern"] = pattern_matrix_to_json(s.B);
    j["C_pattern"] = pattern_matrix_to_json(s.C);
    j["D_pattern"] = pattern_matrix_to_json(s.D);
    if (!s.ties.empty()) {
        Json ties = Json::array();
        for (const DerivedTie& t : s.ties) {
            Json tj;
            tj["matrix"] = std::string(1, t.matrix);
            tj["target"] = {t.ti, t.tj};
            tj["scale"] = t.scale;
            Json src = Json::array();
            for (auto [i, c] : t.sources) src.push_back(Json::array({i, c}));
            tj["sources"] = src;
            ties.push_back(tj);
        }
        j["derived"] = ties;
    }
    return j;
}

StructuredSystem pattern_from_json(const Json& j) {
    StructuredSystem s;
    s.E = pattern_matrix_from_json(j.at("E_pattern"), "E_pattern");
    s.A = pattern_matrix_from_json(j.at("A_pattern"), "A_pattern");
    s.B = pattern_matrix_from_json(j.at("B_pattern"), "B_pattern");
    s.C = pattern_matrix_from_json(j.at("C_pattern"), "C_pattern");
    s.D = pattern_matrix_from_json(j.at("D_pattern"), "D_pattern");
    if (j.contains("derived")) {
        for (const Json& tj : j.at("derived")) {
            DerivedTie t;
            t.matrix = tj.at("matrix").get<std::string>().at(0);
            t.ti = tj.at("target").at(0).get<Index>();
            t.tj = tj.at("target").at(1).get<Index>();
            t.scale = tj.at("scale").get<double>();
            for (const Json& src : tj.at("sources"))
                t.sources.emplace_back(src.at(0).get<Index>(), src.at(1).get<Index>());
            s.ties.push_back(t);
        }
    }
    return s;
}

StructuredSystem load_pattern(const std::string& path) {
    return pattern_from_json(read_json_file(path));
}

Json attack_to_json(const AttackSignal& a) {
    Json j;
    j["attack_set"] = a.attack_set.indices;
    Json modes = Json::array();
    for (const Mode& m : a.modes) {
        Json mj;
        mj["s"] = complex_to_json(m.s);
        mj["g"] = cvector_to_json(m.g);
        modes.push_back(mj);
    }
    j["modes"] = modes;
    Json fb = Json::array();
    for (const FeedbackTerm& t : a.feedback) {
        Json tj;
        tj["F"] = matrix_to_json(t.F);
        switch (t.source) {
            case FeedbackTerm::Source::Dynamic: tj["block"] = "x1"; break;
            case FeedbackTerm::Source::FullState: tj["block"] = "full"; break;
            case FeedbackTerm::Source::Indices:
                tj["block"] = "indices";
                tj["indices"] = t.indices;
                break;
        }
        fb.push_back(tj);
    }
    j["feedback"] = fb;
    j["constant"] = a.constant.size() ? vector_to_json(a.constant) : Json::array();
    if (a.filter) {
        Json fj;
        fj["A"] = matrix_to_json(a.filter->A);
        fj["B"] = matrix_to_json(a.filter->B);
        fj["C"] = matrix_to_json(a.filter->C);
        fj["D"] = matrix_to_json(a.filter->D);
        Json ref;
        switch (a.filter->input.kind()) {
            case TimeSignal::Kind::Zero: ref["kind"] = "zero"; break;
            case TimeSignal::Kind::Constant:
                ref["kind"] = "constant";
                ref["amplitude"] = vector_to_json(a.filter->input.amplitude());
                break;
            case TimeSignal::Kind::Step:
                ref["kind"] = "step";
                ref["amplitude"] = vector_to_json(a.filter->input.amplitude());
                ref["t0"] = a.filter->input.t0();
                break;
            case TimeSignal::Kind::Sinusoid:
                ref["kind"] = "sinusoid";
                ref["amplitude"] = vector_to_json(a.filter->input.amplitude());
                ref["omega"] = vector_to_json(a.filter->input.omega());
                ref["phase"] = vector_to_json(a.filter->input.phase());
                break;
            case TimeSignal::Kind::Custom:
                throw DataFileError("custom filter references are not serializable");
        }
        ref["dim"] = a.filter->input.dim();
        fj["ref"] = ref;
        j["filter"] = fj;
    }
    return j;
}

namespace {

TimeSignal signal_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return TimeSignal::zero(j.value("dim", Index{0}));
    if (kind == "constant") return TimeSignal::constant(vector_from_json(j.at("amplitude")));
    if (kind == "step")
        return TimeSignal::step(vector_from_json(j.at("amplitude")), j.value("t0", 0.0));
    if (kind == "sinusoid")
        return TimeSignal::sinusoid(vector_from_json(j.at("amplitude")),
                                    vector_from_json(j.at("omega")),
                                    vector_from_json(j.at("phase")));
    throw DataFileError("unknown signal kind: " + kind);
}

}  // namespace

AttackSignal attack_from_json(const Json& j) {
    try {
        AttackSignal a;
        a.attack_set = AttackSet::of(j.at("attack_set").get<std::vector<int>>());
        for (const Json& mj : j.value("modes", Json::array())) {
            Mode m;
            m.s = complex_from_json(mj.at("s"));
            m.g = cvector_from_json(mj.at("g"));
            a.modes.push_back(m);
        }
        for (const Json& tj : j.value("feedback", Json::array())) {
            FeedbackTerm t;
            t.F = matrix_from_json(tj.at("F"), "F");
            const std::string block = tj.value("block", "full");
            if (block == "x1" || block == "dynamic")
                t.source = FeedbackTerm::Source::Dynamic;
            else if (block == "full")
                t.source = FeedbackTerm::Source::FullState;
            else if (block == "indices") {
                t.source = FeedbackTerm::Source::Indices;
                t.indices = tj.at("indices").get<std::vector<int>>();
            } else {
                throw DataFileError("unknown feedback block: " + block);
            }
            a.feedback.push_back(t);
        }
        if (j.contains("constant") && !j.at("constant").empty())
            a.constant = vector_from_json(j.at("constant"));
        if (j.contains("filter")) {
            const Json& fj = j.at("filter");
            LtiFilter f;
            f.A = matrix_from_json(fj.at("A"), "filter.A");
            f.B = matrix_from_json(fj.at("B"), "filter.B");
            f.C = matrix_from_json(fj.at("C"), "filter.C");
            f.D = matrix_from_json(fj.at("D"), "filter.D");
            f.input = signal_from_json(fj.at("ref"));
            a.filter = f;
        }
        return a;
    } catch (const Json::exception& e) {
        throw DataFileError(std::string("bad attack file: ") + e.what());
    }
}

AttackSignal load_attack(const std::string& path) { return attack_from_json(read_json_file(path)); }

void save_attack(const AttackSignal& a, const std::string& path) {
    write_json_file(attack_to_json(a), path);
}

Json verdict_to_json(const DetectabilityVerdict& v, bool budget_exhausted) {
    Json j;
    j["undetectable"] = v.undetectable;
    switch (v.monitor_class) {
        case MonitorClass::Static: j["monitor"] = "static"; break;
        case MonitorClass::Dynamic: j["monitor"] = "dynamic"; break;
        case MonitorClass::Active: j["monitor"] = "active"; break;
    }
    j["budget_exhausted"] = budget_exhausted;
    if (v.witness) {
        Json w;
        w["s"] = complex_to_json(v.witness->s);
        w["x"] = cvector_to_json(v.witness->x);
        w["g"] = cvector_to_json(v.witness->g);
        w["residual"] = v.witness->residual;
        j["witness"] = w;
    } else if (v.static_witness) {
        Json w;
        w["x"] = vector_to_json(v.static_witness->x);
        w["u"] = vector_to_json(v.static_witness->u);
        j["witness"] = w;
    }
    return j;
}

Json monitor_verdict_to_json(const MonitorVerdict& v) {
    Json j;
    j["psi1"] = v.psi1;
    j["psi2"] = v.psi2;
    j["residual_norm"] = v.residual_norm;
    j["threshold"] = v.threshold;
    j["budget_exhausted"] = v.budget_exhausted;
    if (!v.ambiguity.empty()) {
        Json amb = Json::array();
        for (const AttackSet& s : v.ambiguity) amb.push_back(s.indices);
        j["ambiguity"] = amb;
    }
    return j;
}

Json zeros_to_json(const std::vector<InvariantZero>& zeros) {
    Json arr = Json::array();
    for (const InvariantZero& z : zeros) {
        Json zj;
        zj["s"] = complex_to_json(z.s);
        zj["x"] = cvector_to_json(z.x);
        zj["g"] = cvector_to_json(z.g);
        zj["residual"] = z.residual;
        arr.push_back(zj);
    }
    return arr;
}

namespace {

std::vector<std::string> trace_columns(const SimulationTrace& trace) {
    std::vector<std::string> cols = {"t"};
    for (Index i = 0; i < trace.x.cols(); ++i) cols.push_back("x_" + std::to_string(i + 1));
    for (Index i = 0; i < trace.y.cols(); ++i) cols.push_back("y_" + std::to_string(i + 1));
    for (Index i = 0; i < trace.u.cols(); ++i) cols.push_back("u_" + std::to_string(i + 1));
    for (Index i = 0; i < trace.w.cols(); ++i) cols.push_back("w_" + std::to_string(i + 1));
    return cols;
}

double trace_value(const SimulationTrace& trace, Index row, const std::string& col) {
    if (col == "t") return trace.t(row);
    const char kind = col.at(0);
    const Index idx = std::stol(col.substr(2)) - 1;
    switch (kind) {
        case 'x': return trace.x(row, idx);
        case 'y': return trace.y(row, idx);
        case 'u': return trace.u(row, idx);
        case 'w': return trace.w(row, idx);
        default: throw DataFileError("unknown trace column " + col);
    }
}

}  // namespace

void write_trace_csv(const SimulationTrace& trace, const std::string& path,
                     const std::vector<std::string>& selections) {
    std::vector<std::string> cols = selections.empty() ? trace_columns(trace) : selections;
    if (!selections.empty() && std::find(cols.begin(), cols.end(), "t") == cols.end())
        cols.insert(cols.begin(), "t");
    std::ofstream out(path);
    if (!out) throw DataFileError("cannot write " + path);
    out << std::setprecision(15);
    for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (Index r = 0; r < trace.steps(); ++r) {
        for (size_t i = 0; i < cols.size(); ++i)
            out << (i ? "," : "") << trace_value(trace, r, cols[i]);
        out << "\n";
    }
}

SimulationTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataFileError("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw DataFileError("empty trace file");
    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    Index nx = 0, ny = 0, nu = 0, nw = 0;
    for (const std::string& c : cols) {
        if (c.rfind("x_", 0) == 0) ++nx;
        if (c.rfind("y_", 0) == 0) ++ny;
        if (c.rfind("u_", 0) == 0) ++nu;
        if (c.rfind("w_", 0) == 0) ++nw;
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        if (vals.size() != cols.size()) throw DataFileError("ragged trace row");
        rows.push_back(vals);
    }
    SimulationTrace tr;
    const Index steps = static_cast<Index>(rows.size());
    tr.t = Vector(steps);
    tr.x = Matrix(steps, nx);
    tr.y = Matrix(steps, ny);
    tr.u = Matrix(steps, nu);
    tr.w = Matrix(steps, nw);
    for (Index r = 0; r < steps; ++r) {
        for (size_t c = 0; c < cols.size(); ++c) {
            const double v = rows[static_cast<size_t>(r)][c];
            const std::string& name = cols[c];
            if (name == "t")
                tr.t(r) = v;
            else if (name.rfind("x_", 0) == 0)
                tr.x(r, std::stol(name.substr(2)) - 1) = v;
            else if (name.rfind("y_", 0) == 0)
                tr.y(r, std::stol(name.substr(2)) - 1) = v;
            else if (name.rfind("u_", 0) == 0)
                tr.u(r, std::stol(name.substr(2)) - 1) = v;
            else if (name.rfind("w_", 0) == 0)
                tr.w(r, std::stol(name.substr(2)) - 1) = v;
        }
    }
    tr.dt = steps > 1 ? tr.t(1) - tr.t(0) : 0.0;
    return tr;
}

void write_trace_svg(const SimulationTrace& trace, const std::string& path,
                     const std::vector<std::string>& selections) {
    std::vector<std::string> cols = selections;
    if (cols.empty()) {
        cols = trace_columns(trace);
        cols.erase(cols.begin());  // drop t
    }
    const int W = 800, H = 400, margin = 40;
    double lo = 0.0, hi = 0.0;
    for (Index r = 0; r < trace.steps(); ++r)
        for (const std::string& c : cols) {
            const double v = trace_value(trace, r, c);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (hi - lo < 1e-12) hi = lo + 1.0;
    const double t0 = trace.t(0), t1 = trace.t(trace.steps() - 1);

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::ofstream out(path);
    if (!out) throw DataFileError("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    auto px = [&](double t) { return margin + (t - t0) / (t1 - t0 + 1e-300) * (W - 2 * margin); };
    auto py = [&](double v) { return H - margin - (v - lo) / (hi - lo) * (H - 2 * margin); };
    out << "<line x1=\"" << margin << "\" y1=\"" << py(0.0) << "\" x2=\"" << W - margin
        << "\" y2=\"" << py(0.0) << "\" stroke=\"#cccccc\"/>\n";
    for (size_t ci = 0; ci < cols.size(); ++ci) {
        out << "<polyline fill=\"none\" stroke=\"" << palette[ci % 8] << "\" stroke-width=\"1.2\" points=\"";
        const Index stride = std::max<Index>(1, trace.steps() / 2000);
        for (Index r = 0; r < trace.steps(); r += stride)
            out << px(trace.t(r)) << "," << py(trace_value(trace, r, cols[ci])) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << W - margin + 2 << "\" y=\"" << 15 + 14 * static_cast<int>(ci)
            << "\" font-size=\"11\" fill=\"" << palette[ci % 8] << "\">" << cols[ci] << "</text>\n";
    }
    out << "</svg>\n";
}

std::string system_fingerprint(const DescriptorSystem& sys) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&](const Matrix& M) {
        for (Index i = 0; i < M.rows(); ++i)
            for (Index j = 0; j < M.cols(); ++j) {
                const double v = M(i, j);
                const auto* bytes = reinterpret_cast<const unsigned char*>(&v);
                for (size_t b = 0; b < sizeof(double); ++b) {
                    h ^= bytes[b];
                    h *= 1099511628211ull;
                }
            }
    };
    mix(sys.E);
    mix(sys.A);
    mix(sys.B);
    mix(sys.C);
    mix(sys.D);
    std::ostringstream os;
    os << "n" << sys.n() << "p" << sys.p() << "m" << sys.m() << "-" << std::hex << std::setw(16)
       << std::setfill('0') << h;
    return os.str();
}

Json AnalysisReport::to_json(bool include_timings) const {
    Json j;
    j["tool_version"] = tool_version;
    j["fingerprint"] = fingerprint;
    j["settings"] = settings;
    if (include_timings) {
        j["steps"] = steps;
    } else {
        Json stripped = Json::array();
        for (Json s : steps) {
            s.erase("wall_ms");
            stripped.push_back(s);
        }
        j["steps"] = stripped;
    }
    return j;
}

AnalysisReport AnalysisReport::from_json(const Json& j) {
    AnalysisReport rep;
    try {
        rep.tool_version = j.at("tool_version").get<std::string>();
        rep.fingerprint = j.at("fingerprint").get<std::string>();
        rep.steps = j.at("steps");
        rep.settings = j.at("settings");
    } catch (const Json::exception& e) {
        throw DataFileError(std::string("bad report: ") + e.what());
    }
    return rep;
}

bool validate_schema(const Json& doc, const Json& schema, std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return false;
    };
    if (schema.contains("type")) {
        const std::string t = schema.at("type").get<std::string>();
        if (t == "object" && !doc.is_object()) return fail("expected object");
        if (t == "array" && !doc.is_array()) return fail("expected array");
        if (t == "string" && !doc.is_string()) return fail("expected string");
        if (t == "number" && !doc.is_number()) return fail("expected number");
        if (t == "integer" && !doc.is_number_integer()) return fail("expected integer");
        if (t == "boolean" && !doc.is_boolean()) return fail("expected boolean");
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const Json& v : schema.at("enum"))
            if (v == doc) ok = true;
        if (!ok) return fail("value not in enum");
    }
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const Json& key : schema.at("required"))
                if (!doc.contains(key.get<std::string>()))
                    return fail("missing required key " + key.get<std::string>());
        if (schema.contains("properties"))
            for (auto it = schema.at("properties").begin(); it != schema.at("properties").end(); ++it)
                if (doc.contains(it.key()))
                    if (!validate_schema(doc.at(it.key()), it.value(), error)) return false;
    }
    if (doc.is_array() && schema.contains("items")) {
        for (const Json& item : doc)
            if (!validate_schema(item, schema.at("items"), error)) return false;
    }
    return true;
}

}  // namespace cpsa
