#include "cpsa/synthesis.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace cpsa {

namespace {

// Rotate (x, g) by a unit phase so the largest state entry is real positive;
// keeps 2 Re(x) from degenerating when x is close to purely imaginary.
void normalize_phase(CVector& x, CVector& g) {
    Index imax = 0;
    double best = -1.0;
    for (Index i = 0; i < x.size(); ++i)
        if (std::abs(x(i)) > best) {
            best = std::abs(x(i));
            imax = i;
        }
    if (best <= 0.0) return;
    const Complex phase = std::conj(x(imax)) / std::abs(x(imax));
    x *= phase;
    g *= phase;
}

bool essentially_real(Complex s) { return std::abs(s.imag()) < 1e-10 * (1.0 + std::abs(s)); }

}  // namespace

ZeroDynamicsAttack synth_zero_dynamics_attack(const DescriptorSystem& sys, const AttackSet& K,
                                              const ZeroOptions& opts) {
    DetectabilityVerdict v = dynamic_undetectable(sys, K, opts);
    if (!v.undetectable || !v.witness)
        throw NoWitnessError("attack set has no zero-dynamics witness");

    InvariantZero z = *v.witness;
    CVector x = z.x;
    CVector g = z.g;
    normalize_phase(x, g);

    ZeroDynamicsAttack atk;
    atk.witness = z;
    atk.signal.attack_set = K;
    Mode m;
    if (essentially_real(z.s)) {
        m.s = Complex(z.s.real(), 0.0);
        m.g = g.real().cast<Complex>();
        atk.x0 = x.real();
    } else {
        m.s = z.s;
        m.g = g;
        atk.x0 = 2.0 * x.real();
    }
    atk.signal.modes = {m};
    return atk;
}

AttackSignal synth_static_stealth_attack(const DescriptorSystem& sys, const AttackSet& K_output) {
    for (int idx : K_output.indices)
        if (idx <= sys.n())
            throw PreconditionError("stealth attack expects output channels only");
    DetectabilityVerdict v = static_undetectable(sys, K_output);
    if (!v.undetectable || !v.static_witness)
        throw NoWitnessError("Im(D_K) does not meet Im(C): no stealthy output attack");
    AttackSignal a;
    a.attack_set = K_output;
    a.constant = v.static_witness->u;
    return a;
}

CVector RationalNullVector::eval(Complex s) const {
    CVector v(static_cast<Index>(entries.size()));
    for (size_t i = 0; i < entries.size(); ++i) v(static_cast<Index>(i)) = entries[i].eval(s);
    return v;
}

LtiFilter RationalNullVector::realize(const TimeSignal& ubar) const {
    if (ubar.dim() != 1) throw DimensionError("nullspace filter takes a scalar reference");
    // One controllable-canonical block per dynamic entry; constant entries are
    // pure feedthrough.
    Index total = 0;
    for (const auto& e : entries) total += std::max(e.den.degree(), 0);

    const Index k = static_cast<Index>(entries.size());
    LtiFilter f;
    f.A = Matrix::Zero(total, total);
    f.B = Matrix::Zero(total, 1);
    f.C = Matrix::Zero(k, total);
    f.D = Matrix::Zero(k, 1);
    f.input = ubar;

    Index at = 0;
    for (size_t ei = 0; ei < entries.size(); ++ei) {
        const RationalFunction& rf = entries[ei];
        const int d = rf.den.degree();
        if (d <= 0) {
            f.D(static_cast<Index>(ei), 0) = rf.num.coeff(0) / rf.den.coeff(0);
            continue;
        }
        if (rf.num.degree() > d)
            throw PreconditionError("nullspace entry is improper; cannot realize as a filter");
        Poly den = rf.den.monic();
        Poly num = rf.num.scaled(1.0 / rf.den.lead());
        // Split off the feedthrough: num = c_inf * den + rem, deg(rem) < d.
        const double c_inf = num.coeff(d);
        Poly rem = num - den.scaled(c_inf);

        for (int i = 0; i + 1 < d; ++i) f.A(at + i, at + i + 1) = 1.0;
        for (int i = 0; i < d; ++i) f.A(at + d - 1, at + i) = -den.coeff(i);
        f.B(at + d - 1, 0) = 1.0;
        for (int i = 0; i < d; ++i) f.C(static_cast<Index>(ei), at + i) = rem.coeff(i);
        f.D(static_cast<Index>(ei), 0) = c_inf;
        at += d;
    }
    return f;
}

RationalNullVector transfer_nullspace(const DescriptorSystem& sys, const AttackSignature& sig,
                                      const ZeroOptions& opts) {
    const Index k = sig.B_K.cols();
    KronReducedSystem kr = kron_reduce(sys, sig);
    const Index n1 = kr.n1();

    // Polynomial numerator matrix: N(s) = C adj(sI - A) B + D chi(s),
    // so G(s) = N(s) / chi(s).
    CharPolyAdjugate fl = charpoly_adjugate(kr.A_til);
    auto entry_poly = [&](Index i, Index j) {
        std::vector<double> c(static_cast<size_t>(n1) + 1, 0.0);
        for (Index q = 0; q < n1; ++q)
            c[static_cast<size_t>(q)] =
                kr.C_til.row(i) * fl.adj[static_cast<size_t>(q)] * kr.B_til.col(j);
        for (Index q = 0; q <= n1; ++q)
            c[static_cast<size_t>(q)] += kr.D_til(i, j) * fl.charpoly.coeff(static_cast<int>(q));
        return Poly(std::move(c));
    };

    // Normal rank of G via the Rosenbrock pencil (rank P(s) = n + rank G(s)
    // away from eigenvalues); avoids the inversion roundoff of evaluating G.
    Rng rng(opts.seed ^ 0x611e);
    const double scale = pencil_probe_scale(Matrix::Identity(n1, n1), kr.A_til);
    RosenbrockPencil P = RosenbrockPencil::build(sys, sig);
    Index normal_rank = 0;
    for (int t = 0; t < 3; ++t) {
        const Complex s = rng.complex_point(scale);
        normal_rank = std::max(normal_rank, numeric_rank(P.at(s)).rank - sys.n());
    }
    if (normal_rank >= k)
        throw TrivialNullSpaceError("transfer matrix has full column normal rank");

    RationalNullVector nv;
    if (k == 1) {
        nv.entries = {RationalFunction{Poly::constant(1.0), Poly::constant(1.0)}};
    } else if (k == 2 && normal_rank == 1) {
        // Null vector from a nonzero row i: N = [-G_{i2}; G_{i1}].
        Index best_row = 0;
        double best = -1.0;
        std::vector<std::pair<Poly, Poly>> rows;
        for (Index i = 0; i < kr.p(); ++i) {
            Poly p1 = entry_poly(i, 0);
            Poly p2 = entry_poly(i, 1);
            double weight = 0.0;
            for (double c : p1.coeffs()) weight = std::max(weight, std::abs(c));
            for (double c : p2.coeffs()) weight = std::max(weight, std::abs(c));
            rows.emplace_back(std::move(p1), std::move(p2));
            if (weight > best) {
                best = weight;
                best_row = i;
            }
        }
        const Poly& p1 = rows[static_cast<size_t>(best_row)].first;
        const Poly& p2 = rows[static_cast<size_t>(best_row)].second;
        if (!p1.is_zero()) {
            // Normalize the last entry to 1.
            RationalFunction first{p2.scaled(-1.0), p1};
            nv.entries = {first.simplified(), RationalFunction{Poly::constant(1.0), Poly::constant(1.0)}};
        } else {
            RationalFunction second{p1.scaled(-1.0), p2};
            nv.entries = {RationalFunction{Poly::constant(1.0), Poly::constant(1.0)}, second.simplified()};
        }
    } else {
        // Interpolation + least-squares rational fit with common denominator
        // degree n1 and the last entry pinned to 1.
        const int d = static_cast<int>(n1);
        const int npts = 4 * (d + 1);
        std::vector<Complex> pts;
        std::vector<CVector> nulls;
        for (int t = 0; t < npts; ++t) {
            const Complex s = rng.complex_point(scale);
            CMatrix G = transfer_at(kr, s);
            auto [sigma, vvec] = smallest_singular_pair(G);
            (void)sigma;
            // Pin the entry of largest average magnitude to 1 later; collect raw.
            pts.push_back(s);
            nulls.push_back(vvec);
        }
        // Choose the pivot entry with the largest worst-case magnitude.
        Index pivot = k - 1;
        double best = -1.0;
        for (Index e = 0; e < k; ++e) {
            double lo = std::numeric_limits<double>::infinity();
            for (const CVector& v : nulls) lo = std::min(lo, std::abs(v(e)));
            if (lo > best) {
                best = lo;
                pivot = e;
            }
        }
        // Fit each entry_e(s) = num_e(s)/den(s) with den monic of degree d:
        // linearize: num_e(s_j) - v_e(s_j) den(s_j) = 0.
        const int unknowns = (d + 1) * static_cast<int>(k - 1) + d;  // nums + den (monic)
        CMatrix Amat = CMatrix::Zero(static_cast<Index>(npts) * (k - 1), unknowns);
        CVector bvec = CVector::Zero(static_cast<Index>(npts) * (k - 1));
        for (int j = 0; j < npts; ++j) {
            const Complex s = pts[static_cast<size_t>(j)];
            CVector v = nulls[static_cast<size_t>(j)] / nulls[static_cast<size_t>(j)](pivot);
            Index row = static_cast<Index>(j) * (k - 1);
            Index er = 0;
            for (Index e = 0; e < k; ++e) {
                if (e == pivot) continue;
                Complex spow(1.0, 0.0);
                for (int q = 0; q <= d; ++q) {
                    Amat(row + er, er * (d + 1) + q) = spow;
                    spow *= s;
                }
                spow = Complex(1.0, 0.0);
                for (int q = 0; q < d; ++q) {
                    Amat(row + er, (k - 1) * (d + 1) + q) -= v(e) * spow;
                    spow *= s;
                }
                bvec(row + er) = v(e) * spow;  // s^d term of the monic denominator
                ++er;
            }
        }
        CVector sol = Amat.colPivHouseholderQr().solve(bvec);
        std::vector<double> den_c(static_cast<size_t>(d) + 1, 0.0);
        for (int q = 0; q < d; ++q) den_c[static_cast<size_t>(q)] = sol((k - 1) * (d + 1) + q).real();
        den_c[static_cast<size_t>(d)] = 1.0;
        Poly den(den_c);
        nv.entries.assign(static_cast<size_t>(k), RationalFunction{Poly::constant(1.0), Poly::constant(1.0)});
        Index er = 0;
        for (Index e = 0; e < k; ++e) {
            if (e == pivot) continue;
            std::vector<double> nc(static_cast<size_t>(d) + 1, 0.0);
            for (int q = 0; q <= d; ++q) nc[static_cast<size_t>(q)] = sol(er * (d + 1) + q).real();
            nv.entries[static_cast<size_t>(e)] = RationalFunction{Poly(nc), den}.simplified();
            ++er;
        }
    }

    // Verification hook: residual of G(s) N(s) at sample points.
    double res = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Complex s = rng.complex_point(scale);
        CMatrix G = transfer_at(kr, s);
        CVector nvec = nv.eval(s);
        const double denom = G.norm() * nvec.norm() + 1e-12;
        res = std::max(res, (G * nvec).norm() / denom);
    }
    nv.residual = res;
    if (res > 1e-6)
        throw Error(ErrorKind::Numeric, "transfer nullspace residual exceeds tolerance");
    return nv;
}

TransferNullspaceAttack synth_transfer_nullspace_attack(const DescriptorSystem& sys,
                                                        const AttackSet& K,
                                                        const TimeSignal& ubar,
                                                        const ZeroOptions& opts) {
    AttackSignature sig = signature(sys, K);
    TransferNullspaceAttack atk;
    atk.nullvector = transfer_nullspace(sys, sig, opts);
    atk.signal.attack_set = K;
    atk.signal.filter = atk.nullvector.realize(ubar);
    return atk;
}

namespace {

PrototypeAttack make_covert(const DescriptorSystem& sys, const PrototypeParams& params) {
    if (!sys.is_canonical_attack_form())
        throw PreconditionError("covert attack needs the canonical attack form");
    if (params.state_channels.empty())
        throw PreconditionError("covert attack needs at least one state channel");
    for (int c : params.state_channels)
        if (c < 1 || c > sys.n()) throw PreconditionError("covert channels must be state channels");

    const Index n = sys.n();
    const Index p = sys.p();
    const Index kx = static_cast<Index>(params.state_channels.size());

    std::vector<int> channels = params.state_channels;
    for (Index i = 0; i < p; ++i) channels.push_back(static_cast<int>(n + i + 1));
    AttackSet K = AttackSet::of(channels);

    // Attacker's model of its own effect: the plant driven by u_x alone.
    AttackSignature sig_x = signature(sys, AttackSet::of(params.state_channels));
    KronReducedSystem kr = kron_reduce(sys, sig_x);

    // Channel layout inside K (sorted): state channels first, then outputs.
    TimeSignal ux = params.covert_input.dim() == kx
                        ? params.covert_input
                        : TimeSignal::step(Vector::Ones(kx));

    LtiFilter f;
    f.A = kr.A_til;
    f.B = kr.B_til;
    f.C = Matrix::Zero(static_cast<Index>(K.k()), kr.n1());
    f.D = Matrix::Zero(static_cast<Index>(K.k()), kx);
    f.C.bottomRows(p) = -kr.C_til;   // u_y = -C x_a
    f.D.topRows(kx) = Matrix::Identity(kx, kx);  // u_x passthrough
    f.D.bottomRows(p) = -kr.D_til;
    f.input = ux;

    PrototypeAttack atk;
    atk.kind = PrototypeKind::Covert;
    atk.signal.attack_set = K;
    atk.signal.filter = f;
    atk.x0 = Vector::Zero(n);
    atk.description = "state attack with closed-loop output cancellation";
    return atk;
}

PrototypeAttack make_false_data(const DescriptorSystem& sys) {
    // Hide the unstable mode: along x(t) = x e^{st} the output contribution
    // C x e^{st} is cancelled on its support channels.
    std::optional<std::pair<Complex, CVector>> unstable;
    for (const auto& [s, x] : finite_eigenpairs(sys.E, sys.A)) {
        if (s.real() > 1e-9) {
            unstable = {s, x};
            break;
        }
    }
    if (!unstable)
        throw PreconditionError("false-data injection needs an unstable eigenvalue");
    auto [s, x] = *unstable;
    CVector cx = sys.C.cast<Complex>() * x;
    const double scale = std::max(1.0, cx.norm());
    std::vector<int> channels;
    std::vector<Index> rows;
    for (Index r = 0; r < cx.size(); ++r)
        if (std::abs(cx(r)) > 1e-9 * scale) {
            channels.push_back(static_cast<int>(sys.n() + r + 1));
            rows.push_back(r);
        }
    if (channels.empty())
        throw PreconditionError("unstable mode is already invisible in the outputs");

    CVector g(static_cast<Index>(rows.size()));
    for (size_t j = 0; j < rows.size(); ++j) g(static_cast<Index>(j)) = -cx(rows[j]);
    CVector xr = x;
    normalize_phase(xr, g);

    PrototypeAttack atk;
    atk.kind = PrototypeKind::FalseData;
    atk.signal.attack_set = AttackSet::of(channels);
    Mode m;
    if (essentially_real(s)) {
        m.s = Complex(s.real(), 0.0);
        m.g = g.real().cast<Complex>();
        atk.x0 = xr.real();
    } else {
        m.s = s;
        m.g = g;
        atk.x0 = 2.0 * xr.real();
    }
    atk.signal.modes = {m};
    atk.description = "output attack hiding an unstable mode";
    return atk;
}

}  // namespace

PrototypeAttack synth_prototype(const DescriptorSystem& sys, PrototypeKind kind,
                                const PrototypeParams& params) {
    switch (kind) {
        case PrototypeKind::Stealth: {
            PrototypeAttack atk;
            atk.kind = kind;
            atk.signal = synth_static_stealth_attack(sys, params.output_set);
            atk.x0 = Vector::Zero(sys.n());
            atk.description = "output attack inside Im(C)";
            return atk;
        }
        case PrototypeKind::Covert:
            return make_covert(sys, params);
        case PrototypeKind::FalseData:
            return make_false_data(sys);
        case PrototypeKind::Replay: {
            if (params.replay_state_channel < 1 || params.replay_state_channel > sys.n())
                throw PreconditionError("replay needs a state channel to disturb");
            PrototypeAttack atk;
            atk.kind = kind;
            ReplayScenario sc;
            sc.record_start = params.record_start;
            sc.replay_start = params.replay_start;
            sc.window = params.window;
            sc.state_attack.attack_set = AttackSet::of({params.replay_state_channel});
            sc.state_attack.constant = Vector::Constant(1, params.replay_magnitude);
            atk.signal = sc.state_attack;
            atk.scenario = sc;
            atk.x0 = Vector::Zero(sys.n());
            atk.description = "record-and-replay of the measurements";
            return atk;
        }
    }
    throw PreconditionError("unknown prototype kind");
}

AttackSignal synth_water_theft_attack(const WaterDemo& demo) {
    const DescriptorSystem& sys = demo.sys;
    const Index n = sys.n();
    const int x1 = demo.x1_state;
    const int p2 = demo.p2_state;
    if (x1 < 1 || p2 < 1 || p2 > n || demo.s1_output < 1)
        throw ModelShapeError("water demo partition is incomplete");
    if (sys.A.row(x1 - 1).cwiseAbs().maxCoeff() > 1e-12)
        throw ModelShapeError("storage balance row is not decoupled");
    const double a31 = sys.A(p2 - 1, x1 - 1);
    if (a31 == 0.0) throw ModelShapeError("pump coupling A31 vanished");

    AttackSignal a;
    a.attack_set = demo.theft_set;  // {x1, p2, n + s1} sorted
    const Index kch = a.k();
    auto row_of = [&](int channel) {
        for (size_t j = 0; j < a.attack_set.k(); ++j)
            if (a.attack_set.indices[j] == channel) return static_cast<Index>(j);
        throw ModelShapeError("theft attack channel missing from the attack set");
    };
    const Index r1 = row_of(x1);
    const Index r2 = row_of(p2);
    const Index r3 = row_of(static_cast<int>(n) + demo.s1_output);

    a.constant = Vector::Zero(kch);
    a.constant(r1) = -1.0;  // u1: steady withdrawal

    FeedbackTerm fb;
    fb.source = FeedbackTerm::Source::Indices;
    fb.indices = {x1};
    fb.F = Matrix::Zero(kch, 1);
    fb.F(r2, 0) = -a31;  // u2: decouple the network from the falling pressure
    fb.F(r3, 0) = -1.0;  // u3: blind the storage sensor
    a.feedback = {fb};
    return a;
}

}  // namespace cpsa
