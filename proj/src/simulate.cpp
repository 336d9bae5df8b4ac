#include "cpsa/simulate.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>

namespace cpsa {

namespace {

struct AugmentedModel {
    // state zeta = [z1; xf]
    Matrix Atil;          // reduced plant dynamics (open loop)
    Index n1 = 0, nf = 0, k = 0;

    // u = Gz z1 + Gf xf + S (uol(t) + Df r(t) + P2w wx(t))
    Matrix Gz, Gf, S, Df, P2w;
    // z1' = ... + Bu*(u terms) + Bw wx
    Matrix Bu, Bw;
    Matrix Af, Bf;

    // recovery and output maps
    Matrix Rx, Ru, Rw;    // z2 = Rx z1 + Ru u + Rw wx
    Matrix C1, C2, DK;
    Matrix A21, A22, Bk2, W2;  // algebraic residual bookkeeping

    const AttackSignal* attack = nullptr;
    const TimeSignal* w = nullptr;
    StatePartition part;
    Index n = 0, p = 0;

    Vector u_of(double t, const Vector& z1, const Vector& xf) const {
        Vector acc = attack ? attack->open_loop(t) : Vector::Zero(k);
        if (nf > 0) acc += Df * attack->filter->input(t);
        if (w) acc += P2w * w_x(t);
        Vector u = S * acc + Gz * z1;
        if (nf > 0) u += Gf * xf;
        return u;
    }

    Vector w_x(double t) const {
        Vector wv = (*w)(t);
        return wv.head(n);
    }
    Vector w_y(double t) const {
        Vector wv = (*w)(t);
        return wv.tail(p);
    }

    // Full derivative of [z1; xf]; u closes the loop through the recovered
    // algebraic state, already resolved into Gz/Gf/S.
    Vector deriv(double t, const Vector& zeta) const {
        const Vector z1 = zeta.head(n1);
        const Vector xf = zeta.tail(nf);
        Vector f(n1 + nf);
        Vector top = Atil * z1;
        if (k > 0) top += Bu * u_of(t, z1, xf);
        if (w) top += Bw * w_x(t);
        f.head(n1) = top;
        if (nf > 0) f.tail(nf) = Af * xf + Bf * attack->filter->input(t);
        return f;
    }
};

Matrix feedback_matrix(const AttackSignal& attack, const StatePartition& part, Index n) {
    const Index k = attack.k();
    const Index n1 = part.n1();
    Matrix Phi = Matrix::Zero(k, n);  // blocked coordinates
    for (const FeedbackTerm& term : attack.feedback) {
        if (term.F.rows() != k) throw DimensionError("feedback gain must have k rows");
        switch (term.source) {
            case FeedbackTerm::Source::Dynamic:
                if (term.F.cols() != n1) throw DimensionError("dynamic-block feedback gain size");
                Phi.leftCols(n1) += term.F;
                break;
            case FeedbackTerm::Source::FullState:
                if (term.F.cols() != n) throw DimensionError("full-state feedback gain size");
                Phi += term.F * part.T_right;
                break;
            case FeedbackTerm::Source::Indices: {
                if (term.F.cols() != static_cast<Index>(term.indices.size()))
                    throw DimensionError("indexed feedback gain size");
                Matrix Ffull = Matrix::Zero(k, n);
                for (size_t j = 0; j < term.indices.size(); ++j) {
                    const int idx = term.indices[j];
                    if (idx < 1 || idx > n) throw DimensionError("feedback state index out of range");
                    Ffull.col(idx - 1) = term.F.col(static_cast<Index>(j));
                }
                Phi += Ffull * part.T_right;
                break;
            }
        }
    }
    return Phi;
}

AugmentedModel assemble(const DescriptorSystem& sys, const AttackSignal* attack,
                        const TimeSignal* w) {
    AugmentedModel m;
    m.attack = attack;
    m.w = w;
    m.n = sys.n();
    m.p = sys.p();
    m.part = partition_index_one(sys);
    const Index n1 = m.part.n1();
    const Index n2 = m.part.n2();
    m.n1 = n1;

    Matrix Ab = m.part.blocked(sys.A);
    Matrix Cb = m.part.blocked_output(sys.C);
    Matrix A11 = Ab.topLeftCorner(n1, n1);
    Matrix A12 = Ab.topRightCorner(n1, n2);
    m.A21 = Ab.bottomLeftCorner(n2, n1);
    m.A22 = Ab.bottomRightCorner(n2, n2);
    m.C1 = Cb.leftCols(n1);
    m.C2 = Cb.rightCols(n2);

    // Attack columns.
    m.k = attack ? attack->k() : 0;
    Matrix B_K(sys.n(), m.k), D_K(sys.p(), m.k);
    if (attack) {
        AttackSignature sig = signature(sys, attack->attack_set);
        B_K = sig.B_K;
        D_K = sig.D_K;
    }
    m.DK = D_K;
    Matrix Bkb = m.part.blocked_input(B_K);
    Matrix Bk1 = Bkb.topRows(n1);
    m.Bk2 = Bkb.bottomRows(n2);

    // Monitor-input columns (identity over states).
    Matrix W1(n1, 0), W2(n2, 0);
    if (w) {
        if (w->dim() != sys.n() + sys.p())
            throw DimensionError("monitor signal w must have n + p entries");
        W1 = m.part.T_left.topRows(n1);
        W2 = m.part.T_left.bottomRows(n2);
    }
    m.W2 = W2;

    Eigen::PartialPivLU<Matrix> a22(m.A22);
    Eigen::PartialPivLU<Matrix> e11(m.part.E11);
    m.Rx = n2 > 0 ? Matrix(-a22.solve(m.A21)) : Matrix(0, n1);
    m.Ru = n2 > 0 ? Matrix(-a22.solve(m.Bk2)) : Matrix(0, m.k);
    m.Rw = (n2 > 0 && w) ? Matrix(-a22.solve(W2)) : Matrix(n2 > 0 ? n2 : 0, w ? sys.n() : 0);

    m.Atil = n2 > 0 ? Matrix(e11.solve(Matrix(A11 + A12 * m.Rx))) : Matrix(e11.solve(A11));
    m.Bu = e11.solve(Matrix(Bk1 + A12 * m.Ru));
    m.Bw = w ? Matrix(e11.solve(Matrix(W1 + A12 * m.Rw))) : Matrix(n1, 0);

    // Resolve the (possibly closed-loop) input map.
    Matrix Phi = attack ? feedback_matrix(*attack, m.part, sys.n()) : Matrix::Zero(m.k, sys.n());
    Matrix Phi1 = Phi.leftCols(n1);
    Matrix Phi2 = Phi.rightCols(n2);
    Matrix loop = Matrix::Identity(m.k, m.k) - Phi2 * m.Ru;
    if (m.k > 0 && numeric_rank(loop).rank < m.k)
        throw ModelShapeError("state feedback closes a singular algebraic loop");
    m.S = m.k > 0 ? Matrix(loop.partialPivLu().inverse()) : Matrix(0, 0);
    m.Gz = m.k > 0 ? Matrix(m.S * (Phi1 + Phi2 * m.Rx)) : Matrix(0, n1);
    m.P2w = (m.k > 0 && w) ? Matrix(Phi2 * m.Rw) : Matrix(m.k, w ? sys.n() : 0);

    // Filter block.
    m.nf = (attack && attack->filter) ? attack->filter->A.rows() : 0;
    if (m.nf > 0) {
        const LtiFilter& f = *attack->filter;
        if (f.C.rows() != m.k || f.D.rows() != m.k)
            throw DimensionError("filter output must have k rows");
        m.Af = f.A;
        m.Bf = f.B;
        m.Gf = m.S * f.C;
        m.Df = f.D;
    }
    return m;
}

}  // namespace

SimulationTrace simulate(const DescriptorSystem& sys, const Vector& x0, const AttackSignal* attack,
                         const TimeSignal* w, const SimulationOptions& opts) {
    if (x0.size() != sys.n()) throw DimensionError("x0 must have n entries");
    if (opts.dt <= 0) throw DimensionError("dt must be positive");

    AugmentedModel m = assemble(sys, attack, w);
    const Index n1 = m.n1;
    const Index n2 = m.part.n2();
    const Index steps = static_cast<Index>(std::llround(opts.horizon / opts.dt)) + 1;

    SimulationTrace tr;
    tr.dt = opts.dt;
    tr.t = Vector(steps);
    tr.x = Matrix(steps, sys.n());
    tr.y = Matrix(steps, sys.p());
    tr.u = Matrix(steps, m.k);
    tr.w = Matrix(steps, w ? sys.n() + sys.p() : 0);

    Vector zeta = Vector::Zero(n1 + m.nf);
    zeta.head(n1) = m.part.to_blocked(x0).head(n1);
    if (!opts.project_initial) {
        // still recomputed below; the flag only affects the consistency check
        if (!check_consistent_initial(sys, x0, Vector::Zero(sys.m())))
            throw PreconditionError("x0 is not consistent and projection is disabled");
    }

    double res_max = 0.0;
    const Matrix ydir = m.C1 + (n2 > 0 ? Matrix(m.C2 * m.Rx) : Matrix::Zero(sys.p(), n1));

    auto emit = [&](Index i, double t) {
        const Vector z1 = zeta.head(n1);
        const Vector xf = zeta.tail(m.nf);
        const Vector u = m.k > 0 ? m.u_of(t, z1, xf) : Vector(0);
        Vector z2 = n2 > 0 ? Vector(m.Rx * z1) : Vector(0);
        if (n2 > 0 && m.k > 0) z2 += m.Ru * u;
        if (n2 > 0 && w) z2 += m.Rw * m.w_x(t);
        Vector z(sys.n());
        z << z1, z2;
        const Vector x = m.part.to_original(z);
        Vector y = sys.C * x;
        if (m.k > 0) y += m.DK * u;
        if (w) y += m.w_y(t);

        tr.t(i) = t;
        tr.x.row(i) = x.transpose();
        tr.y.row(i) = y.transpose();
        if (m.k > 0) tr.u.row(i) = u.transpose();
        if (w) tr.w.row(i) = (*w)(t).transpose();

        if (n2 > 0) {
            Vector res = m.A21 * z1 + m.A22 * z2;
            if (m.k > 0) res += m.Bk2 * u;
            if (w) res += m.W2 * m.w_x(t);
            res_max = std::max(res_max, res.norm() / (1.0 + x.norm()));
        }
        if (x.norm() > opts.overflow_guard)
            throw StepUnstableError("state norm exceeded the overflow guard");
    };

    const double dt = opts.dt;
    for (Index i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        emit(i, t);
        if (i + 1 == steps) break;
        Vector k1 = m.deriv(t, zeta);
        Vector k2 = m.deriv(t + 0.5 * dt, zeta + 0.5 * dt * k1);
        Vector k3 = m.deriv(t + 0.5 * dt, zeta + 0.5 * dt * k2);
        Vector k4 = m.deriv(t + dt, zeta + dt * k3);
        zeta += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    tr.algebraic_residual_max = res_max;
    return tr;
}

double suggest_dt(const DescriptorSystem& sys) {
    AttackSet empty;
    AttackSignature sig;
    sig.B_K = Matrix(sys.n(), 0);
    sig.D_K = Matrix(sys.p(), 0);
    KronReducedSystem kr = kron_reduce(sys, sig);
    Eigen::EigenSolver<Matrix> es(kr.A_til, false);
    double slow = std::numeric_limits<double>::infinity();
    double fast = 0.0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex ev = es.eigenvalues()(i);
        const double re = std::abs(ev.real());
        if (re > 1e-6) slow = std::min(slow, re);
        fast = std::max(fast, std::abs(ev));
    }
    double dt = 0.01;
    if (std::isfinite(slow) && slow > 0) dt = 0.01 / slow;
    if (fast > 0) dt = std::min(dt, 0.5 / fast);
    return std::clamp(dt, 1e-4, 0.1);
}

namespace {

TimeSignal shifted(const TimeSignal& s, double t0) {
    switch (s.kind()) {
        case TimeSignal::Kind::Zero:
        case TimeSignal::Kind::Constant:
            return s;
        case TimeSignal::Kind::Step:
            return TimeSignal::step(s.amplitude(), s.t0() + t0);
        case TimeSignal::Kind::Sinusoid: {
            Vector phase = s.phase();
            for (Index i = 0; i < phase.size(); ++i) phase(i) -= s.omega()(i) * t0;
            return TimeSignal::sinusoid(s.amplitude(), s.omega(), phase);
        }
        case TimeSignal::Kind::Custom: {
            TimeSignal copy = s;
            return TimeSignal::custom(s.dim(), [copy, t0](double t) { return copy(t - t0); });
        }
    }
    return s;
}

}  // namespace

SimulationTrace run_replay(const DescriptorSystem& sys, const Vector& x0,
                           const ReplayScenario& scenario, const TimeSignal* w,
                           const SimulationOptions& opts) {
    // Clean pass records the measurements to be replayed.
    SimulationTrace clean = simulate(sys, x0, nullptr, w, opts);
    const Index i_rec = static_cast<Index>(std::llround(scenario.record_start / opts.dt));
    const Index i_rep = static_cast<Index>(std::llround(scenario.replay_start / opts.dt));
    const Index len = static_cast<Index>(std::llround(scenario.window / opts.dt));
    if (i_rec < 0 || i_rep < 0 || i_rec + len > clean.steps() || i_rep + len > clean.steps())
        throw DimensionError("replay windows fall outside the simulation horizon");

    // Attacked pass, split at the window opening: the state attack runs from
    // replay_start onward on its own clock.
    SimulationTrace before = simulate(sys, x0, nullptr, w, {scenario.replay_start, opts.dt,
                                                            opts.overflow_guard, opts.project_initial});
    Vector x_mid = before.x.row(before.steps() - 1).transpose();

    SimulationOptions rest = opts;
    rest.horizon = opts.horizon - scenario.replay_start;
    TimeSignal w_rest = w ? shifted(*w, -scenario.replay_start) : TimeSignal();
    AttackSignal local = scenario.state_attack;  // window-local clock
    SimulationTrace after = simulate(sys, x_mid, &local, w ? &w_rest : nullptr, rest);

    SimulationTrace out = clean;
    out.u = Matrix::Zero(clean.steps(), scenario.state_attack.k());
    for (Index i = i_rep; i < clean.steps(); ++i) {
        const Index j = i - i_rep;
        out.x.row(i) = after.x.row(j);
        out.y.row(i) = after.y.row(j);
        out.u.row(i) = after.u.row(j);
    }
    // Measurement substitution over the replay window: the output attack
    // replaces y with the recording.
    for (Index i = 0; i < len; ++i) out.y.row(i_rep + i) = clean.y.row(i_rec + i);
    out.algebraic_residual_max = std::max(clean.algebraic_residual_max, after.algebraic_residual_max);
    return out;
}

}  // namespace cpsa
