#include "cpsa/signals.hpp"

#include <cmath>

namespace cpsa {

TimeSignal TimeSignal::zero(Index dim) {
    TimeSignal s;
    s.kind_ = Kind::Zero;
    s.dim_ = dim;
    return s;
}

TimeSignal TimeSignal::constant(Vector value) {
    TimeSignal s;
    s.kind_ = Kind::Constant;
    s.dim_ = value.size();
    s.amplitude_ = std::move(value);
    return s;
}

TimeSignal TimeSignal::step(Vector amplitude, double t0) {
    TimeSignal s;
    s.kind_ = Kind::Step;
    s.dim_ = amplitude.size();
    s.amplitude_ = std::move(amplitude);
    s.t0_ = t0;
    return s;
}

TimeSignal TimeSignal::sinusoid(Vector amplitude, Vector omega, Vector phase) {
    if (amplitude.size() != omega.size() || amplitude.size() != phase.size())
        throw DimensionError("sinusoid parameter sizes differ");
    TimeSignal s;
    s.kind_ = Kind::Sinusoid;
    s.dim_ = amplitude.size();
    s.amplitude_ = std::move(amplitude);
    s.omega_ = std::move(omega);
    s.phase_ = std::move(phase);
    return s;
}

TimeSignal TimeSignal::custom(Index dim, std::function<Vector(double)> f) {
    TimeSignal s;
    s.kind_ = Kind::Custom;
    s.dim_ = dim;
    s.custom_ = std::move(f);
    return s;
}

Vector TimeSignal::operator()(double t) const {
    switch (kind_) {
        case Kind::Zero:
            return Vector::Zero(dim_);
        case Kind::Constant:
            return amplitude_;
        case Kind::Step:
            return t >= t0_ ? amplitude_ : Vector(Vector::Zero(dim_));
        case Kind::Sinusoid: {
            Vector v(dim_);
            for (Index i = 0; i < dim_; ++i)
                v(i) = amplitude_(i) * std::sin(omega_(i) * t + phase_(i));
            return v;
        }
        case Kind::Custom:
            return custom_(t);
    }
    return Vector::Zero(dim_);
}

Vector eval_modes(const std::vector<Mode>& modes, Index k, double t) {
    Vector u = Vector::Zero(k);
    for (const Mode& m : modes) {
        if (m.g.size() != k) throw DimensionError("mode direction size mismatch");
        const Complex est = std::exp(m.s * t);
        if (std::abs(m.s.imag()) < 1e-12 * (1.0 + std::abs(m.s))) {
            u += (m.g * est).real();
        } else {
            u += 2.0 * (m.g * est).real();
        }
    }
    return u;
}

Vector AttackSignal::open_loop(double t) const {
    Vector u = eval_modes(modes, k(), t);
    if (constant.size() == k()) u += constant;
    return u;
}

}  // namespace cpsa
