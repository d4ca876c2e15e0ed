#pragma once

namespace adpol {

/// One classical fourth-order Runge-Kutta step of dy/dz = f(z, y).
/// State needs vector-space operations: State + State and double * State.
template <class State, class Rhs>
[[nodiscard]] State rk4_step(const Rhs& f, double z, const State& y, double h) {
    const double half = 0.5 * h;
    const State k1 = f(z, y);
    const State k2 = f(z + half, y + half * k1);
    const State k3 = f(z + half, y + half * k2);
    const State k4 = f(z + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace adpol
