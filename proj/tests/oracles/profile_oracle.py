"""Independent oracle for the similarity profile.

Solves (1/alpha) p(rho)_yy + (y/2) rho_y = 0 on [-L, L] with Dirichlet ends as a
first-order collocation BVP in the pressure variable (scipy.integrate.solve_bvp),
then prints nodal values and the flatness constants computed from the dense
collocation solution. The printed numbers are frozen into tests/test_profile.cpp.
"""
import numpy as np
from scipy.integrate import solve_bvp


def solve(rho_m, rho_p, alpha, gamma=2.0, k=1.0, L=8.0):
    def rho_of(P):
        return (np.maximum(P, 1e-300) / k) ** (1.0 / gamma)

    def rhs(y, u):
        P, Py = u
        rho = rho_of(P)
        dp = k * gamma * rho ** (gamma - 1.0)
        return np.vstack([Py, -alpha * 0.5 * y * Py / dp])

    def bc(ua, ub):
        return np.array([ua[0] - k * rho_m**gamma, ub[0] - k * rho_p**gamma])

    y = np.linspace(-L, L, 4001)
    r0 = 0.5 * (rho_m + rho_p) + 0.5 * (rho_p - rho_m) * np.tanh(y)
    u0 = np.vstack([k * r0**gamma, np.gradient(k * r0**gamma, y)])
    sol = solve_bvp(rhs, bc, y, u0, tol=1e-11, max_nodes=2_000_000, bc_tol=1e-13)
    assert sol.success, sol.message
    return sol


def constants(sol, alpha, gamma=2.0, k=1.0, L=8.0, h=1e-3):
    yy = np.arange(-L, L + h / 2, h)
    P, Py = sol.sol(yy)
    rho = (P / k) ** (1.0 / gamma)
    n = -Py / alpha
    if gamma > 1:
        hp = k * gamma / (gamma - 1.0) * rho ** (gamma - 1.0)
    else:
        hp = k * (np.log(rho) + 1.0)
    hpyy = np.gradient(np.gradient(hp, h), h)
    theta = max(2.0, gamma - 1.0) * np.max(np.maximum(hpyy[2:-2] / alpha, 0.0))
    ny = np.gradient(n, h)
    fy = np.gradient(n * n / rho, h)
    R = -0.5 * yy * ny - 0.5 * n + fy
    mu = np.max((np.abs(R) / (2 * k * rho**gamma) + 1.5 * np.abs(R) / rho)[2:-2])
    K = np.sum(np.abs(R)[2:-2]) * h
    return theta, mu, K


if __name__ == "__main__":
    probe = [-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0]
    for (rm, rp, a) in [(1.2, 0.8, 1.0), (1.05, 0.95, 1.0)]:
        sol = solve(rm, rp, a)
        P = sol.sol(np.array(probe))[0]
        print(f"limits ({rm}, {rp}) alpha={a}")
        print("  rho*:", ", ".join(f"{v:.12f}" for v in np.sqrt(P)))
        th, mu, K = constants(sol, a)
        print(f"  theta={th:.8f} mu={mu:.8f} K={K:.8f}")

    # Profile pair inserted into the entropy identity
    # eta_tau - (y/2) eta_y + q_y + alpha n^2/rho at tau = 0, by the chain rule.
    a, gamma, k = 1.0, 2.0, 1.0
    sol = solve(1.2, 0.8, a)
    print("entropy identity on the (1.2, 0.8) profile, tau=0")
    for y in [-1.0, 0.5, 1.0]:
        P, Py = sol.sol(np.array([y]))[:, 0]
        rho = (P / k) ** (1.0 / gamma)
        dp = k * gamma * rho ** (gamma - 1.0)
        Pyy = -a * 0.5 * y * Py / dp
        rho_y = Py / dp
        n, n_y = -Py / a, -Pyy / a
        hp = k * gamma / (gamma - 1.0) * rho ** (gamma - 1.0)
        hpp = k * gamma * rho ** (gamma - 2.0)
        eta_tau = -n * n / (2 * rho)
        eta_y = n * n_y / rho - n * n * rho_y / (2 * rho**2) + hp * rho_y
        q_y = 1.5 * n * n * n_y / rho**2 - n**3 * rho_y / rho**3 + n_y * hp + n * hpp * rho_y
        print(f"  y={y}: {eta_tau - 0.5 * y * eta_y + q_y + a * n * n / rho:.10e}")
