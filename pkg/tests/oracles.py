"""Independent reference values.

Closed forms for the two built-in qubit pairs, plus brute-force routines
that share no code with the package (scipy.linalg matrix functions, dense
grid maximization, explicit enumeration of sequences).
"""

import itertools
import math

import numpy as np
from scipy.linalg import expm, fractional_matrix_power, logm

# rho* = diag(3/4, 1/4); sigma* = 0.6 |+><+| + 0.4 |-><-|
REF_RHO = np.diag([0.75, 0.25])
REF_SIGMA = np.array([[0.5, 0.1], [0.1, 0.5]])

# diag(1/2, 1/2) against diag(1/4, 3/4)
BERN_P = np.array([0.5, 0.5])
BERN_Q = np.array([0.25, 0.75])


def ref_phi(s):
    """For sigma* diagonal in |+>,|->, every |<x_i|y_j>|^2 equals 1/2."""
    s = np.asarray(s, dtype=float)
    return np.log((0.75 ** (1 - s) + 0.25 ** (1 - s)) * (0.6**s + 0.4**s) / 2)


REF_NS_P = np.array([0.375, 0.375, 0.125, 0.125])
REF_NS_Q = np.array([0.3, 0.2, 0.3, 0.2])
REF_NS_SUPPORT = ((0, 0), (0, 1), (1, 0), (1, 1))

REF_D_RHO_SIGMA = 0.75 * math.log(0.75) + 0.25 * math.log(0.25) - 0.5 * (math.log(0.6) + math.log(0.4))
REF_D_SIGMA_RHO = 0.6 * math.log(0.6) + 0.4 * math.log(0.4) - 0.5 * (math.log(0.75) + math.log(0.25))


def ref_phi_tilde_half() -> float:
    """``log Tr exp((log rho* + log sigma*) / 2)`` written out in Pauli components."""
    c0 = 0.25 * (math.log(0.75) + math.log(0.25)) + 0.25 * (math.log(0.6) + math.log(0.4))
    cz = 0.25 * (math.log(0.75) - math.log(0.25))
    cx = 0.25 * (math.log(0.6) - math.log(0.4))
    return c0 + math.log(2 * math.cosh(math.hypot(cz, cx)))


# Helstrom risk at delta = 1, n = 1: 1 - (1/2)||rho* - sigma*||_1;
# rho* - sigma* = [[.25, -.1], [-.1, -.25]] has eigenvalues +-sqrt(.0725).
REF_HELSTROM_RISK = 1.0 - math.sqrt(0.0725)


def bern_phi(s):
    s = np.asarray(s, dtype=float)
    return np.log(BERN_P[0] ** (1 - s) * BERN_Q[0] ** s + BERN_P[1] ** (1 - s) * BERN_Q[1] ** s)


BERN_D_PQ = float(np.sum(BERN_P * np.log(BERN_P / BERN_Q)))
BERN_D_QP = float(np.sum(BERN_Q * np.log(BERN_Q / BERN_P)))


def dense_phi(rho, sigma, s) -> float:
    """``log Tr[rho^(1-s) sigma^s]`` via scipy's fractional matrix powers."""
    val = np.trace(fractional_matrix_power(rho, 1 - s) @ fractional_matrix_power(sigma, s))
    return math.log(val.real)


def dense_phi_tilde(rho, sigma, s) -> float:
    return math.log(np.trace(expm((1 - s) * logm(rho) + s * logm(sigma))).real)


def dense_relative_entropy(rho, sigma) -> float:
    return float(np.trace(rho @ (logm(rho) - logm(sigma))).real)


def grid_legendre(phi_fn, a, points: int = 200_001) -> float:
    """``max_s (a s - phi(s))`` by brute force on a dense s-grid."""
    s = np.linspace(0.0, 1.0, points)
    return float(np.max(a * s - phi_fn(s)))


def grid_hoeffding(phi_fn, r: float, points: int = 200_001) -> float:
    """``max_{0<=s<1} (-s r - phi(s)) / (1 - s)`` by brute force, ``s`` up to ``1 - 1e-6``."""
    s = np.linspace(0.0, 1.0 - 1e-6, points)
    return float(np.max((-s * r - phi_fn(s)) / (1 - s)))


def enumerate_tails(p, q, n: int, b: float) -> tuple:
    """``(f_n(b), g_n(b))`` by summing over all ``m^n`` sequences."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    f = g = 0.0
    for seq in itertools.product(range(p.size), repeat=n):
        pn = math.prod(p[i] for i in seq)
        qn = math.prod(q[i] for i in seq)
        if pn <= math.exp(-n * b) * qn * (1 + 1e-12):
            f += pn
        else:
            g += qn
    return f, g


def kron_power(a, n: int):
    out = np.array([[1.0]])
    for _ in range(n):
        out = np.kron(out, a)
    return out
