"""Octonion arithmetic via the Cayley-Dickson construction.

Octonions are 8-vectors with the real part in slot 0.  The multiplication
table is generated by doubling R -> C -> H -> O with the recursion
(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)), never hand-entered, so
the table itself is an artifact the test suite can interrogate.  All
arithmetic is dtype-agnostic: integer and Fraction inputs stay exact.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

DIM = 8


def _cd_mul(x: list, y: list) -> list:
    """Cayley-Dickson product of coefficient lists of length 2^m."""
    n = len(x)
    if n == 1:
        return [x[0] * y[0]]
    h = n // 2
    a, b = x[:h], x[h:]
    c, d = y[:h], y[h:]
    return (_cd_sub(_cd_mul(a, c), _cd_mul(_cd_conj(d), b))
            + _cd_add(_cd_mul(d, a), _cd_mul(b, _cd_conj(c))))


def _cd_conj(x: list) -> list:
    return [x[0]] + [-c for c in x[1:]]


def _cd_add(x: list, y: list) -> list:
    return [a + b for a, b in zip(x, y)]


def _cd_sub(x: list, y: list) -> list:
    return [a - b for a, b in zip(x, y)]


def _build_table() -> list[list[tuple[int, int]]]:
    """table[i][j] = (k, sign) with e_i e_j = sign * e_k."""
    table = []
    for i in range(DIM):
        row = []
        ei = [1 if t == i else 0 for t in range(DIM)]
        for j in range(DIM):
            ej = [1 if t == j else 0 for t in range(DIM)]
            prod = _cd_mul(ei, ej)
            nz = [(k, c) for k, c in enumerate(prod) if c != 0]
            assert len(nz) == 1 and abs(nz[0][1]) == 1
            row.append((nz[0][0], nz[0][1]))
        table.append(row)
    return table


MUL_TABLE = _build_table()

#: structure[i, j, k] = coefficient of e_k in e_i e_j (floats, for einsum use)
STRUCTURE = np.zeros((DIM, DIM, DIM))
for _i in range(DIM):
    for _j in range(DIM):
        _k, _s = MUL_TABLE[_i][_j]
        STRUCTURE[_i, _j, _k] = _s


def mul(x: Sequence, y: Sequence):
    """Octonion product, exact for exact inputs."""
    out = [0] * DIM
    for i in range(DIM):
        xi = x[i]
        if xi == 0:
            continue
        row = MUL_TABLE[i]
        for j in range(DIM):
            yj = y[j]
            if yj == 0:
                continue
            k, s = row[j]
            out[k] = out[k] + xi * yj if s > 0 else out[k] - xi * yj
    return _like(x, y, out)


def conj(x: Sequence):
    return _like(x, x, [x[0]] + [-x[i] for i in range(1, DIM)])


def dot(x: Sequence, y: Sequence):
    """Euclidean pairing; equals Re(x * conj(y))."""
    return sum(x[i] * y[i] for i in range(DIM))


def norm(x: Sequence) -> float:
    return float(np.sqrt(float(dot(x, x))))


def basis(i: int) -> tuple:
    """Basis unit o_i, real part at i = 0."""
    return tuple(1 if t == i else 0 for t in range(DIM))


def associator(x: Sequence, y: Sequence, z: Sequence):
    """(xy)z - x(yz); zero exactly on any associative subalgebra."""
    return _like(x, y, [a - b for a, b in zip(mul(mul(x, y), z), mul(x, mul(y, z)))])


def cross3(x: Sequence, y: Sequence, z: Sequence):
    """Triple cross product (1/2)(x (conj(y) z) - z (conj(y) x)).

    Alternating in (x, y, z); for orthonormal arguments the result is a
    unit octonion orthogonal to all three.
    """
    cy = conj(y)
    lhs = mul(x, mul(cy, z))
    rhs = mul(z, mul(cy, x))
    half = [(a - b) / 2 for a, b in zip(lhs, rhs)]
    return _like(x, y, half)


def cayley_identity_residual(x: Sequence, y: Sequence, z: Sequence, u: Sequence) -> float:
    """Imaginary-part mismatch of (x(conj(y)z))conj(u) and (z(conj(y)x))conj(u).

    The two products differ by twice the triple cross product times
    conj(u).  For an orthonormal frame that difference is a real scalar
    (+-2) exactly when span{x,y,z,u} is closed under the triple cross,
    i.e. a Cayley 4-plane, so the imaginary parts agree precisely there.
    Comparing the full products instead would report a constant gap of 2
    on every Cayley plane, which is why the real part is excluded.
    """
    cy = conj(y)
    cu = conj(u)
    lhs = mul(mul(x, mul(cy, z)), cu)
    rhs = mul(mul(z, mul(cy, x)), cu)
    diff = [a - b for a, b in zip(lhs[1:], rhs[1:])]
    return float(np.sqrt(float(sum(d * d for d in diff))))


def _like(x, y, out: list):
    """Return a numpy array when either input is one, else a tuple."""
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        return np.asarray(out, dtype=float)
    return tuple(out)
