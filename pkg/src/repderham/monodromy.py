"""Local monodromy of a 2x2 Fuchsian system on the t-line.

Exact results are expressed with :class:`PiScalar`, a polynomial in ``pi*i``
with rational coefficients, so entries such as ``4/3*pi*i`` survive without
rounding.  Flat sections solve ``v' = -E(t) v``.  The numeric oracle
integrates that system along explicit loops with scipy.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from gmpy2 import is_square, isqrt, mpq
from scipy.integrate import solve_ivp

from .algebra import RationalFunction, format_rational, to_mpq
from .gaussmanin import (
    HigherOrderPoleError,
    RationalFunctionMatrix,
    connection_matrix,
    rank2_subsystem,
    residue,
)

INF = "inf"


class ResonanceError(ValueError):
    """Eigenvalues differ by a nonzero integer; use the shearing path."""


class UnexpectedSpectrumError(ValueError):
    pass


class PoleProximityError(ValueError):
    pass


class NonConvergenceError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# exact scalars in Q[pi*i]
# ---------------------------------------------------------------------------

class PiScalar:
    """``sum c_k (pi*i)^k`` with rational ``c_k``."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        if isinstance(coeffs, PiScalar):
            self.c = coeffs.c
            return
        if coeffs is None:
            coeffs = {}
        elif not isinstance(coeffs, dict):
            coeffs = {0: coeffs}
        self.c = {k: to_mpq(v) for k, v in coeffs.items() if v}

    @classmethod
    def pi_i(cls, coeff=1) -> "PiScalar":
        return cls({1: coeff})

    def _coerce(self, other) -> "PiScalar":
        return other if isinstance(other, PiScalar) else PiScalar(other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, 0) + v
        return PiScalar(out)

    __radd__ = __add__

    def __neg__(self):
        return PiScalar({k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict = {}
        for a, u in self.c.items():
            for b, v in o.c.items():
                out[a + b] = out.get(a + b, 0) + u * v
        return PiScalar(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            return self.c == self._coerce(other).c
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def __bool__(self):
        return bool(self.c)

    def __complex__(self):
        return complex(sum(float(v) * (math.pi * 1j) ** k for k, v in self.c.items()))

    def is_rational(self) -> bool:
        return set(self.c) <= {0}

    def __str__(self) -> str:
        if not self.c:
            return "0"
        parts = []
        for k in sorted(self.c):
            v = self.c[k]
            # (pi*i)^k = i^k pi^k
            if k % 4 >= 2:
                v = -v
            mag = abs(v)
            if k == 0:
                body = format_rational(mag)
            else:
                sym = "pi" if k == 1 else f"pi^{k}"
                if k % 2:
                    sym += "*i"
                body = sym if mag == 1 else f"{format_rational(mag)}*{sym}"
            parts.append((v < 0, body))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    __repr__ = __str__


def exp_2pi_i(lam, sign: int = 1) -> PiScalar | complex:
    """``exp(sign * 2 pi i lam)``: exact (+-1) when ``2 lam`` is an integer."""
    lam = to_mpq(lam) if not isinstance(lam, complex) else lam
    if not isinstance(lam, complex) and (2 * lam).denominator == 1:
        return PiScalar(1 if int(2 * lam) % 2 == 0 else -1)
    return cmath.exp(sign * 2j * math.pi * complex(lam))


# ---------------------------------------------------------------------------
# exact 2x2 helpers
# ---------------------------------------------------------------------------

def _mat(rows) -> tuple:
    return tuple(tuple(to_mpq(x) for x in r) for r in rows)


def _mul(a, b):
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), mpq(0)) for j in range(len(b[0])))
        for i in range(len(a))
    )


def _inv2(a):
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    if not det:
        raise ZeroDivisionError("singular 2x2 matrix")
    return ((a[1][1] / det, -a[0][1] / det), (-a[1][0] / det, a[0][0] / det))


def _sub_scalar(a, lam):
    return ((a[0][0] - lam, a[0][1]), (a[1][0], a[1][1] - lam))


def _rational_sqrt(q: mpq):
    if q < 0:
        return None
    n, d = int(q.numerator), int(q.denominator)
    if is_square(n) and is_square(d):
        return mpq(int(isqrt(n)), int(isqrt(d)))
    return None


def eigenvalues_2x2(a) -> tuple:
    """Eigenvalues, rational and descending when the discriminant is a square.

    Otherwise a pair of Python complex numbers is returned.
    """
    a = _mat(a)
    tr = a[0][0] + a[1][1]
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    disc = tr * tr - 4 * det
    root = _rational_sqrt(disc)
    if root is None:
        r = cmath.sqrt(float(disc))
        return ((float(tr) + r) / 2, (float(tr) - r) / 2)
    return ((tr + root) / 2, (tr - root) / 2)


def is_resonant(eigs: Sequence) -> bool:
    diff = eigs[0] - eigs[1]
    if isinstance(diff, complex):
        return abs(diff.imag) < 1e-12 and abs(diff.real - round(diff.real)) < 1e-12 and round(diff.real) != 0
    return diff.denominator == 1 and diff != 0


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass
class MonodromyMatrix:
    point: object
    matrix: tuple
    exact: bool
    error: float | None = None
    details: dict = field(default_factory=dict)

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(x) for x in row] for row in self.matrix], dtype=complex)

    def trace(self):
        if self.exact:
            return sum((self.matrix[i][i] for i in range(len(self.matrix))), PiScalar())
        return complex(np.trace(self.to_numpy()))

    def det(self):
        m = self.matrix
        if self.exact and len(m) == 2:
            return m[0][0] * m[1][1] - m[0][1] * m[1][0]
        return complex(np.linalg.det(self.to_numpy()))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.to_numpy())

    def is_unipotent(self, tol: float = 0.0) -> bool:
        """``(N - I)^2 == 0`` (exactly, or within ``tol`` for numeric matrices)."""
        n = len(self.matrix)
        if self.exact and tol == 0.0:
            m = [[self.matrix[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
            sq = [[sum((m[i][k] * m[k][j] for k in range(n)), PiScalar()) for j in range(n)] for i in range(n)]
            return all(not x for row in sq for x in row)
        m = self.to_numpy() - np.eye(n)
        return float(np.max(np.abs(m @ m))) <= tol

    def is_identity(self, tol: float = 0.0) -> bool:
        n = len(self.matrix)
        if self.exact and tol == 0.0:
            return all(self.matrix[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))
        return float(np.max(np.abs(self.to_numpy() - np.eye(n)))) <= tol

    def to_json(self) -> dict:
        if self.exact:
            entries = [[str(x) for x in row] for row in self.matrix]
        else:
            entries = [[_complex_str(complex(x)) for x in row] for row in self.matrix]
        out = {"point": _point_str(self.point), "exact": self.exact, "matrix": entries}
        if self.error is not None:
            out["error_estimate"] = f"{self.error:.3e}"
        return out


def _complex_str(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _point_str(p) -> str | None:
    if p is None or isinstance(p, str):
        return p
    return format_rational(p)


@dataclass
class LocalSystemData:
    residues: dict
    eigenvalues: dict
    resonant: dict

    def to_json(self) -> dict:
        return {
            _point_str(p): {
                "residue": [[format_rational(x) for x in row] for row in self.residues[p]],
                "eigenvalues": [format_rational(x) if not isinstance(x, complex) else _complex_str(x)
                                for x in self.eigenvalues[p]],
                "resonant": self.resonant[p],
            }
            for p in self.residues
        }


def _finite_poles(E: RationalFunctionMatrix) -> list:
    poles = set()
    for row in E.partial_fractions():
        for e in row:
            for t in e.terms:
                if t.order > 1:
                    raise HigherOrderPoleError(f"pole of order {t.order} at {t.at}")
                poles.add(t.at)
    return sorted(poles)


def local_system_data(E: RationalFunctionMatrix) -> LocalSystemData:
    """Residues, spectra and resonance flags at each finite pole and at infinity."""
    points = [*_finite_poles(E), INF]
    res = {p: _mat(residue(E, p)) for p in points}
    eigs = {p: eigenvalues_2x2(res[p]) for p in points}
    return LocalSystemData(res, eigs, {p: is_resonant(eigs[p]) for p in points})


# ---------------------------------------------------------------------------
# exact local monodromy
# ---------------------------------------------------------------------------

def _exp_residue(a, sign: int):
    """``exp(sign * 2 pi i a)`` for a non-resonant 2x2 rational matrix."""
    a = _mat(a)
    l1, l2 = eigenvalues_2x2(a)
    if isinstance(l1, complex):
        m = np.array([[float(x) for x in r] for r in a])
        w, v = np.linalg.eig(m)
        e = v @ np.diag(np.exp(sign * 2j * math.pi * w)) @ np.linalg.inv(v)
        return tuple(tuple(complex(x) for x in r) for r in e), False
    if is_resonant((l1, l2)):
        raise ResonanceError(
            f"eigenvalues {format_rational(l1)}, {format_rational(l2)} differ by a nonzero integer; "
            "use monodromy_resonant_infinity"
        )
    e1, e2 = exp_2pi_i(l1, sign), exp_2pi_i(l2, sign)
    exact = isinstance(e1, PiScalar) and isinstance(e2, PiScalar)
    if l1 == l2:
        # a = l + n with n^2 = 0, so exp = e^{l}(I + 2 pi i n)
        n = _sub_scalar(a, l1)
        k = PiScalar.pi_i(2 * sign)
        rows = tuple(
            tuple(e1 * ((1 if i == j else 0) + k * n[i][j]) if exact
                  else e1 * ((1 if i == j else 0) + complex(k) * float(n[i][j]))
                  for j in range(2))
            for i in range(2)
        )
        return rows, exact
    # spectral projectors
    p1 = tuple(tuple(x / (l1 - l2) for x in r) for r in _sub_scalar(a, l2))
    p2 = tuple(tuple(x / (l2 - l1) for x in r) for r in _sub_scalar(a, l1))
    rows = tuple(tuple(e1 * p1[i][j] + e2 * p2[i][j] for j in range(2)) for i in range(2))
    return rows, exact


def local_monodromy_nonresonant(A, point=None, *, sign: int = 1) -> MonodromyMatrix:
    """``exp(2 pi i A)`` (``sign=-1`` gives ``exp(-2 pi i A)``) via exact spectral projectors."""
    rows, exact = _exp_residue(A, sign)
    eigs = eigenvalues_2x2(A)
    return MonodromyMatrix(point, rows, exact, details={"residue": _mat(A), "eigenvalues": eigs})


def monodromy_resonant_infinity(E: RationalFunctionMatrix, *, sign: int = -1) -> MonodromyMatrix:
    """Monodromy at infinity after one shearing step.

    With ``t = 1/z`` the system becomes ``C(z)/z dz`` where
    ``C(z) = -sum_p A_p / (1 - p z)``.  The first two Taylor coefficients
    ``C(0) = A_inf`` and ``C'(0) = -sum_p p A_p`` are enough: after
    diagonalizing ``C(0)`` (eigenvalues ``l1 = l2 + 1``) and applying the gauge
    ``diag(z, 1)``, the new residue is ``[[l1 - 1, B1_12], [0, l2]]``.
    """
    poles = _finite_poles(E)
    res = {p: _mat(residue(E, p)) for p in poles}
    for row in E.partial_fractions():
        for e in row:
            if e.poly:
                raise HigherOrderPoleError("connection matrix is not regular at infinity")
    zero = ((mpq(0), mpq(0)), (mpq(0), mpq(0)))
    a0, a1 = zero, zero
    for p, A in res.items():
        a0 = tuple(tuple(a0[i][j] - A[i][j] for j in range(2)) for i in range(2))
        a1 = tuple(tuple(a1[i][j] - p * A[i][j] for j in range(2)) for i in range(2))
    l1, l2 = eigenvalues_2x2(a0)
    if isinstance(l1, complex) or l1 - l2 != 1:
        raise UnexpectedSpectrumError(f"shearing needs an eigenvalue gap of 1, got {l1} and {l2}")
    p_mat = tuple(zip(_eigenvector(a0, l1), _eigenvector(a0, l2)))
    b1 = _mul(_mul(_inv2(p_mat), a1), p_mat)
    phi = ((l1 - 1, b1[0][1]), (mpq(0), l2))
    rows, exact = _exp_residue(phi, sign)
    return MonodromyMatrix(
        INF, rows, exact,
        details={"A0": a0, "A1": a1, "P": p_mat, "B1": b1, "phi": phi, "eigenvalues": (l1, l2)},
    )


def _eigenvector(a, lam) -> tuple:
    m = _sub_scalar(a, lam)
    # a nonzero vector in the kernel of a singular 2x2 matrix
    for r in m:
        if r[0] or r[1]:
            return (-r[1], r[0])
    return (mpq(1), mpq(0))


def exact_monodromies(E: RationalFunctionMatrix | None = None) -> dict:
    """Monodromy at every singular point; resonant ones go through shearing at infinity."""
    E = E if E is not None else rank2_subsystem(connection_matrix())
    data = local_system_data(E)
    out = {}
    for p, A in data.residues.items():
        if p == INF:
            out[p] = monodromy_resonant_infinity(E) if data.resonant[p] else local_monodromy_nonresonant(A, p)
        else:
            out[p] = local_monodromy_nonresonant(A, p)
    return out


# ---------------------------------------------------------------------------
# numeric oracle
# ---------------------------------------------------------------------------

def _evaluator(E: RationalFunctionMatrix):
    n, m = E.shape
    polys = []
    for i in range(n):
        for j in range(m):
            r: RationalFunction = E[i, j]
            num = [float(c) for c in reversed(r.num.c)] or [0.0]
            den = [float(c) for c in reversed(r.den.c)]
            polys.append((num, den))

    def at(t: complex) -> np.ndarray:
        vals = [np.polyval(nu, t) / np.polyval(de, t) for nu, de in polys]
        return np.array(vals, dtype=complex).reshape(n, m)

    return at


@dataclass(frozen=True)
class Segment:
    start: complex
    end: complex

    def point(self, s):
        return self.start + s * (self.end - self.start)

    def velocity(self, s):
        return self.end - self.start

    def clearance(self, c: complex) -> float:
        d = self.end - self.start
        if d == 0:
            return abs(c - self.start)
        u = max(0.0, min(1.0, ((c - self.start) * d.conjugate()).real / abs(d) ** 2))
        return abs(c - self.point(u))


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    sweep: float = 2 * math.pi

    def point(self, s):
        return self.center + self.radius * cmath.exp(1j * (self.theta0 + s * self.sweep))

    def velocity(self, s):
        return 1j * self.sweep * self.radius * cmath.exp(1j * (self.theta0 + s * self.sweep))

    def clearance(self, c: complex) -> float:
        return abs(abs(c - self.center) - self.radius)


def _transport(at, piece, n: int, steps: int, rtol: float, atol: float) -> np.ndarray:
    def rhs(s, y):
        t = piece.point(s)
        return (-(at(t) * piece.velocity(s)) @ y.reshape(n, n)).ravel()

    sol = solve_ivp(
        rhs, (0.0, 1.0), np.eye(n, dtype=complex).ravel(), method="DOP853",
        rtol=rtol, atol=atol, max_step=1.0 / steps,
    )
    if not sol.success:
        raise NonConvergenceError(sol.message)
    return sol.y[:, -1].reshape(n, n)


def holonomy(
    E: RationalFunctionMatrix,
    path: Sequence,
    *,
    steps: int = 256,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    tolerance: float = 1e-7,
    min_clearance: float | None = None,
):
    """Transport matrix along consecutive ``Segment``/``Arc`` pieces, with an error estimate.

    The estimate compares against a second run with half the maximal step and
    a tolerance scaled by ``2**-8``.
    """
    if steps < 256:
        raise ValueError("steps must be at least 256")
    poles = [complex(float(p)) for p in _finite_poles(E)]
    if min_clearance is not None:
        for piece in path:
            for p in poles:
                if piece.clearance(p) < min_clearance:
                    raise PoleProximityError(f"path passes within {piece.clearance(p):.3g} of the pole {p.real:g}")
    at = _evaluator(E)
    n = E.shape[0]

    def run(k, rt, at_):
        h = np.eye(n, dtype=complex)
        for piece in path:
            if isinstance(piece, Segment) and piece.start == piece.end:
                continue
            h = _transport(at, piece, n, k, rt, at_) @ h
        return h

    h1 = run(steps, rtol, atol)
    h2 = run(2 * steps, rtol / 256, atol / 256)
    err = float(np.max(np.abs(h1 - h2)))
    if err > tolerance:
        raise NonConvergenceError(f"step halving changed the holonomy by {err:.3g}")
    return h2, err


def monodromy_numeric(
    E: RationalFunctionMatrix,
    center: complex,
    radius: float,
    steps: int = 256,
    *,
    point=None,
    rtol: float = 1e-10,
    tolerance: float = 1e-7,
) -> MonodromyMatrix:
    """Holonomy around the counterclockwise circle ``|t - center| = radius`` from ``center + radius``."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    h, err = holonomy(
        E, [Arc(complex(center), float(radius), 0.0)], steps=steps, rtol=rtol,
        tolerance=tolerance, min_clearance=radius / 10,
    )
    return MonodromyMatrix(point, tuple(tuple(complex(x) for x in r) for r in h), False, err)


def based_loop(base: complex, center: complex, radius: float) -> list:
    """Out from ``base`` to the circle, once around it counterclockwise, and back."""
    base, center = complex(base), complex(center)
    u = base - center
    if abs(u) < radius:
        raise ValueError("base point must lie outside the loop")
    entry = center + radius * u / abs(u)
    theta = cmath.phase(u)
    return [Segment(base, entry), Arc(center, float(radius), theta), Segment(entry, base)]


@dataclass
class LoopProduct:
    base: complex
    holonomies: dict
    residual: float
    error: float

    def to_json(self) -> dict:
        return {
            "base": _complex_str(self.base),
            "order": ["inf", "2", "-2"],
            "residual": f"{self.residual:.3e}",
            "error_estimate": f"{self.error:.3e}",
        }


def loop_product(
    E: RationalFunctionMatrix | None = None,
    *,
    base: complex = 3j,
    small_radius: float = 1.0,
    big_radius: float = 3.0,
    steps: int = 256,
) -> LoopProduct:
    """Based loops around -2, 2 and infinity and the residual of ``H_inf H_2 H_-2 - I``.

    Transport matrices compose as ``H(a then b) = H(b) H(a)``.  From a base
    point above the real axis, the big counterclockwise circle is homotopic to
    the loop around -2 followed by the loop around 2, so ``H_big = H_2 H_-2``.
    The loop around infinity is the big circle traversed backwards.
    """
    E = E if E is not None else rank2_subsystem(connection_matrix())
    clear = small_radius / 10
    hm2, e1 = holonomy(E, based_loop(base, -2, small_radius), steps=steps, min_clearance=clear)
    hp2, e2 = holonomy(E, based_loop(base, 2, small_radius), steps=steps, min_clearance=clear)
    hbig, e3 = holonomy(E, based_loop(base, 0, big_radius), steps=steps, min_clearance=clear)
    hinf = np.linalg.inv(hbig)
    n = hinf.shape[0]
    residual = float(np.max(np.abs(hinf @ hp2 @ hm2 - np.eye(n))))
    return LoopProduct(
        complex(base),
        {mpq(-2): hm2, mpq(2): hp2, INF: hinf},
        residual,
        e1 + e2 + e3,
    )


__all__ = [
    "Arc",
    "INF",
    "LocalSystemData",
    "LoopProduct",
    "MonodromyMatrix",
    "NonConvergenceError",
    "PiScalar",
    "PoleProximityError",
    "ResonanceError",
    "Segment",
    "UnexpectedSpectrumError",
    "based_loop",
    "eigenvalues_2x2",
    "exact_monodromies",
    "exp_2pi_i",
    "holonomy",
    "is_resonant",
    "local_monodromy_nonresonant",
    "local_system_data",
    "loop_product",
    "monodromy_numeric",
    "monodromy_resonant_infinity",
]
