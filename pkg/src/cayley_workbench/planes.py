"""Oriented 4-planes in R^8 and the structures a Cayley form puts on them.

Calibration values, Cayley / Cayley-free tests (coordinate and
octonionic), the almost complex structure of a 2-frame, triple-cross
plane construction, Haar sampling, and multistart gradient ascent over
the Grassmannian for comass and contained-Cayley-plane searches.

The hot numeric paths work on the dense antisymmetric coefficient tensor
of the form; exact integer frames keep an exact evaluation path so that
statements like "this frame calibrates to 0" hold on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import octonions
from .cayley import ConventionMap, as_cayley, as_kform, phi0, phi_octonionic, reconcile
from .forms import evaluate
from .runtime import run_indexed

DEFAULT_CAYLEY_TOL = 1e-6


def orthonormal_frame(vectors, tol: float = 1e-12) -> np.ndarray:
    """Columns: the Gram-Schmidt orthonormalization of the given vectors.

    Keeps the orientation of the input order (QR with positive diagonal).
    Raises on (numerically) dependent input.
    """
    A = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
    q, r = np.linalg.qr(A)
    d = np.diag(r)
    if np.min(np.abs(d)) < tol * max(1.0, float(np.abs(d).max())):
        raise ValueError("degenerate frame: vectors are linearly dependent")
    return q * np.sign(d)


def _is_exact(vs) -> bool:
    return all(isinstance(x, (int, Fraction)) for v in vs for x in v)


@dataclass(frozen=True, eq=False)
class Frame2:
    """Ordered 2-frame; orthonormalized representative kept alongside."""

    u: tuple
    v: tuple

    @staticmethod
    def of(u, v) -> "Frame2":
        return Frame2(tuple(u), tuple(v))

    @cached_property
    def frame(self) -> np.ndarray:
        return orthonormal_frame([self.u, self.v])


@dataclass(frozen=True, eq=False)
class Frame4:
    """Ordered 4-frame; raw vectors plus an orthonormalized representative."""

    vectors: tuple  # 4 tuples of 8 numbers

    @staticmethod
    def of(*vectors) -> "Frame4":
        if len(vectors) != 4:
            raise ValueError("need exactly 4 vectors")
        return Frame4(tuple(tuple(v) for v in vectors))

    @cached_property
    def frame(self) -> np.ndarray:
        return orthonormal_frame(self.vectors)

    def raw_value(self, phi):
        """phi evaluated on the raw (unnormalized) frame; exact for exact input."""
        return evaluate(as_kform(phi), list(self.vectors))

    def to_json_dict(self) -> dict:
        return {"vectors": [list(v) for v in self.vectors]}

    @staticmethod
    def from_json_dict(data: dict) -> "Frame4":
        return Frame4.of(*data["vectors"])


@dataclass(frozen=True, eq=False)
class Plane4:
    """Oriented 4-plane: an orthonormal 8x4 column frame up to SO(4)."""

    basis: np.ndarray

    def __post_init__(self):
        if self.basis.shape != (8, 4):
            raise ValueError("plane basis must be 8x4")
        if gram_defect4(self.basis) > 1e-10:
            raise ValueError("plane basis is not orthonormal")

    @staticmethod
    def from_frame(vectors) -> "Plane4":
        return Plane4(orthonormal_frame(vectors))

    @staticmethod
    def random(rng: np.random.Generator) -> "Plane4":
        return Plane4(orthonormal_frame(rng.normal(size=(8, 4)).T))

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def reversed(self) -> "Plane4":
        flipped = self.basis.copy()
        flipped[:, [0, 1]] = flipped[:, [1, 0]]
        return Plane4(flipped)

    def same_plane(self, other: "Plane4", tol: float = 1e-9) -> bool:
        """Equal as oriented planes (frames related by SO(4))."""
        if float(np.max(np.abs(self.projector() - other.projector()))) > tol:
            return False
        return float(np.linalg.det(self.basis.T @ other.basis)) > 0


def gram_defect4(B: np.ndarray) -> float:
    k = B.shape[1]
    return float(np.max(np.abs(B.T @ B - np.eye(k))))


# -- almost complex structures -------------------------------------------------


@dataclass(frozen=True, eq=False)
class ACS:
    """Orthogonal endomorphism squaring to minus the identity."""

    J: np.ndarray

    def residuals(self) -> dict:
        J = self.J
        return {
            "square": float(np.linalg.norm(J @ J + np.eye(len(J)))),
            "orthogonality": float(np.linalg.norm(J.T @ J - np.eye(len(J)))),
        }

    def is_valid(self, tol: float = 1e-10) -> bool:
        r = self.residuals()
        return r["square"] < tol and r["orthogonality"] < tol


def acs_contraction_matrix(u, v, phi) -> np.ndarray:
    """The raw operator of the 2-form phi(u, v, ., .) on span{u,v}-perp.

    This is the triple-cross action before any extension: it annihilates
    span{u,v} (where the contraction vanishes identically).
    """
    T = as_cayley(phi).tensor
    F = orthonormal_frame([u, v])
    uu, vv = F[:, 0], F[:, 1]
    N = np.einsum("ijkl,i,j->kl", T, uu, vv)
    P = np.eye(8) - np.outer(uu, uu) - np.outer(vv, vv)
    return P @ N.T @ P


def acs_from_2frame(u, v, phi) -> ACS:
    """Almost complex structure of an oriented 2-plane and a Cayley form.

    On the orthogonal complement of span{u,v} it is the triple-cross
    operator <Jx, w> = phi(u, v, x, w); on span{u,v} it is extended by
    J(u) = v, J(v) = -u, the unique skew completion to an isometry.
    """
    F = orthonormal_frame([u, v])
    uu, vv = F[:, 0], F[:, 1]
    J = acs_contraction_matrix(uu, vv, phi)
    J += np.outer(vv, uu) - np.outer(uu, vv)
    return ACS(J)


# -- calibration and Cayley tests ----------------------------------------------


def calibration_value(plane: Plane4, phi) -> float:
    """phi evaluated on an orthonormal oriented frame of the plane."""
    T = as_cayley(phi).tensor
    B = plane.basis
    return float(np.einsum("ijkl,i,j,k,l->", T, B[:, 0], B[:, 1], B[:, 2], B[:, 3]))


def is_cayley(plane: Plane4, phi, tol: float = DEFAULT_CAYLEY_TOL) -> bool:
    return abs(calibration_value(plane, phi) - 1.0) < tol


def is_cayley_free(frame, phi, tol: float = DEFAULT_CAYLEY_TOL) -> bool:
    """True when phi restricts to zero on the span of the 4-frame.

    The restriction of a 4-form to a 4-dimensional subspace is a
    multiple of the volume form, so a single evaluation decides.  Exact
    integer/Fraction frames are decided exactly.
    """
    f4 = frame if isinstance(frame, Frame4) else Frame4.of(*frame)
    f4.frame  # raises on degenerate input
    if _is_exact(f4.vectors):
        raw = f4.raw_value(phi)
        if isinstance(raw, (int, Fraction)):
            return raw == 0
    return abs(calibration_value(Plane4(f4.frame), phi)) < tol


@lru_cache(maxsize=1)
def standard_convention() -> ConventionMap:
    """The computed dictionary carrying the octonionic form onto phi0."""
    result = reconcile(phi_octonionic(), phi0())
    if not isinstance(result, ConventionMap):
        raise RuntimeError("octonionic form did not reconcile exactly with phi0")
    return result


def octonionic_residual(plane, convention: ConventionMap | None = None) -> float:
    """Residual of the octonion Cayley identity on an orthonormal frame.

    The frame is pulled back to octonion coordinates through the
    convention map (default: the reconciled one), where the residual
    vanishes exactly on Cayley 4-planes.
    """
    g = (convention or standard_convention()).inverse()
    B = plane.basis if isinstance(plane, Plane4) else orthonormal_frame(plane)
    pulled = [np.asarray(g.apply_to_vector(B[:, j]), dtype=float) for j in range(4)]
    return octonions.cayley_identity_residual(*pulled)


def is_cayley_octonionic(plane, convention: ConventionMap | None = None,
                         tol: float = DEFAULT_CAYLEY_TOL) -> bool:
    """Cayley test through the octonion identity; see octonionic_residual."""
    return octonionic_residual(plane, convention) < tol


def triple_cross(u, v, w, convention: ConventionMap | None = None) -> np.ndarray:
    """Octonion triple cross product expressed in R^8 coordinates."""
    g = convention or standard_convention()
    ginv = g.inverse()
    pulled = [np.asarray(ginv.apply_to_vector(np.asarray(x, dtype=float)))
              for x in (u, v, w)]
    crossed = octonions.cross3(*pulled)
    return np.asarray(g.apply_to_vector(crossed), dtype=float)


def cayley_plane_from_3frame(u, v, w, convention: ConventionMap | None = None) -> Plane4:
    """The unique Cayley plane spanned by an independent triple.

    Completes the orthonormalized triple with its triple cross product;
    the returned orientation calibrates to +1.
    """
    F = orthonormal_frame([u, v, w])
    x = triple_cross(F[:, 0], F[:, 1], F[:, 2], convention)
    return Plane4(np.column_stack([F[:, 0], F[:, 1], F[:, 2], x]))


# -- sampling and optimization ---------------------------------------------------


def random_plane(seed: int = 0) -> Plane4:
    """One Haar-random oriented 4-plane."""
    return Plane4.random(np.random.default_rng(seed))


def random_planes_batch(n: int, rng: np.random.Generator) -> np.ndarray:
    """Stack of n Haar-random oriented orthonormal 8x4 frames."""
    A = rng.normal(size=(n, 8, 4))
    q, r = np.linalg.qr(A)
    return q * np.sign(np.einsum("nii->ni", r))[:, None, :]


def calibration_values_batch(frames: np.ndarray, phi) -> np.ndarray:
    T = as_cayley(phi).tensor
    return np.einsum("ijkl,ni,nj,nk,nl->n", T, frames[:, :, 0], frames[:, :, 1],
                     frames[:, :, 2], frames[:, :, 3], optimize=True)


def _value_and_grad(T: np.ndarray, V: np.ndarray):
    c1, c2, c3, c4 = V.T
    S12 = np.einsum("ijkl,i,j->kl", T, c1, c2)
    S34 = np.einsum("ijkl,k,l->ij", T, c3, c4)
    val = float(c3 @ S12 @ c4)
    G = np.column_stack([S34 @ c2, -S34 @ c1, S12 @ c4, -S12 @ c3])
    return val, G


def _ascend(T: np.ndarray, V: np.ndarray, steps: int, step0: float,
            gtol: float) -> tuple[np.ndarray, float, bool]:
    """Riemannian gradient ascent of the calibration value over 4-frames."""
    m = T.shape[0]
    val, G = _value_and_grad(T, V)
    for _ in range(steps):
        D = G - V @ (V.T @ G)
        gn = float(np.linalg.norm(D))
        if gn < gtol:
            return V, val, True
        t = step0
        improved = False
        while t > 1e-13:
            q, r = np.linalg.qr(V + t * D)
            cand = q * np.sign(np.diag(r))
            cval, cG = _value_and_grad(T, cand)
            if cval > val + 1e-4 * t * gn * gn:
                V, val, G = cand, cval, cG
                improved = True
                break
            t *= 0.5
        if not improved:
            return V, val, True  # stationary to line-search resolution
    return V, val, False


@dataclass(frozen=True)
class AscentResult:
    value: float
    plane: Plane4
    converged: bool

    @property
    def warning(self) -> str | None:
        return None if self.converged else "step budget exhausted before convergence"


def comass(phi, restarts: int = 64, steps: int = 500, seed: int = 0,
           step0: float = 0.1) -> AscentResult:
    """Multistart estimate of max_{oriented 4-planes} phi, with maximizer.

    For an admissible form this is the calibration bound 1, attained on
    the Cayley Grassmannian.
    """
    T = as_cayley(phi).tensor

    def one(r: int):
        rng = np.random.default_rng(seed + r)
        V0 = orthonormal_frame(rng.normal(size=(8, 4)).T)
        return _ascend(T, V0, steps, step0, gtol=1e-8)

    results = run_indexed(one, restarts)
    V, val, conv = max(results, key=lambda t: t[1])
    return AscentResult(val, Plane4(V), all(c for *_, c in results))


def contains_cayley(subspace, phi, restarts: int = 16, steps: int = 500,
                    seed: int = 0, tol: float = DEFAULT_CAYLEY_TOL) -> AscentResult:
    """Search a subspace (orthonormal m-frame, 4 <= m <= 8) for a Cayley plane.

    Ascends the calibration value over 4-planes inside the subspace;
    ``value >= 1 - tol`` certifies the witness.  Check ``found(tol)``.
    """
    S = np.column_stack([np.asarray(v, dtype=float) for v in subspace]) \
        if not isinstance(subspace, np.ndarray) else subspace
    m = S.shape[1]
    if not 4 <= m <= 8:
        raise ValueError("subspace dimension must be 4..8")
    if gram_defect4(S) > 1e-8:
        raise ValueError("subspace frame is not orthonormal")
    T = as_cayley(phi).tensor
    TS = np.einsum("ijkl,ia,jb,kc,ld->abcd", T, S, S, S, S, optimize=True)

    def one(r: int):
        rng = np.random.default_rng(seed + r)
        W0 = orthonormal_frame(rng.normal(size=(m, 4)).T)
        return _ascend(TS, W0, steps, step0=0.1, gtol=1e-8)

    results = run_indexed(one, restarts)
    W, val, _ = max(results, key=lambda t: t[1])
    return AscentResult(val, Plane4(orthonormal_frame((S @ W).T)),
                        all(c for *_, c in results))


def found_cayley(result: AscentResult, tol: float = DEFAULT_CAYLEY_TOL) -> bool:
    return result.value >= 1.0 - tol


# -- hypercomplex triples --------------------------------------------------------


@dataclass(frozen=True)
class HypercomplexReport:
    J: tuple  # three restricted 4x4 structures, in input order
    signs: tuple  # sign s with J_a J_b ~ s J_c, best fit
    residuals: dict
    residual: float

    def is_hypercomplex(self, tol: float = 1e-8) -> bool:
        return self.residual < tol


def _common_line(Ba: np.ndarray, Bb: np.ndarray) -> np.ndarray:
    """Unit vector spanning the intersection of two 2-planes (or raise)."""
    u, s, _ = np.linalg.svd(Ba.T @ Bb)
    if s[0] < 1 - 1e-6:
        raise ValueError("2-planes do not intersect in a line")
    if s[1] > 1e-6:
        raise ValueError("2-planes coincide; need three distinct planes")
    line = Ba @ u[:, 0]
    return line / np.linalg.norm(line)


def hypercomplex_from_triple(xi: Plane4, alpha, beta, gamma, phi) -> HypercomplexReport:
    """Test the hypercomplex structure of three 2-planes sharing a line.

    alpha, beta, gamma are 2-frames inside ``xi`` whose pairwise
    intersection is one common line and whose directions transverse to
    that line are mutually orthogonal.  The three induced almost complex
    structures are restricted to ``xi``; the report records how far they
    are from the quaternion relations.  The residual vanishes exactly
    when ``xi`` is Cayley.
    """
    B = xi.basis
    P = xi.projector()
    frames = []
    for pair in (alpha, beta, gamma):
        F = orthonormal_frame(list(pair))
        if float(np.max(np.abs(F - P @ F))) > 1e-9:
            raise ValueError("2-plane does not lie inside the 4-plane")
        frames.append(F)
    lines = [_common_line(frames[i], frames[j]) for i, j in ((0, 1), (0, 2), (1, 2))]
    for line in lines[1:]:
        if abs(float(lines[0] @ line)) < 1 - 1e-6:
            raise ValueError("pairwise intersections do not share a common line")
    ell = lines[0]
    transverse = []
    for F in frames:
        c = F.T @ ell  # in-plane coordinates of the common line
        w = F @ np.array([-c[1], c[0]])
        transverse.append(w / np.linalg.norm(w))
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(float(transverse[i] @ transverse[j])) > 1e-6:
                raise ValueError("transverse directions are not mutually orthogonal")

    Js = []
    leakage = 0.0
    for F in frames:
        J = acs_from_2frame(F[:, 0], F[:, 1], phi).J
        leakage = max(leakage, float(np.linalg.norm((np.eye(8) - P) @ J @ B)))
        Js.append(B.T @ J @ B)
    res = {"leakage": leakage}
    for name, Jr in zip("abc", Js):
        res[f"square_{name}"] = float(np.linalg.norm(Jr @ Jr + np.eye(4)))
    prods = []
    signs = []
    for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        cands = [float(np.linalg.norm(Js[i] @ Js[j] - s * Js[k])) for s in (1, -1)]
        best = int(np.argmin(cands))
        prods.append(cands[best])
        signs.append(1 if best == 0 else -1)
    res["product"] = max(prods)
    residual = max(res["leakage"], res["product"],
                   *(res[f"square_{c}"] for c in "abc"))
    return HypercomplexReport(tuple(Js), tuple(signs), res, residual)
