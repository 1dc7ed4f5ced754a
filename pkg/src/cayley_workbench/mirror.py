"""Pointwise SU(3)-structures induced by 2-frames of a Cayley form.

A 2-frame (u, v) determines the almost complex structure J of the
contracted form on W = span{u,v}-perp, the Kaehler 2-form
omega(x, y) = phi(u, v, x, y) restricted to W, and a unit (3,0)-form
built from an adapted basis {f1, Jf1, f2, Jf2, f3, Jf3}.  Splitting a
Cayley-free 4-frame into its two 2-frames yields the mirror pair; the
report expands phi against each side's structure forms, which is the
operational sense in which phi interchanges the two.

omega is the Kaehler form of J rather than u-flat ^ v-flat: the latter
is degenerate on the 6-dimensional W and cannot be the symplectic form
of the stated structure.  The composite K = J_uv J_yw is measured, not
assumed, to be a third almost complex structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cayley import as_kform
from .forms import KForm, blade_masks, flat, form_to_coeffs, interior, restrict, wedge
from .planes import ACS, Frame4, Plane4, acs_from_2frame, calibration_value, \
    is_cayley_free, orthonormal_frame


class NotCayleyFreeError(ValueError):
    """Raised when a mirror construction is asked of a non-Cayley-free frame."""

    def __init__(self, value: float):
        super().__init__(f"frame is not Cayley-free: phi restricts to {value!r}")
        self.value = value


def kaehler_form(u, v, phi) -> KForm:
    """Ambient 2-form (x, y) -> phi(u, v, x, y)."""
    f = as_kform(phi)
    return interior(v, interior(u, f))


@dataclass(frozen=True, eq=False)
class SU3Structure:
    """(W, J, omega, Omega) on the 6-dim complement of an oriented 2-frame.

    ``frame`` holds the adapted basis columns (f1, Jf1, f2, Jf2, f3, Jf3);
    the restricted forms live in these coordinates, where the (3,0)-form
    is (dy1 + i dy2)(dy3 + i dy4)(dy5 + i dy6) by construction and all
    geometric content sits in how J and omega land in them.
    """

    u: np.ndarray
    v: np.ndarray
    frame: np.ndarray          # 8x6 adapted orthonormal basis of W
    J: np.ndarray              # ambient 8x8 almost complex structure
    omega: KForm               # restricted to W coordinates
    omega_re: KForm            # Re Omega, W coordinates
    omega_im: KForm            # Im Omega, W coordinates
    omega_ambient: KForm
    holo_re_ambient: KForm
    holo_im_ambient: KForm

    def restricted_J(self) -> np.ndarray:
        return self.frame.T @ self.J @ self.frame

    def residuals(self) -> dict:
        W = self.frame
        P = W @ W.T
        JW = self.restricted_J()
        Momega = _form2_matrix(self.omega, 6)
        out = {
            "J_preserves_W": float(np.linalg.norm((np.eye(8) - P) @ self.J @ W)),
            "J_squares_to_minus_id": float(np.linalg.norm(JW @ JW + np.eye(6))),
            "omega_J_invariant": float(np.linalg.norm(JW.T @ Momega @ JW - Momega)),
            "omega_is_kaehler_form": float(np.linalg.norm(Momega - JW.T)),
        }
        omega3 = wedge(wedge(self.omega, self.omega), self.omega)
        top = omega3.terms.get((1 << 6) - 1, 0.0)
        out["omega_cubed"] = float(top)
        holo = self.omega_re + 1j * self.omega_im
        purity = 0.0
        for x in np.eye(6):
            z = x + 1j * (JW @ x)
            purity = max(purity, _abs_norm(interior(z, holo)))
        out["holo_purity"] = purity
        for name, g in (("omega_wedge_re", self.omega_re), ("omega_wedge_im", self.omega_im)):
            out[name] = _abs_norm(wedge(self.omega, g))
        return out

    def volume_ratio(self) -> complex:
        """(Omega ^ conj(Omega)) / omega^3, a convention constant of phi."""
        holo = self.omega_re + 1j * self.omega_im
        num = wedge(holo, holo.conjugate()).terms.get((1 << 6) - 1, 0.0)
        den = wedge(wedge(self.omega, self.omega), self.omega).terms.get((1 << 6) - 1, 0.0)
        return complex(num) / complex(den)


def su3_from_2frame(u, v, phi) -> SU3Structure:
    """Build the SU(3)-structure of an oriented 2-frame.

    The adapted basis is grown greedily: the first ambient coordinate
    direction with enough mass in the remaining J-invariant subspace is
    normalized to f_k and paired with J f_k (deterministic, so repeated
    runs and mirror reports are byte-stable).
    """
    F = orthonormal_frame([u, v])
    uu, vv = F[:, 0].copy(), F[:, 1].copy()
    acs = acs_from_2frame(uu, vv, phi)
    J = acs.J
    P = np.eye(8) - np.outer(uu, uu) - np.outer(vv, vv)
    cols = []
    for _ in range(3):
        f = None
        for i in range(8):
            cand = P @ np.eye(8)[i]
            # generous mass threshold keeps normalization well conditioned
            if np.linalg.norm(cand) > 1e-3:
                f = cand / np.linalg.norm(cand)
                break
        if f is None:
            raise ValueError("failed to complete an adapted basis")
        b = J @ f
        b = b / np.linalg.norm(b)
        cols += [f, b]
        P = P - np.outer(f, f) - np.outer(b, b)
    W = np.column_stack(cols)

    omega_amb = kaehler_form(uu, vv, phi)
    omega = restrict(omega_amb, [W[:, j] for j in range(6)]).chop(1e-14)

    zetas = [flat(W[:, 2 * k], 8) + 1j * flat(W[:, 2 * k + 1], 8) for k in range(3)]
    holo_amb = wedge(wedge(zetas[0], zetas[1]), zetas[2])
    re_amb, im_amb = _complex_split(holo_amb)
    # in adapted coordinates the restricted 1-forms are exactly dy^k
    y = [KForm(6, 1, {1 << j: 1.0}) for j in range(6)]
    holo_w = wedge(wedge(y[0] + 1j * y[1], y[2] + 1j * y[3]), y[4] + 1j * y[5])
    re_w, im_w = _complex_split(holo_w)
    return SU3Structure(uu, vv, W, J, omega, re_w, im_w, omega_amb, re_amb, im_amb)


def _abs_norm(a: KForm) -> float:
    return float(np.sqrt(sum(abs(c) ** 2 for c in a.terms.values())))


def _complex_split(a: KForm) -> tuple[KForm, KForm]:
    re = {m: c.real if isinstance(c, complex) else c for m, c in a.terms.items()}
    im = {m: c.imag for m, c in a.terms.items() if isinstance(c, complex)}
    mk = lambda d: KForm(a.n, a.degree, {m: c for m, c in d.items() if c != 0})
    return mk(re), mk(im)


def _form2_matrix(a: KForm, n: int) -> np.ndarray:
    M = np.zeros((n, n))
    for mask, c in a.terms.items():
        i = mask & -mask
        j = mask ^ i
        ii, jj = i.bit_length() - 1, j.bit_length() - 1
        M[ii, jj] = float(c)
        M[jj, ii] = -float(c)
    return M


# -- mirror pairs and composite structures -------------------------------------


@dataclass(frozen=True)
class MirrorReport:
    K: np.ndarray
    k_squared_residual: float
    commutator_norm: float
    orthogonality_residual: float
    is_acs: bool
    phi_expansion: dict | None = None

    def to_json_dict(self) -> dict:
        out = {
            "K": [[float(x) for x in row] for row in self.K],
            "k_squared_residual": self.k_squared_residual,
            "commutator_norm": self.commutator_norm,
            "orthogonality_residual": self.orthogonality_residual,
            "is_acs": self.is_acs,
        }
        if self.phi_expansion is not None:
            out["phi_expansion"] = self.phi_expansion
        return out


def compose_acs(J1, J2, tol: float = 1e-9) -> MirrorReport:
    """Compose two almost complex structures and test whether the result is one.

    The verdict is measured from the residuals; nothing about the
    composite is assumed.
    """
    A = J1.J if isinstance(J1, ACS) else np.asarray(J1, dtype=float)
    B = J2.J if isinstance(J2, ACS) else np.asarray(J2, dtype=float)
    K = A @ B
    k2 = float(np.linalg.norm(K @ K + np.eye(8)))
    comm = float(np.linalg.norm(A @ B - B @ A))
    orth = float(np.linalg.norm(K.T @ K - np.eye(8)))
    return MirrorReport(K, k2, comm, orth, bool(k2 < tol and orth < tol))


def phi_expansion(structure: SU3Structure, phi) -> dict:
    """Least-squares expansion of phi over the structure's form basis.

    Basis: u^v^omega, omega^omega, u^ReOmega, u^ImOmega, v^ReOmega,
    v^ImOmega (all ambient 4-forms).  The residual is the norm of the
    part of phi outside their span.
    """
    f = as_kform(phi)
    du, dv = flat(structure.u, 8), flat(structure.v, 8)
    basis = {
        "uv_omega": wedge(wedge(du, dv), structure.omega_ambient),
        "omega_omega": wedge(structure.omega_ambient, structure.omega_ambient),
        "u_re_holo": wedge(du, structure.holo_re_ambient),
        "u_im_holo": wedge(du, structure.holo_im_ambient),
        "v_re_holo": wedge(dv, structure.holo_re_ambient),
        "v_im_holo": wedge(dv, structure.holo_im_ambient),
    }
    masks = blade_masks(8, 4)
    X = np.column_stack([form_to_coeffs(b, masks) for b in basis.values()])
    t = form_to_coeffs(f, masks)
    c, *_ = np.linalg.lstsq(X, t, rcond=None)
    out = {name: float(v) for name, v in zip(basis, c)}
    out["residual"] = float(np.linalg.norm(t - X @ c))
    return out


def mirror_pair(frame, phi, tol: float = 1e-8) -> tuple[SU3Structure, SU3Structure, MirrorReport]:
    """The two SU(3)-structures of a Cayley-free 4-frame, plus the K report.

    Refuses frames on which phi does not restrict to zero, quoting the
    measured value.
    """
    f4 = frame if isinstance(frame, Frame4) else Frame4.of(*frame)
    if not is_cayley_free(f4, phi, tol):
        raise NotCayleyFreeError(calibration_value(Plane4(f4.frame), phi))
    u, v, y, w = f4.vectors
    side_uv = su3_from_2frame(u, v, phi)
    side_yw = su3_from_2frame(y, w, phi)
    report = compose_acs(ACS(side_uv.J), ACS(side_yw.J))
    expansion = {
        "uv": phi_expansion(side_uv, phi),
        "yw": phi_expansion(side_yw, phi),
    }
    report = MirrorReport(report.K, report.k_squared_residual, report.commutator_norm,
                          report.orthogonality_residual, report.is_acs, expansion)
    return side_uv, side_yw, report
