"""Mask-pair synthesis from projections and unitaries, parametrized families,
moment-condition solvers, and Blaschke-Potapov products.

Degree-1 construction: given a Hermitian projection P and a unitary U,
the polynomial F(xi) = (I - P + P xi) U* satisfies the QMF condition by
construction; its polyphase splits into an orthogonal mask pair.  Higher
degrees come from products of such factors or from the explicit degree-2
closed-form family below.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .masks import (RT2, MaskPair, MatrixMask, PolyphaseMatrix, SumRuleVectors,
                    polyphase_split)
from .realization import unitarity_residual

__all__ = [
    "S",
    "Projection",
    "FullRankUnitary",
    "RankOneUnitarySpec",
    "BlaschkeFactor",
    "D6Family",
    "scalar_projection",
    "embedded_projection",
    "degree1_synthesize",
    "verify_lemma_equivalence",
    "solve_scalar_order2",
    "rank1_unitary",
    "rank1_sum_rule_residual",
    "chui_lian",
    "lebrun_vetterli",
    "lebrun_vetterli_unitary",
    "full_rank_projection_a3",
    "full_rank_projection_a4",
    "d6_family",
    "solve_d6",
    "blaschke_product",
    "solve_blaschke_d6",
    "build_family",
    "designated_vectors",
    "FAMILY_NAMES",
]

# sign matrix used by the symmetry constraints of the rank-1 constructions
S = np.diag([1.0, -1.0])

_PROJ_TOL = 1e-10


@dataclass(frozen=True)
class Projection:
    """A (candidate) Hermitian idempotent.  Residuals are not enforced at
    construction so that failure modes stay observable; operations that
    require a true projection validate explicitly."""

    P: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=complex)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ValueError("projection must be a square matrix")
        object.__setattr__(self, "P", P)

    @property
    def dim(self) -> int:
        return self.P.shape[0]

    def idempotency_residual(self) -> float:
        return float(np.linalg.norm(self.P @ self.P - self.P))

    def hermiticity_residual(self) -> float:
        return float(np.linalg.norm(self.P.conj().T - self.P))


@dataclass(frozen=True)
class FullRankUnitary:
    """The unitary induced by an M x M unitary W in the full rank setting."""

    W: np.ndarray

    def __post_init__(self):
        W = np.atleast_2d(np.asarray(self.W, dtype=complex))
        object.__setattr__(self, "W", W)

    @property
    def U(self) -> np.ndarray:
        eye = np.eye(self.W.shape[0])
        return RT2 / 2.0 * np.block([[eye, self.W], [eye, -self.W]])


_V1_CHOICES = ("+I", "-I", "+S", "-S")
_V2_CHOICES = ("I", "S")


def _corner_sign(key: str) -> np.ndarray:
    base = S if key.endswith("S") else np.eye(2)
    return -base if key.startswith("-") else base


@dataclass(frozen=True)
class RankOneUnitarySpec:
    """Parameter and sign-branch choice for the one-parameter rank-1 unitaries."""

    ell: float
    v1: str = "+I"
    v2: str = "I"

    def __post_init__(self):
        if abs(self.ell) > 1.0:
            raise ValueError("rank-1 parameter must satisfy |ell| <= 1")
        if self.v1 not in _V1_CHOICES or self.v2 not in _V2_CHOICES:
            raise ValueError(f"sign branches: v1 in {_V1_CHOICES}, v2 in {_V2_CHOICES}")


@dataclass(frozen=True)
class BlaschkeFactor:
    """One degree-1 paraunitary factor (I - P + P xi) U."""

    P: Projection
    U: np.ndarray = None

    def __post_init__(self):
        U = np.eye(self.P.dim) if self.U is None else np.asarray(self.U, dtype=complex)
        object.__setattr__(self, "U", U)


def scalar_projection(b: float, sign: str = "+", identity: bool = False) -> Projection:
    """The 2x2 projections [[b, +-r], [+-r, 1-b]], r = sqrt(b - b^2), or I."""
    if identity:
        return Projection(np.eye(2))
    if not 0.0 <= b <= 1.0:
        raise ValueError("complex projection entries: b must lie in [0, 1]")
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    r = np.sqrt(b - b * b)
    if sign == "-":
        r = -r
    return Projection(np.array([[b, r], [r, 1.0 - b]]))


def embedded_projection(inner: Projection, zero_pad_to: int = 4) -> Projection:
    """Embed a projection into the upper-left corner of a larger zero matrix."""
    k = inner.dim
    if zero_pad_to < k:
        raise ValueError("target size smaller than the inner projection")
    P = np.zeros((zero_pad_to, zero_pad_to), dtype=complex)
    P[:k, :k] = inner.P
    return Projection(P)


def degree1_synthesize(P: Projection, U, tol: float = _PROJ_TOL) -> MaskPair:
    """Masks of F(xi) = (I - P) U* + P U* xi; QMF holds by construction."""
    if isinstance(U, FullRankUnitary):
        U = U.U
    U = np.asarray(U, dtype=complex)
    if P.idempotency_residual() > tol or P.hermiticity_residual() > tol:
        raise ValueError("P is not a Hermitian projection within tolerance")
    if unitarity_residual(U) > tol:
        raise ValueError("U is not unitary within tolerance")
    if U.shape[0] != P.dim:
        raise ValueError("projection and unitary sizes differ")
    Ustar = U.conj().T
    eye = np.eye(P.dim)
    F = PolyphaseMatrix(np.array([(eye - P.P) @ Ustar, P.P @ Ustar]))
    return polyphase_split(F)


def verify_lemma_equivalence(P, U) -> float:
    """Build A, B, C, D from (P, U) and return the max residual of the
    equivalent condition set: [[A,B],[C,D]] unitary, DC = 0, BC = C,
    B = C Urec, D = A Urec with Urec = A* + C*.

    No validation of the inputs: feeding a non-projection shows which
    conditions break.
    """
    B = P.P if isinstance(P, Projection) else np.asarray(P, dtype=complex)
    if isinstance(U, FullRankUnitary):
        U = U.U
    U = np.asarray(U, dtype=complex)
    eye = np.eye(B.shape[0])
    D = eye - B
    Ustar = U.conj().T
    A = D @ Ustar
    C = B @ Ustar
    Urec = A.conj().T + C.conj().T
    residuals = [
        unitarity_residual(np.block([[A, B], [C, D]])),
        np.linalg.norm(D @ C),
        np.linalg.norm(B @ C - C),
        np.linalg.norm(B - C @ Urec),
        np.linalg.norm(D - A @ Urec),
    ]
    return float(max(residuals))


def _alternating_p_moment(pair: MaskPair, m: int) -> float:
    """sum_alpha (-1)^alpha alpha^m p_alpha for a scalar mask pair."""
    c = pair.p.coeffs[:, 0, 0]
    alpha = np.arange(len(c))
    return float(np.real(np.sum((-1.0) ** alpha * alpha ** m * c)))


def solve_scalar_order2() -> float:
    """Root of the first alternating moment over the '+' scalar family.

    Bracketing root-finder on b in [0, 1]; the root makes the 4-tap masks
    satisfy order-2 sum rules / vanishing moments.
    """
    tail = FullRankUnitary(1.0)

    def moment(b: float) -> float:
        pair = degree1_synthesize(scalar_projection(b, "+"), tail)
        return _alternating_p_moment(pair, 1)

    return float(brentq(moment, 0.0, 1.0, xtol=1e-14))


def rank1_unitary(spec: RankOneUnitarySpec) -> np.ndarray:
    """V1 [[U1, U2], [-U2, U1]] V2 with U1 = diag(sqrt2/2, ell),
    U2 = diag(sqrt2/2, sqrt(1 - ell^2))."""
    ell = spec.ell
    U1 = np.diag([RT2 / 2.0, ell])
    U2 = np.diag([RT2 / 2.0, np.sqrt(1.0 - ell * ell)])
    core = np.block([[U1, U2], [-U2, U1]])
    V1 = np.block([[np.eye(2), np.zeros((2, 2))],
                   [np.zeros((2, 2)), _corner_sign(spec.v1)]])
    V2 = np.block([[np.eye(2), np.zeros((2, 2))],
                   [np.zeros((2, 2)), _corner_sign("+" + spec.v2)]])
    return V1 @ core @ V2


def rank1_sum_rule_residual(U: np.ndarray, v) -> float:
    """Residual of (v1 v2 0 0) U = (sqrt2/2)(v1 v2 v1 v2) and
    (v1 v2 v1 v2) U* = sqrt2 (v1 v2 0 0)."""
    v = np.asarray(v, dtype=complex).ravel()
    if v.shape != (2,) or not v.any():
        raise ValueError("v must be a nonzero 2-vector")
    left = np.concatenate([v, np.zeros(2)])
    full = np.concatenate([v, v])
    r1 = np.linalg.norm(left @ U - RT2 / 2.0 * full)
    r2 = np.linalg.norm(full @ U.conj().T - RT2 * left)
    return float(max(r1, r2))


def chui_lian() -> MaskPair:
    """Rank-1 masks on {0, 1, 2} with symmetric/antisymmetric components."""
    spec = RankOneUnitarySpec(ell=-np.sqrt(14.0) / 4.0, v1="+I", v2="I")
    P = embedded_projection(scalar_projection(0.5, "+"))
    return degree1_synthesize(P, rank1_unitary(spec))


def lebrun_vetterli_unitary(ell: float = None) -> np.ndarray:
    """The balanced rank-1 unitary with J_ell^{+-} = sqrt(1 +- 8 ell^2 -+ 4 sqrt2 ell).

    Row orthogonality forces the two off-diagonal entries of the upper-left
    block to equal sqrt(2)/2 - ell.
    """
    if ell is None:
        ell = RT2 / 8.0 * (2.0 - np.sqrt(7.0))
    jm2 = 1.0 - 8.0 * ell * ell + 4.0 * RT2 * ell
    jp2 = 1.0 + 8.0 * ell * ell - 4.0 * RT2 * ell
    if jm2 < 0.0 or jp2 < 0.0:
        raise ValueError("negative radicand in J_ell")
    if abs(8.0 * ell * ell - 1.0) < 1e-12:
        raise ValueError("8 ell^2 = 1: balanced unitary undefined")
    Jm, Jp = np.sqrt(jm2), np.sqrt(jp2)
    c = (2.0 * RT2 * ell + 1.0) / (2.0 * (8.0 * ell * ell - 1.0))
    h = RT2 / 4.0
    return np.array([
        [ell, RT2 / 2.0 - ell, h * (1.0 + Jm), h * (1.0 - Jm)],
        [RT2 / 2.0 - ell, ell, h * (1.0 - Jm), h * (1.0 + Jm)],
        [-0.5, -0.5, 0.5, 0.5],
        [c * Jp * Jm, -c * Jp * Jm, -0.5 * Jp, 0.5 * Jp],
    ])


def lebrun_vetterli(ell: float = None) -> MaskPair:
    """Constant-preserving rank-1 masks (sum-rule vector (1, 1))."""
    U = lebrun_vetterli_unitary(ell)
    P = embedded_projection(scalar_projection(1.0, "+"))
    return degree1_synthesize(P, U)


def full_rank_projection_a4(b1: float, b2: float) -> Projection:
    """Anti-diagonally coupled two-parameter 4x4 projection."""
    if not (0.0 <= b1 <= 1.0 and 0.0 <= b2 <= 1.0):
        raise ValueError("b1, b2 must lie in [0, 1]")
    r1 = np.sqrt(b1 - b1 * b1)
    r2 = np.sqrt(b2 - b2 * b2)
    return Projection(np.array([
        [1.0 - b1, 0.0, 0.0, r1],
        [0.0, 1.0 - b2, r2, 0.0],
        [0.0, r2, b2, 0.0],
        [r1, 0.0, 0.0, b1],
    ]))


def full_rank_projection_a3(b: float) -> Projection:
    """One-parameter 4x4 projection: 1 (+) the rank-1 projector onto
    ((b+1)/2, (b-1)/2, -(sqrt2/2) sqrt(1-b^2))."""
    if abs(b) > 1.0:
        raise ValueError("b must satisfy |b| <= 1")
    r = np.sqrt(1.0 - b * b)
    h = RT2 / 4.0
    return Projection(np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, (b + 1.0) ** 2 / 4.0, (b * b - 1.0) / 4.0, -h * r * (b + 1.0)],
        [0.0, (b * b - 1.0) / 4.0, (b - 1.0) ** 2 / 4.0, -h * r * (b - 1.0)],
        [0.0, -h * r * (b + 1.0), -h * r * (b - 1.0), (1.0 - b * b) / 2.0],
    ]))


@dataclass(frozen=True)
class D6Family:
    """Degree-2 scalar family parametrized by t = q_0.

    The closed forms solve part of the unitarity system identically in t
    (all cross-orthogonality relations); the remaining normalization
    conditions pin t, see solve_d6.  Radicand: -256 t^2 + 32 t + 7.
    """

    t: float

    def __post_init__(self):
        if self.radicand < 0.0:
            raise ValueError("negative radicand: t outside the feasible interval")

    @property
    def radicand(self) -> float:
        return -256.0 * self.t ** 2 + 32.0 * self.t + 7.0

    @property
    def a_t(self) -> float:
        return float(np.sqrt(self.radicand))

    @property
    def p0(self) -> float:
        return (1.0 + self.a_t) / 16.0

    @property
    def p1(self) -> float:
        return (2.0 - 8.0 * self.t + self.a_t) / 8.0

    @property
    def q0(self) -> float:
        return self.t

    @property
    def q1(self) -> float:
        return -(1.0 + 32.0 * self.t - self.a_t) / 16.0

    def polyphase(self) -> PolyphaseMatrix:
        p0, p1, q0, q1 = self.p0, self.p1, self.q0, self.q1
        F0 = RT2 * np.array([[p0, q0], [p1, q1]])
        F1 = RT2 * np.array([
            [0.125 - 4.0 * p0 + 2.0 * p1, 0.125 - 4.0 * q0 - 2.0 * q1],
            [0.375 - 2.0 * p0, -0.375 + 2.0 * q0],
        ])
        F2 = RT2 * np.array([
            [0.375 + 3.0 * p0 - 2.0 * p1, 0.375 + 3.0 * q0 + 2.0 * q1],
            [0.125 + 2.0 * p0 - p1, -0.125 - 2.0 * q0 - q1],
        ])
        return PolyphaseMatrix(np.array([F0, F1, F2]))


def d6_family(t: float) -> PolyphaseMatrix:
    """Polyphase coefficients F_0, F_1, F_2 of the degree-2 family at t."""
    return D6Family(t).polyphase()


def solve_d6() -> float:
    """Pin t by root-finding the unitarity defect of d6_family.

    The cross-orthogonality entries of the Gram matrix vanish identically
    in t, so the defect is represented by the signed diagonal entry
    ||p||^2 - 1, which changes sign exactly once on the feasible interval.
    """
    # nudged off the exact endpoints, where round-off turns the radicand
    # negative; the root is well interior
    lo = (1.0 - 2.0 * RT2) / 16.0 + 1e-12
    hi = (1.0 + 2.0 * RT2) / 16.0 - 1e-12

    def defect(t: float) -> float:
        F = d6_family(t)
        return float(np.sum(np.abs(F.coeffs[:, :, 0]) ** 2) - 1.0)

    try:
        return float(brentq(defect, lo, hi, xtol=1e-15))
    except ValueError as exc:
        raise ValueError("no root of the unitarity defect in the feasible interval") from exc


def blaschke_product(factors, tail: np.ndarray, tol: float = _PROJ_TOL) -> PolyphaseMatrix:
    """Coefficient expansion of prod_j (I - P_j + P_j xi) U_j followed by tail.

    The product of paraunitary factors is paraunitary, so the output always
    satisfies the QMF condition (up to round-off).
    """
    if isinstance(tail, FullRankUnitary):
        tail = tail.U
    tail = np.asarray(tail, dtype=complex)
    if unitarity_residual(tail) > tol:
        raise ValueError("tail is not unitary within tolerance")
    dim = tail.shape[0]
    coeffs = [np.eye(dim, dtype=complex)]
    for f in factors:
        if f.P.idempotency_residual() > tol or f.P.hermiticity_residual() > tol:
            raise ValueError("factor projection is not a Hermitian idempotent")
        if unitarity_residual(f.U) > tol:
            raise ValueError("factor unitary fails the unitarity check")
        c0 = (np.eye(dim) - f.P.P) @ f.U
        c1 = f.P.P @ f.U
        new = [np.zeros((dim, dim), dtype=complex) for _ in range(len(coeffs) + 1)]
        for k, c in enumerate(coeffs):
            new[k] += c @ c0
            new[k + 1] += c @ c1
        coeffs = new
    return PolyphaseMatrix(np.array([c @ tail for c in coeffs]))


def _blaschke_d6_masks(b1: float, b2: float) -> MaskPair:
    tail = FullRankUnitary(1.0).U.conj().T
    F = blaschke_product(
        [BlaschkeFactor(scalar_projection(b1, "-")),
         BlaschkeFactor(scalar_projection(b2, "-"))], tail)
    return polyphase_split(F)


def solve_blaschke_d6(x0=None) -> tuple:
    """Solve the order-2 moment conditions over (b1, b2) in [0, 1]^2.

    Damped Newton iteration on the two alternating p-moments (k = 1, 2);
    the q-moment conditions hold automatically at the root.  Starting
    points that escape the box fall back to a deterministic grid, so the
    returned root does not depend on the initial guess.
    """
    margin = 1e-6

    def eqs(x):
        return np.array([_alternating_p_moment(_blaschke_d6_masks(*x), 1),
                         _alternating_p_moment(_blaschke_d6_masks(*x), 2)])

    def _plain_q_moment(pair: MaskPair, m: int) -> float:
        c = pair.q.coeffs[:, 0, 0]
        alpha = np.arange(len(c))
        return float(np.real(np.sum(alpha ** m * c)))

    def jac(x):
        h = 1e-7
        J = np.zeros((2, 2))
        for j in range(2):
            dx = np.zeros(2)
            dx[j] = h
            J[:, j] = (eqs(x + dx) - eqs(x - dx)) / (2.0 * h)
        return J

    def newton(x):
        x = np.asarray(x, dtype=float)
        for _ in range(60):
            f = eqs(x)
            if np.linalg.norm(f) < 1e-13:
                return x
            try:
                step = np.linalg.solve(jac(x), f)
            except np.linalg.LinAlgError:
                return None
            lam = 1.0
            base = np.linalg.norm(f)
            while lam > 1e-6:
                cand = x - lam * step
                if np.all(cand >= margin) and np.all(cand <= 1.0 - margin) \
                        and np.linalg.norm(eqs(cand)) < base:
                    x = cand
                    break
                lam *= 0.5
            else:
                return None
        return x if np.linalg.norm(eqs(x)) < 1e-13 else None

    starts = []
    if x0 is not None:
        starts.append(np.asarray(x0, dtype=float))
    starts += [np.array([i / 6.0, j / 6.0]) for i in range(1, 6) for j in range(1, 6)]
    for s in starts:
        if np.any(s < margin) or np.any(s > 1.0 - margin):
            continue
        root = newton(s)
        if root is None:
            continue
        # the corresponding q-side moment conditions must hold at the root
        pair = _blaschke_d6_masks(*root)
        if max(abs(_plain_q_moment(pair, 1)), abs(_plain_q_moment(pair, 2))) < 1e-10:
            return (float(root[0]), float(root[1]))
    raise ValueError("no feasible root of the order-2 moment conditions")


FAMILY_NAMES = ("haar", "d4", "d6", "d6-potapov", "chui-lian",
                "lebrun-vetterli", "fullrank-a3", "fullrank-a4", "scalar")


def build_family(name: str, b: float = None, b1: float = None, b2: float = None,
                 sign: str = "+", ell: float = None) -> MaskPair:
    """Construct a named built-in mask pair.

    'haar' is the shifted 4-tap variant (b = 1) so that its polyphase
    matrix has degree 1 and admits the full ABCD treatment; the plain
    2-tap Haar pair is the constant-F special case and can be written
    down directly where needed.
    """
    haar_tail = FullRankUnitary(1.0)
    if name == "haar":
        return degree1_synthesize(scalar_projection(1.0, "+"), haar_tail)
    if name == "d4":
        return degree1_synthesize(scalar_projection(solve_scalar_order2(), "+"), haar_tail)
    if name == "d6":
        return polyphase_split(d6_family(solve_d6()))
    if name == "d6-potapov":
        return _blaschke_d6_masks(*solve_blaschke_d6())
    if name == "chui-lian":
        return chui_lian()
    if name == "lebrun-vetterli":
        return lebrun_vetterli(ell)
    if name == "fullrank-a3":
        P = full_rank_projection_a3(0.5 if b is None else b)
        return degree1_synthesize(P, FullRankUnitary(np.eye(2)))
    if name == "fullrank-a4":
        P = full_rank_projection_a4(0.5 if b1 is None else b1,
                                    0.5 if b2 is None else b2)
        return degree1_synthesize(P, FullRankUnitary(np.eye(2)))
    if name == "scalar":
        if b is None:
            raise ValueError("family 'scalar' requires the parameter b")
        return degree1_synthesize(scalar_projection(b, sign), haar_tail)
    raise ValueError(f"unknown family: {name}")


def designated_vectors(name: str) -> SumRuleVectors:
    """The sum-rule vectors each family is designed around."""
    if name in ("haar", "d4", "d6", "d6-potapov", "scalar"):
        return SumRuleVectors(np.array([[1.0]]))
    if name == "chui-lian":
        return SumRuleVectors(np.array([[1.0, 0.0]]))
    if name == "lebrun-vetterli":
        return SumRuleVectors(np.array([[1.0, 1.0]]))
    if name in ("fullrank-a3", "fullrank-a4"):
        return SumRuleVectors(np.eye(2))
    raise ValueError(f"unknown family: {name}")
