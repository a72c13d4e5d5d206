"""Dual-mode linear algebra substrate.

Every array in this package is either *rational* (numpy object arrays holding
``fractions.Fraction`` entries, decisions made with no tolerance) or *float*
(float64, decisions made against a ``TolerancePolicy``).  The mode of an array
is carried by its dtype; mixing modes inside one array is not supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

RATIONAL = "rational"
FLOAT = "float"


@dataclass(frozen=True)
class TolerancePolicy:
    """Numeric thresholds used by float-mode decisions.

    eq_tol: entrywise equality and axiom-violation threshold.
    rank_tol: singular values below rank_tol * sigma_max count as zero.
    membership_tol: relative residual bound for span / subgroup membership.
    """

    eq_tol: float = 1e-9
    rank_tol: float = 1e-9
    membership_tol: float = 1e-8


DEFAULT_TOLERANCE = TolerancePolicy()


class ModeError(ValueError):
    """Raised when an operation receives an array in an unsupported mode."""


def mode_of(a: np.ndarray) -> str:
    return RATIONAL if a.dtype == object else FLOAT


def rational_array(data) -> np.ndarray:
    """Build an object-dtype array whose entries are Fractions."""
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for idx in range(flat.shape[0]):
        v = flat[idx]
        if isinstance(v, Fraction):
            continue
        if isinstance(v, str):
            flat[idx] = Fraction(v)
        elif isinstance(v, (int, np.integer)):
            flat[idx] = Fraction(int(v))
        else:
            raise ModeError(f"entry {v!r} is not exactly representable as a rational")
    return flat.reshape(arr.shape)


def float_array(data) -> np.ndarray:
    return np.array(data, dtype=float)


def zeros(shape, mode: str) -> np.ndarray:
    if mode == RATIONAL:
        arr = np.empty(shape, dtype=object)
        arr.reshape(-1)[:] = [Fraction(0)] * int(np.prod(shape, dtype=int))
        return arr
    return np.zeros(shape, dtype=float)


def identity(n: int, mode: str) -> np.ndarray:
    out = zeros((n, n), mode)
    one = Fraction(1) if mode == RATIONAL else 1.0
    for i in range(n):
        out[i, i] = one
    return out


def to_float(a: np.ndarray) -> np.ndarray:
    if mode_of(a) == FLOAT:
        return a
    return np.array([float(x) for x in a.reshape(-1)], dtype=float).reshape(a.shape)


def frobenius(a: np.ndarray) -> float:
    """Frobenius / Euclidean norm, returned as a float in either mode."""
    if mode_of(a) == RATIONAL:
        s = sum(float(x) ** 2 for x in a.reshape(-1))
        return math.sqrt(s)
    return float(np.linalg.norm(a.reshape(-1)))


def max_abs(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    if mode_of(a) == RATIONAL:
        return max(abs(float(x)) for x in a.reshape(-1))
    return float(np.max(np.abs(a)))


def rref(a: np.ndarray, pivot_limit: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over the rationals.

    Returns the reduced matrix and the list of pivot column indices.
    Exact mode only.  When pivot_limit is given, pivots are only chosen in
    the first pivot_limit columns; elimination still clears full rows, which
    is what augmented multi-column solves need.
    """
    if mode_of(a) != RATIONAL:
        raise ModeError("rref is an exact-mode operation")
    m = a.copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    span = cols if pivot_limit is None else min(pivot_limit, cols)
    for c in range(span):
        pivot_row = None
        for i in range(r, rows):
            if m[i, c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[[r, pivot_row]] = m[[pivot_row, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: np.ndarray, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> int:
    if a.size == 0:
        return 0
    if mode_of(a) == RATIONAL:
        return len(rref(a)[1])
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.rank_tol * s[0]))


def nullspace(a: np.ndarray, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> list[np.ndarray]:
    """Basis of the right nullspace, as a list of vectors.

    Rational mode parameterizes the free columns of the RREF, which gives a
    canonical basis with unit entries in the free positions.  Float mode takes
    the right singular vectors whose singular values fall below
    rank_tol * sigma_max.
    """
    rows, cols = a.shape
    if mode_of(a) == RATIONAL:
        red, pivots = rref(a)
        free = [c for c in range(cols) if c not in pivots]
        basis = []
        for f in free:
            v = zeros((cols,), RATIONAL)
            v[f] = Fraction(1)
            for r_idx, p in enumerate(pivots):
                v[p] = -red[r_idx, f]
            basis.append(v)
        return basis
    if rows == 0:
        return [np.eye(cols)[i] for i in range(cols)]
    _, s, vh = np.linalg.svd(a)
    smax = s[0] if s.size else 0.0
    keep = [i for i in range(cols) if i >= s.size or s[i] <= tol.rank_tol * smax]
    return [vh[i].copy() for i in keep]


def span_basis(vectors, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> list[np.ndarray]:
    """Greedy maximal independent subset, keeping input order."""
    kept: list[np.ndarray] = []
    current_rank = 0
    for v in vectors:
        candidate = kept + [v]
        r = rank(np.array(candidate, dtype=candidate[0].dtype), tol)
        if r > current_rank:
            kept.append(v)
            current_rank = r
    return kept


def solve_exact(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Solve a @ x = b over the rationals; None if inconsistent."""
    rows, cols = a.shape
    aug = zeros((rows, cols + 1), RATIONAL)
    aug[:, :cols] = a
    aug[:, cols] = b
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = zeros((cols,), RATIONAL)
    for r_idx, p in enumerate(pivots):
        x[p] = red[r_idx, cols]
    return x


def coordinates_in_span(basis: list[np.ndarray], v: np.ndarray,
                        tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray | None:
    """Coordinates of v in the row span of basis, or None if v is outside.

    Float mode accepts v when the least-squares residual is at most
    membership_tol * max(1, |v|).
    """
    if not basis:
        if max_abs(v) == 0.0:
            return zeros((0,), mode_of(v))
        return None
    mode = mode_of(basis[0])
    bmat = np.array(basis, dtype=basis[0].dtype)
    if mode == RATIONAL:
        return solve_exact(bmat.T, v)
    coords, _, _, _ = np.linalg.lstsq(bmat.T, v, rcond=None)
    residual = float(np.linalg.norm(bmat.T @ coords - v))
    if residual <= tol.membership_tol * max(1.0, float(np.linalg.norm(v))):
        return coords
    return None


def coordinates_in_span_many(basis: list[np.ndarray], targets: list[np.ndarray],
                             tol: TolerancePolicy = DEFAULT_TOLERANCE
                             ) -> list[np.ndarray | None]:
    """Span coordinates for many targets at once; None where a target escapes.

    One row reduction (or one stacked least-squares call) serves every
    target, which matters when structure constants need thousands of solves.
    """
    if not targets:
        return []
    if not basis:
        return [zeros((0,), mode_of(t)) if max_abs(t) == 0.0 else None
                for t in targets]
    mode = mode_of(basis[0])
    k = len(basis)
    bmat = np.array(basis, dtype=basis[0].dtype)
    tmat = np.array(targets, dtype=targets[0].dtype)
    if mode == RATIONAL:
        aug = zeros((bmat.shape[1], k + len(targets)), RATIONAL)
        aug[:, :k] = bmat.T
        aug[:, k:] = tmat.T
        red, pivots = rref(aug, pivot_limit=k)
        rank_b = len(pivots)
        out: list[np.ndarray | None] = []
        for j in range(len(targets)):
            col = k + j
            if any(red[r, col] != 0 for r in range(rank_b, red.shape[0])):
                out.append(None)
                continue
            x = zeros((k,), RATIONAL)
            for r_idx, p in enumerate(pivots):
                x[p] = red[r_idx, col]
            out.append(x)
        return out
    coords, _, _, _ = np.linalg.lstsq(bmat.T, tmat.T, rcond=None)
    recon = bmat.T @ coords
    out = []
    for j in range(len(targets)):
        residual = float(np.linalg.norm(recon[:, j] - tmat[j]))
        if residual <= tol.membership_tol * max(1.0, float(np.linalg.norm(tmat[j]))):
            out.append(coords[:, j].copy())
        else:
            out.append(None)
    return out


# Coefficients of the degree-13 Pade approximant to exp, fixed so that the
# exponential is bit-for-bit reproducible across runs and platforms.
_PADE13 = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
)


def matrix_exp(x: np.ndarray, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Matrix exponential by scaling and squaring with the [13/13] Pade form.

    Rejects rational mode: the exponential is transcendental, so there is no
    exact-mode variant.  Accurate to eq_tol for inputs with norm up to ~50.
    """
    if mode_of(x) == RATIONAL:
        raise ModeError("matrix_exp requires float mode; the result is transcendental")
    n = x.shape[0]
    norm = float(np.linalg.norm(x, 1))
    theta13 = 5.371920351148152
    squarings = max(0, int(math.ceil(math.log2(norm / theta13))) if norm > theta13 else 0)
    a = x / (2.0 ** squarings)
    b = _PADE13
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    ident = np.eye(n)
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2) \
        + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident
    r = np.linalg.solve(v - u, v + u)
    for _ in range(squarings):
        r = r @ r
    return r


class LogBranchError(ValueError):
    """Raised when the principal matrix logarithm is undefined or unstable."""


def principal_log(a: np.ndarray, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Principal logarithm of a real matrix via eigendecomposition.

    Fails when an eigenvalue sits on the closed negative real axis or the
    matrix is too far from diagonalizable.  Adequate for the near-orthogonal
    matrices this package feeds it; not a general-purpose logm.
    """
    if mode_of(a) == RATIONAL:
        raise ModeError("principal_log requires float mode")
    w, vec = np.linalg.eig(a)
    scale = max(1.0, float(np.max(np.abs(w))))
    for lam in w:
        if lam.real <= 0 and abs(lam.imag) <= 1e-12 * scale:
            raise LogBranchError(f"eigenvalue {lam} on the principal branch cut")
    try:
        vinv = np.linalg.inv(vec)
    except np.linalg.LinAlgError as e:
        raise LogBranchError("eigenvector matrix is singular") from e
    recon = vec @ np.diag(w) @ vinv
    if float(np.max(np.abs(recon - a))) > 1e-8 * max(1.0, float(np.max(np.abs(a)))):
        raise LogBranchError("matrix is not reliably diagonalizable")
    log_a = vec @ np.diag(np.log(w)) @ vinv
    if float(np.max(np.abs(log_a.imag))) > 1e-8 * max(1.0, float(np.max(np.abs(log_a.real)))):
        raise LogBranchError("logarithm has a non-real part")
    return log_a.real


def realify(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """Real 2n x 2n image [[Re, -Im], [Im, Re]] of a complex n x n matrix.

    Works in both modes; re and im must share one mode.
    """
    n = re.shape[0]
    mode = mode_of(re)
    out = zeros((2 * n, 2 * n), mode)
    out[:n, :n] = re
    out[:n, n:] = -im
    out[n:, :n] = im
    out[n:, n:] = re
    return out


def realify_complex(z: np.ndarray) -> np.ndarray:
    return realify(np.real(z).astype(float), np.imag(z).astype(float))
