"""Lie triple systems stored as dense rank-4 coefficient tensors.

tensor[i, j, k, l] is the l-th coordinate of the bracket of the i-th, j-th and
k-th basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from triplekit import numerics as nx
from triplekit.numerics import DEFAULT_TOLERANCE, FLOAT, RATIONAL, TolerancePolicy

# keeps the O(dim^5) axiom sweep tractable
MAX_DIM = 32

PATH_ZERO_AT_START = "path_zero_at_start"
LOOP_ZERO_AT_BOTH_ENDS = "loop_zero_at_both_ends"


class LtsStructureError(ValueError):
    pass


class NotAnIdealError(LtsStructureError):
    pass


class ModeMismatchError(LtsStructureError):
    pass


@dataclass(frozen=True)
class LieTripleSystem:
    dim: int
    tensor: np.ndarray
    mode: str
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.dim > MAX_DIM:
            raise LtsStructureError(f"dimension {self.dim} exceeds the cap {MAX_DIM}")
        if self.tensor.shape != (self.dim,) * 4:
            raise LtsStructureError("tensor shape does not match dim")
        if nx.mode_of(self.tensor) != self.mode:
            raise ModeMismatchError("tensor dtype does not match declared mode")
        if self.labels is not None and len(self.labels) != self.dim:
            raise LtsStructureError("label count does not match dim")

    def to_float(self) -> "LieTripleSystem":
        if self.mode == FLOAT:
            return self
        return LieTripleSystem(self.dim, nx.to_float(self.tensor), FLOAT, self.labels)


@dataclass(frozen=True)
class Subspace:
    """Subspace of R^parent_dim, basis vectors as rows."""
    parent_dim: int
    basis: np.ndarray  # shape (k, parent_dim)
    mode: str

    def __post_init__(self):
        if self.basis.ndim != 2 or self.basis.shape[1] != self.parent_dim:
            raise LtsStructureError("basis shape does not match parent_dim")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, v: np.ndarray, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> bool:
        return nx.coordinates_in_span(list(self.basis), v, tol) is not None

    def contains_subspace(self, other: "Subspace", tol: TolerancePolicy = DEFAULT_TOLERANCE) -> bool:
        return all(self.contains(v, tol) for v in other.basis)

    def equals(self, other: "Subspace", tol: TolerancePolicy = DEFAULT_TOLERANCE) -> bool:
        return self.contains_subspace(other, tol) and other.contains_subspace(self, tol)


def subspace_from_vectors(parent_dim: int, vectors, mode: str,
                          tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Subspace:
    vecs = list(vectors)
    if not vecs:
        return Subspace(parent_dim, nx.zeros((0, parent_dim), mode), mode)
    basis = nx.span_basis(vecs, tol)
    return Subspace(parent_dim, np.array(basis, dtype=basis[0].dtype), mode)


@dataclass(frozen=True)
class LtsMorphism:
    source: LieTripleSystem
    target: LieTripleSystem
    matrix: np.ndarray  # shape (target.dim, source.dim), acts on coordinate columns
    certified: bool = False


@dataclass(frozen=True)
class GridPathSystem:
    """Finite grid surrogate for a path or loop space over a base system.

    Nodes carry one copy of the base; the bracket acts node by node.  Fixed
    endpoint values are pinned to zero and do not appear as coordinates.
    """
    base: LieTripleSystem
    grid_size: int
    constraint: str
    system: LieTripleSystem = field(compare=False)


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    worst_violation: float
    identity: str | None = None
    witness: tuple | None = None


def bracket_eval(m: LieTripleSystem, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    t = np.tensordot(x, m.tensor, axes=(0, 0))
    t = np.tensordot(y, t, axes=(0, 0))
    return np.tensordot(z, t, axes=(0, 0))


def left_multiplication(m: LieTripleSystem, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Matrix of the operator sending v to the bracket of (x, y, v)."""
    t = np.tensordot(x, m.tensor, axes=(0, 0))
    t = np.tensordot(y, t, axes=(0, 0))  # t[k, l]
    return t.T  # rows indexed by output coordinate


def _argmax_abs(a: np.ndarray) -> tuple:
    flat_idx = int(np.argmax(nx.to_float(np.abs(a)) if a.dtype == object else np.abs(a)))
    return np.unravel_index(flat_idx, a.shape)


def verify_axioms(m: LieTripleSystem, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> AxiomReport:
    """Check the three defining identities on all basis tuples.

    Multilinearity makes basis tuples sufficient.  Exact mode demands zero
    defect; float mode compares against eq_tol.
    """
    c = m.tensor
    defects = []

    anti = c + c.transpose(1, 0, 2, 3)
    defects.append(("left_antisymmetry", anti))

    cyc = c + c.transpose(2, 0, 1, 3) + c.transpose(1, 2, 0, 3)
    defects.append(("cyclic_sum", cyc))

    # derivation identity, contracted with tensordot; index order fixed to
    # (i, j, u, v, w, l) in every term
    inner = np.tensordot(c, c, axes=([3], [2]))          # [u,v,w,i,j,l]
    lhs = inner.transpose(3, 4, 0, 1, 2, 5)
    t1 = np.tensordot(c, c, axes=([3], [0]))             # [i,j,u,v,w,l]
    t2 = np.tensordot(c, c, axes=([3], [1]))             # [i,j,v,u,w,l]
    t2 = t2.transpose(0, 1, 3, 2, 4, 5)
    t3 = np.tensordot(c, c, axes=([3], [2]))             # [i,j,w,u,v,l]
    t3 = t3.transpose(0, 1, 3, 4, 2, 5)
    defects.append(("derivation", lhs - t1 - t2 - t3))

    worst = 0.0
    worst_name = None
    worst_witness = None
    for name, d in defects:
        v = nx.max_abs(d)
        if v > worst:
            worst = v
            worst_name = name
            worst_witness = _argmax_abs(d)
    threshold = 0.0 if m.mode == RATIONAL else tol.eq_tol
    ok = worst <= threshold
    return AxiomReport(ok, worst, None if ok else worst_name, None if ok else worst_witness)


def center(m: LieTripleSystem, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Subspace:
    """Joint kernel of x -> bracket(x, e_j, e_k) over all j, k.

    Also verifies the two lateral vanishing properties and the ideal property
    of the result; failure of either means the tensor is not a Lie triple
    system and raises LtsStructureError.
    """
    d = m.dim
    stacked = m.tensor.transpose(1, 2, 3, 0).reshape(d * d * d, d)
    basis = nx.nullspace(stacked, tol)
    z = subspace_from_vectors(d, basis, m.mode, tol)
    thr = 0.0 if m.mode == RATIONAL else tol.eq_tol
    for v in z.basis:
        mid = np.tensordot(v, m.tensor, axes=(0, 1))    # bracket(., v, .)
        last = np.tensordot(v, m.tensor, axes=(0, 2))   # bracket(., ., v)
        if nx.max_abs(mid) > thr or nx.max_abs(last) > thr:
            raise LtsStructureError("central vector fails a lateral identity; tensor is not an LTS")
    if z.dim and not is_ideal(m, z, tol):
        raise LtsStructureError("center is not an ideal; tensor is not an LTS")
    return z


def is_subsystem(m: LieTripleSystem, sub: Subspace, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> bool:
    for x in sub.basis:
        for y in sub.basis:
            for z in sub.basis:
                if not sub.contains(bracket_eval(m, x, y, z), tol):
                    return False
    return True


def is_ideal(m: LieTripleSystem, sub: Subspace, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> bool:
    """Test bracket(n, m, m) inside n; on success assert the two companion
    containments, which are automatic for a genuine LTS."""
    d = m.dim
    for x in sub.basis:
        first = np.tensordot(x, m.tensor, axes=(0, 0))  # [j, k, l]
        for j in range(d):
            for k in range(d):
                if not sub.contains(first[j, k], tol):
                    return False
    for x in sub.basis:
        mid = np.tensordot(x, m.tensor, axes=(0, 1))
        last = np.tensordot(x, m.tensor, axes=(0, 2))
        for j in range(d):
            for k in range(d):
                if not sub.contains(mid[j, k], tol) or not sub.contains(last[j, k], tol):
                    raise LtsStructureError(
                        "ideal closure is one-sided; tensor is not a Lie triple system")
    return True


def quotient(m: LieTripleSystem, ideal: Subspace,
             tol: TolerancePolicy = DEFAULT_TOLERANCE) -> tuple[LieTripleSystem, LtsMorphism]:
    """Quotient system and the certified projection onto it.

    The complement is chosen greedily from the standard basis, so quotient
    coordinates are reproducible.
    """
    if not is_ideal(m, ideal, tol):
        raise NotAnIdealError("subspace is not an ideal")
    d = m.dim
    ideal = subspace_from_vectors(d, list(ideal.basis), m.mode, tol)
    eye = nx.identity(d, m.mode)
    extended = nx.span_basis(list(ideal.basis) + [eye[i] for i in range(d)], tol)
    complement = extended[ideal.dim:]
    q = len(complement)
    # rows: complement then ideal; coordinates of x are solve(B^T a = x)
    b = np.array(list(complement) + list(ideal.basis), dtype=m.tensor.dtype)
    if m.mode == RATIONAL:
        bt_inv_rows = [nx.solve_exact(b.T, eye[i]) for i in range(d)]
        proj = np.array([[bt_inv_rows[col][row] for col in range(d)] for row in range(q)],
                        dtype=object)
    else:
        binv = np.linalg.inv(b.T)
        proj = binv[:q, :]
    tensor = nx.zeros((q, q, q, q), m.mode)
    for a in range(q):
        for bb in range(q):
            for cc in range(q):
                br = bracket_eval(m, complement[a], complement[bb], complement[cc])
                tensor[a, bb, cc, :] = proj @ br
    labels = None
    if m.labels:
        labels = tuple(f"q{idx}" for idx in range(q))
    qsys = LieTripleSystem(q, tensor, m.mode, labels)
    morphism = certify_morphism(LtsMorphism(m, qsys, proj), tol)
    return qsys, morphism


def direct_product(m1: LieTripleSystem, m2: LieTripleSystem) -> LieTripleSystem:
    if m1.mode != m2.mode:
        raise ModeMismatchError("direct product requires matching scalar modes")
    d1, d2 = m1.dim, m2.dim
    d = d1 + d2
    tensor = nx.zeros((d, d, d, d), m1.mode)
    tensor[:d1, :d1, :d1, :d1] = m1.tensor
    tensor[d1:, d1:, d1:, d1:] = m2.tensor
    labels = None
    if m1.labels and m2.labels:
        labels = tuple(f"L.{s}" for s in m1.labels) + tuple(f"R.{s}" for s in m2.labels)
    return LieTripleSystem(d, tensor, m1.mode, labels)


def grid_path_system(base: LieTripleSystem, grid_size: int, constraint: str) -> GridPathSystem:
    if constraint not in (PATH_ZERO_AT_START, LOOP_ZERO_AT_BOTH_ENDS):
        raise LtsStructureError(f"unknown grid constraint {constraint!r}")
    if constraint == PATH_ZERO_AT_START and grid_size < 2:
        raise LtsStructureError("path grids need at least 2 nodes")
    if constraint == LOOP_ZERO_AT_BOTH_ENDS and grid_size < 3:
        raise LtsStructureError("loop grids need at least 3 nodes")
    free = grid_size - 1 if constraint == PATH_ZERO_AT_START else grid_size - 2
    d = base.dim
    total = free * d
    tensor = nx.zeros((total, total, total, total), base.mode)
    for node in range(free):
        s = slice(node * d, (node + 1) * d)
        tensor[s, s, s, s] = base.tensor
    base_labels = base.labels or tuple(f"e{i}" for i in range(d))
    labels = tuple(f"{lab}@t{node + 1}" for node in range(free) for lab in base_labels)
    system = LieTripleSystem(total, tensor, base.mode, labels)
    return GridPathSystem(base, grid_size, constraint, system)


def grid_node_embedding(grid: GridPathSystem, sub: Subspace) -> Subspace:
    """Block embedding of a base subspace into every free node of a grid."""
    free = grid.system.dim // grid.base.dim
    d = grid.base.dim
    vectors = []
    for node in range(free):
        for v in sub.basis:
            vec = nx.zeros((grid.system.dim,), grid.base.mode)
            vec[node * d:(node + 1) * d] = v
            vectors.append(vec)
    return subspace_from_vectors(grid.system.dim, vectors, grid.base.mode)


def certify_morphism(f: LtsMorphism, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> LtsMorphism:
    """Return a copy with certified set iff f respects brackets on all basis triples."""
    ds = f.source.dim
    eye = nx.identity(ds, f.source.mode)
    thr = 0.0 if f.source.mode == RATIONAL and f.target.mode == RATIONAL else tol.eq_tol
    ok = True
    for i in range(ds):
        for j in range(ds):
            for k in range(ds):
                lhs = f.matrix @ bracket_eval(f.source, eye[i], eye[j], eye[k])
                rhs = bracket_eval(f.target, f.matrix @ eye[i], f.matrix @ eye[j], f.matrix @ eye[k])
                if nx.max_abs(lhs - rhs) > thr:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            break
    return replace(f, certified=ok)
