"""Lie algebras with involutions and the constructions that tie them to
Lie triple systems.

A Lie algebra lives here as a rank-3 structure tensor: tensor[i, j, k] is the
k-th coordinate of the commutator of the i-th and j-th basis vectors.  An
involutive automorphism theta splits the algebra into its +1 and -1
eigenspaces; the -1 part carries the double-commutator triple bracket.  In the
other direction, every Lie triple system embeds as the -1 part of a canonical
symmetric Lie algebra built from its bracket operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from triplekit import numerics as nx
from triplekit import lts as lt
from triplekit.numerics import DEFAULT_TOLERANCE, FLOAT, RATIONAL, TolerancePolicy
from triplekit.lts import AxiomReport, LieTripleSystem, LtsMorphism, Subspace


class InvolutionDefectError(ValueError):
    """theta fails to be an involutive automorphism of the algebra."""


class ClosureDefectError(ValueError):
    """The -1 eigenspace is not closed under the double commutator."""


class AxiomDefectError(ValueError):
    """A constructed algebra violates its defining identities."""


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    tensor: np.ndarray  # rank 3
    mode: str
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.tensor.shape != (self.dim,) * 3:
            raise AxiomDefectError("tensor shape does not match dim")
        if nx.mode_of(self.tensor) != self.mode:
            raise lt.ModeMismatchError("tensor dtype does not match declared mode")

    def to_float(self) -> "LieAlgebra":
        if self.mode == FLOAT:
            return self
        return LieAlgebra(self.dim, nx.to_float(self.tensor), FLOAT, self.labels)


def lie_bracket_eval(g: LieAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    t = np.tensordot(x, g.tensor, axes=(0, 0))
    return np.tensordot(y, t, axes=(0, 0))


def verify_lie_axioms(g: LieAlgebra, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> AxiomReport:
    """Antisymmetry and the Jacobi identity on basis tuples."""
    c = g.tensor
    anti = c + c.transpose(1, 0, 2)
    jac = np.tensordot(c, c, axes=([2], [0]))
    jac = jac + jac.transpose(2, 0, 1, 3) + jac.transpose(1, 2, 0, 3)
    worst = max(nx.max_abs(anti), nx.max_abs(jac))
    threshold = 0.0 if g.mode == RATIONAL else tol.eq_tol
    name = None
    if worst > threshold:
        name = "antisymmetry" if nx.max_abs(anti) >= nx.max_abs(jac) else "jacobi"
    return AxiomReport(worst <= threshold, worst, name)


def _automorphism_defect(g: LieAlgebra, theta: np.ndarray) -> float:
    """Worst entry of theta[x, y] - [theta x, theta y] over basis pairs."""
    c = g.tensor
    lhs = np.tensordot(c, theta, axes=([2], [1]))            # [i,j,m]
    t1 = np.tensordot(theta, c, axes=([0], [0]))             # [i,b,l]
    rhs = np.tensordot(theta, t1, axes=([0], [1]))           # [j,i,l]
    rhs = rhs.transpose(1, 0, 2)
    return nx.max_abs(lhs - rhs)


@dataclass(frozen=True)
class SymmetricLieAlgebra:
    """A Lie algebra together with an involutive automorphism.

    Both the involution property and the automorphism property are checked at
    construction time; exact mode tolerates no defect at all.
    """
    algebra: LieAlgebra
    theta: np.ndarray

    def __post_init__(self):
        g = self.algebra
        if self.theta.shape != (g.dim, g.dim):
            raise InvolutionDefectError("theta shape does not match the algebra")
        if nx.mode_of(self.theta) != g.mode:
            raise lt.ModeMismatchError("theta mode does not match the algebra")
        thr = 0.0 if g.mode == RATIONAL else DEFAULT_TOLERANCE.eq_tol
        sq = self.theta @ self.theta - nx.identity(g.dim, g.mode)
        if nx.max_abs(sq) > thr:
            raise InvolutionDefectError("theta squared is not the identity")
        if _automorphism_defect(g, self.theta) > thr:
            raise InvolutionDefectError("theta is not an automorphism")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def mode(self) -> str:
        return self.algebra.mode


@dataclass(frozen=True)
class EigenSplit:
    plus: Subspace
    minus: Subspace


def eigensplit(sla: SymmetricLieAlgebra, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> EigenSplit:
    """Eigenspaces of theta; also checks that the +1 part is a subalgebra."""
    g = sla.algebra
    eye = nx.identity(g.dim, g.mode)
    plus = lt.subspace_from_vectors(g.dim, nx.nullspace(sla.theta - eye, tol), g.mode, tol)
    minus = lt.subspace_from_vectors(g.dim, nx.nullspace(sla.theta + eye, tol), g.mode, tol)
    if plus.dim + minus.dim != g.dim:
        raise InvolutionDefectError("eigenspaces of theta do not span")
    for u in plus.basis:
        for v in plus.basis:
            if not plus.contains(lie_bracket_eval(g, u, v), tol):
                raise InvolutionDefectError("+1 eigenspace is not a subalgebra")
    return EigenSplit(plus, minus)


def triple_from_involution(g: LieAlgebra, theta: np.ndarray,
                           tol: TolerancePolicy = DEFAULT_TOLERANCE
                           ) -> tuple[LieTripleSystem, Subspace]:
    """Double-commutator triple system on the -1 eigenspace of theta.

    Accepts any linear involution; closure of the -1 part under the double
    commutator is what is actually needed and is verified here.  Returns the
    system together with the eigenspace basis used as its coordinates.
    """
    thr = 0.0 if g.mode == RATIONAL else tol.eq_tol
    sq = theta @ theta - nx.identity(g.dim, g.mode)
    if nx.max_abs(sq) > thr:
        raise InvolutionDefectError("theta squared is not the identity")
    minus = lt.subspace_from_vectors(
        g.dim, nx.nullspace(theta + nx.identity(g.dim, g.mode), tol), g.mode, tol)
    d = minus.dim
    tensor = nx.zeros((d, d, d, d), g.mode)
    flat = list(minus.basis)
    bmat = np.array(flat, dtype=flat[0].dtype) if flat else nx.zeros((0, g.dim), g.mode)
    c = g.tensor
    # [[b_i, b_j], b_k] for all i, j, k in one contraction chain
    inner = np.tensordot(bmat, c, axes=(1, 0))
    inner = np.tensordot(bmat, inner, axes=(1, 1)).transpose(1, 0, 2)
    dbl = np.tensordot(inner, c, axes=(2, 0))
    dbl = np.tensordot(dbl, bmat, axes=(2, 1)).transpose(0, 1, 3, 2)
    targets = [dbl[i, j, k] for i in range(d) for j in range(d) for k in range(d)]
    all_coords = nx.coordinates_in_span_many(flat, targets, tol)
    pos = 0
    for i in range(d):
        for j in range(d):
            for k in range(d):
                coords = all_coords[pos]
                pos += 1
                if coords is None:
                    raise ClosureDefectError(
                        "-1 eigenspace is not closed under double commutators")
                tensor[i, j, k, :] = coords
    return LieTripleSystem(d, tensor, g.mode), minus


def minus_triple(sla: SymmetricLieAlgebra,
                 tol: TolerancePolicy = DEFAULT_TOLERANCE) -> tuple[LieTripleSystem, Subspace]:
    return triple_from_involution(sla.algebra, sla.theta, tol)


def g_plus(g: LieAlgebra, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> LieTripleSystem:
    """Triple system on all of g with bracket one quarter of [[x, y], z].

    The quarter normalization makes the group exponential of G agree with the
    symmetric-space exponential of G seen as a symmetric space.  The center of
    the result is every x whose commutators land in the center of g; in
    particular it contains the embedded center of g, which is verified here.
    """
    quarter = Fraction(1, 4) if g.mode == RATIONAL else 0.25
    tensor = np.tensordot(g.tensor, g.tensor, axes=([2], [0])) * quarter
    system = LieTripleSystem(g.dim, tensor, g.mode, g.labels)
    zg = lie_center(g, tol)
    zsys = lt.center(system, tol)
    if not zsys.contains_subspace(zg, tol):
        raise AxiomDefectError("center of the quarter system lost the algebra center")
    return system


def lie_center(g: LieAlgebra, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Subspace:
    """Joint kernel of the adjoint maps."""
    d = g.dim
    stacked = g.tensor.transpose(1, 2, 0).reshape(d * d, d)
    return lt.subspace_from_vectors(d, nx.nullspace(stacked, tol), g.mode, tol)


def symmetric_center(sla: SymmetricLieAlgebra,
                     tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Subspace:
    """Center of the algebra, with theta-invariance verified."""
    z = lie_center(sla.algebra, tol)
    for v in z.basis:
        if not z.contains(sla.theta @ v, tol):
            raise InvolutionDefectError("center is not theta invariant")
    return z


@dataclass(frozen=True)
class StandardEmbedding:
    """A triple system realized inside its canonical symmetric Lie algebra.

    The ambient algebra is spanned by the independent bracket operators
    (the derived part, first h_dim coordinates) followed by the original
    system (the last coordinates).  theta fixes the operators and negates
    the system.
    """
    source: LieTripleSystem
    symmetric: SymmetricLieAlgebra
    h_dim: int
    operators: tuple[np.ndarray, ...]
    embedding: LtsMorphism


def standard_embedding(m: LieTripleSystem,
                       tol: TolerancePolicy = DEFAULT_TOLERANCE) -> StandardEmbedding:
    """Embed a triple system as the odd part of a symmetric Lie algebra.

    The even part is spanned by the operators v -> bracket(e_i, e_j, v),
    collected greedily in lexicographic (i, j) order.  Commutation relations:
    operators commute into operators, an operator applied to an odd vector is
    a matrix action, and two odd vectors bracket to their bracket operator.

    Verifies, and fails loudly otherwise: the Jacobi identity, that theta is
    an involutive automorphism, that restricting the double commutator to the
    odd block returns exactly the original tensor, and that the center of the
    ambient algebra is the embedded center of the system.
    """
    d = m.dim
    ops: list[np.ndarray] = []
    for i in range(d):
        for j in range(d):
            cand = m.tensor[i, j].T  # maps e_k to the bracket of (e_i, e_j, e_k)
            if nx.max_abs(cand) == 0.0:
                continue
            if nx.coordinates_in_span([o.reshape(-1) for o in ops], cand.reshape(-1), tol) is None:
                ops.append(cand)
    h = len(ops)
    n = h + d
    flat_ops = [o.reshape(-1) for o in ops]
    tensor = nx.zeros((n, n, n), m.mode)
    for a in range(h):
        for b in range(h):
            comm = ops[a] @ ops[b] - ops[b] @ ops[a]
            coords = nx.coordinates_in_span(flat_ops, comm.reshape(-1), tol)
            if coords is None:
                raise AxiomDefectError("operator span is not closed under commutators")
            tensor[a, b, :h] = coords
    for a in range(h):
        for k in range(d):
            col = ops[a][:, k]
            tensor[a, h + k, h:] = col
            tensor[h + k, a, h:] = -col
    for i in range(d):
        for j in range(d):
            cand = m.tensor[i, j].T
            coords = nx.coordinates_in_span(flat_ops, cand.reshape(-1), tol)
            if coords is None:
                raise AxiomDefectError("bracket operator escaped the operator span")
            tensor[h + i, h + j, :h] = coords
    ambient = LieAlgebra(n, tensor, m.mode)
    report = verify_lie_axioms(ambient, tol)
    if not report.ok:
        raise AxiomDefectError(f"embedding violates {report.identity} by {report.worst_violation}")
    theta = nx.identity(n, m.mode)
    minus_one = Fraction(-1) if m.mode == RATIONAL else -1.0
    for k in range(d):
        theta[h + k, h + k] = minus_one
    symmetric = SymmetricLieAlgebra(ambient, theta)  # checks the automorphism

    back, minus = minus_triple(symmetric, tol)
    thr = 0.0 if m.mode == RATIONAL else tol.eq_tol
    expected = nx.identity(n, m.mode)[h:, :]
    if minus.basis.shape != expected.shape or nx.max_abs(minus.basis - expected) > thr:
        raise AxiomDefectError("odd eigenspace basis is not the canonical block")
    if nx.max_abs(back.tensor - m.tensor) > thr:
        raise AxiomDefectError("round trip through the embedding deformed the bracket")

    z_ambient = lie_center(ambient, tol)
    z_m = lt.center(m, tol)
    embedded = []
    for v in z_m.basis:
        vec = nx.zeros((n,), m.mode)
        vec[h:] = v
        embedded.append(vec)
    z_embedded = lt.subspace_from_vectors(n, embedded, m.mode, tol)
    if not z_ambient.equals(z_embedded, tol):
        raise AxiomDefectError("ambient center differs from the embedded center")

    emb_matrix = nx.identity(d, m.mode)
    embedding = lt.certify_morphism(LtsMorphism(m, back, emb_matrix), tol)
    if not embedding.certified:
        raise AxiomDefectError("embedding morphism failed certification")
    return StandardEmbedding(m, symmetric, h, tuple(ops), embedding)
