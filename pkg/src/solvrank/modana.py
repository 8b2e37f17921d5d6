"""Submodule structure of a matrix group acting on its natural module.

Everything works over the prime field: a group over GF(p^k) is analysed as
its field-descent image in GL(dk, p), which is the module that matters for
the affine permutation group V x| G0.

Two primitivity notions are provided.  ``is_quasiprimitive`` checks that
every normal subgroup acts homogeneously; ``is_linearly_primitive`` looks
directly for a system of imprimitivity V = W_1 + ... + W_t permuted by the
group.  The classification filter uses the linear test and records the
quasi-primitive verdict next to it.
"""

from __future__ import annotations

import itertools
from math import prod
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import BudgetExceeded, budgets
from .engine import ElementSet, MatGroup, orbit_partition
from .matlin import all_vectors, index_vector, nullspace, rank, rref

__all__ = [
    "Subspace",
    "spin",
    "is_irreducible",
    "minimal_submodules",
    "intertwiners",
    "is_homogeneous",
    "normal_subgroups",
    "is_quasiprimitive",
    "is_linearly_primitive",
    "imprimitivity_systems",
]


@dataclass(frozen=True)
class Subspace:
    """Subspace of GF(p)^d stored by its reduced row-echelon basis."""

    p: int
    d: int
    basis: tuple  # tuple of row tuples, canonical RREF

    @classmethod
    def span(cls, vectors, p: int, d: int) -> "Subspace":
        M = np.asarray(vectors, dtype=np.int64).reshape(-1, d) % p
        if M.size == 0:
            return cls(p, d, ())
        R, piv = rref(M, p)
        return cls(p, d, tuple(tuple(int(x) for x in R[i]) for i in range(len(piv))))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.dim, self.d)

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(1, self.d) % self.p
        if self.dim == 0:
            return not v.any()
        return rank(np.concatenate([self.matrix, v]), self.p) == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def points(self) -> np.ndarray:
        """Sorted vector indices of all elements of the subspace."""
        coeffs = all_vectors(self.p, self.dim)
        vecs = (coeffs @ self.matrix) % self.p if self.dim else np.zeros((1, self.d), dtype=np.int64)
        return np.sort(vecs @ (self.p ** np.arange(self.d, dtype=np.int64)))


def _lin(G) -> tuple[int, int, list[np.ndarray]]:
    if isinstance(G, MatGroup):
        return G.p, G.degree, list(G.lin)
    p, d, gens = G
    return p, d, [np.asarray(g, dtype=np.int64) % p for g in gens]


class _Echelon:
    """Incremental echelon basis over GF(p)."""

    def __init__(self, p: int, d: int):
        self.p, self.d = p, d
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v % self.p
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def add(self, v: np.ndarray) -> bool:
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = (v * pow(int(v[c]), -1, self.p)) % self.p
        for i, row in enumerate(self.rows):
            if row[c]:
                self.rows[i] = (row - row[c] * v) % self.p
        self.rows.append(v)
        self.pivots.append(c)
        return True


def spin(G, v) -> Subspace:
    """Smallest G-invariant subspace containing v (an index or a vector)."""
    p, d, gens = _lin(G)
    if np.isscalar(v) or np.ndim(v) == 0:
        v = index_vector(int(v), p, d)
    v = np.asarray(v, dtype=np.int64) % p
    if not v.any():
        raise ValueError("cannot spin the zero vector")
    ech = _Echelon(p, d)
    ech.add(v)
    queue = [v]
    while queue and len(ech.rows) < d:
        w = queue.pop()
        for g in gens:
            img = (g @ w) % p
            if ech.add(img):
                queue.append(img)
    return Subspace.span(np.array(ech.rows), p, d)


def _spin_representatives(G) -> list[int]:
    """One nonzero vector index per G-orbit, or per line if orbits are too costly."""
    p, d, gens = _lin(G)
    if p**d <= budgets().orbit:
        if not isinstance(G, MatGroup):
            G = MatGroup.from_arrays(p, gens, d) if gens else None
        if G is not None:
            return [r for r in orbit_partition(G).representatives if r != 0]
    lines = (p**d - 1) // (p - 1)
    if lines > 3 * budgets().orbit:
        raise BudgetExceeded("projective lines", lines, 3 * budgets().orbit)
    vecs = []
    # normalised representatives: first nonzero coordinate equal to 1
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            v = [0] * lead + [1] + list(tail)
            vecs.append(int(np.dot(v, p ** np.arange(d))))
    return vecs


def is_irreducible(G) -> bool:
    """True iff every nonzero vector spins to the whole space.

    Vectors in one G-orbit spin to the same submodule, so one vector per
    orbit is enough.
    """
    p, d, gens = _lin(G)
    return all(spin((p, d, gens), v).dim == d for v in _spin_representatives(G))


def minimal_submodules(G) -> list[Subspace]:
    """All minimal G-submodules, sorted by canonical basis."""
    p, d, gens = _lin(G)
    spins = {spin((p, d, gens), v) for v in _spin_representatives(G)}
    by_dim = sorted(spins, key=lambda s: (s.dim, s.basis))
    minimal = []
    for s in by_dim:
        if not any(m.dim < s.dim and m <= s for m in minimal):
            minimal.append(s)
    return sorted(minimal, key=lambda s: (s.dim, s.basis))


def _restrict(gens, W: Subspace) -> list[np.ndarray]:
    """Matrices of the generators on W in its echelon basis (column action)."""
    p = W.p
    B = W.matrix  # rows are basis vectors
    piv = [int(np.nonzero(row)[0][0]) for row in B]
    out = []
    for g in gens:
        img = (B @ g.T) % p  # row i = g applied to basis vector i
        # coordinates in an RREF basis are read off at the pivot columns
        out.append(img[:, piv].T.copy())
    return out


def intertwiners(A: Sequence[np.ndarray], B: Sequence[np.ndarray], p: int) -> np.ndarray:
    """Basis of {X : X A_i = B_i X for all i}; X has shape (dim B, dim A)."""
    a = A[0].shape[0]
    b = B[0].shape[0]
    blocks = []
    Ia, Ib = np.eye(a, dtype=np.int64), np.eye(b, dtype=np.int64)
    for Ai, Bi in zip(A, B):
        # vec(X A) = (A^T kron I) vec(X), column-major vec
        blocks.append((np.kron(Ai.T, Ib) - np.kron(Ia, Bi)) % p)
    M = np.concatenate(blocks)
    sols = nullspace(M, p)
    return np.array([s.reshape(a, b).T for s in sols], dtype=np.int64).reshape(-1, b, a)


def _isomorphic(gens, W1: Subspace, W2: Subspace) -> bool:
    if W1.dim != W2.dim:
        return False
    p = W1.p
    X = intertwiners(_restrict(gens, W1), _restrict(gens, W2), p)
    # W1, W2 are irreducible, so any nonzero intertwiner is invertible
    return len(X) > 0 and rank(X[0], p) == W1.dim


def _commutant(p, d, gens) -> np.ndarray:
    """Basis of End_K(V) as a stack of d x d matrices."""
    if not gens:
        eye = np.eye(d * d, dtype=np.int64)
        return eye.reshape(d * d, d, d)
    return intertwiners(gens, gens, p)


def _algebra_coords(basis: np.ndarray, p: int):
    """Return a function expressing matrices in the span of ``basis``."""
    n = basis.shape[0]
    flat = basis.reshape(n, -1).T % p  # columns are basis elements

    def coords(M):
        aug = np.concatenate([flat, np.asarray(M, dtype=np.int64).reshape(-1, 1) % p], axis=1)
        R2, piv2 = rref(aug, p)
        if n in piv2:
            raise ValueError("matrix outside the algebra")
        c = np.zeros(n, dtype=np.int64)
        for r, pc in enumerate(piv2):
            c[pc] = R2[r, n]
        return c

    return coords


def homogeneous_components(G) -> int:
    """Number of isotypic components of a semisimple module.

    The commutant C = End_K(V) of a semisimple module is a product of
    matrix algebras, one per isotypic component, so its centre is a product
    of that many finite fields.  The number of field factors equals the
    dimension of the fixed space of the Frobenius map z -> z^p on the centre.
    """
    p, d, gens = _lin(G)
    C = _commutant(p, d, gens)
    # centre: combinations z = sum a_i C_i commuting with every C_j
    eqs = []
    for Cj in C:
        eqs.append(np.stack([((Ci @ Cj) - (Cj @ Ci)).reshape(-1) % p for Ci in C], axis=1))
    Zc = nullspace(np.concatenate(eqs), p)  # rows: coefficient vectors
    Z = np.einsum("ri,ijk->rjk", Zc, C) % p
    coords = _algebra_coords(Z, p)
    frob = np.stack([coords(_matpow(z, p, p)) for z in Z], axis=1)
    fixed = Z.shape[0] - rank((frob - np.eye(Z.shape[0], dtype=np.int64)) % p, p)
    return int(fixed)


def _matpow(M, e, p):
    out = np.eye(M.shape[0], dtype=np.int64)
    base = M % p
    while e:
        if e & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        e >>= 1
    return out


def is_homogeneous(K, method: str = "commutant") -> bool:
    """True iff all irreducible submodules of the restriction are isomorphic.

    ``method="submodules"`` lists the minimal submodules, checks that they
    span V and compares them pairwise through intertwiners.  The default
    ``"commutant"`` method assumes the restriction is semisimple (true for
    normal subgroups of an irreducible group, by Clifford's theorem) and
    counts isotypic components through the centre of End_K(V).
    """
    p, d, gens = _lin(K)
    if method == "commutant":
        return homogeneous_components((p, d, gens)) == 1
    if method != "submodules":
        raise ValueError(f"unknown method {method!r}")
    mins = minimal_submodules(K)
    if rank(np.concatenate([m.matrix for m in mins]), p) != d:
        return False
    return all(_isomorphic(gens, mins[0], W) for W in mins[1:])


# ---------------------------------------------------------------------------
# normal subgroups


def _class_labels(els: ElementSet, gens: Sequence[np.ndarray]) -> np.ndarray:
    n = els.n
    rows, cols = [], []
    for g in gens:
        img = els.conj_by(g)
        rows.append(np.arange(n))
        cols.append(img)
    if not rows:
        return np.arange(n)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(n, n))
    return connected_components(graph, directed=True, connection="weak")[1]


def _closure_greedy(els: ElementSet, candidates, start=None) -> np.ndarray:
    """Subgroup generated by ``start`` and the candidate element indices."""
    mask = np.zeros(els.n, dtype=bool)
    gens: list[int] = []
    if start is not None:
        mask[start] = True
        base = np.nonzero(mask)[0]
    else:
        mask[0] = True
        base = None
    for i in candidates:
        if not mask[i]:
            gens.append(int(i))
            mask[:] = False
            mask[els.closure(gens, start=base)] = True
    return np.nonzero(mask)[0]


def normal_subgroups(G: MatGroup) -> list[np.ndarray]:
    """All normal subgroups of G as sorted index arrays into G.elements().

    Normal closures of single conjugacy classes, then joins until closed.
    """
    els = G.elements()
    labels = _class_labels(els, list(G.lin))
    classes = {}
    for i, lab in enumerate(labels):
        classes.setdefault(int(lab), []).append(i)
    found: dict[bytes, np.ndarray] = {}
    for members in classes.values():
        sub = _closure_greedy(els, members)
        found.setdefault(sub.tobytes(), sub)
    frontier = list(found.values())
    while frontier:
        new = []
        current = list(found.values())
        for a in frontier:
            for b in current:
                if np.isin(a, b).all() or np.isin(b, a).all():
                    continue
                join = _closure_greedy(els, b, start=a)
                key = join.tobytes()
                if key not in found:
                    found[key] = join
                    new.append(join)
        frontier = new
    return sorted(found.values(), key=lambda s: (s.size, s.tobytes()))


def _subgroup_gens(els: ElementSet, sub: np.ndarray) -> list[np.ndarray]:
    gens: list[int] = []
    mask = np.zeros(els.n, dtype=bool)
    mask[0] = True
    for i in sub:
        if not mask[i]:
            gens.append(int(i))
            mask[:] = False
            mask[els.closure(gens)] = True
    return [els.mats[i] for i in gens]


def is_quasiprimitive(G: MatGroup, method: str = "commutant") -> bool:
    """Every normal subgroup of the irreducible group G acts homogeneously."""
    els = G.elements()
    p, d = G.p, G.degree
    for sub in normal_subgroups(G):
        if sub.size == 1:
            continue
        gens = _subgroup_gens(els, sub)
        if not is_homogeneous((p, d, gens), method=method):
            return False
    return True


# ---------------------------------------------------------------------------
# linear primitivity


def _subspaces_of_dim(p: int, d: int, s: int) -> np.ndarray:
    """Point sets (sorted vector indices) of all s-dimensional subspaces."""
    weights = p ** np.arange(d, dtype=np.int64)
    coeffs = all_vectors(p, s)  # (p^s, s)
    out = []
    for piv in itertools.combinations(range(d), s):
        free = [(r, c) for r in range(s) for c in range(piv[r] + 1, d) if c not in piv]
        vals = all_vectors(p, len(free)) if free else np.zeros((1, 0), dtype=np.int64)
        B = np.zeros((vals.shape[0], s, d), dtype=np.int64)
        for r, c in enumerate(piv):
            B[:, r, c] = 1
        for j, (r, c) in enumerate(free):
            B[:, r, c] = vals[:, j]
        pts = (np.einsum("vs,nsd->nvd", coeffs, B) % p) @ weights
        out.append(np.sort(pts, axis=1))
    return np.concatenate(out)


def imprimitivity_systems(G, max_points: int | None = None) -> list[tuple[int, list[np.ndarray]]]:
    """Systems of imprimitivity of an irreducible group.

    Returns (t, blocks) pairs where the blocks are point sets of subspaces
    W_1..W_t with V their direct sum and G permuting them.  The search runs
    over all subspaces of dimension d/t for every divisor t > 1 of d: the
    generators act on subspaces through their point sets, identified by an
    order-independent XOR hash and then compared exactly.
    """
    p, d, gens = _lin(G)
    limit = budgets().orbit * 64 if max_points is None else max_points
    if not isinstance(G, MatGroup):
        G = MatGroup.from_arrays(p, gens, d)
    perms = G.perms()
    rng = np.random.default_rng(20240229)
    weights = rng.integers(1, 2**63 - 1, size=p**d, dtype=np.int64)
    found = []
    for t in range(2, d + 1):
        if d % t:
            continue
        s = d // t
        count = prod(p**d - p**i for i in range(s)) // prod(p**s - p**i for i in range(s))
        if count * p**s > limit:
            raise BudgetExceeded(f"{s}-dimensional subspaces", count * p**s, limit)
        pts = _subspaces_of_dim(p, d, s)
        keys = np.bitwise_xor.reduce(weights[pts], axis=1)
        order = np.argsort(keys)
        skeys = keys[order]
        if np.unique(skeys).size != skeys.size:  # pragma: no cover - 2^-64 event
            raise RuntimeError("hash collision among subspaces")
        n = pts.shape[0]
        rows, cols = [], []
        for perm in perms:
            img = perm[pts]
            ikeys = np.bitwise_xor.reduce(weights[img], axis=1)
            loc = np.searchsorted(skeys, ikeys)
            tgt = order[np.minimum(loc, n - 1)]
            if not np.array_equal(pts[tgt], np.sort(img, axis=1)):
                raise RuntimeError("subspace image not matched exactly")
            rows.append(np.arange(n))
            cols.append(tgt)
        if rows:
            graph = coo_matrix((np.ones(n * len(rows), dtype=np.int8),
                                (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
            labels = connected_components(graph, directed=True, connection="weak")[1]
        else:
            labels = np.arange(n)
        sizes = np.bincount(labels)
        for lab in np.nonzero(sizes == t)[0]:
            members = np.nonzero(labels == lab)[0]
            vecs = all_vectors(p, d)
            span_rows = np.concatenate([vecs[pts[i]] for i in members])
            if rank(span_rows, p) == d:
                found.append((t, [pts[i] for i in members]))
    return found


def is_linearly_primitive(G) -> bool:
    """Irreducible and preserving no decomposition V = W_1 + ... + W_t, t > 1."""
    if not is_irreducible(G):
        return False
    return not imprimitivity_systems(G)
