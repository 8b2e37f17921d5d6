"""Matrix groups over finite fields acting on their natural module.

A :class:`MatGroup` is given by invertible generator matrices.  All heavy
lifting is done over the prime field: a matrix over GF(p^k) is replaced by
its field-descent image, and a vector of GF(p)^d is identified with its
base-p index (coordinate i is digit i).  The group then acts on the p^d
indices, which gives

* orbit partitions and the permutation rank of V x| G,
* a stabilizer chain built by Schreier-Sims (batched over numpy arrays),
* exhaustive enumeration for the small groups the classification handles,
  on which centralizers, normalizers and conjugacy tests are computed by
  filtering.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import BudgetExceeded, budgets
from .gfarith import Field, make_field, prime_factors
from .matlin import Mat, MatError, all_vectors, blowup

__all__ = [
    "MatGroup",
    "OrbitPartition",
    "StabChain",
    "ElementSet",
    "orbit_partition",
    "rank_of_action",
    "build_chain",
    "contains",
    "derived_series",
    "normalizer_in",
    "are_conjugate",
    "batch_inverse",
    "element_orders",
    "is_solvable",
    "subgroup_from_mask",
    "centralizer_of",
    "fixed_vector_count",
]


# ---------------------------------------------------------------------------
# batched GF(p) helpers


def batch_inverse(A: np.ndarray, p: int) -> np.ndarray:
    """Invert a stack of invertible matrices over GF(p)."""
    A = np.asarray(A, dtype=np.int64) % p
    m, d, _ = A.shape
    inv_tab = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv_tab[a] = pow(a, -1, p)
    M = np.concatenate([A, np.broadcast_to(np.eye(d, dtype=np.int64), (m, d, d))], axis=2)
    rows = np.arange(m)
    for c in range(d):
        nz = M[:, c:, c] != 0
        if not nz.any(axis=1).all():
            raise MatError("singular matrix in batch")
        piv = c + np.argmax(nz, axis=1)
        top = M[rows, c].copy()
        M[rows, c] = M[rows, piv]
        M[rows, piv] = top
        M[:, c] = (M[:, c] * inv_tab[M[:, c, c]][:, None]) % p
        f = M[:, :, c].copy()
        f[:, c] = 0
        M = (M - f[:, :, None] * M[:, c][:, None, :]) % p
    return M[:, :, d:]


class _Codec:
    """Hashable keys for stacks of d x d matrices over GF(p)."""

    def __init__(self, p: int, d: int):
        self.p, self.d = p, d
        self.integer = (d * d) * np.log2(p) < 62
        if self.integer:
            self.weights = p ** np.arange(d * d, dtype=np.int64)

    def keys(self, mats: np.ndarray):
        flat = mats.reshape(-1, self.d * self.d)
        if self.integer:
            return flat @ self.weights
        return [row.tobytes() for row in flat.astype(np.uint8)]


@functools.lru_cache(maxsize=32)
def _point_weights(p: int, d: int) -> np.ndarray:
    return p ** np.arange(d, dtype=np.int64)


def _apply(mats: np.ndarray, points: np.ndarray, p: int, d: int) -> np.ndarray:
    """Images of points under matrices, elementwise (broadcasting)."""
    vecs = all_vectors(p, d)[points]
    img = np.einsum("...ij,...j->...i", mats, vecs) % p
    return img @ _point_weights(p, d)


def _perm_of(mat: np.ndarray, p: int, d: int) -> np.ndarray:
    vecs = all_vectors(p, d)
    return ((vecs @ mat.T) % p) @ _point_weights(p, d)


# ---------------------------------------------------------------------------
# stabilizer chain


class _Level:
    __slots__ = ("point", "gens", "orbit", "pos", "U", "Uinv", "checked")

    def __init__(self, point: int, npoints: int, d: int):
        self.point = point
        self.gens: list[np.ndarray] = []
        self.orbit = [point]
        self.pos = np.full(npoints, -1, dtype=np.int64)
        self.pos[point] = 0
        eye = np.eye(d, dtype=np.int64)[None]
        self.U = eye.copy()
        self.Uinv = eye.copy()
        self.checked: set = set()


class StabChain:
    """Base and strong generating set for a matrix group acting on vectors.

    Schreier-Sims with sifting; Schreier generators of a level are formed and
    sifted as one numpy batch.  Base points are chosen greedily as the first
    vector index moved by a strong generator that fixes the current base.
    """

    _CHUNK = 4096

    def __init__(self, p: int, d: int, gens: Sequence[np.ndarray]):
        self.p, self.d = p, d
        self.npoints = p**d
        self.levels: list[_Level] = []
        self.identity = np.eye(d, dtype=np.int64)
        for g in gens:
            g = np.asarray(g, dtype=np.int64) % p
            if not self._is_id(g) and not self.contains(g):
                self._insert(g, self._first_moved_level(g))
                self._complete()

    # -- basic helpers -----------------------------------------------------
    def _is_id(self, g):
        return np.array_equal(g, self.identity)

    @property
    def base(self):
        return [lv.point for lv in self.levels]

    @property
    def order(self) -> int:
        out = 1
        for lv in self.levels:
            out *= len(lv.orbit)
        return out

    @property
    def strong_generators(self):
        return list(self.levels[0].gens) if self.levels else []

    def _first_moved_point(self, g) -> int:
        step = 1024
        for start in range(0, self.npoints, step):
            pts = np.arange(start, min(start + step, self.npoints))
            img = _apply(g[None], pts[None], self.p, self.d)[0]
            moved = np.nonzero(img != pts)[0]
            if moved.size:
                return int(pts[moved[0]])
        raise ValueError("identity has no moved point")

    def _first_moved_level(self, g) -> int:
        for j, lv in enumerate(self.levels):
            if int(_apply(g[None], np.array([[lv.point]]), self.p, self.d)[0, 0]) != lv.point:
                return j
        return len(self.levels)

    def _insert(self, g, j):
        """Add g (fixing base[:j]) as a strong generator of levels 0..j."""
        if j == len(self.levels):
            self.levels.append(_Level(self._first_moved_point(g), self.npoints, self.d))
        for lv in self.levels[: j + 1]:
            lv.gens.append(g)
            self._extend_orbit(lv)

    def _extend_orbit(self, lv: _Level):
        p, d = self.p, self.d
        frontier = np.arange(len(lv.orbit))
        first = True
        while frontier.size:
            new_idx = []
            for s in lv.gens:
                # on the first sweep every generator is applied to every point
                src = frontier if not first else np.arange(len(lv.orbit))
                pts = np.array(lv.orbit)[src]
                img = _apply(s[None], pts[None], p, d)[0]
                fresh_mask = lv.pos[img] < 0
                if not fresh_mask.any():
                    continue
                img_f, src_f = img[fresh_mask], src[fresh_mask]
                img_f, first_occ = np.unique(img_f, return_index=True)
                src_f = src_f[first_occ]
                order = np.argsort(first_occ)
                img_f, src_f = img_f[order], src_f[order]
                base_n = len(lv.orbit)
                lv.pos[img_f] = base_n + np.arange(img_f.size)
                lv.orbit.extend(int(x) for x in img_f)
                sinv = batch_inverse(s[None], p)[0]
                lv.U = np.concatenate([lv.U, (s[None] @ lv.U[src_f]) % p])
                lv.Uinv = np.concatenate([lv.Uinv, (lv.Uinv[src_f] @ sinv[None]) % p])
                new_idx.append(base_n + np.arange(img_f.size))
            first = False
            frontier = np.concatenate(new_idx) if new_idx else np.array([], dtype=np.int64)

    # -- sifting -------------------------------------------------------------
    def _sift_batch(self, H: np.ndarray, start: int = 0):
        """Return (residues, failing level) for a stack of matrices."""
        p, d = self.p, self.d
        H = np.array(H, dtype=np.int64) % p
        fail = np.full(H.shape[0], len(self.levels), dtype=np.int64)
        live = np.arange(H.shape[0])
        for j in range(start, len(self.levels)):
            if live.size == 0:
                break
            lv = self.levels[j]
            img = _apply(H[live], np.full(live.size, lv.point), p, d)
            pos = lv.pos[img]
            bad = pos < 0
            fail[live[bad]] = j
            live = live[~bad]
            pos = pos[~bad]
            if live.size:
                H[live] = (lv.Uinv[pos] @ H[live]) % p
        return H, fail

    def sift(self, g):
        H, fail = self._sift_batch(np.asarray(g)[None])
        return H[0], int(fail[0])

    def contains(self, g) -> bool:
        g = np.asarray(g, dtype=np.int64) % self.p
        if g.shape != (self.d, self.d):
            raise MatError("dimension mismatch")
        if not self.levels:
            return self._is_id(g)
        h, _ = self.sift(g)
        return self._is_id(h)

    # -- Schreier-Sims ---------------------------------------------------------
    def _complete(self):
        p = self.p
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            restart = None
            for si, s in enumerate(list(lv.gens)):
                todo = [b for b in range(len(lv.orbit)) if (b, si) not in lv.checked]
                for c0 in range(0, len(todo), self._CHUNK):
                    chunk = np.array(todo[c0:c0 + self._CHUNK])
                    pts = np.array(lv.orbit)[chunk]
                    img = _apply(s[None], pts[None], p, self.d)[0]
                    H = (lv.Uinv[lv.pos[img]] @ s[None] @ lv.U[chunk]) % p
                    R, fail = self._sift_batch(H, i + 1)
                    nonid = np.nonzero(~np.all(R == self.identity, axis=(1, 2)))[0]
                    if nonid.size:
                        t = nonid[0]
                        lv.checked.update((int(b), si) for b in chunk[:t])
                        self._insert(R[t], int(fail[t]))
                        restart = int(fail[t])
                        break
                    lv.checked.update((int(b), si) for b in chunk)
                if restart is not None:
                    break
            if restart is not None:
                i = restart
                continue
            i -= 1

    def add_generator(self, g) -> bool:
        """Extend the group by g; returns False if g was already a member."""
        g = np.asarray(g, dtype=np.int64) % self.p
        if self.contains(g):
            return False
        self._insert(g, self._first_moved_level(g))
        self._complete()
        return True


# ---------------------------------------------------------------------------
# exhaustive enumeration


class ElementSet:
    """All elements of a small matrix group, in a canonical order.

    The order is breadth-first over generator products starting from the
    identity; elements first reached in the same layer are sorted by their
    serialized matrix key.
    """

    def __init__(self, p: int, mats: np.ndarray):
        self.p = p
        self.mats = np.ascontiguousarray(mats, dtype=np.int64)
        self.n, self.d = self.mats.shape[0], self.mats.shape[1]
        self.codec = _Codec(p, self.d)
        keys = self.codec.keys(self.mats)
        if self.codec.integer:
            self._perm = np.argsort(keys, kind="stable")
            self._sorted = keys[self._perm]
        else:
            self._dict = {k: i for i, k in enumerate(keys)}
        self._inverse = None

    @classmethod
    def generate(cls, p: int, gens: Sequence[np.ndarray], d: int, limit: int | None = None):
        limit = budgets().enumeration if limit is None else limit
        codec = _Codec(p, d)
        eye = np.eye(d, dtype=np.int64)
        layers = [eye[None]]
        seen = set(codec.keys(eye[None]))
        frontier = eye[None]
        total = 1
        gens = [np.asarray(g, dtype=np.int64) % p for g in gens]
        while frontier.shape[0]:
            cand = np.concatenate([(frontier @ g) % p for g in gens]) if gens else frontier[:0]
            keys = codec.keys(cand)
            fresh = {}
            for i, k in enumerate(keys):
                if k not in seen and k not in fresh:
                    fresh[k] = i
            if not fresh:
                break
            total += len(fresh)
            if total > limit:
                raise BudgetExceeded("element enumeration", total, limit)
            order = sorted(fresh)
            frontier = cand[[fresh[k] for k in order]]
            seen.update(fresh)
            layers.append(frontier)
        return cls(p, np.concatenate(layers))

    def __len__(self):
        return self.n

    def index(self, mats: np.ndarray) -> np.ndarray:
        """Indices of the given matrices (-1 where absent)."""
        mats = np.asarray(mats, dtype=np.int64)
        keys = self.codec.keys(mats)
        if self.codec.integer:
            loc = np.searchsorted(self._sorted, keys)
            loc = np.minimum(loc, self.n - 1)
            hit = self._sorted[loc] == keys
            return np.where(hit, self._perm[loc], -1)
        return np.array([self._dict.get(k, -1) for k in keys], dtype=np.int64)

    def right_mul(self, g: np.ndarray, idx=None) -> np.ndarray:
        sel = self.mats if idx is None else self.mats[idx]
        return self.index((sel @ g) % self.p)

    def left_mul(self, g: np.ndarray, idx=None) -> np.ndarray:
        sel = self.mats if idx is None else self.mats[idx]
        return self.index((g @ sel) % self.p)

    @property
    def inverse(self) -> np.ndarray:
        if self._inverse is None:
            self._inverse = self.index(batch_inverse(self.mats, self.p))
        return self._inverse

    def conj_by(self, g: np.ndarray, idx=None) -> np.ndarray:
        """Indices of g x g^-1 for x in the (selected) elements."""
        ginv = batch_inverse(g[None], self.p)[0]
        sel = self.mats if idx is None else self.mats[idx]
        return self.index((g @ sel @ ginv) % self.p)

    def closure(self, gen_idx: Iterable[int], start=None) -> np.ndarray:
        """Sorted indices of the subgroup generated by the given elements."""
        gen_idx = [int(i) for i in gen_idx]
        mask = np.zeros(self.n, dtype=bool)
        if start is not None:
            mask[start] = True
        mask[0] = True
        frontier = np.nonzero(mask)[0]
        gens = [self.mats[i] for i in gen_idx]
        while frontier.size:
            new = []
            for g in gens:
                img = self.right_mul(g, frontier)
                if (img < 0).any():
                    raise ValueError("closure left the enumerated group")
                img = img[~mask[img]]
                if img.size:
                    img = np.unique(img)
                    mask[img] = True
                    new.append(img)
            frontier = np.unique(np.concatenate(new)) if new else np.array([], dtype=np.int64)
        return np.nonzero(mask)[0]


# ---------------------------------------------------------------------------


class MatGroup:
    """Matrix group G0 <= GL(n, p^k) given by generators."""

    def __init__(self, gens: Sequence[Mat], field: Field | None = None, dim: int | None = None,
                 check: bool = True):
        gens = list(gens)
        if gens:
            field = gens[0].field
            dim = gens[0].n
        if field is None or dim is None:
            raise MatError("an empty generating set needs field and dim")
        for g in gens:
            if g.field != field or g.n != dim:
                raise MatError("generators must share field and dimension")
            if check and not g.is_invertible():
                raise MatError("generators must be invertible")
        self.field = field
        self.dim = dim
        self.p = field.p
        self.degree = dim * field.k
        self.gens = tuple(gens)
        self.lin = (np.array([blowup(g).codes for g in gens], dtype=np.int64)
                    if gens else np.zeros((0, self.degree, self.degree), dtype=np.int64))
        self._chain = None
        self._elements = None
        self._perms = None

    @classmethod
    def from_arrays(cls, p: int, arrays: Iterable[np.ndarray], d: int | None = None) -> "MatGroup":
        """Group over GF(p) from raw integer matrices."""
        F = make_field(p)
        arrays = [np.asarray(a, dtype=np.int64) % p for a in arrays]
        if d is None:
            d = arrays[0].shape[0]
        return cls([Mat(F, a) for a in arrays], field=F, dim=d, check=False)

    def __repr__(self):
        return f"MatGroup({self.field!r}, dim={self.dim}, ngens={len(self.gens)})"

    @property
    def npoints(self) -> int:
        return self.p**self.degree

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain(self.p, self.degree, list(self.lin))
        return self._chain

    @property
    def order(self) -> int:
        if self._elements is not None:
            return len(self._elements)
        return self.chain.order

    def elements(self, limit: int | None = None) -> ElementSet:
        if self._elements is None:
            limit = budgets().enumeration if limit is None else limit
            if self._chain is not None and self._chain.order > limit:
                raise BudgetExceeded("element enumeration", self._chain.order, limit)
            self._elements = ElementSet.generate(self.p, list(self.lin), self.degree, limit)
        return self._elements

    def perms(self) -> list[np.ndarray]:
        """Generators as permutations of the vector indices."""
        if self._perms is None:
            lim = budgets().orbit
            if self.npoints > lim:
                raise BudgetExceeded("orbit domain", self.npoints, lim)
            self._perms = [_perm_of(g, self.p, self.degree) for g in self.lin]
        return self._perms

    def to_prime(self) -> "MatGroup":
        """The same group written over GF(p) (field descent)."""
        if self.field.k == 1:
            return self
        return MatGroup.from_arrays(self.p, list(self.lin), self.degree)

    def _prime_matrix(self, A) -> np.ndarray:
        if isinstance(A, Mat):
            if A.field != self.field or A.n != self.dim:
                raise MatError("field/dimension mismatch")
            return blowup(A).codes
        A = np.asarray(A, dtype=np.int64)
        if A.shape != (self.degree, self.degree):
            raise MatError("dimension mismatch")
        return A % self.p

    def is_trivial(self) -> bool:
        eye = np.eye(self.degree, dtype=np.int64)
        return all(np.array_equal(g, eye) for g in self.lin)

    def is_abelian(self) -> bool:
        L = self.lin
        return all(np.array_equal((a @ b) % self.p, (b @ a) % self.p) for a in L for b in L)


# ---------------------------------------------------------------------------
# orbits and rank


@dataclass(frozen=True)
class OrbitPartition:
    representatives: tuple      # smallest index per class, increasing
    class_id: np.ndarray        # class number for every vector index
    sizes: tuple

    @property
    def nclasses(self) -> int:
        return len(self.representatives)

    def classes(self):
        order = np.argsort(self.class_id, kind="stable")
        bounds = np.cumsum((0,) + self.sizes)
        return [order[bounds[i]:bounds[i + 1]] for i in range(self.nclasses)]


def _orbits_from_perms(perms: Sequence[np.ndarray], n: int) -> OrbitPartition:
    if perms:
        rows = np.concatenate([np.arange(n)] * len(perms))
        cols = np.concatenate(perms)
        graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
        _, labels = connected_components(graph, directed=True, connection="weak")
    else:
        labels = np.arange(n)
    # relabel classes by smallest member
    first = np.full(labels.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(n))
    reps = np.sort(first)
    relabel = np.empty_like(first)
    relabel[np.argsort(first)] = np.arange(first.size)
    class_id = relabel[labels]
    sizes = np.bincount(class_id, minlength=reps.size)
    return OrbitPartition(tuple(int(r) for r in reps), class_id, tuple(int(s) for s in sizes))


def orbit_partition(G: MatGroup) -> OrbitPartition:
    """Orbits of G on all p^d vector indices."""
    return _orbits_from_perms(G.perms(), G.npoints)


def rank_of_action(G: MatGroup) -> int:
    """Rank of V x| G: number of G-orbits on V, the zero vector included."""
    return orbit_partition(G).nclasses


# ---------------------------------------------------------------------------
# chain-based operations


VALIDATE_LIMIT = 10_000


def build_chain(G: MatGroup, validate: bool = True) -> int:
    """Build the stabilizer chain of G and return |G|.

    For orders up to ``VALIDATE_LIMIT`` the result is checked against an
    exhaustive enumeration.
    """
    order = G.chain.order
    if validate and order <= VALIDATE_LIMIT:
        n = len(ElementSet.generate(G.p, list(G.lin), G.degree, limit=VALIDATE_LIMIT))
        if n != order:  # pragma: no cover - internal consistency
            raise AssertionError(f"chain order {order} != enumerated {n}")
    return order


def contains(G: MatGroup, A) -> bool:
    return G.chain.contains(G._prime_matrix(A))


def _commutator(a, b, p):
    ai, bi = batch_inverse(np.stack([a, b]), p)
    return (ai @ bi @ a @ b) % p


def _normal_closure(G: MatGroup, seeds: Sequence[np.ndarray]) -> MatGroup:
    p, d = G.p, G.degree
    chain = StabChain(p, d, [])
    gens = [s for s in seeds if chain.add_generator(s)]
    queue = list(gens)
    Ginv = batch_inverse(G.lin, p) if len(G.lin) else G.lin
    while queue:
        h = queue.pop()
        for g, gi in zip(G.lin, Ginv):
            c = (g @ h @ gi) % p
            if chain.add_generator(c):
                gens.append(c)
                queue.append(c)
    H = MatGroup.from_arrays(p, gens, d) if gens else MatGroup([], make_field(p), d)
    H._chain = chain
    return H


def derived_series(G: MatGroup):
    """Return ([G, G', G'', ...], is_solvable).

    Each derived subgroup is the normal closure of the commutators of pairs
    of generators of the previous term; the series stops when the order
    stops dropping.
    """
    series = [G.to_prime() if G.field.k > 1 else G]
    while True:
        H = series[-1]
        L = list(H.lin)
        comms = [_commutator(a, b, H.p) for i, a in enumerate(L) for b in L[i + 1:]]
        D = _normal_closure(H, comms)
        if D.order == H.order:
            break
        series.append(D)
        if D.order == 1:
            break
    return series, series[-1].order == 1


def is_solvable(G: MatGroup) -> bool:
    return derived_series(G)[1]


# ---------------------------------------------------------------------------
# element-filtering subgroup operations


def _enumerated(G: MatGroup) -> ElementSet:
    lim = budgets().enumeration
    return G.elements(limit=lim)


def _batch_power(mats: np.ndarray, exps: np.ndarray, p: int) -> np.ndarray:
    out = np.broadcast_to(np.eye(mats.shape[1], dtype=np.int64), mats.shape).copy()
    base = mats.copy()
    exps = exps.copy()
    while (exps > 0).any():
        odd = (exps & 1).astype(bool)
        out[odd] = (out[odd] @ base[odd]) % p
        exps >>= 1
        live = exps > 0
        base[live] = (base[live] @ base[live]) % p
    return out


def element_orders(els: ElementSet, p: int) -> np.ndarray:
    """Multiplicative order of every enumerated element.

    Starts from the group order and strips prime factors while the reduced
    power is still the identity.
    """
    orders = np.full(els.n, els.n, dtype=np.int64)
    eye = np.eye(els.d, dtype=np.int64)
    for ell in sorted(prime_factors(els.n)):
        active = np.ones(els.n, dtype=bool)
        while True:
            active &= orders % ell == 0
            idx = np.nonzero(active)[0]
            if not idx.size:
                break
            trial = orders[idx] // ell
            hit = np.all(_batch_power(els.mats[idx], trial, p) == eye, axis=(1, 2))
            orders[idx[hit]] = trial[hit]
            active[idx[~hit]] = False
    return orders


def subgroup_from_mask(G: MatGroup, mask: np.ndarray) -> MatGroup:
    """MatGroup on the enumerated elements of G selected by a boolean mask."""
    els = _enumerated(G)
    idx = np.nonzero(mask)[0]
    gens: list[int] = []
    current = np.zeros(els.n, dtype=bool)
    current[0] = True
    for i in idx:
        if not current[i]:
            gens.append(int(i))
            current[:] = False
            current[els.closure(gens)] = True
    if current.sum() != idx.size:
        raise ValueError("selected elements do not form a subgroup")
    H = MatGroup.from_arrays(G.p, [els.mats[i] for i in gens], G.degree) if gens \
        else MatGroup([], make_field(G.p), G.degree)
    H._elements = ElementSet(G.p, els.mats[idx])
    return H


def centralizer_of(G: MatGroup, H: MatGroup) -> MatGroup:
    """C_G(H) by filtering the enumerated elements of G."""
    els = _enumerated(G)
    p = G.p
    mask = np.ones(els.n, dtype=bool)
    for h in H.lin:
        mask &= np.all((els.mats @ h) % p == (h @ els.mats) % p, axis=(1, 2))
    return subgroup_from_mask(G, mask)


def _member_keys(H: MatGroup):
    return H.elements()


def normalizer_in(G: MatGroup, H: MatGroup) -> MatGroup:
    """N_G(H) = {g in G : g H g^-1 = H} by filtering."""
    els = _enumerated(G)
    Hel = _member_keys(H)
    p = G.p
    ginv = els.mats[els.inverse]
    mask = np.ones(els.n, dtype=bool)
    for h in H.lin:
        conj = (els.mats @ h @ ginv) % p
        mask &= Hel.index(conj) >= 0
    return subgroup_from_mask(G, mask)


def are_conjugate(G: MatGroup, H1: MatGroup, H2: MatGroup) -> bool:
    """True iff some g in G maps H1 onto H2 by conjugation."""
    if H1.order != H2.order:
        return False
    els = _enumerated(G)
    H2el = _member_keys(H2)
    p = G.p
    ginv = els.mats[els.inverse]
    mask = np.ones(els.n, dtype=bool)
    for h in H1.lin:
        conj = (els.mats @ h @ ginv) % p
        mask &= H2el.index(conj) >= 0
        if not mask.any():
            return False
    return bool(mask.any())


def fixed_vector_count(A: np.ndarray, p: int) -> int:
    from .matlin import rank as _rank
    d = A.shape[0]
    return p ** (d - _rank((A - np.eye(d, dtype=np.int64)) % p, p))
