"""Extraspecial groups and their normalizers in general linear groups.

Five extraspecial groups are in scope: D8 and Q8 in dimension 2, the two
central products of order 32 in dimension 4 (E+ = D8 * D8, E- = D8 * Q8),
and the exponent-3 group M27 of order 27 in dimension 3.

The normalizer of E in GL(q^m, p^k) is obtained by lifting symplectic maps:
an automorphism of E that is trivial on Z(E) induces an isometry s of the
commutator form on E/Z(E), and when the twisted representation is
isomorphic to the original one an intertwiner M with M g M^-1 = s(g) exists.
A brute-force scan of the whole general linear group serves as the oracle.

``linear_normalizer`` handles an arbitrary irreducible H <= GL(d, p) whose
commutant is a field: candidate images of a generating pair are matched by
cheap invariants and each surviving pair is tested by solving for an
intertwiner.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import brute
from .engine import (ElementSet, MatGroup, StabChain, batch_inverse, element_orders,
                     subgroup_from_mask)
from .gfarith import Field, FieldElem, make_field, primitive_element, solve_sum_of_squares
from .matlin import (Mat, MatError, blowup, frobenius_matrix, identity, intertwiner_space, kron,
                     rank)
from .modana import intertwiners

__all__ = [
    "ExtraspecialSpec",
    "ExtraspecialError",
    "ExtraspecialReport",
    "NormalizerResult",
    "SPECS",
    "build_extraspecial",
    "verify_extraspecial",
    "commutator_form",
    "symplectic_group",
    "normalizer_of_extraspecial",
    "linear_normalizer",
    "linear_conjugate",
    "semilinear_normalizer",
    "tensor_normalizer",
    "gl_generators",
    "exponent9_extraspecial",
    "order3_subgroup",
]


class ExtraspecialError(ValueError):
    pass


@dataclass(frozen=True)
class ExtraspecialSpec:
    q: int
    m: int
    kind: str  # "plus", "minus" or "odd"

    def __post_init__(self):
        if (self.q, self.m, self.kind) not in SPECS:
            raise ExtraspecialError(f"unsupported extraspecial group {self.q, self.m, self.kind}")

    @property
    def order(self) -> int:
        return self.q ** (2 * self.m + 1)

    @property
    def dim(self) -> int:
        return self.q**self.m


SPECS = {(2, 1, "plus"), (2, 1, "minus"), (2, 2, "plus"), (2, 2, "minus"), (3, 1, "odd")}


@dataclass(frozen=True)
class ExtraspecialReport:
    order: int
    center_order: int
    exponent: int
    kind: str
    involutions: int  # number of x with x^2 = 1


@dataclass
class NormalizerResult:
    N: MatGroup
    lifted_symplectic_count: int
    method: str
    details: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# construction


def _d8(F: Field) -> list[Mat]:
    return [Mat.from_rows(F, [[0, 1], [1, 0]]), Mat.from_rows(F, [[1, 0], [0, -1]])]


def _q8(F: Field) -> list[Mat]:
    a, b = solve_sum_of_squares(F.p)
    return [Mat.from_rows(F, [[0, 1], [-1, 0]]), Mat.from_rows(F, [[a, b], [b, -a]])]


def cube_root_of_unity(F: Field) -> FieldElem:
    """Smallest element of multiplicative order 3."""
    if (F.order - 1) % 3:
        raise ExtraspecialError(f"{F} has no primitive cube root of unity")
    for e in F.elements():
        if not e.is_zero() and e.multiplicative_order() == 3:
            return e
    raise ExtraspecialError("no cube root found")  # pragma: no cover


def build_extraspecial(spec: ExtraspecialSpec, F: Field) -> MatGroup:
    """E as a matrix group; generators are listed as x1, z1 (, x2, z2)."""
    if spec.q == F.p:
        raise ExtraspecialError("q must differ from the characteristic")
    if spec.q == 3:
        w = cube_root_of_unity(F)
        shift = Mat.from_rows(F, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
        z = Mat.from_rows(F, [[1, 0, 0], [0, w, 0], [0, 0, w * w]])
        return MatGroup([shift, z])
    if F.p == 2:
        raise ExtraspecialError("q = 2 needs odd characteristic")
    if spec.m == 1:
        return MatGroup(_d8(F) if spec.kind == "plus" else _q8(F))
    first = _d8(F)
    second = _d8(F) if spec.kind == "plus" else _q8(F)
    I2 = identity(F, 2)
    return MatGroup([kron(g, I2) for g in first] + [kron(I2, g) for g in second])


def _center_mask(els: ElementSet, gens: Sequence[np.ndarray], p: int) -> np.ndarray:
    mask = np.ones(els.n, dtype=bool)
    for g in gens:
        mask &= np.all((els.mats @ g) % p == (g @ els.mats) % p, axis=(1, 2))
    return mask


def verify_extraspecial(E: MatGroup, spec: ExtraspecialSpec) -> ExtraspecialReport:
    """Check that E is the extraspecial group named by spec."""
    p = E.p
    els = E.elements()
    if els.n != spec.order:
        raise ExtraspecialError(f"order {els.n}, expected {spec.order}")
    center = _center_mask(els, list(E.lin), p)
    if center.sum() != spec.q:
        raise ExtraspecialError(f"center has order {center.sum()}, expected {spec.q}")
    L = list(E.lin)
    for a in L:
        for b in L:
            ai, bi = batch_inverse(np.stack([a, b]), p)
            c = (ai @ bi @ a @ b) % p
            if not center[els.index(c[None])[0]]:
                raise ExtraspecialError("a commutator is not central")
    powq = els.mats.copy()
    for _ in range(spec.q - 1):
        powq = (powq @ els.mats) % p
    if not center[els.index(powq)].all():
        raise ExtraspecialError("E/Z(E) is not elementary abelian")
    orders = element_orders(els, p)
    exponent = int(np.lcm.reduce(orders))
    invol = int((orders <= 2).sum())
    if spec.q == 2:
        k = 2**spec.m
        if invol == k * (k + 1):
            kind = "plus"
        elif invol == k * (k - 1):
            kind = "minus"
        else:
            raise ExtraspecialError(f"{invol} solutions of x^2 = 1 fits neither type")
    else:
        if exponent != 3:
            raise ExtraspecialError(f"exponent {exponent}, expected 3")
        kind = "odd"
    if kind != spec.kind:
        raise ExtraspecialError(f"group has type {kind}, expected {spec.kind}")
    return ExtraspecialReport(els.n, int(center.sum()), exponent, kind, invol)


# ---------------------------------------------------------------------------
# symplectic data


def _word(gens: Sequence[np.ndarray], exps: Sequence[int], p: int) -> np.ndarray:
    out = np.eye(gens[0].shape[0], dtype=np.int64)
    for g, e in zip(gens, exps):
        for _ in range(int(e)):
            out = (out @ g) % p
    return out


def commutator_form(E: MatGroup, spec: ExtraspecialSpec) -> np.ndarray:
    """Alternating form f on E/Z(E) in the generator basis: [g_i, g_j] = zeta^f[i,j].

    zeta is the commutator [g_1, g_2].
    """
    p, q = E.p, spec.q
    L = list(E.lin)
    inv = batch_inverse(np.stack(L), p)

    def comm(i, j):
        return (inv[i] @ inv[j] @ L[i] @ L[j]) % p

    zeta = comm(0, 1)
    powers = [np.eye(E.degree, dtype=np.int64)]
    for _ in range(q - 1):
        powers.append((powers[-1] @ zeta) % p)
    n = len(L)
    f = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            c = comm(i, j)
            hits = [e for e, z in enumerate(powers) if np.array_equal(z, c)]
            if not hits:
                raise ExtraspecialError("commutator outside <zeta>")
            f[i, j] = hits[0]
    if rank(f, q) != n:
        raise ExtraspecialError("commutator form is degenerate")
    return f


def symplectic_group(f: np.ndarray, q: int) -> np.ndarray:
    """All S over GF(q) with S^T f S = f (columns are images of basis vectors)."""
    n = f.shape[0]
    cand = np.array(list(itertools.product(range(q), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)
    ok = np.all((np.transpose(cand, (0, 2, 1)) @ f @ cand) % q == f % q, axis=(1, 2))
    return cand[ok]


# ---------------------------------------------------------------------------
# normalizer of E


def _scalar_generator(F: Field, n: int) -> Mat:
    return identity(F, n).scale(primitive_element(F))


def _greedy_group(F: Field, n: int, mats: Sequence[Mat]) -> tuple[list[Mat], StabChain]:
    """Drop generators already in the group generated by earlier ones."""
    p, d = F.p, n * F.k
    chain = StabChain(p, d, [])
    kept = []
    for M in mats:
        if chain.add_generator(blowup(M).codes):
            kept.append(M)
    return kept, chain


def normalizer_of_extraspecial(E: MatGroup, spec: ExtraspecialSpec, strategy: str = "auto") -> NormalizerResult:
    """N_E = normalizer of E in GL(q^m, p^k)."""
    if strategy in ("auto", "lift"):
        return _lift_normalizer(E, spec)
    if strategy == "brute":
        return _brute_normalizer_of(E, spec)
    raise ValueError(f"unknown strategy {strategy!r}")


def _lift_normalizer(E: MatGroup, spec: ExtraspecialSpec) -> NormalizerResult:
    F, n, q = E.field, E.dim, spec.q
    f = commutator_form(E, spec)
    sp = symplectic_group(f, q)
    gens = list(E.gens)
    lifts: list[Mat] = []
    lifted = 0
    for S in sp:
        images = []
        for j in range(len(gens)):
            w = identity(F, n)
            for g, e in zip(gens, S[:, j]):
                for _ in range(int(e)):
                    w = w @ g
            images.append(w)
        space = intertwiner_space(F, gens, images)
        X = next((M for M in space if M.is_invertible()), None)
        if X is None and len(space) > 1:
            # dimension > 1 only happens for reducible E; scan small combinations
            for coeffs in itertools.product(range(F.order), repeat=len(space)):
                if not any(coeffs):
                    continue
                Y = space[0].scale(F.from_code(coeffs[0]))
                for c, M in zip(coeffs[1:], space[1:]):
                    Y = _mat_add(Y, M.scale(F.from_code(c)))
                if Y.is_invertible():
                    X = Y
                    break
        if X is not None:
            lifted += 1
            lifts.append(X)
    lifts.sort(key=lambda M: M.codes.tobytes())
    kept, chain = _greedy_group(F, n, [_scalar_generator(F, n)] + gens + lifts)
    N = MatGroup(kept)
    N._chain = chain
    return NormalizerResult(N, lifted, "lift", {"symplectic_order": int(sp.shape[0])})


def _mat_add(A: Mat, B: Mat) -> Mat:
    F = A.field
    if F.k == 1:
        return Mat(F, (A.codes + B.codes) % F.p)
    return Mat(F, F.tables[0][A.codes, B.codes])


def brute_normalizer_elements(H: MatGroup, budget: int | None = None) -> np.ndarray:
    """Codes of every element of GL(n, F) normalizing H (exhaustive scan)."""
    F, n = H.field, H.dim
    # enumerate H over F through its blown-up image, then map back to codes
    els = H.elements()
    if F.k == 1:
        member = brute.encode(els.mats, F.order)
    else:
        member = _unblow_codes(els.mats, F, n)
    gens = np.array([g.codes for g in H.gens], dtype=np.int64)
    return brute.brute_normalizer_codes(F, n, gens, member, budget)


def _unblow_codes(mats: np.ndarray, F: Field, n: int) -> np.ndarray:
    """Matrix codes over F of blown-up matrices (reads the first column of each block)."""
    k, p = F.k, F.p
    blocks = mats.reshape(-1, n, k, n, k)[:, :, :, :, 0]  # entry (i,j) -> column 0 of block
    coeff = np.transpose(blocks, (0, 1, 3, 2))  # (m, i, j, coeff index)
    entry_codes = coeff @ (p ** np.arange(k, dtype=np.int64))
    return brute.encode(entry_codes, F.order)


def _brute_normalizer_of(E: MatGroup, spec: ExtraspecialSpec) -> NormalizerResult:
    F, n = E.field, E.dim
    codes = brute_normalizer_elements(E)
    mats = brute.decode(codes, F.order, n)
    elems = [Mat(F, m) for m in mats]
    kept, chain = _greedy_group(F, n, elems)
    N = MatGroup(kept)
    N._chain = chain
    count = len(codes) // ((F.order - 1) * spec.q ** (2 * spec.m))
    return NormalizerResult(N, count, "brute", {"codes": codes})


# ---------------------------------------------------------------------------
# normalizer of an irreducible group by automorphism lifting


def _invariants(els: ElementSet, p: int) -> np.ndarray:
    """Conjugation-invariant integer keys: order and traces of low powers."""
    orders = element_orders(els, p)
    M = els.mats
    P = M.copy()
    traces = []
    for _ in range(4):
        traces.append(np.trace(P, axis1=1, axis2=2) % p)
        P = (P @ M) % p
    key = orders.copy()
    for t in traces:
        key = key * p + t
    return key


def _field_generator(C: np.ndarray, p: int, rng) -> np.ndarray:
    """Generator of the unit group of a commutative algebra that is a field."""
    e = C.shape[0]
    size = p**e - 1
    primes = [r for r in range(2, size + 1) if size % r == 0 and all(r % s for s in range(2, r))]
    d = C.shape[1]
    eye = np.eye(d, dtype=np.int64)
    for coeffs in itertools.product(range(p), repeat=e):
        X = np.einsum("i,ijk->jk", np.array(coeffs, dtype=np.int64), C) % p
        if not X.any():
            continue
        if not np.array_equal(_mpow(X, size, p), eye):
            continue
        if all(not np.array_equal(_mpow(X, size // r, p), eye) for r in primes):
            return X
    raise MatError("commutant is not a field (group not irreducible?)")


def _mpow(M, e, p):
    out = np.eye(M.shape[0], dtype=np.int64)
    b = M % p
    while e:
        if e & 1:
            out = (out @ b) % p
        b = (b @ b) % p
        e >>= 1
    return out


def _generating_tuple(els: ElementSet, rng, max_tries: int = 2000) -> list[int]:
    n = els.n
    if n == 1:
        return []
    for size in (1, 2, 3):
        for _ in range(max_tries if size > 1 else min(n, max_tries)):
            idx = [int(i) for i in rng.integers(1, n, size=size)]
            if len(els.closure(idx)) == n:
                return idx
    raise RuntimeError("no small generating tuple found")


def linear_normalizer(H: MatGroup, centralize: Sequence[np.ndarray] = (), seed: int = 1) -> NormalizerResult:
    """Normalizer of H in GL(d, p) for H irreducible with a field commutant.

    ``centralize`` restricts the search to elements commuting with the given
    matrices (used to stay GF(p^k)-linear on a blown-up group).
    """
    H = H.to_prime()
    p, d = H.p, H.degree
    cen = [np.asarray(c, dtype=np.int64) % p for c in centralize]
    els = H.elements()
    rng = np.random.default_rng(seed)
    C = intertwiners(list(H.lin) + cen, list(H.lin) + cen, p)
    zgen = _field_generator(C, p, rng)
    tup = _generating_tuple(els, rng)
    keys = _invariants(els, p)
    n = els.n
    inv = els.inverse

    # candidate images filtered by invariants of a few words
    cands = [np.nonzero(keys == keys[i])[0] for i in tup]
    pairs = np.array(list(itertools.product(*cands)), dtype=np.int64).reshape(-1, len(tup))
    base = np.array(tup, dtype=np.int64)
    words = []
    if len(tup) >= 2:
        words = [(0, 1), (0, -1), (1, 0, 1), (0, 0, 1)]

    def word_index(rows, word):
        mats = np.broadcast_to(np.eye(d, dtype=np.int64), (rows.shape[0], d, d)).copy()
        for w in word:
            idx = rows[:, abs(w)] if w >= 0 else inv[rows[:, 1]]
            mats = (mats @ els.mats[idx]) % p
        return els.index(mats)

    for word in words:
        target = keys[word_index(base[None], word)[0]]
        ok = np.zeros(pairs.shape[0], dtype=bool)
        for start in range(0, pairs.shape[0], 200_000):
            chunk = pairs[start:start + 200_000]
            ok[start:start + 200_000] = keys[word_index(chunk, word)] == target
        pairs = pairs[ok]

    gens_K = [zgen] + list(H.lin)
    perms = [els.conj_by(g) for g in gens_K]
    weights = n ** np.arange(len(tup), dtype=np.int64)

    def orbit_of_base():
        start = int(base @ weights)
        seen = {start}
        frontier = [base]
        while frontier:
            F_ = np.array(frontier)
            frontier = []
            for perm in perms:
                img = perm[F_]
                for row, code in zip(img, img @ weights):
                    c = int(code)
                    if c not in seen:
                        seen.add(c)
                        frontier.append(row)
        return seen

    orbit = orbit_of_base()
    added = []
    hmats = [els.mats[i] for i in tup]
    for row in pairs:
        if int(row @ weights) in orbit:
            continue
        sols = intertwiners(hmats + cen, [els.mats[i] for i in row] + cen, p)
        X = next((S for S in sols if rank(S, p) == d), None)
        if X is None:
            continue
        added.append(X)
        perms.append(els.conj_by(X))
        orbit = orbit_of_base()
    N = MatGroup.from_arrays(p, [zgen] + list(H.lin) + added, d)
    return NormalizerResult(N, len(orbit), "automorphism",
                            {"commutant_order": p ** C.shape[0], "candidates": int(pairs.shape[0])})


def linear_conjugate(H1: MatGroup, H2: MatGroup, seed: int = 1) -> np.ndarray | None:
    """Some X in GL(d, p) with X H1 X^-1 = H2, or None.

    H1 must be irreducible: by Schur's lemma any nonzero intertwiner from H1
    to a twisted copy is then invertible.
    """
    H1, H2 = H1.to_prime(), H2.to_prime()
    if H1.degree != H2.degree or H1.p != H2.p or H1.order != H2.order:
        return None
    p = H1.p
    e1, e2 = H1.elements(), H2.elements()
    k1, k2 = _invariants(e1, p), _invariants(e2, p)
    if not np.array_equal(np.sort(k1), np.sort(k2)):
        return None
    tup = _generating_tuple(e1, np.random.default_rng(seed))
    if not tup:
        return np.eye(H1.degree, dtype=np.int64)
    src = [e1.mats[i] for i in tup]
    cands = [np.nonzero(k2 == k1[i])[0] for i in tup]
    prod_key = k1[e1.index(((src[0] @ src[-1]) % p)[None])[0]]
    for row in itertools.product(*cands):
        dst = [e2.mats[i] for i in row]
        if k2[e2.index(((dst[0] @ dst[-1]) % p)[None])[0]] != prod_key:
            continue
        sols = intertwiners(src, dst, p)
        if len(sols):
            return sols[0]
    return None


# ---------------------------------------------------------------------------
# semilinear and tensor ambients


def semilinear_normalizer(NE: MatGroup) -> NormalizerResult:
    """N_{GL(kn, p)}(blowup(NE)) for NE <= GL(n, p^k), k >= 2, absolutely irreducible."""
    F, n = NE.field, NE.dim
    if F.k < 2:
        raise ValueError("semilinear extension needs k >= 2; for k = 1 use NE directly")
    if len(intertwiner_space(F, list(NE.gens), list(NE.gens))) != 1:
        raise ValueError("NE is not absolutely irreducible")
    k, p = F.k, F.p
    S = blowup(_scalar_generator(F, n)).codes
    linear = linear_normalizer(NE, centralize=[S])
    Phi = kron(identity(make_field(p), n), frobenius_matrix(F)).codes
    H = NE.to_prime()
    Hel = H.elements()
    Phi_inv = batch_inverse(Phi[None], p)[0]
    stable = all(Hel.index(((Phi @ h @ Phi_inv) % p)[None])[0] >= 0 for h in H.lin)
    if stable:
        gens = list(linear.N.lin) + [Phi]
        N = MatGroup.from_arrays(p, gens, n * k)
        cosets = k
    else:
        full = linear_normalizer(NE)
        N = full.N
        cosets = N.order // linear.N.order
    return NormalizerResult(N, linear.lifted_symplectic_count, "semilinear",
                            {"linear_order": linear.N.order, "galois_cosets": cosets,
                             "frobenius_stable": stable})


def gl_generators(F: Field, r: int) -> list[Mat]:
    """Generators of GL(r, F): diag(w,1,..), a transvection and a cyclic permutation."""
    w = primitive_element(F)
    D = [[F.one if i == j else F.zero for j in range(r)] for i in range(r)]
    D[0][0] = w
    gens = [Mat.from_rows(F, D)]
    if r > 1:
        T = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
        T[0][1] = 1
        P = [[1 if i == (j + 1) % r else 0 for j in range(r)] for i in range(r)]
        gens += [Mat.from_rows(F, T), Mat.from_rows(F, P)]
    return gens


def tensor_normalizer(NE: MatGroup, r: int) -> NormalizerResult:
    """Ambient <NE (x) I_r, I_n (x) GL(r, p)> inside GL(n r, p)."""
    if NE.field.k != 1:
        raise ValueError("tensor path is only used over prime fields")
    if r < 1 or r > 5:
        raise ValueError("complement dimension out of scope")
    if r == 1:
        return NormalizerResult(NE, 0, "tensor")
    F, n = NE.field, NE.dim
    gens = [kron(g, identity(F, r)) for g in NE.gens]
    gens += [kron(identity(F, n), h) for h in gl_generators(F, r)]
    return NormalizerResult(MatGroup(gens), 0, "tensor")


# ---------------------------------------------------------------------------
# the exponent-9 group of order 27


def exponent9_extraspecial(p: int = 2) -> MatGroup:
    """Z9 x| Z3 (b a b^-1 = a^4) in its regular representation, as 27 x 27 permutation matrices."""
    elems = [(i, j) for j in range(3) for i in range(9)]
    pos = {e: t for t, e in enumerate(elems)}

    def mul(x, y):
        return ((x[0] + pow(4, x[1], 9) * y[0]) % 9, (x[1] + y[1]) % 3)

    F = make_field(p)
    gens = []
    for g in [(1, 0), (0, 1)]:
        M = np.zeros((27, 27), dtype=np.int64)
        for e in elems:
            M[pos[mul(g, e)], pos[e]] = 1
        gens.append(Mat(F, M))
    return MatGroup(gens)


def order3_subgroup(G: MatGroup) -> MatGroup:
    """Subgroup generated by the elements x with x^3 = 1."""
    els = G.elements()
    cube = (els.mats @ els.mats @ els.mats) % G.p
    eye = np.eye(G.degree, dtype=np.int64)
    idx = np.nonzero(np.all(cube == eye, axis=(1, 2)))[0]
    sub = els.closure(idx)
    mask = np.zeros(els.n, dtype=bool)
    mask[sub] = True
    return subgroup_from_mask(G, mask)
