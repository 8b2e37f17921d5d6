"""From an extraspecial group to the rank <= 4 point stabilizers of one table row.

For a row (q, m, p, k, kind) the pipeline is

1. build E <= GL(q^m, p^k) and its normalizer N_E;
2. write N_E over GF(p) (field descent) when k > 1;
3. take the ambient N = N_{GL(d, p)}(N_E), d = k q^m; for a reducible row
   the ambient is N_E (x) I_r together with I (x) GL(r, p);
4. list the solvable subgroups of N containing a conjugate of E, keep those
   that are irreducible, linearly primitive and of rank <= 4, and merge
   classes that are conjugate in GL(d, p).

A row reports the largest survivor together with the survivors that are
conjugate into it. The structure of every survivor is checked against the chain
Z <= U <= F <= A <= G0 of solvable quasi-primitive linear groups.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .config import BudgetExceeded
from .engine import (MatGroup, OrbitPartition, derived_series, element_orders, fixed_vector_count,
                     is_solvable, orbit_partition, rank_of_action)
from .extras import (SPECS, ExtraspecialSpec, build_extraspecial, gl_generators, linear_conjugate,
                     linear_normalizer, normalizer_of_extraspecial, semilinear_normalizer,
                     tensor_normalizer)
from .gfarith import is_prime, make_field, primitive_element
from .matlin import Mat, frobenius_matrix, identity, kron, regular_matrix, write_matgroup
from .modana import _class_labels, _closure_greedy, is_irreducible, is_linearly_primitive, spin
from .subgroups import TableGroup, solvable_subgroup_classes

__all__ = [
    "GOLDEN",
    "QUICK_ROWS",
    "KIND_OF_NOTE",
    "RowRecord",
    "GroupRecord",
    "StructureReport",
    "RowParameterError",
    "validate_row",
    "row_ambient",
    "enumerate_candidates",
    "classify_row",
    "verify_structure",
    "construct_row30",
    "build_gammaL1",
    "fingerprint",
    "reducible_search",
    "irreducible_fingerprints",
    "ReducibleReport",
    "RowOutcome",
    "symplectic_order",
    "run_tables",
    "write_row",
    "tables_csv",
]

NOTE = {"minus": "E-", "plus": "E+", "odd": ""}

# No., q, m, p, k, d, Rank(G), Max|G0|, Num Gps, Note
GOLDEN = [
    (1, 2, 1, 3, 1, 2, 2, 48, 4, "E-"),
    (2, 2, 1, 5, 1, 2, 2, 96, 3, "E-"),
    (3, 2, 1, 7, 1, 2, 2, 144, 7, "E-"),
    (4, 2, 1, 7, 1, 2, 2, 96, 3, "E+"),
    (5, 2, 1, 11, 1, 2, 2, 240, 4, "E-"),
    (6, 2, 1, 23, 1, 2, 2, 528, 3, "E-"),
    (7, 2, 2, 3, 1, 4, 2, 640, 3, "E-"),
    (8, 3, 1, 2, 2, 3, 3, 1296, 7, ""),
    (9, 2, 1, 3, 2, 4, 3, 384, 11, "E-"),
    (10, 2, 1, 13, 1, 2, 3, 288, 2, "E-"),
    (11, 2, 1, 17, 1, 2, 3, 384, 3, "E-"),
    (12, 2, 1, 19, 1, 2, 3, 432, 3, "E-"),
    (13, 2, 1, 23, 1, 2, 3, 352, 1, "E+"),
    (14, 2, 1, 3, 3, 6, 3, 1872, 6, "E-"),
    (15, 2, 1, 29, 1, 2, 3, 672, 2, "E-"),
    (16, 2, 1, 31, 1, 2, 3, 720, 1, "E-"),
    (17, 2, 1, 47, 1, 2, 3, 1104, 1, "E-"),
    (18, 2, 2, 3, 1, 4, 3, 2304, 13, "E+"),
    (19, 2, 2, 7, 1, 4, 3, 1920, 1, "E-"),
    (20, 3, 1, 7, 1, 3, 4, 1296, 3, ""),
    (21, 2, 1, 5, 2, 4, 4, 1152, 4, "E-"),
    (22, 2, 1, 31, 1, 2, 4, 480, 1, "E+"),
    (23, 2, 1, 37, 1, 2, 4, 864, 1, "E-"),
    (24, 2, 1, 41, 1, 2, 4, 960, 1, "E-"),
    (25, 2, 1, 43, 1, 2, 4, 1008, 1, "E-"),
    (26, 2, 1, 53, 1, 2, 4, 1248, 1, "E-"),
    (27, 2, 1, 59, 1, 2, 4, 1392, 1, "E-"),
    (28, 2, 1, 71, 1, 2, 4, 1680, 1, "E-"),
    (29, 2, 2, 5, 1, 4, 4, 4608, 5, "E+"),
    (30, 2, 1, 3, 1, 10, 4, 29040, 1, "E-"),
]

# rows whose ambients are small enough for a run of a few minutes
QUICK_ROWS = (1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 15, 16, 17, 22, 23, 24, 25, 26, 27, 28)
KIND_OF_NOTE = {"E-": "minus", "E+": "plus", "": "odd"}


class RowParameterError(ValueError):
    pass


# ---------------------------------------------------------------------------
# records


@dataclass
class StructureReport:
    z: int
    u: int
    f: int
    a: int
    g0: int
    q: int
    m: int
    w_dim: int
    b: int | None
    checks: dict = field(default_factory=dict)
    row_e_in_f: bool | None = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_dict(self) -> dict:
        return {"Z": self.z, "U": self.u, "F": self.f, "A": self.a, "G0": self.g0,
                "q": self.q, "m": self.m, "dim_W": self.w_dim, "b": self.b,
                "checks": dict(self.checks), "row_E_in_F": self.row_e_in_f}


@dataclass
class GroupRecord:
    group: MatGroup
    order: int
    rank: int
    structure: StructureReport | None = None

    def gens_bytes(self) -> bytes:
        return b"".join(np.ascontiguousarray(g, dtype=np.int64).tobytes() for g in self.group.lin)


@dataclass
class RowRecord:
    q: int
    m: int
    p: int
    k: int
    d: int
    kind: str
    rank: int | None          # rank of the largest group
    max_order: int
    num_groups: int
    groups: list = field(default_factory=list)
    n_classes: int = 0        # survivors before merging GL(d, p)-conjugate classes
    ambient_order: int = 0
    outside_max: int = 0      # survivors not conjugate into the largest one

    @property
    def note(self) -> str:
        return NOTE[self.kind]

    def to_json(self, gen_files: list[str] | None = None) -> str:
        gen_files = gen_files or [f"group_{i + 1:02d}.matgroup" for i in range(len(self.groups))]
        doc = {"q": self.q, "m": self.m, "p": self.p, "k": self.k, "d": self.d, "kind": self.kind,
               "rank": self.rank, "max_order": self.max_order, "num_groups": self.num_groups,
               "groups": [{"order": g.order, "rank": g.rank, "gens": f,
                           "structure": g.structure.to_dict() if g.structure else None}
                          for g, f in zip(self.groups, gen_files)]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# parameters and ambients


def validate_row(q: int, m: int, p: int, k: int, kind: str, reducible_r: int = 1) -> None:
    """Reject rows outside the case grid of low-rank solvable groups."""
    if q not in (2, 3):
        raise RowParameterError("q must be 2 or 3")
    if not is_prime(p):
        raise RowParameterError(f"p = {p} is not prime")
    if k < 1 or m < 1 or reducible_r < 1:
        raise RowParameterError("m, k and the multiplicity must be positive")
    if (q, m, kind) not in SPECS:
        raise RowParameterError(f"no extraspecial group for q={q}, m={m}, kind={kind}")
    if p == q:
        raise RowParameterError("q must differ from p")
    pk, qm = p**k, q**m
    if reducible_r == 1:
        ok = (qm == 3 and pk in (4, 7)) or (qm == 2 and pk <= 71) or (qm == 4 and pk in (3, 5, 7))
    else:
        ok = qm == 2 and ((reducible_r == 2 and pk <= 7) or (pk == 3 and reducible_r in (3, 5)))
    if not ok:
        raise RowParameterError(f"(q^m, p^k, r) = ({qm}, {pk}, {reducible_r}) is outside the case grid")


def row_ambient(q: int, m: int, p: int, k: int, kind: str, reducible_r: int = 1):
    """(E over GF(p), ambient N over GF(p), N_E over GF(p^k))."""
    F = make_field(p, k)
    spec = ExtraspecialSpec(q, m, kind)
    E = build_extraspecial(spec, F)
    NE = normalizer_of_extraspecial(E, spec).N
    if reducible_r > 1:
        N = tensor_normalizer(NE, reducible_r).N
        Ir = identity(F, reducible_r)
        Ep = MatGroup([kron(g, Ir) for g in E.gens])
    elif k > 1:
        N = semilinear_normalizer(NE).N
        Ep = E.to_prime()
    else:
        N = linear_normalizer(NE).N
        Ep = E
    return Ep, N, NE


# ---------------------------------------------------------------------------
# candidates


def enumerate_candidates(N: MatGroup, E: MatGroup) -> list[MatGroup]:
    """Solvable subgroups of N containing a conjugate of E, one per N-class.

    When E is normal in N the search runs in the quotient N/E; otherwise the
    full multiplication table of N is used and every N-conjugate of E is
    tracked.  Groups are returned in the order of the class list.
    """
    p, d = N.p, N.degree
    N = N.to_prime()
    els = N.elements()
    eidx = els.index(E.elements().mats)
    if (eidx < 0).any():
        raise ValueError("E is not contained in N")
    emask = np.zeros(els.n, dtype=bool)
    emask[eidx] = True
    normal = all(emask[els.conj_by(g, eidx)].all() for g in N.lin)
    out = []
    if normal:
        T = TableGroup.quotient(els, eidx)
        for H in solvable_subgroup_classes(T):
            gens = [els.mats[T.reps[i]] for i in H.gens] + list(E.lin)
            out.append(MatGroup.from_arrays(p, gens, d))
        return out
    T = TableGroup.from_elements(els)
    conjs = {tuple(np.sort(T.conj(g, eidx))) for g in range(T.n)}
    conjs = [np.array(c) for c in sorted(conjs)]
    for H in solvable_subgroup_classes(T):
        hm = H.mask(T.n)
        if any(hm[c].all() for c in conjs):
            out.append(MatGroup.from_arrays(p, [els.mats[i] for i in H.gens], d))
    return out


def fingerprint(G: MatGroup) -> tuple:
    """(order, rank, orbit-size multiset, derived-series orders)."""
    part: OrbitPartition = orbit_partition(G)
    series, _ = derived_series(G)
    return (G.order, part.nclasses, tuple(sorted(int(s) for s in part.sizes)),
            tuple(int(S.order) for S in series))


def _passes(G: MatGroup) -> int | None:
    """Rank of G if it survives the filters, else None."""
    r = rank_of_action(G)
    if r > 4 or not is_irreducible(G) or not is_linearly_primitive(G):
        return None
    if not is_solvable(G):  # pragma: no cover - candidates are solvable by construction
        return None
    return r


def _merge_linear_classes(records: list[GroupRecord]) -> list[GroupRecord]:
    kept: list[GroupRecord] = []
    prints: list[tuple] = []
    for rec in records:
        fp = fingerprint(rec.group)
        dup = any(fp == f and linear_conjugate(rec.group, o.group) is not None
                  for o, f in zip(kept, prints))
        if not dup:
            kept.append(rec)
            prints.append(fp)
    return kept


_RAW_CACHE: dict = {}


def _raw_row(q: int, m: int, p: int, k: int, kind: str, reducible_r: int):
    """Survivors of one configuration after merging GL(d, p)-conjugate classes."""
    key = (q, m, p, k, kind, reducible_r)
    if key not in _RAW_CACHE:
        E, N, _ = row_ambient(q, m, p, k, kind, reducible_r)
        survivors = []
        for G in enumerate_candidates(N, E):
            r = _passes(G)
            if r is not None:
                survivors.append(GroupRecord(G, G.order, r))
        survivors.sort(key=lambda g: (-g.order, g.gens_bytes()))
        _RAW_CACHE[key] = (E, N, len(survivors), _merge_linear_classes(survivors))
    return _RAW_CACHE[key]


def _conjugate_into(N: MatGroup, H: MatGroup, M: MatGroup) -> bool:
    """True if g H g^-1 <= M for some g in N."""
    els = N.elements()
    Mel = M.elements()
    p = N.p
    ginv = els.mats[els.inverse]
    mask = np.ones(els.n, dtype=bool)
    for h in H.lin:
        mask &= Mel.index((els.mats @ h @ ginv) % p) >= 0
        if not mask.any():
            return False
    return True


def classify_row(q: int, m: int, p: int, k: int, kind: str, reducible_r: int = 1,
                 structure: bool = True) -> RowRecord:
    """One table row: the largest surviving group and the survivors conjugate into it."""
    validate_row(q, m, p, k, kind, reducible_r)
    E, N, n_classes, merged = _raw_row(q, m, p, k, kind, reducible_r)
    groups = []
    if merged:
        top = merged[0]
        groups = [GroupRecord(g.group, g.order, g.rank) for g in merged
                  if g is top or (top.order % g.order == 0 and _conjugate_into(N, g.group, top.group))]
    if structure:
        for g in groups:
            g.structure = verify_structure(g.group, E)
    head = groups[0] if groups else None
    d = k * q**m * reducible_r
    return RowRecord(q, m, p, k, d, kind, head.rank if head else None, head.order if head else 0,
                     len(groups), groups, n_classes=n_classes, ambient_order=N.order,
                     outside_max=len(merged) - len(groups))


# ---------------------------------------------------------------------------
# structure chain


def symplectic_order(m: int, q: int) -> int:
    return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))


def _prime_power(n: int) -> tuple[int, int] | None:
    if n < 2:
        return None
    r = next(f for f in range(2, n + 1) if n % f == 0)
    e = 0
    while n % r == 0:
        n //= r
        e += 1
    return (r, e) if n == 1 else None


def _join_closed(els, seeds: list[np.ndarray]) -> list[np.ndarray]:
    found = {s.tobytes(): s for s in seeds}
    frontier = list(seeds)
    while frontier:
        new = []
        for a in frontier:
            for b in list(found.values()):
                if np.isin(a, b).all() or np.isin(b, a).all():
                    continue
                j = _closure_greedy(els, b, start=a)
                if j.tobytes() not in found:
                    found[j.tobytes()] = j
                    new.append(j)
        frontier = new
    return list(found.values())


def _fitting(els, p: int, lin) -> tuple[np.ndarray, list[np.ndarray]]:
    """Fitting subgroup and the normal closures of classes inside it."""
    n = els.n
    orders = element_orders(els, p)
    labels = _class_labels(els, list(lin))
    closures = []
    for lab in np.unique(labels):
        members = np.nonzero(labels == lab)[0]
        if _prime_power(int(orders[members[0]])) is None:
            continue
        closures.append(_closure_greedy(els, members))
    primes = {r for r in range(2, n + 1) if n % r == 0 and is_prime(r)}
    parts = []
    for r in sorted(primes):
        pieces = [c for c in closures if (_prime_power(c.size) or (0, 0))[0] == r]
        if pieces:
            O = pieces[0]
            for c in pieces[1:]:
                O = _closure_greedy(els, c, start=O)
            if (_prime_power(O.size) or (0, 0))[0] == r:
                parts.append(O)
    F = np.array([0])
    for O in parts:
        F = _closure_greedy(els, O, start=F)
    inside = [c for c in closures if np.isin(c, F).all()]
    return F, inside


def _generating_subset(els, idx: np.ndarray) -> np.ndarray:
    """A few elements of the subgroup ``idx`` that generate it."""
    mask = np.zeros(els.n, dtype=bool)
    mask[0] = True
    gens: list[int] = []
    for i in idx:
        if not mask[i]:
            gens.append(int(i))
            mask[els.closure(gens)] = True
    return np.array(gens, dtype=np.int64)


def _centralizer_mask(els, idx: np.ndarray, p: int) -> np.ndarray:
    """Elements commuting with the subgroup whose indices are ``idx``."""
    mask = np.ones(els.n, dtype=bool)
    for x in els.mats[_generating_subset(els, idx)]:
        mask &= np.all((els.mats @ x) % p == (x @ els.mats) % p, axis=(1, 2))
    return mask


def verify_structure(G0: MatGroup, E: MatGroup | None = None) -> StructureReport:
    """Compute Z <= U <= F <= A <= G0 for a solvable quasi-primitive group and test it.

    U is the largest abelian normal subgroup, A = C_{G0}(U), F is the Fitting
    subgroup of A and Z = [F, F]; then |F:U| = q^{2m} with m = 0 allowed (the
    semilinear case, reported as q = 1).  W is the span of U applied to a
    nonzero vector.  ``E`` is only used for the informational entry
    ``row E in F``, which is not a check.
    """
    G0 = G0.to_prime()
    p, d = G0.p, G0.degree
    els = G0.elements()
    n = els.n
    orders = element_orders(els, p)
    F0, inside = _fitting(els, p, G0.lin)
    normals = _join_closed(els, inside) if inside else [np.array([0])]
    abelian = [S for S in normals if _is_abelian_set(els.mats[S], p)]
    Uidx = max(abelian, key=lambda S: (S.size, -int(S.sum())))
    Um = els.mats[Uidx]
    amask = _centralizer_mask(els, Uidx, p)
    Fidx = F0[amask[F0]]
    Fm = els.mats[Fidx]
    # Z = [F, F]
    Finv = els.inverse[Fidx]
    commutators = set()
    for i, x in enumerate(Fidx):
        c = els.index((els.mats[Finv[i]][None] @ els.mats[Finv] @ els.mats[x][None] @ Fm) % p)
        commutators.update(int(v) for v in c)
    Zidx = els.closure(sorted(commutators))
    f, u, a = Fidx.size, Uidx.size, int(amask.sum())
    fset = np.zeros(n, dtype=bool)
    fset[Fidx] = True
    checks = {}
    index_fu = f // u if f % u == 0 else 0
    pp = _prime_power(index_fu) if index_fu > 1 else None
    checks["|F:U| = q^(2m)"] = index_fu == 1 or (pp is not None and pp[1] % 2 == 0)
    q, m = (pp[0], pp[1] // 2) if pp and pp[1] % 2 == 0 else (1, 0)
    checks["U = Z(F)"] = bool(np.isin(Uidx, Fidx).all()) and \
        int(_centralizer_mask(els, Fidx, p)[Fidx].sum()) == u
    checks["Z = [F,F] has order q and lies in U"] = (Zidx.size == q and bool(np.isin(Zidx, Uidx).all()))
    P = np.broadcast_to(np.eye(d, dtype=np.int64), Fm.shape).copy()
    for _ in range(q):
        P = (P @ Fm) % p
    checks["F/U is elementary abelian"] = bool(np.isin(els.index(P), Uidx).all())
    checks["q differs from p"] = q != p
    checks["q^m divides d"] = d % (q**m) == 0
    checks["C(F) <= F"] = bool(fset[_centralizer_mask(els, Fidx, p)].all())
    checks["U is cyclic"] = bool(orders[Uidx].max() == u)
    eye = np.eye(d, dtype=np.int64)
    checks["U acts fixed point freely"] = all(fixed_vector_count(x, p) == 1 for x in Um
                                              if not np.array_equal(x, eye))
    W = spin(MatGroup.from_arrays(p, list(Um), d), eye[0])
    w = W.dim
    checks["|U| divides p^dim(W) - 1"] = (p**w - 1) % u == 0
    b = d // (w * q**m) if d % (w * q**m) == 0 else None
    checks["n = |W|^(q^m b)"] = b is not None and p**d == (p**w) ** (q**m * b)
    checks["|A/F| divides |Sp(2m,q)|"] = a % f == 0 and symplectic_order(m, q) % (a // f) == 0
    idx = n // a
    cyclic = idx == 1
    if not cyclic:
        cur = els.mats.copy()
        rel = np.zeros(n, dtype=np.int64)
        for j in range(1, idx + 1):
            hit = (rel == 0) & amask[els.index(cur)]
            rel[hit] = j
            cur = (cur @ els.mats) % p
        cyclic = bool((rel == idx).any())
    checks["G0/A is cyclic"] = cyclic
    checks["|G0:A| divides dim W"] = w % idx == 0
    checks["G0 = A when q^m = d"] = q**m != d or idx == 1
    checks["normal abelian subgroups are cyclic"] = all(orders[S].max() == S.size for S in abelian)
    rep = StructureReport(int(Zidx.size), u, f, a, n, q, m, w, b, checks)
    if E is not None:
        rep.row_e_in_f = bool(fset[els.index(E.to_prime().elements().mats)].all())
    return rep


def _is_abelian_set(S: np.ndarray, p: int) -> bool:
    for g in S:
        if not np.array_equal((S @ g) % p, (g @ S) % p):
            return False
    return True


# ---------------------------------------------------------------------------
# explicit constructions


def build_gammaL1(p: int, d: int) -> MatGroup:
    """GammaL(1, p^d) in GL(d, p): a Singer cycle and the Frobenius map."""
    if d < 1:
        raise ValueError("d must be positive")
    F = make_field(p, d)
    S = regular_matrix(primitive_element(F))
    gens = [S] if d == 1 else [S, frobenius_matrix(F)]
    return MatGroup(gens)


def construct_row30() -> MatGroup:
    """GL(2, 3) o GammaL(1, 3^5) acting on GF(3)^2 (x) GF(3)^5."""
    F3 = make_field(3)
    F = make_field(3, 5)
    I2, I5 = identity(F3, 2), identity(F3, 5)
    S = regular_matrix(primitive_element(F))
    Phi = frobenius_matrix(F)
    gens = [kron(A, I5) for A in gl_generators(F3, 2)]
    gens += [kron(I2, S), kron(I2, Phi)]
    return MatGroup(gens)


# ---------------------------------------------------------------------------
# reducible re-search


@dataclass
class ReducibleReport:
    p: int
    survivors: list                 # (kind, fingerprint)
    matched: list                   # fingerprints equal to an irreducible-case group
    novel: list                     # fingerprints without a match

    @property
    def ok(self) -> bool:
        return not self.novel


def irreducible_fingerprints(p: int, d: int = 4) -> set:
    """Fingerprints of every group in the table rows acting on GF(p)^d."""
    out = set()
    for row in GOLDEN[:29]:
        no, q, m, rp, k, _, _, _, _, note = row
        if rp != p or k * q**m != d:
            continue
        validate_row(q, m, rp, k, KIND_OF_NOTE[note])
        merged = _raw_row(q, m, rp, k, KIND_OF_NOTE[note], 1)[3]
        out.update(fingerprint(g.group) for g in merged)
    return out


def reducible_search(p: int, r: int = 2, known: set | None = None) -> ReducibleReport:
    """Search the tensor ambients of D8 and Q8 in GL(2r, p)."""
    known = irreducible_fingerprints(p, 2 * r) if known is None else known
    survivors, matched, novel = [], [], []
    for kind in ("minus", "plus"):
        validate_row(2, 1, p, 1, kind, r)
        for g in _raw_row(2, 1, p, 1, kind, r)[3]:
            fp = fingerprint(g.group)
            survivors.append((kind, fp))
            (matched if fp in known else novel).append(fp)
    return ReducibleReport(p, survivors, matched, novel)


# ---------------------------------------------------------------------------
# tables


@dataclass
class RowOutcome:
    no: int
    golden: tuple
    record: RowRecord | None
    status: str                     # MATCH, MISMATCH or SKIPPED
    reason: str = ""

    def observed(self) -> tuple:
        r = self.record
        if r is None:
            return (None, None, None, None)
        return (r.rank, r.max_order, r.num_groups, r.note)


def _run_row(no: int) -> RowOutcome:
    row = GOLDEN[no - 1]
    _, q, m, p, k, d, rank, mx, num, note = row
    try:
        if no == 30:
            G = construct_row30()
            gr = GroupRecord(G, G.order, rank_of_action(G), verify_structure(G))
            rec = RowRecord(q, m, p, k, G.degree, "minus", gr.rank, gr.order, 1, [gr],
                            n_classes=1, ambient_order=G.order)
        else:
            rec = classify_row(q, m, p, k, KIND_OF_NOTE[note])
    except BudgetExceeded as exc:
        return RowOutcome(no, row, None, "SKIPPED", str(exc))
    got = (rec.rank, rec.max_order, rec.num_groups, rec.note)
    status = "MATCH" if got == (rank, mx, num, note) else "MISMATCH"
    return RowOutcome(no, row, rec, status)


def run_tables(budget: str = "quick", jobs: int = 1, rows=None) -> list[RowOutcome]:
    """Classify the selected table rows and compare with the published values."""
    if rows is None:
        if budget == "quick":
            rows = QUICK_ROWS
        elif budget == "full":
            rows = tuple(range(1, 31))
        else:
            raise ValueError("budget must be 'quick' or 'full'")
    rows = sorted(rows)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_row, rows))
    return [_run_row(no) for no in rows]


def tables_csv(outcomes: list[RowOutcome]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["No.", "q", "m", "p", "k", "d", "Rank(G)", "Max|G0|", "Num Gps", "Note", "Status"])
    for o in outcomes:
        no, q, m, p, k, d = o.golden[:6]
        rank, mx, num, note = o.observed()
        w.writerow([no, q, m, p, k, d, "" if rank is None else rank, "" if mx is None else mx,
                    "" if num is None else num, o.golden[9], o.status])
    return buf.getvalue()


def write_row(rec: RowRecord, outdir: str) -> list[str]:
    """Write row.json and one matgroup file per group; returns the file names."""
    os.makedirs(outdir, exist_ok=True)
    names = []
    for i, g in enumerate(rec.groups):
        name = f"group_{i + 1:02d}.matgroup"
        G = g.group.to_prime()
        F = make_field(G.p)
        text = write_matgroup(F, G.degree, [Mat(F, a) for a in G.lin])
        with open(os.path.join(outdir, name), "w", encoding="utf-8") as fh:
            fh.write(text)
        names.append(name)
    with open(os.path.join(outdir, "row.json"), "w", encoding="utf-8") as fh:
        fh.write(rec.to_json(names))
    return names
