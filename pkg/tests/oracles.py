"""Brute-force oracles shared by the test modules."""

import functools

import numpy as np

from solvrank import brute
from solvrank.matlin import all_vectors
from solvrank.subgroups import TableGroup
from solvrank.engine import MatGroup
from solvrank.extras import (ExtraspecialSpec, brute_normalizer_elements, build_extraspecial,
                             normalizer_of_extraspecial)
from solvrank.gfarith import make_field


@functools.lru_cache(maxsize=None)
def brute_normalizer_codes(q, m, kind, p, k):
    """Codes of every element of GL(q^m, p^k) normalizing E (exhaustive scan)."""
    E = build_extraspecial(ExtraspecialSpec(q, m, kind), make_field(p, k))
    return brute_normalizer_elements(E)


def group_equals_code_set(G: MatGroup, codes: np.ndarray) -> bool:
    """True iff the group G (over its own field) has exactly the elements listed by codes.

    The listed set is closed, so it suffices that |G| equals its size and every
    generator of G is listed.
    """
    F = G.field
    if G.order != len(codes):
        return False
    listed = set(codes.tolist())
    gens = brute.encode(np.array([g.codes for g in G.gens]), F.order)
    return all(int(c) in listed for c in gens)


def lift_equals_brute(q, m, kind, p, k) -> bool:
    spec = ExtraspecialSpec(q, m, kind)
    E = build_extraspecial(spec, make_field(p, k))
    lift = normalizer_of_extraspecial(E, spec, "lift").N
    return group_equals_code_set(lift, brute_normalizer_codes(q, m, kind, p, k))


def brute_normalizer_over_prime(H: MatGroup) -> np.ndarray:
    """Codes of N_{GL(d, p)}(H) for H over GF(p)."""
    return brute_normalizer_elements(H.to_prime() if H.field.k > 1 else H)


def prime_group_equals_code_set(G: MatGroup, codes: np.ndarray) -> bool:
    P = G.to_prime()
    if P.order != len(codes):
        return False
    listed = set(codes.tolist())
    gens = brute.encode(P.lin, P.p)
    return all(int(c) in listed for c in gens)


def brute_elements(gens, p):
    """Plain BFS over matrix tuples, independent of the engine."""
    d = gens[0].shape[0]
    eye = np.eye(d, dtype=np.int64)
    seen = {eye.tobytes()}
    frontier = [eye]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = (x @ g) % p
                key = y.tobytes()
                if key not in seen:
                    seen.add(key)
                    new.append(y)
        frontier = new
    return [np.frombuffer(k, dtype=np.int64).reshape(d, d) for k in seen]


def brute_orbits(elements, p, d):
    V = all_vectors(p, d)
    w = p ** np.arange(d)
    images = np.stack([((V @ g.T) % p) @ w for g in elements])
    # the images of v under every element form its orbit; label orbits by their minimum
    return len(set(images.min(axis=0).tolist()))


def all_subgroup_classes_brute(T: TableGroup) -> int:
    """Count conjugacy classes of all subgroups by closing <S, x> from the trivial group."""
    n = T.n

    def close(gens):
        mask = np.zeros(n, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        while frontier.size:
            img = T.mul[np.ix_(frontier, gens)].ravel()
            img = np.unique(img[~mask[img]])
            mask[img] = True
            frontier = img
        return mask

    trivial = close([0])
    seen = {trivial.tobytes()}
    queue = [([0], trivial)]
    while queue:
        gens, mask = queue.pop()
        for x in np.nonzero(~mask)[0]:
            H = close(gens + [int(x)])
            key = H.tobytes()
            if key not in seen:
                seen.add(key)
                queue.append((gens + [int(x)], H))
    g = np.arange(n)
    canon = set()
    for key in seen:
        arr = np.nonzero(np.frombuffer(key, dtype=bool))[0]
        conj = np.sort(T.mul[T.mul[g[:, None], arr[None, :]], T.inv[g][:, None]], axis=1)
        canon.add(min(map(bytes, conj.astype(np.int32))))  # any fixed total order works
    return len(canon)
