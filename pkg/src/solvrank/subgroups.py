"""Finite groups as multiplication tables, and their solvable subgroups.

A :class:`TableGroup` is either the full multiplication table of an
enumerated matrix group or the table of a quotient by a normal subgroup.
Solvable subgroups are produced up to conjugacy by cyclic extension: every
solvable group has a chain 1 = H_0 < H_1 < ... < H_r = H in which each H_i
is normal of prime index in H_{i+1}, so extending conjugacy-class
representatives S by elements x of N(S) with x^l in S (l prime) reaches
every class.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import BudgetExceeded, budgets
from .engine import ElementSet

__all__ = ["TableGroup", "Subgroup", "solvable_subgroup_classes", "is_prime_int"]


def is_prime_int(n: int) -> bool:
    return n >= 2 and all(n % f for f in range(2, int(n**0.5) + 1))


class TableGroup:
    """Group on 0..n-1 (0 is the identity) given by its multiplication table."""

    def __init__(self, mul: np.ndarray, reps: np.ndarray | None = None, labels: np.ndarray | None = None):
        self.mul = np.ascontiguousarray(mul)
        self.n = mul.shape[0]
        if not np.array_equal(self.mul[0], np.arange(self.n)):
            raise ValueError("element 0 must be the identity")
        self.inv = np.argmax(self.mul == 0, axis=1)
        self.reps = reps        # element indices (in the parent ElementSet) of coset representatives
        self.labels = labels    # parent element -> table element
        self._orders = None

    @classmethod
    def from_elements(cls, els: ElementSet) -> "TableGroup":
        n = els.n
        lim = budgets().subgroups
        if n > lim:
            raise BudgetExceeded("table group", n, lim)
        mul = np.empty((n, n), dtype=np.int32)
        for j in range(n):
            col = els.right_mul(els.mats[j])
            if (col < 0).any():
                raise ValueError("elements are not closed under multiplication")
            mul[:, j] = col
        return cls(mul, reps=np.arange(n), labels=np.arange(n))

    @classmethod
    def quotient(cls, els: ElementSet, normal: np.ndarray) -> "TableGroup":
        """G/K for the normal subgroup K given by element indices."""
        normal = np.asarray(normal)
        prods = np.stack([els.right_mul(els.mats[k]) for k in normal], axis=1)
        if (prods < 0).any():
            raise ValueError("subgroup not contained in the group")
        lab_raw = prods.min(axis=1)
        uniq, labels = np.unique(lab_raw, return_inverse=True)
        # identity coset first: uniq[0] is 0 since the identity has index 0
        m = uniq.size
        lim = budgets().subgroups
        if m > lim:
            raise BudgetExceeded("quotient group", m, lim)
        reps = uniq
        mul = np.empty((m, m), dtype=np.int32)
        for j in range(m):
            col = els.right_mul(els.mats[reps[j]], reps)
            mul[:, j] = labels[col]
        return cls(mul, reps=reps, labels=labels)

    @property
    def orders(self) -> np.ndarray:
        if self._orders is None:
            orders = np.zeros(self.n, dtype=np.int64)
            cur = np.arange(self.n)
            k = 1
            while (orders == 0).any():
                hit = (orders == 0) & (cur == 0)
                orders[hit] = k
                cur = self.mul[cur, np.arange(self.n)]
                k += 1
            self._orders = orders
        return self._orders

    def conj(self, g, x):
        """g x g^-1 (vectorised over either argument)."""
        return self.mul[self.mul[g, x], self.inv[g]]

    def closure(self, gens) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        gens = np.asarray(list(gens), dtype=np.int64)
        while frontier.size:
            img = self.mul[frontier][:, gens].ravel() if gens.size else np.array([], dtype=np.int64)
            img = np.unique(img[~mask[img]])
            mask[img] = True
            frontier = img
        return np.nonzero(mask)[0]

    def normalizer_mask(self, gens, member: np.ndarray) -> np.ndarray:
        ok = np.ones(self.n, dtype=bool)
        g = np.arange(self.n)
        for s in gens:
            ok &= member[self.conj(g, s)]
        return ok

    def conjugators(self, gens_a, member_b: np.ndarray) -> np.ndarray:
        """Elements g with g A g^-1 <= B, for A given by generators."""
        return self.normalizer_mask(gens_a, member_b)


@dataclass
class Subgroup:
    elements: np.ndarray  # sorted table indices
    gens: list

    @property
    def order(self) -> int:
        return int(self.elements.size)

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[self.elements] = True
        return m


def _key(T: TableGroup, elems: np.ndarray):
    hist = np.bincount(T.orders[elems])
    return (elems.size, tuple(int(x) for x in hist))


def solvable_subgroup_classes(T: TableGroup, max_classes: int = 200_000) -> list[Subgroup]:
    """Representatives of all conjugacy classes of solvable subgroups of T.

    Sorted by order, then by element set.
    """
    trivial = Subgroup(np.array([0]), [])
    classes = [trivial]
    buckets: dict = {_key(T, trivial.elements): [0]}
    queue = [0]
    while queue:
        S = classes[queue.pop(0)]
        smask = S.mask(T.n)
        nmask = T.normalizer_mask(S.gens, smask)
        cand = np.nonzero(nmask & ~smask)[0]
        if cand.size == 0:
            continue
        # order of x modulo S
        rel = np.zeros(cand.size, dtype=np.int64)
        cur = cand.copy()
        j = 1
        while (rel == 0).any():
            hit = (rel == 0) & smask[cur]
            rel[hit] = j
            cur = T.mul[cur, cand]
            j += 1
        covered = np.zeros(T.n, dtype=bool)
        for x, l in zip(cand, rel):
            if covered[x] or not is_prime_int(int(l)):
                continue
            parts = [S.elements]
            power = x
            for _ in range(int(l) - 1):
                parts.append(T.mul[S.elements, power])
                power = T.mul[power, x]
            elems = np.unique(np.concatenate(parts))
            covered[elems] = True
            H = Subgroup(elems, S.gens + [int(x)])
            key = _key(T, elems)
            bucket = buckets.setdefault(key, [])
            dup = False
            for ri in bucket:
                R = classes[ri]
                rmask = R.mask(T.n)
                if T.conjugators(H.gens, rmask).any():
                    dup = True
                    break
            if dup:
                continue
            bucket.append(len(classes))
            queue.append(len(classes))
            classes.append(H)
            if len(classes) > max_classes:
                raise BudgetExceeded("subgroup classes", len(classes), max_classes)
    classes.sort(key=lambda s: (s.order, s.elements.tobytes()))
    return classes
