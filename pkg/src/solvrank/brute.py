"""Brute-force normalizer scan over all n x n matrices of a small field.

Used as the oracle for the lift and semilinear normalizer methods.  Every
matrix M of M_n(GF(Q)) is visited once; singular matrices are discarded and
M is kept iff M h M^-1 lies in H for each generator h.  Membership uses a
boolean table indexed by the matrix code sum M[i,j] * Q^(i*n+j).
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .config import BudgetExceeded, budgets
from .gfarith import Field


def gl_order(n: int, Q: int) -> int:
    out = 1
    for i in range(n):
        out *= Q**n - Q**i
    return out


@njit(cache=True)
def _scan(Q, n, add, mul, neg, inv, gens, member, first_row_limit):
    nn = n * n
    total = Q**nn
    digits = np.zeros(nn, dtype=np.int64)
    M = np.zeros((n, n), dtype=np.int64)
    A = np.zeros((n, 2 * n), dtype=np.int64)
    Minv = np.zeros((n, n), dtype=np.int64)
    T1 = np.zeros((n, n), dtype=np.int64)
    T2 = np.zeros((n, n), dtype=np.int64)
    weights = np.empty(nn, dtype=np.int64)
    w = 1
    for i in range(nn):
        weights[i] = w
        w *= Q
    out = []
    for code in range(total):
        if code:
            # increment the mixed-radix counter
            i = 0
            while True:
                digits[i] += 1
                if digits[i] < Q:
                    break
                digits[i] = 0
                i += 1
        for i in range(n):
            for j in range(n):
                M[i, j] = digits[i * n + j]
        # Gauss-Jordan inverse
        for i in range(n):
            for j in range(n):
                A[i, j] = M[i, j]
                A[i, n + j] = 1 if i == j else 0
        ok = True
        for c in range(n):
            piv = -1
            for r in range(c, n):
                if A[r, c] != 0:
                    piv = r
                    break
            if piv < 0:
                ok = False
                break
            if piv != c:
                for j in range(2 * n):
                    tmp = A[c, j]
                    A[c, j] = A[piv, j]
                    A[piv, j] = tmp
            s = inv[A[c, c]]
            for j in range(2 * n):
                A[c, j] = mul[s, A[c, j]]
            for r in range(n):
                if r != c and A[r, c] != 0:
                    f = neg[A[r, c]]
                    for j in range(2 * n):
                        A[r, j] = add[A[r, j], mul[f, A[c, j]]]
        if not ok:
            continue
        for i in range(n):
            for j in range(n):
                Minv[i, j] = A[i, n + j]
        good = True
        for g in range(gens.shape[0]):
            for i in range(n):
                for j in range(n):
                    acc = 0
                    for l in range(n):
                        acc = add[acc, mul[M[i, l], gens[g, l, j]]]
                    T1[i, j] = acc
            key = 0
            for i in range(n):
                for j in range(n):
                    acc = 0
                    for l in range(n):
                        acc = add[acc, mul[T1[i, l], Minv[l, j]]]
                    T2[i, j] = acc
                    key += acc * weights[i * n + j]
            if not member[key]:
                good = False
                break
        if good:
            out.append(code)
    return out


def brute_normalizer_codes(F: Field, n: int, gens_codes: np.ndarray, member_codes: np.ndarray,
                           budget: int | None = None) -> np.ndarray:
    """Codes of all M in GL(n, F) normalizing the group with the given elements.

    ``gens_codes`` has shape (r, n, n) with entries as field element codes;
    ``member_codes`` lists the matrix codes of every group element.
    """
    budget = budgets().brute if budget is None else budget
    size = gl_order(n, F.order)
    if size > budget:
        raise BudgetExceeded(f"brute scan of GL({n},{F.order})", size, budget)
    add, _, mul, neg, inv = F.tables
    member = np.zeros(F.order ** (n * n), dtype=np.bool_)
    member[member_codes] = True
    res = _scan(F.order, n, add, mul, neg, inv, np.ascontiguousarray(gens_codes, dtype=np.int64),
                member, 0)
    return np.array(res, dtype=np.int64)


def decode(codes: np.ndarray, Q: int, n: int) -> np.ndarray:
    """Inverse of the row-major base-Q matrix code."""
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((codes.size, n * n), dtype=np.int64)
    c = codes.copy()
    for i in range(n * n):
        c, out[:, i] = np.divmod(c, Q)
    return out.reshape(-1, n, n)


def encode(mats: np.ndarray, Q: int) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.int64)
    n = mats.shape[-1]
    return mats.reshape(-1, n * n) @ (Q ** np.arange(n * n, dtype=np.int64))
