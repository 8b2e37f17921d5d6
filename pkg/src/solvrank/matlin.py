"""Dense matrices over a finite field, field descent and tensor embeddings.

A :class:`Mat` stores its entries as integer element codes (see
:mod:`solvrank.gfarith`).  Everything downstream of the constructors works
over the prime field, so this module also carries the small GF(p) linear
algebra kernel (row reduction, null spaces, vector indexing) used by the
engine and the module-analysis code.
"""

from __future__ import annotations

import functools
import io
from typing import Iterable, Sequence

import numpy as np

from .gfarith import Field, FieldElem, FieldError, frobenius, make_field

__all__ = [
    "Mat",
    "MatError",
    "identity",
    "mat_ops",
    "kron",
    "blowup",
    "frobenius_matrix",
    "tensor_embed",
    "regular_matrix",
    "vector_index",
    "index_vector",
    "all_vectors",
    "rref",
    "nullspace",
    "rank",
    "inverse_mod",
    "det_mod",
    "write_matgroup",
    "read_matgroup",
    "MatgroupFormatError",
]


class MatError(ValueError):
    pass


class MatgroupFormatError(ValueError):
    pass


# ---------------------------------------------------------------------------
# code-level arithmetic (entries are element codes)


def _matmul_codes(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if F.k == 1:
        return (A @ B) % F.p
    add, _, mul, _, _ = F.tables
    C = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for l in range(A.shape[1]):
        C = add[C, mul[A[:, l, None], B[None, l, :]]]
    return C


def _rref_codes(F: Field, M: np.ndarray):
    """Reduced row echelon form over F; returns (R, pivot columns)."""
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = R.shape
    if F.k == 1:
        p = F.p
        R %= p
        piv = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(R[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + nz[0]
            if i != r:
                R[[r, i]] = R[[i, r]]
            R[r] = (R[r] * pow(int(R[r, c]), -1, p)) % p
            f = R[:, c].copy()
            f[r] = 0
            R = (R - f[:, None] * R[r][None, :]) % p
            piv.append(c)
            r += 1
        return R, piv
    add, sub, mul, neg, inv = F.tables
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = mul[inv[R[r, c]], R[r]]
        for j in range(rows):
            if j != r and R[j, c]:
                R[j] = sub[R[j], mul[R[j, c], R[r]]]
        piv.append(c)
        r += 1
    return R, piv


def _nullspace_codes(F: Field, M: np.ndarray) -> np.ndarray:
    """Basis (as rows) of {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    R, piv = _rref_codes(F, M)
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    if F.k == 1:
        p = F.p
        for t, fc in enumerate(free):
            basis[t, fc] = 1
            for r, pc in enumerate(piv):
                basis[t, pc] = (-R[r, fc]) % p
        return basis
    neg = F.tables[3]
    for t, fc in enumerate(free):
        basis[t, fc] = 1
        for r, pc in enumerate(piv):
            basis[t, pc] = neg[R[r, fc]]
    return basis


# ---------------------------------------------------------------------------
# GF(p) helpers on plain integer arrays


def rref(M: np.ndarray, p: int):
    return _rref_codes(make_field(p), M)


def nullspace(M: np.ndarray, p: int) -> np.ndarray:
    return _nullspace_codes(make_field(p), M)


def rank(M: np.ndarray, p: int) -> int:
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def det_mod(M: np.ndarray, p: int) -> int:
    A = np.array(M, dtype=np.int64) % p
    n = A.shape[0]
    det = 1
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if nz.size == 0:
            return 0
        i = c + nz[0]
        if i != c:
            A[[c, i]] = A[[i, c]]
            det = -det
        det = det * int(A[c, c]) % p
        inv = pow(int(A[c, c]), -1, p)
        f = (A[c + 1:, c] * inv) % p
        A[c + 1:] = (A[c + 1:] - f[:, None] * A[c][None, :]) % p
    return det % p


def inverse_mod(M: np.ndarray, p: int) -> np.ndarray:
    n = M.shape[0]
    aug = np.concatenate([np.asarray(M, dtype=np.int64) % p, np.eye(n, dtype=np.int64)], axis=1)
    R, piv = rref(aug, p)
    if piv[:n] != list(range(n)):
        raise MatError("singular matrix")
    return R[:, n:]


@functools.lru_cache(maxsize=None)
def _weights(p: int, d: int) -> np.ndarray:
    return p ** np.arange(d, dtype=np.int64)


def vector_index(v: Sequence[int], p: int) -> int:
    """Base-p positional code: coordinate i is digit i."""
    return int(np.dot(np.asarray(v, dtype=np.int64) % p, _weights(p, len(v))))


def index_vector(i: int, p: int, d: int) -> np.ndarray:
    out = np.zeros(d, dtype=np.int64)
    for c in range(d):
        i, out[c] = divmod(int(i), p)
    return out


@functools.lru_cache(maxsize=16)
def all_vectors(p: int, d: int) -> np.ndarray:
    """Array of shape (p^d, d) whose row i is the vector with index i."""
    idx = np.arange(p**d, dtype=np.int64)
    out = np.empty((p**d, d), dtype=np.int64)
    for c in range(d):
        idx, out[:, c] = np.divmod(idx, p)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------


class Mat:
    """Square matrix over a :class:`Field`, immutable."""

    __slots__ = ("field", "n", "codes", "_hash")

    def __init__(self, field: Field, codes):
        codes = np.array(codes, dtype=np.int64)
        if codes.ndim != 2 or codes.shape[0] != codes.shape[1]:
            raise MatError("matrix must be square")
        if codes.size and (codes.min() < 0 or codes.max() >= field.order):
            raise MatError("entry code out of range")
        codes.setflags(write=False)
        self.field = field
        self.n = codes.shape[0]
        self.codes = codes
        self._hash = None

    @classmethod
    def from_rows(cls, field: Field, rows) -> "Mat":
        def code(x):
            if isinstance(x, FieldElem):
                return field(x).code
            if isinstance(x, (tuple, list)):
                return field(x).code
            return int(x) % field.p if field.k == 1 else field(int(x)).code
        return cls(field, [[code(x) for x in row] for row in rows])

    @property
    def entries(self):
        return [[self.field.from_code(c) for c in row] for row in self.codes]

    def __getitem__(self, ij) -> FieldElem:
        return self.field.from_code(self.codes[ij])

    def _check(self, other):
        if not isinstance(other, Mat):
            raise TypeError("expected Mat")
        if other.field != self.field:
            raise MatError("field mismatch")
        if other.n != self.n:
            raise MatError("dimension mismatch")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.field, _matmul_codes(self.field, self.codes, other.codes))

    __mul__ = __matmul__

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field == other.field
                and np.array_equal(self.codes, other.codes))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.codes.tobytes()))
        return self._hash

    def __repr__(self):
        rows = "; ".join(" ".join(self.field.serialize(self.field.from_code(c)) for c in row)
                         for row in self.codes)
        return f"Mat[{self.field!r}]({rows})"

    def transpose(self) -> "Mat":
        return Mat(self.field, self.codes.T)

    def det(self) -> FieldElem:
        F = self.field
        if F.k == 1:
            return F(det_mod(self.codes, F.p))
        add, sub, mul, neg, inv = F.tables
        A = self.codes.copy()
        n = self.n
        det = 1  # code of one
        for c in range(n):
            nz = np.nonzero(A[c:, c])[0]
            if nz.size == 0:
                return F.zero
            i = c + nz[0]
            if i != c:
                A[[c, i]] = A[[i, c]]
                det = neg[det]
            det = mul[det, A[c, c]]
            ic = inv[A[c, c]]
            for j in range(c + 1, n):
                if A[j, c]:
                    A[j] = sub[A[j], mul[mul[A[j, c], ic], A[c]]]
        return F.from_code(int(det))

    def is_invertible(self) -> bool:
        return not self.det().is_zero()

    def inverse(self) -> "Mat":
        F, n = self.field, self.n
        one = F.one.code
        aug = np.concatenate([self.codes, np.eye(n, dtype=np.int64) * one], axis=1)
        R, piv = _rref_codes(F, aug)
        if piv[:n] != list(range(n)):
            raise MatError("singular matrix")
        return Mat(F, R[:, n:])

    def __pow__(self, e: int) -> "Mat":
        if e < 0:
            return self.inverse() ** (-e)
        result = identity(self.field, self.n)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def is_identity(self) -> bool:
        return self == identity(self.field, self.n)

    def scale(self, c: FieldElem) -> "Mat":
        c = self.field(c)
        if self.field.k == 1:
            return Mat(self.field, (self.codes * c.code) % self.field.p)
        return Mat(self.field, self.field.tables[2][c.code, self.codes])

    def map_entries(self, f) -> "Mat":
        return Mat(self.field, [[f(self.field.from_code(c)).code for c in row] for row in self.codes])

    def prime_array(self) -> np.ndarray:
        """The GF(p) matrix of this map (field descent when k > 1)."""
        return blowup(self).codes


def identity(field: Field, n: int) -> Mat:
    return Mat(field, np.eye(n, dtype=np.int64) * field.one.code)


def mat_ops(A: Mat, B: Mat | None, op: str):
    """Dispatch mul, inverse, det, transpose."""
    if op == "mul":
        return A @ B
    if op == "inverse":
        return A.inverse()
    if op == "det":
        return A.det()
    if op == "transpose":
        return A.transpose()
    raise ValueError(f"unknown operation {op!r}")


def kron(A: Mat, B: Mat) -> Mat:
    if A.field != B.field:
        raise MatError("field mismatch")
    F = A.field
    if F.k == 1:
        return Mat(F, np.kron(A.codes, B.codes) % F.p)
    mul = F.tables[2]
    na, nb = A.n, B.n
    out = mul[A.codes[:, None, :, None], B.codes[None, :, None, :]]
    return Mat(F, out.reshape(na * nb, na * nb))


def tensor_embed(A: Mat, r: int) -> Mat:
    if r < 1:
        raise MatError("multiplicity must be positive")
    return kron(A, identity(A.field, r))


@functools.lru_cache(maxsize=None)
def _mult_blocks(F: Field) -> np.ndarray:
    """blocks[a] = k x k GF(p) matrix of multiplication by the element with code a."""
    k, p = F.k, F.p
    blocks = np.zeros((F.order, k, k), dtype=np.int64)
    basis = [F.from_code(p**j) for j in range(k)]
    for a in range(F.order):
        ea = F.from_code(a)
        for j, xj in enumerate(basis):
            blocks[a, :, j] = (ea * xj).coeffs
    blocks.setflags(write=False)
    return blocks


def regular_matrix(a: FieldElem) -> Mat:
    """k x k matrix over GF(p) of multiplication by a (columns = a * x^j)."""
    F = a.field
    return Mat(make_field(F.p), _mult_blocks(F)[a.code])


def blowup(A: Mat) -> Mat:
    """Field descent GL(n, p^k) -> GL(nk, p)."""
    F = A.field
    P = make_field(F.p)
    if F.k == 1:
        return A if A.field == P else Mat(P, A.codes)
    k, n = F.k, A.n
    blocks = _mult_blocks(F)[A.codes]  # n, n, k, k
    return Mat(P, blocks.transpose(0, 2, 1, 3).reshape(n * k, n * k))


def frobenius_matrix(F: Field) -> Mat:
    """Matrix over GF(p) of a -> a^p on GF(p^k) in the polynomial basis."""
    if F.k < 2:
        raise MatError("Galois group of a prime field is trivial")
    cols = [frobenius(F.from_code(F.p**j)).coeffs for j in range(F.k)]
    return Mat(make_field(F.p), np.array(cols, dtype=np.int64).T)


# ---------------------------------------------------------------------------
# generator files


def write_matgroup(field: Field, n: int, gens: Iterable[Mat], stream=None) -> str:
    buf = io.StringIO()
    buf.write("matgroup v1\n")
    buf.write(f"p={field.p} k={field.k} d={n}\n")
    for g in gens:
        if g.field != field or g.n != n:
            raise MatError("generator does not match header")
        buf.write("gen\n")
        for row in g.codes:
            buf.write(" ".join(field.serialize(field.from_code(c)) for c in row) + "\n")
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def read_matgroup(text: str):
    """Parse matgroup v1 text into (field, n, generators)."""
    lines = text.splitlines()
    if not lines or lines[0] != "matgroup v1":
        raise MatgroupFormatError("missing 'matgroup v1' header")
    if len(lines) < 2:
        raise MatgroupFormatError("missing parameter line")
    parts = lines[1].split(" ")
    if len(parts) != 3 or [x.split("=")[0] for x in parts] != ["p", "k", "d"]:
        raise MatgroupFormatError(f"bad parameter line {lines[1]!r}")
    try:
        p, k, n = (int(x.split("=", 1)[1]) for x in parts)
    except ValueError:
        raise MatgroupFormatError(f"bad parameter line {lines[1]!r}") from None
    if n < 1:
        raise MatgroupFormatError("dimension must be positive")
    try:
        field = make_field(p, k)
    except FieldError as exc:
        raise MatgroupFormatError(str(exc)) from None
    gens = []
    i = 2
    while i < len(lines):
        if lines[i] != "gen":
            raise MatgroupFormatError(f"line {i + 1}: expected 'gen'")
        if i + n >= len(lines):
            raise MatgroupFormatError("truncated generator")
        rows = []
        for r in range(n):
            entries = lines[i + 1 + r].split()
            if len(entries) != n:
                raise MatgroupFormatError(f"line {i + 2 + r}: expected {n} entries")
            try:
                rows.append([field.parse(e).code for e in entries])
            except FieldError as exc:
                raise MatgroupFormatError(f"line {i + 2 + r}: {exc}") from None
        g = Mat(field, rows)
        if not g.is_invertible():
            raise MatgroupFormatError(f"generator {len(gens) + 1} is singular")
        gens.append(g)
        i += n + 1
    return field, n, gens


def intertwiner_space(F: Field, As: Sequence[Mat], Bs: Sequence[Mat]) -> list[Mat]:
    """Basis over F of {X : X A_i = B_i X for all i} (square, same size)."""
    n = As[0].n
    add, sub, mul, neg, inv = F.tables
    rows = []
    for A, B in zip(As, Bs):
        a, b = A.codes, B.codes
        for i in range(n):
            for j in range(n):
                eq = np.zeros(n * n, dtype=np.int64)
                for l in range(n):
                    u = i * n + l          # X[i,l] * A[l,j]
                    eq[u] = add[eq[u], a[l, j]]
                    v = l * n + j          # - B[i,l] * X[l,j]
                    eq[v] = add[eq[v], neg[b[i, l]]]
                rows.append(eq)
    if not rows:
        raise MatError("need at least one pair")
    basis = _nullspace_codes(F, np.array(rows))
    return [Mat(F, v.reshape(n, n)) for v in basis]
