"""Word-level linear algebra over F2 and the small fields GF(4), GF(8).

Vectors are Python ints: bit i is coordinate i.  In the symplectic space of
dimension 2n the coordinates are ordered e1, f1, ..., en, fn, so bit 2(i-1)
is e_i and bit 2(i-1)+1 is f_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_N = 6


class ParameterError(ValueError):
    """Raised when an operation is called with inputs outside its domain."""


def check_half_dim(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ParameterError(f"n={n} outside supported range 1..{MAX_N}")


def e(i: int) -> int:
    """Basis vector e_i, 1-based."""
    return 1 << (2 * (i - 1))


def f(i: int) -> int:
    """Basis vector f_i, 1-based."""
    return 1 << (2 * (i - 1) + 1)


def bits_of(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


# ---------------------------------------------------------------- subspaces


def _reduce(rows: Iterable[int]) -> list[int]:
    """Echelon basis keyed by highest set bit, fully reduced, ascending."""
    piv: dict[int, int] = {}
    for r in rows:
        while r:
            p = r.bit_length() - 1
            if p in piv:
                r ^= piv[p]
            else:
                piv[p] = r
                break
    # back-substitute so each pivot column is clear in every other row
    order = sorted(piv)
    for i, p in enumerate(order):
        row = piv[p]
        for q in reversed(order[:i]):
            if (row >> q) & 1:
                row ^= piv[q]
        piv[p] = row
    return [piv[p] for p in order]


@dataclass(frozen=True, slots=True)
class Subspace:
    """A subspace of F2^n2 held by its canonical reduced echelon basis.

    Each row's highest set bit is its pivot; pivots ascend with the rows and
    every pivot bit is clear in all other rows.  Two subspaces are equal
    exactly when their ``rows`` tuples are equal.
    """

    rows: tuple[int, ...]
    n2: int

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(r.bit_length() - 1 for r in self.rows)

    def __contains__(self, v: int) -> bool:
        for r in reversed(self.rows):
            if (v >> (r.bit_length() - 1)) & 1:
                v ^= r
        return v == 0

    def elements(self) -> list[int]:
        return span(self.rows)

    def to_json(self) -> list[int]:
        return list(self.rows)


def rref(rows: Iterable[int], n2: int) -> Subspace:
    """Canonical basis of the row space of ``rows`` inside F2^n2."""
    rows = list(rows)
    if any(r >> n2 for r in rows):
        raise ParameterError("row has bits beyond the ambient dimension")
    return Subspace(tuple(_reduce(rows)), n2)


def rank(rows: Iterable[int]) -> int:
    return len(_reduce(rows))


def span(rows: Sequence[int]) -> list[int]:
    """All combinations of ``rows``; entry j sums the rows picked by the bits of j."""
    out = [0]
    for r in rows:
        out += [x ^ r for x in out]
    return out


def enumerate_subspaces(n2: int, d: int) -> Iterator[Subspace]:
    """Yield every d-dimensional subspace of F2^n2 once.

    Order is lexicographic on the ascending tuple of echelon rows.  Restart
    from a position with ``itertools.islice``; the stream is deterministic.
    """
    if not 0 <= d <= n2:
        raise ParameterError(f"dimension {d} outside 0..{n2}")

    rows: list[int] = []

    def rec(i: int, lo: int, used: int) -> Iterator[Subspace]:
        if i == d:
            yield Subspace(tuple(rows), n2)
            return
        for p in range(lo, n2 - (d - i) + 1):
            free = ((1 << p) - 1) & ~used
            top = 1 << p
            s = 0
            while True:
                rows.append(top | s)
                yield from rec(i + 1, p + 1, used | top)
                rows.pop()
                s = (s - free) & free
                if s == 0:
                    break

    yield from rec(0, 0, 0)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if q < 2:
        raise ParameterError("q must be at least 2")
    if not 0 <= k <= n:
        raise ParameterError(f"k={k} outside 0..{n}")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# ----------------------------------------------------------------- matrices
# A square matrix is a tuple of row ints; row i is the image of basis vector i
# and vectors act on the left: v -> v g.


def identity(n2: int) -> tuple[int, ...]:
    return tuple(1 << i for i in range(n2))


def vec_mat(v: int, g: Sequence[int]) -> int:
    out = 0
    while v:
        low = v & -v
        out ^= g[low.bit_length() - 1]
        v ^= low
    return out


def mat_mul(g: Sequence[int], h: Sequence[int]) -> tuple[int, ...]:
    return tuple(vec_mat(r, h) for r in g)


def transpose(g: Sequence[int], ncols: int | None = None) -> tuple[int, ...]:
    ncols = len(g) if ncols is None else ncols
    return tuple(
        sum(((r >> j) & 1) << i for i, r in enumerate(g)) for j in range(ncols)
    )


def mat_inv(g: Sequence[int]) -> tuple[int, ...]:
    n2 = len(g)
    work = [(r, 1 << i) for i, r in enumerate(g)]
    for col in range(n2):
        piv = next((k for k in range(col, n2) if (work[k][0] >> col) & 1), None)
        if piv is None:
            raise ParameterError("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        pr, pa = work[col]
        for k in range(n2):
            if k != col and (work[k][0] >> col) & 1:
                work[k] = (work[k][0] ^ pr, work[k][1] ^ pa)
    return tuple(a for _, a in work)


def nullspace(rows: Sequence[int], n2: int) -> list[int]:
    """Basis of {x in F2^n2 : popcount(r & x) even for every r in rows}."""
    red = _reduce(rows)
    pivots = {r.bit_length() - 1: r for r in red}
    out = []
    for j in range(n2):
        if j in pivots:
            continue
        x = 1 << j
        for p, r in pivots.items():
            if (r >> j) & 1:
                x |= 1 << p
        out.append(x)
    return out


def solve(rows: Sequence[int], rhs: Sequence[int]) -> int:
    """Return x with popcount(rows[i] & x) % 2 == rhs[i] for every i.

    ``rows`` must be linearly independent; the solution is then unique once
    the system is square and an arbitrary particular solution otherwise.
    """
    eqs = [(r, b & 1) for r, b in zip(rows, rhs)]
    pivots: list[tuple[int, int, int]] = []
    for r, b in eqs:
        for p, pr, pb in pivots:
            if (r >> p) & 1:
                r ^= pr
                b ^= pb
        if r == 0:
            if b:
                raise ParameterError("inconsistent linear system")
            continue
        p = r.bit_length() - 1
        pivots = [
            (q, qr ^ r, qb ^ b) if (qr >> p) & 1 else (q, qr, qb)
            for q, qr, qb in pivots
        ]
        pivots.append((p, r, b))
    x = 0
    for p, _, b in pivots:
        if b:
            x |= 1 << p
    return x


# ------------------------------------------------------------ GF(2^b) fields

FIELD_POLY = {2: 0b111, 3: 0b1011}


def _check_b(b: int) -> None:
    if b not in FIELD_POLY:
        raise ParameterError(f"extension degree {b} unsupported (use 2 or 3)")


def gf_mul(x: int, y: int, b: int) -> int:
    poly = FIELD_POLY[b]
    out = 0
    while y:
        if y & 1:
            out ^= x
        y >>= 1
        x <<= 1
        if x >> b:
            x ^= poly
    return out


def gf_pow(x: int, k: int, b: int) -> int:
    out = 1
    while k:
        if k & 1:
            out = gf_mul(out, x, b)
        x = gf_mul(x, x, b)
        k >>= 1
    return out


def gf_inv(x: int, b: int) -> int:
    if x == 0:
        raise ZeroDivisionError("zero has no inverse")
    return gf_pow(x, (1 << b) - 2, b)


def gf_trace(x: int, b: int) -> int:
    t, y = 0, x
    for _ in range(b):
        t ^= y
        y = gf_mul(y, y, b)
    # the trace lands in the prime field
    return t


@dataclass(frozen=True, slots=True)
class FieldElem:
    """An element of GF(2^b) as a polynomial in alpha, bit j = alpha^j."""

    value: int
    b: int

    def __post_init__(self) -> None:
        _check_b(self.b)
        if not 0 <= self.value < (1 << self.b):
            raise ParameterError(f"{self.value} is not an element of GF(2^{self.b})")

    def _same(self, other: FieldElem) -> None:
        if self.b != other.b:
            raise ParameterError("field elements from different extensions")

    def __add__(self, other: FieldElem) -> FieldElem:
        self._same(other)
        return FieldElem(self.value ^ other.value, self.b)

    def __mul__(self, other: FieldElem) -> FieldElem:
        return field_mul(self, other)


def field_mul(a: FieldElem, c: FieldElem) -> FieldElem:
    a._same(c)
    return FieldElem(gf_mul(a.value, c.value, a.b), a.b)


def field_trace(a: FieldElem) -> int:
    return gf_trace(a.value, a.b)


def frobenius_class(a: FieldElem) -> frozenset[FieldElem]:
    out = set()
    x = a.value
    for _ in range(a.b):
        out.add(FieldElem(x, a.b))
        x = gf_mul(x, x, a.b)
    return frozenset(out)


def field_elements(b: int) -> list[FieldElem]:
    _check_b(b)
    return [FieldElem(v, b) for v in range(1 << b)]
