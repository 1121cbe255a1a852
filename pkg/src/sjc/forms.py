"""The symplectic space F2^{2n} and the quadratic forms polarising to it.

Every such form is phi_c(v) = q(v) + B(v, c) with q(x) = sum x_i y_i, so a
form is stored as its translation vector c.  Types are the integers +1 and -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf2 import (
    ParameterError,
    Subspace,
    check_half_dim,
    e,
    f,
    gf_mul,
    gf_trace,
    nullspace,
    rank,
    rref,
    solve,
)

EVEN = 0x555  # e-coordinates of a 12-bit vector


def swap_pairs(x: int) -> int:
    """Exchange each e_i coordinate with its f_i partner."""
    return ((x & EVEN) << 1) | ((x >> 1) & EVEN)


def bform(x: int, y: int) -> int:
    """The symplectic form B(x, y) = sum x_i y'_i + y_i x'_i."""
    return (x & swap_pairs(y)).bit_count() & 1


def q_plus(x: int) -> int:
    """The base form of plus type, sum x_i y_i."""
    return (x & (x >> 1) & EVEN).bit_count() & 1


def eps_str(eps: int) -> str:
    return "+" if eps > 0 else "-"


def parse_eps(s: str | int) -> int:
    if s in ("+", "+1", 1, "plus"):
        return 1
    if s in ("-", "-1", -1, "minus"):
        return -1
    raise ParameterError(f"unrecognised type {s!r}; use + or -")


@dataclass(frozen=True, slots=True)
class SympSpace:
    n: int

    def __post_init__(self) -> None:
        check_half_dim(self.n)

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def gram(self) -> tuple[int, ...]:
        return tuple(swap_pairs(1 << i) for i in range(2 * self.n))


@dataclass(frozen=True, slots=True)
class QuadraticForm:
    """phi_c on F2^{2n}, identified by the translation vector ``c``."""

    n: int
    c: int

    def __post_init__(self) -> None:
        check_half_dim(self.n)
        if self.c >> (2 * self.n):
            raise ParameterError("translation vector exceeds the ambient dimension")

    def __call__(self, x: int) -> int:
        return q_plus(x) ^ bform(x, self.c)

    @property
    def eps(self) -> int:
        return form_type(self)


def base_form(eps: int, n: int) -> QuadraticForm:
    return QuadraticForm(n, 0 if eps > 0 else e(n) | f(n))


def evaluate(phi: QuadraticForm, x: int) -> int:
    return q_plus(x) ^ bform(x, phi.c)


def form_type(phi: QuadraticForm) -> int:
    return -1 if q_plus(phi.c) else 1


def translation(phi: QuadraticForm, psi: QuadraticForm) -> int:
    if phi.n != psi.n:
        raise ParameterError("forms live on different spaces")
    return phi.c ^ psi.c


def singular_count(n: int, eps: int) -> int:
    """Number of singular vectors (zero included) of a type-eps form."""
    return 2 ** (n - 1) * (2**n + eps)


@lru_cache(maxsize=None)
def _parity(n2: int) -> np.ndarray:
    v = np.arange(1 << n2, dtype=np.int64)
    out = np.zeros(1 << n2, dtype=np.uint8)
    while v.any():
        out ^= (v & 1).astype(np.uint8)
        v >>= 1
    return out


def value_table(phi: QuadraticForm) -> np.ndarray:
    """phi evaluated at every vector of F2^{2n}, indexed by the vector."""
    n2 = 2 * phi.n
    v = np.arange(1 << n2, dtype=np.int64)
    par = _parity(n2)
    return par[v & (v >> 1) & EVEN] ^ par[v & swap_pairs(phi.c)]


def polarisation_check(phi: QuadraticForm) -> bool:
    """Exhaustively test phi(u+v) + phi(u) + phi(v) == B(u, v)."""
    n2 = 2 * phi.n
    vals = value_table(phi)
    par = _parity(n2)
    vs = np.arange(1 << n2, dtype=np.int64)
    for u in range(1 << n2):
        lhs = vals[vs ^ u] ^ vals[u] ^ vals
        if not np.array_equal(lhs, par[vs & swap_pairs(u)]):
            return False
    return True


def singular_set(phi: QuadraticForm) -> frozenset[int]:
    return frozenset(np.flatnonzero(value_table(phi) == 0).tolist())


# ------------------------------------------------------------------ indexing


@dataclass(frozen=True)
class FormIndex:
    """The forms of one type, listed by ascending translation vector."""

    n: int
    eps: int
    order: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_pos", {c: i for i, c in enumerate(self.order)})

    def __len__(self) -> int:
        return len(self.order)

    def __contains__(self, c: int) -> bool:
        return c in self._pos  # type: ignore[attr-defined]

    def position(self, c: int) -> int:
        return self._pos[c]  # type: ignore[attr-defined]

    @property
    def full(self) -> int:
        return (1 << len(self.order)) - 1

    def to_json(self) -> dict:
        return {"n": self.n, "eps": eps_str(self.eps), "order": list(self.order)}


@lru_cache(maxsize=None)
def form_index(n: int, eps: int) -> FormIndex:
    check_half_dim(n)
    want = 0 if eps > 0 else 1
    return FormIndex(n, eps, tuple(c for c in range(1 << (2 * n)) if q_plus(c) == want))


# --------------------------------------------------------------- subspaces


def gram_rank(rows: tuple[int, ...] | list[int]) -> int:
    return rank(
        sum(bform(a, b) << j for j, b in enumerate(rows)) for a in rows
    )


def is_nondegenerate(u: Subspace) -> bool:
    return gram_rank(u.rows) == u.dim


def is_totally_isotropic(u: Subspace) -> bool:
    rows = u.rows
    return all(bform(a, b) == 0 for i, a in enumerate(rows) for b in rows[i + 1 :])


def perp(u: Subspace) -> Subspace:
    return rref(nullspace([swap_pairs(r) for r in u.rows], u.n2), u.n2)


def hyperbolic_pairs(rows) -> list[tuple[int, int]] | None:
    """Pairs (a_i, b_i) with B(a_i, b_i) = 1 spanning ``rows``, mutually orthogonal.

    Returns None when the span is degenerate.
    """
    vs = list(rows)
    pairs = []
    while vs:
        a = vs.pop()
        sa = swap_pairs(a)
        for j, v in enumerate(vs):
            if (v & sa).bit_count() & 1:
                b = vs.pop(j)
                break
        else:
            return None
        sb = swap_pairs(b)
        out = []
        for v in vs:
            if (v & sb).bit_count() & 1:
                v ^= a
                if (v & sa).bit_count() & 1:
                    v ^= b
            elif (v & sa).bit_count() & 1:
                v ^= b
            out.append(v)
        vs = out
        pairs.append((a, b))
    return pairs


def symplectic_basis(rows) -> list[tuple[int, int]]:
    """Hyperbolic pairs spanning ``rows``; ParameterError if degenerate."""
    pairs = hyperbolic_pairs(rows)
    if pairs is None:
        raise ParameterError("subspace is degenerate")
    return pairs


def _check_nondeg_even(u: Subspace) -> None:
    if u.dim % 2 or not is_nondegenerate(u):
        raise ParameterError("restriction needs a nondegenerate even-dimensional subspace")


def restrict_type(phi: QuadraticForm, u: Subspace) -> int:
    """Type of phi on u, decided by counting singular vectors of u."""
    _check_nondeg_even(u)
    m = u.dim // 2
    zeros = sum(1 for x in u.elements() if evaluate(phi, x) == 0)
    if zeros == singular_count(m, 1):
        return 1
    if zeros == singular_count(m, -1):
        return -1
    raise AssertionError(f"{zeros} singular vectors fits neither type")


def arf_type(phi: QuadraticForm, u: Subspace) -> int:
    """Type of phi on u from sum phi(a_i) phi(b_i) over a hyperbolic basis."""
    _check_nondeg_even(u)
    arf = 0
    for a, b in symplectic_basis(u.rows):
        arf ^= evaluate(phi, a) & evaluate(phi, b)
    return -1 if arf else 1


def sing_intersection_dim(phi: QuadraticForm, u: Subspace) -> int:
    if not is_totally_isotropic(u):
        raise ParameterError("subspace is not totally isotropic")
    # phi is additive on a totally isotropic subspace
    if all(evaluate(phi, r) == 0 for r in u.rows):
        return u.dim
    return u.dim - 1


@dataclass(frozen=True, slots=True)
class RestrictedForm:
    """A form on the subspace ``u``, given by its values on ``u.rows``.

    Together with B this fixes the form on all of u.
    """

    u: Subspace
    values: tuple[int, ...]

    def __call__(self, x: int) -> int:
        rows = self.u.rows
        used = []
        for idx in reversed(range(len(rows))):
            r = rows[idx]
            if (x >> (r.bit_length() - 1)) & 1:
                x ^= r
                used.append(idx)
        if x:
            raise ParameterError("vector outside the subspace")
        val = 0
        for i, a in enumerate(used):
            val ^= self.values[a]
            for c in used[i + 1 :]:
                val ^= bform(rows[a], rows[c])
        return val

    @property
    def eps(self) -> int:
        _check_nondeg_even(self.u)
        m = self.u.dim // 2
        zeros = sum(1 for x in self.u.elements() if self(x) == 0)
        return 1 if zeros == singular_count(m, 1) else -1


def restrict(phi: QuadraticForm, u: Subspace) -> RestrictedForm:
    return RestrictedForm(u, tuple(evaluate(phi, r) for r in u.rows))


def direct_sum(phi_u: RestrictedForm, phi_w: RestrictedForm) -> QuadraticForm:
    """The unique form on V restricting to ``phi_u`` and ``phi_w``."""
    u, w = phi_u.u, phi_w.u
    n2 = u.n2
    if w.n2 != n2 or n2 % 2:
        raise ParameterError("restricted forms live in different spaces")
    if any(bform(a, b) for a in u.rows for b in w.rows):
        raise ParameterError("subspaces are not orthogonal")
    basis = list(u.rows) + list(w.rows)
    if rank(basis) != n2:
        raise ParameterError("subspaces do not span the whole space")
    if not (is_nondegenerate(u) and is_nondegenerate(w)):
        raise ParameterError("summands must be nondegenerate")
    targets = list(phi_u.values) + list(phi_w.values)
    # phi_c(a) = q(a) + B(a, c), and B(a, c) = popcount(swap(a) & c)
    c = solve([swap_pairs(a) for a in basis], [t ^ q_plus(a) for a, t in zip(basis, targets)])
    return QuadraticForm(n2 // 2, c)


# ---------------------------------------------------- trace reduction


@dataclass(frozen=True, slots=True)
class ExtQuadraticForm:
    """Phi_c = Phi_0^eps + Btilde(., c)^2 on GF(2^b)^{2m}.

    Vectors over GF(2^b) are tuples (x1, y1, ..., xm, ym) of field ints.
    """

    m: int
    b: int
    eps: int
    c: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.c) != 2 * self.m:
            raise ParameterError("translation vector has the wrong length")
        check_half_dim(self.m * self.b)

    def __call__(self, x: tuple[int, ...]) -> int:
        return ext_evaluate(self, x)


def zeta(b: int) -> int:
    """Fixed trace-one element: alpha in GF(4), 1 in GF(8)."""
    return 0b10 if b == 2 else 1


def ext_bform(x: tuple[int, ...], y: tuple[int, ...], b: int) -> int:
    out = 0
    for i in range(0, len(x), 2):
        out ^= gf_mul(x[i], y[i + 1], b) ^ gf_mul(x[i + 1], y[i], b)
    return out


def ext_base_value(x: tuple[int, ...], b: int, eps: int) -> int:
    out = 0
    for i in range(0, len(x), 2):
        out ^= gf_mul(x[i], x[i + 1], b)
    if eps < 0:
        xm, ym = x[-2], x[-1]
        out ^= gf_mul(xm, xm, b) ^ gf_mul(gf_mul(ym, ym, b), zeta(b), b)
    return out


def ext_evaluate(phi: ExtQuadraticForm, x: tuple[int, ...]) -> int:
    t = ext_bform(x, phi.c, phi.b)
    return ext_base_value(x, phi.b, phi.eps) ^ gf_mul(t, t, phi.b)


def ext_vectors(m: int, b: int):
    q = 1 << b
    for k in range(q ** (2 * m)):
        out = []
        for _ in range(2 * m):
            out.append(k % q)
            k //= q
        yield tuple(out)


def ext_form_type(phi: ExtQuadraticForm) -> int:
    """Type decided by counting singular vectors over GF(q)."""
    q = 1 << phi.b
    m = phi.m
    zeros = sum(1 for x in ext_vectors(m, phi.b) if ext_evaluate(phi, x) == 0)
    plus = q ** (2 * m - 1) + (q - 1) * q ** (m - 1)
    minus = q ** (2 * m - 1) - (q - 1) * q ** (m - 1)
    if zeros == plus:
        return 1
    if zeros == minus:
        return -1
    raise AssertionError("singular count fits neither type")


@lru_cache(maxsize=None)
def dual_basis(b: int) -> tuple[int, ...]:
    """Trace-dual of the polynomial basis 1, alpha, ..., alpha^(b-1)."""
    out = []
    for j in range(b):
        for z in range(1 << b):
            if all(gf_trace(gf_mul(1 << i, z, b), b) == (i == j) for i in range(b)):
                out.append(z)
                break
    return tuple(out)


def to_ext(v: int, m: int, b: int) -> tuple[int, ...]:
    """F2 coordinates to GF(2^b) coordinates.

    F2 basis vector 2k is alpha^j e_i and 2k+1 is alpha*_j f_i with
    k = (i-1) b + j and alpha*_j the trace-dual basis, so B = Tr(Btilde)
    keeps the standard symplectic Gram matrix.
    """
    dual = dual_basis(b)
    out = [0] * (2 * m)
    for k in range(m * b):
        i, j = divmod(k, b)
        if (v >> (2 * k)) & 1:
            out[2 * i] ^= 1 << j
        if (v >> (2 * k + 1)) & 1:
            out[2 * i + 1] ^= dual[j]
    return tuple(out)


def from_ext(x: tuple[int, ...], b: int) -> int:
    dual = dual_basis(b)
    m = len(x) // 2
    v = 0
    for k in range(m * b):
        i, j = divmod(k, b)
        if gf_trace(gf_mul(x[2 * i], dual[j], b), b):
            v |= 1 << (2 * k)
        if gf_trace(gf_mul(x[2 * i + 1], 1 << j, b), b):
            v |= 1 << (2 * k + 1)
    return v


def trace_reduce(phi: ExtQuadraticForm) -> QuadraticForm:
    """Tr(Phi(.)) re-expressed as phi_c on F2^{2mb}."""
    m, b = phi.m, phi.b
    n = m * b
    c = 0
    for k in range(2 * n):
        v = 1 << k
        lin = gf_trace(ext_evaluate(phi, to_ext(v, m, b)), b) ^ q_plus(v)
        if lin:
            # B(e_k, c) reads the f_k coordinate of c and vice versa
            c |= 1 << (k ^ 1)
    return QuadraticForm(n, c)
