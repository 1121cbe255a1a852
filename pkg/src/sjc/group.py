"""Symplectic matrices over F2, their actions, and stabiliser generators.

A matrix is a tuple of 2n row ints; row i is the image of basis vector i and
vectors act on the left, v -> v g.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .forms import (
    FormIndex,
    QuadraticForm,
    bform,
    evaluate,
    is_nondegenerate,
    is_totally_isotropic,
    perp,
    q_plus,
    swap_pairs,
    symplectic_basis,
)
from .gf2 import (
    ParameterError,
    Subspace,
    check_half_dim,
    identity,
    mat_inv,
    mat_mul,
    rref,
    solve,
    vec_mat,
)

SympMatrix = tuple[int, ...]

PRIMITIVE_POLY = {
    # t^d = sum of the listed powers
    1: (0,),
    2: (0, 1),
    3: (0, 1),
    4: (0, 1),
    5: (0, 2),
    6: (0, 1),
}


def symplectic_order(m: int) -> int:
    """|Sp_{2m}(2)|."""
    out = 2 ** (m * m)
    for i in range(1, m + 1):
        out *= 4**i - 1
    return out


def gl_order(d: int) -> int:
    out = 1
    for i in range(d):
        out *= 2**d - 2**i
    return out


def is_symplectic(g: Sequence[int]) -> bool:
    n2 = len(g)
    if n2 % 2:
        return False
    for i in range(n2):
        for j in range(i + 1, n2):
            if bform(g[i], g[j]) != (1 if j == i ^ 1 else 0):
                return False
    return True


def _check(g: Sequence[int]) -> None:
    if not is_symplectic(g):
        raise ParameterError("matrix is not symplectic")


def transvection(c: int, n: int) -> SympMatrix:
    """v -> v + B(v, c) c."""
    if c == 0:
        raise ParameterError("transvection needs a nonzero vector")
    sc = swap_pairs(c)
    return tuple((1 << i) ^ (c if (sc >> i) & 1 else 0) for i in range(2 * n))


def act_on_form(g: Sequence[int], phi: QuadraticForm) -> QuadraticForm:
    """phi^g, where phi^g(x) = phi(x g^-1).

    v -> phi(v g^-1) + q(v) is linear, so its dual vector under B is read off
    the basis: B(e_k, a) is the f_k coordinate of a and vice versa.
    """
    _check(g)
    ginv = mat_inv(g)
    a = 0
    for k in range(2 * phi.n):
        v = 1 << k
        if evaluate(phi, vec_mat(v, ginv)) ^ q_plus(v):
            a |= 1 << (k ^ 1)
    return QuadraticForm(phi.n, a)


def form_shift(g: Sequence[int]) -> int:
    """The vector d with (phi_c)^g = phi_{cg + d} for every c."""
    return act_on_form(g, QuadraticForm(len(g) // 2, 0)).c


def form_permutation(g: Sequence[int], index: FormIndex) -> list[int]:
    """Positions in ``index`` after acting by g."""
    d = form_shift(g)
    return [index.position(vec_mat(c, g) ^ d) for c in index.order]


# ---------------------------------------------------------- generator sets


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    gens: tuple[SympMatrix, ...]
    label: str
    # how many leading generators lie in the unipotent radical (ti only)
    radical: int = 0
    expected_order: int | None = None

    def __iter__(self):
        return iter(self.gens)

    def __len__(self) -> int:
        return len(self.gens)


def nondeg_stabiliser_gens(u: Subspace) -> GeneratorSet:
    if u.dim % 2 or not is_nondegenerate(u):
        raise ParameterError("subspace is degenerate")
    n = u.n2 // 2
    w = perp(u)
    gens = [transvection(v, n) for v in u.elements()[1:]]
    gens += [transvection(v, n) for v in w.elements()[1:]]
    m = u.dim // 2
    return GeneratorSet(
        n, tuple(gens), "nondeg-stab",
        expected_order=symplectic_order(m) * symplectic_order(n - m),
    )


def basis_permutation(n: int, d: int) -> SympMatrix:
    """Rows are the canonical vectors e1..ed, e_{d+1}, f_{d+1}, ..., en, fn, f1..fd.

    A coordinate row y in this ordering is the canonical vector y P.
    """
    rows = [1 << (2 * i) for i in range(d)]
    rows += [1 << k for k in range(2 * d, 2 * n)]
    rows += [1 << (2 * i + 1) for i in range(d)]
    return tuple(rows)


def from_block_basis(g: Sequence[int], n: int, d: int) -> SympMatrix:
    """Convert a matrix written in the block ordering to canonical coordinates."""
    p = basis_permutation(n, d)
    return mat_mul(mat_mul(mat_inv(p), g), p)


def adapted_basis(u: Subspace) -> SympMatrix:
    """A symplectic matrix M with <e1, ..., ed> M = u."""
    if not is_totally_isotropic(u):
        raise ParameterError("subspace is not totally isotropic")
    n = u.n2 // 2
    us = list(u.rows)
    vs: list[int] = []
    for i in range(len(us)):
        eqs = [swap_pairs(x) for x in us] + [swap_pairs(x) for x in vs]
        rhs = [1 if j == i else 0 for j in range(len(us))] + [0] * len(vs)
        vs.append(solve(eqs, rhs))
    w = perp(rref(us + vs, u.n2))
    pairs = symplectic_basis(w.rows)
    rows = []
    for a, b in zip(us, vs):
        rows += [a, b]
    for a, b in pairs:
        rows += [a, b]
    m = tuple(rows)
    assert is_symplectic(m)
    return m


def _conjugate(gens: Iterable[Sequence[int]], m: Sequence[int]) -> list[SympMatrix]:
    minv = mat_inv(m)
    return [mat_mul(mat_mul(minv, g), m) for g in gens]


def _gl_gens(d: int) -> list[tuple[int, ...]]:
    if d < 2:
        return []
    elem = list(1 << i for i in range(d))
    elem[0] |= 1 << 1
    cycle = tuple(1 << ((i + 1) % d) for i in range(d))
    return [tuple(elem), cycle]


def _levi(n: int, d: int, p: Sequence[int], nmat: Sequence[int]) -> SympMatrix:
    """diag(P^{-T}, N, P) in the block ordering."""
    w2 = 2 * (n - d)
    pit = _transpose_sq(mat_inv(p), d)
    rows = list(pit)
    rows += [r << d for r in nmat]
    rows += [r << (d + w2) for r in p]
    return tuple(rows)


def _transpose_sq(g: Sequence[int], d: int) -> tuple[int, ...]:
    return tuple(sum(((g[i] >> j) & 1) << i for i in range(d)) for j in range(d))


def _radical(n: int, d: int, qmat: Sequence[int], z: Sequence[int]) -> SympMatrix:
    """[[I,0,0],[J Z^T, I, 0],[Q, Z, I]] in the block ordering.

    ``qmat`` rows are d-bit, ``z`` rows are 2(n-d)-bit.
    """
    w2 = 2 * (n - d)
    rows = [1 << i for i in range(d)]
    for j in range(w2):
        # (J Z^T)_{j,i} = Z_{i, j^1}
        extra = sum(((z[i] >> (j ^ 1)) & 1) << i for i in range(d))
        rows.append((1 << (d + j)) | extra)
    for i in range(d):
        rows.append((1 << (d + w2 + i)) | qmat[i] | (z[i] << d))
    return tuple(rows)


def ti_stabiliser_gens(u: Subspace) -> GeneratorSet:
    """Generators of the stabiliser of a totally isotropic subspace.

    Unipotent radical: symmetric elementary Q with Z = 0, and single-entry Z
    with Q = 0.  Levi factor: two generators of GL_d(2) acting as
    (P^{-T}, I, P) and all transvections of the complement W.
    """
    m = adapted_basis(u)
    n, d = u.n2 // 2, u.dim
    w2 = 2 * (n - d)
    zero_z = [0] * d
    zero_q = [0] * d
    radical = []
    for i in range(d):
        for j in range(i, d):
            q = [0] * d
            q[i] |= 1 << j
            q[j] |= 1 << i
            radical.append(_radical(n, d, q, zero_z))
    for i in range(d):
        for j in range(w2):
            z = [0] * d
            z[i] = 1 << j
            radical.append(_radical(n, d, zero_q, z))
    eye_d = identity(d)
    eye_w = identity(w2)
    levi = [_levi(n, d, p, eye_w) for p in _gl_gens(d)]
    levi += [_levi(n, d, eye_d, transvection(c, n - d)) for c in range(1, 1 << w2)]
    gens = [from_block_basis(g, n, d) for g in radical + levi]
    gens = _conjugate(gens, m)
    order = 2 ** (d * (d + 1) // 2 + 2 * d * (n - d)) * gl_order(d) * symplectic_order(n - d)
    return GeneratorSet(n, tuple(gens), "ti-stab", radical=len(radical), expected_order=order)


def companion(d: int) -> tuple[int, ...]:
    """Matrix of multiplication by a root of the fixed primitive polynomial."""
    rows = [1 << (i + 1) for i in range(d - 1)]
    rows.append(sum(1 << k for k in PRIMITIVE_POLY[d]))
    return tuple(rows)


def singer_element(d: int, n: int) -> SympMatrix:
    """diag(rho^{-T}, I, rho) in the block ordering, returned canonically."""
    check_half_dim(n)
    if not 1 <= d <= n:
        raise ParameterError(f"need 1 <= d <= n, got d={d}")
    rho = companion(d)
    return from_block_basis(_levi(n, d, rho, identity(2 * (n - d))), n, d)


def gram_quadratic_K(eps: int, n: int, d: int) -> SympMatrix:
    """Upper-triangular K with x K x^T equal to the base form of type eps.

    Coordinates are in the block ordering of ``basis_permutation(n, d)``.
    """
    if not 1 <= d <= n:
        raise ParameterError(f"need 1 <= d <= n, got d={d}")
    if eps < 0 and d == n:
        raise ParameterError("minus type needs a nonzero complement (d < n)")
    w2 = 2 * (n - d)
    rows = [1 << (d + w2 + i) for i in range(d)]
    for j in range(w2):
        rows.append(1 << (d + j + 1) if j % 2 == 0 else 0)
    if eps < 0:
        rows[d + w2 - 2] |= 1 << (d + w2 - 2)
        rows[d + w2 - 1] |= 1 << (d + w2 - 1)
    rows += [0] * d
    return tuple(rows)


def quadratic_value(k: Sequence[int], x: int) -> int:
    """x K x^T over F2."""
    return (vec_mat(x, k) & x).bit_count() & 1


# -------------------------------------------------------------- group orders


def closure(gens: Sequence[Sequence[int]], limit: int | None = None) -> set[SympMatrix]:
    """All products of the generators (a finite group, so inverses are free)."""
    if not gens:
        return set()
    n2 = len(gens[0])
    tables = []
    for s in gens:
        t = [0] * (1 << n2)
        for v in range(1, 1 << n2):
            low = v & -v
            t[v] = t[v ^ low] ^ s[low.bit_length() - 1]
        tables.append(t)
    start = identity(n2)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for g in frontier:
            for t in tables:
                h = tuple([t[r] for r in g])
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if limit is not None and len(seen) > limit:
                        return seen
        frontier = nxt
    return seen


def closure_order(gens: GeneratorSet | Sequence[Sequence[int]], limit: int | None = None) -> int:
    gs = list(gens)
    if not gs:
        return 1
    return len(closure(gs, limit))


def sp4_elements() -> list[SympMatrix]:
    """All of Sp_4(2), found by filtering 4x4 matrices through the Gram test."""
    out = []

    def rec(rows: list[int]) -> None:
        i = len(rows)
        if i == 4:
            out.append(tuple(rows))
            return
        for r in range(1, 16):
            if all(bform(rows[j], r) == (1 if i == j ^ 1 else 0) for j in range(i)):
                rows.append(r)
                rec(rows)
                rows.pop()

    rec([])
    return out


# --------------------------------------------------------------------- orbits

ACTIONS = ("vectors", "forms", "form-pairs", "subspaces")


def mover(g: Sequence[int], action: str) -> Callable[[Hashable], Hashable]:
    """Point map for g.  Forms are represented by translation vectors."""
    if action == "vectors":
        return lambda v: vec_mat(v, g)
    if action == "forms":
        d = form_shift(g)
        return lambda c: vec_mat(c, g) ^ d
    if action == "form-pairs":
        d = form_shift(g)
        return lambda p: (vec_mat(p[0], g) ^ d, vec_mat(p[1], g) ^ d)
    if action == "subspaces":
        return lambda u: rref([vec_mat(r, g) for r in u.rows], u.n2)
    raise ParameterError(f"unknown action {action!r}; choose from {ACTIONS}")


@dataclass
class OrbitPart:
    representative: Hashable
    members: list
    label: str = ""

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class OrbitPartition:
    parts: list[OrbitPart]
    acted_on: str
    notes: list[str] = field(default_factory=list)

    @property
    def sizes(self) -> list[int]:
        return [p.size for p in self.parts]

    def total(self) -> int:
        return sum(self.sizes)

    def to_json(self) -> dict:
        return {
            "acted_on": self.acted_on,
            "parts": [
                {"label": p.label, "representative": _jsonable(p.representative), "size": p.size}
                for p in self.parts
            ],
            "notes": list(self.notes),
        }


def _jsonable(x):
    if isinstance(x, Subspace):
        return x.to_json()
    if isinstance(x, tuple):
        return list(x)
    return x


def orbit_bfs(gens: Iterable[Sequence[int]], seed: Hashable, action: str) -> OrbitPart:
    """The orbit of ``seed`` in discovery order, generators applied in sorted order."""
    maps = [mover(g, action) for g in sorted(gens)]
    seen = {seed}
    members = [seed]
    queue = deque([seed])
    while queue:
        x = queue.popleft()
        for mv in maps:
            y = mv(x)
            if y not in seen:
                seen.add(y)
                members.append(y)
                queue.append(y)
    return OrbitPart(seed, members)


def orbit_partition(gens: Iterable[Sequence[int]], points: Iterable[Hashable], action: str) -> OrbitPartition:
    gens = sorted(gens)
    maps = [mover(g, action) for g in gens]
    parts = []
    seen: set = set()
    for p in points:
        if p in seen:
            continue
        seen.add(p)
        members = [p]
        queue = deque([p])
        while queue:
            x = queue.popleft()
            for mv in maps:
                y = mv(x)
                if y not in seen:
                    seen.add(y)
                    members.append(y)
                    queue.append(y)
        parts.append(OrbitPart(p, members))
    return OrbitPartition(parts, action)
