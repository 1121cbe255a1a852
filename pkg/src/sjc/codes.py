"""The two code families on Q^eps: nondegenerate (nd) and totally isotropic (ti).

A codeword is a bitset over the positions of a FormIndex.  Bulk construction
uses per-vector bitsets N[a] = {j : phi_{c_j}(a) = 1}; the type of phi on a
nondegenerate U is then the XOR over a hyperbolic basis of N[a_i] & N[b_i].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .forms import (
    FormIndex,
    eps_str,
    form_index,
    hyperbolic_pairs,
    is_totally_isotropic,
    q_plus,
)
from .gf2 import MAX_N, ParameterError, Subspace, enumerate_subspaces, gaussian_binomial

FAMILIES = ("nd", "ti")
DEFAULT_MAX_N = 4
LONG_MAX_N = 5


class ScaleGuardError(RuntimeError):
    """Raised when a computation exceeds the default desk-scale budget."""


@dataclass(frozen=True)
class CodeParams:
    family: str
    n: int
    d: int
    eps: int
    epsprime: int | None = None
    delta: int | None = None

    def to_json(self) -> dict:
        out: dict = {"family": self.family, "n": self.n, "d": self.d, "eps": eps_str(self.eps)}
        if self.family == "nd":
            out["epsprime"] = eps_str(self.epsprime)
        else:
            out["delta"] = self.delta
        return out

    def label(self) -> str:
        last = eps_str(self.epsprime) if self.family == "nd" else str(self.delta)
        return f"{self.family}({self.n},{self.d},{eps_str(self.eps)},{last})"


def range_errors(p: CodeParams) -> list[str]:
    """Parameters that make no sense for the family at all."""
    if p.family not in FAMILIES:
        return [f"unknown family {p.family!r}; choose nd or ti"]
    out = []
    if p.eps not in (1, -1):
        out.append("eps must be + or -")
    if not 2 <= p.n <= MAX_N:
        out.append(f"n must lie in 2..{MAX_N}")
    if p.family == "nd":
        if p.epsprime not in (1, -1):
            out.append("nd codes need epsprime = + or -")
        if p.delta is not None:
            out.append("delta applies to ti codes only")
        if not 1 <= p.d <= p.n - 1:
            out.append("nd codes need 1 <= d <= n-1")
    else:
        if p.delta not in (0, 1):
            out.append("ti codes need delta = 0 or 1")
        if p.epsprime is not None:
            out.append("epsprime applies to nd codes only")
        if not 1 <= p.d <= p.n:
            out.append("ti codes need 1 <= d <= n")
    return out


def exclusions(p: CodeParams) -> list[str]:
    """Degenerate cases the families leave out; empty when the parameters conform."""
    if p.family == "nd" and (p.n, p.d, p.eps) == (2, 1, 1):
        return ["nd codes exclude (n,d,eps) = (2,1,+): every codeword has size 1 or |Q+|-1"]
    if p.family == "ti" and p.d == p.n and p.eps < 0:
        return [
            "ti codes exclude (d,eps) = (n,-): no minus-type form vanishes on an "
            "n-dimensional totally isotropic subspace"
        ]
    return []


def is_valid(p: CodeParams) -> bool:
    return not range_errors(p) and not exclusions(p)


def validate(p: CodeParams, force: bool = False) -> list[str]:
    """Raise ParameterError unless ``p`` is valid.

    With ``force`` the degenerate exclusions are returned instead of raised so
    callers can mark the output as non-conforming.  Range errors always raise.
    """
    errs = range_errors(p)
    if errs:
        raise ParameterError("; ".join(errs))
    excl = exclusions(p)
    if excl and not force:
        raise ParameterError("; ".join(excl))
    return excl


def k_formula(p: CodeParams) -> int:
    validate(p)
    n, d, eps = p.n, p.d, p.eps
    if p.family == "nd":
        return 2 ** (n - 2) * (2**d + p.epsprime) * (2 ** (n - d) + eps * p.epsprime)
    if p.delta == 0:
        return 2 ** (n - 1) * (2 ** (n - d) + eps)
    return 2 ** (2 * n - d - 1) * (2**d - 1)


def code_size_formula(p: CodeParams) -> int:
    validate(p)
    n, d = p.n, p.d
    if p.family == "nd":
        size = 4 ** (d * (n - d)) * gaussian_binomial(n, d, 4)
        if 2 * d == n and p.eps > 0:
            size //= 2
        return size
    num = den = 1
    for i in range(1, d + 1):
        num *= 2 ** (2 * (n - d + i)) - 1
        den *= 2**i - 1
    return num // den


def index_size(n: int, eps: int) -> int:
    return 2 ** (n - 1) * (2**n + eps)


# ------------------------------------------------------------------ codewords


@dataclass(frozen=True)
class Codeword:
    u: Subspace
    bits: int
    index: FormIndex = field(compare=False, repr=False)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def members(self) -> list[int]:
        """Translation vectors of the forms in this codeword."""
        return [c for j, c in enumerate(self.index.order) if (self.bits >> j) & 1]

    def hexbits(self) -> str:
        nbytes = (len(self.index) + 7) // 8
        return self.bits.to_bytes(nbytes, "little").hex()


@lru_cache(maxsize=None)
def value_bitsets(n: int, eps: int) -> tuple[int, ...]:
    """N[a] = bitset of index positions j with phi_{c_j}(a) = 1, for every a."""
    index = form_index(n, eps)
    full = index.full
    n2 = 2 * n
    lin = [0] * (1 << n2)
    for k in range(n2):
        partner = 1 << (k ^ 1)
        lin[1 << k] = sum(1 << j for j, c in enumerate(index.order) if c & partner)
    for a in range(1, 1 << n2):
        low = a & -a
        if a != low:
            lin[a] = lin[a ^ low] ^ lin[low]
    return tuple(lin[a] ^ full if q_plus(a) else lin[a] for a in range(1 << n2))


def _nd_bits(pairs, table, full: int, epsprime: int) -> int:
    arf = 0
    for a, b in pairs:
        arf ^= table[a] & table[b]
    return arf if epsprime < 0 else full ^ arf


def _ti_bits(rows, table, full: int, delta: int) -> int:
    zero = full
    for r in rows:
        zero &= full ^ table[r]
    return zero if delta == 0 else full ^ zero


def codeword_nd(u: Subspace, p: CodeParams) -> Codeword:
    if p.family != "nd":
        raise ParameterError("codeword_nd needs nd parameters")
    if u.n2 != 2 * p.n or u.dim != 2 * p.d:
        raise ParameterError(f"need a {2 * p.d}-dimensional subspace of F2^{2 * p.n}")
    pairs = hyperbolic_pairs(u.rows)
    if pairs is None:
        raise ParameterError("subspace is degenerate")
    index = form_index(p.n, p.eps)
    return Codeword(u, _nd_bits(pairs, value_bitsets(p.n, p.eps), index.full, p.epsprime), index)


def codeword_ti(u: Subspace, p: CodeParams) -> Codeword:
    if p.family != "ti":
        raise ParameterError("codeword_ti needs ti parameters")
    if u.n2 != 2 * p.n or u.dim != p.d:
        raise ParameterError(f"need a {p.d}-dimensional subspace of F2^{2 * p.n}")
    if not is_totally_isotropic(u):
        raise ParameterError("subspace is not totally isotropic")
    index = form_index(p.n, p.eps)
    return Codeword(u, _ti_bits(u.rows, value_bitsets(p.n, p.eps), index.full, p.delta), index)


def codeword(u: Subspace, p: CodeParams) -> Codeword:
    return codeword_nd(u, p) if p.family == "nd" else codeword_ti(u, p)


# ------------------------------------------------------------ subspace pools


@lru_cache(maxsize=8)
def nondegenerate_subspaces(n: int, d: int) -> tuple[tuple[Subspace, tuple], ...]:
    """Every nondegenerate 2d-dim subspace with a hyperbolic basis, in stream order."""
    out = []
    for u in enumerate_subspaces(2 * n, 2 * d):
        pairs = hyperbolic_pairs(u.rows)
        if pairs is not None:
            out.append((u, tuple(pairs)))
    return tuple(out)


@lru_cache(maxsize=8)
def isotropic_subspaces(n: int, d: int) -> tuple[Subspace, ...]:
    return tuple(u for u in enumerate_subspaces(2 * n, d) if is_totally_isotropic(u))


def scan_cost(p: CodeParams) -> int:
    dim = 2 * p.d if p.family == "nd" else p.d
    return gaussian_binomial(2 * p.n, dim, 2)


def check_scale(n: int, allow_long: bool, what: str, default_max: int = DEFAULT_MAX_N,
                long_max: int = LONG_MAX_N, cost: int | None = None) -> None:
    if n <= default_max:
        return
    if n <= long_max and allow_long:
        return
    est = f" (about {cost} subspaces to scan)" if cost is not None else ""
    hint = " without --long" if n <= long_max else ""
    raise ScaleGuardError(f"{what} at n={n} refused{hint}{est}")


@dataclass(frozen=True)
class Code:
    params: CodeParams
    index: FormIndex
    words: tuple[Codeword, ...]
    conforming: bool = True

    def __len__(self) -> int:
        return len(self.words)

    def bitsets(self) -> frozenset[int]:
        return frozenset(w.bits for w in self.words)

    def to_json(self) -> dict:
        out = {
            "params": self.params.to_json(),
            "index": self.index.to_json(),
            "codewords": [{"subspace": w.u.to_json(), "bits": w.hexbits()} for w in self.words],
        }
        if not self.conforming:
            out["conforming"] = False
        return out


def _iter_words(p: CodeParams) -> Iterator[Codeword]:
    index = form_index(p.n, p.eps)
    table = value_bitsets(p.n, p.eps)
    full = index.full
    if p.family == "nd":
        for u, pairs in nondegenerate_subspaces(p.n, p.d):
            yield Codeword(u, _nd_bits(pairs, table, full, p.epsprime), index)
    else:
        for u in isotropic_subspaces(p.n, p.d):
            yield Codeword(u, _ti_bits(u.rows, table, full, p.delta), index)


def enumerate_code(p: CodeParams, allow_long: bool = False, force: bool = False) -> Code:
    """Build every codeword and dedupe by bitset, keeping the first subspace seen.

    Words come out sorted by bitset.  Since subspaces stream in lexicographic
    order, each word keeps its lexicographically smallest defining subspace.
    """
    broken = validate(p, force=force)
    check_scale(p.n, allow_long, "code enumeration", cost=scan_cost(p))
    seen: dict[int, Codeword] = {}
    for w in _iter_words(p):
        if w.bits not in seen:
            seen[w.bits] = w
    words = tuple(seen[b] for b in sorted(seen))
    return Code(p, form_index(p.n, p.eps), words, conforming=not broken)


def complement_params(p: CodeParams) -> CodeParams:
    if p.family == "nd":
        return CodeParams("nd", p.n, p.d, p.eps, epsprime=-p.epsprime)
    return CodeParams("ti", p.n, p.d, p.eps, delta=1 - p.delta)


def complement_code(c: Code) -> Code:
    full = c.index.full
    words = sorted((Codeword(w.u, full ^ w.bits, c.index) for w in c.words), key=lambda w: w.bits)
    return Code(complement_params(c.params), c.index, tuple(words), c.conforming)


def is_self_complementary(c: Code) -> bool:
    full = c.index.full
    mine = c.bitsets()
    return mine == frozenset(full ^ b for b in mine)


def self_complementary_expected(p: CodeParams) -> bool:
    return p.family == "nd" and 2 * p.d == p.n and p.eps < 0


def identity_check_nd(n: int, d: int, eps: int, epsprime: int) -> bool:
    """Whether the nd codes (n, d, eps, eps') and (n, n-d, eps, eps eps') coincide."""
    left = enumerate_code(CodeParams("nd", n, d, eps, epsprime=epsprime))
    right = enumerate_code(CodeParams("nd", n, n - d, eps, epsprime=eps * epsprime))
    return left.bitsets() == right.bitsets()


def valid_params(nmax: int, nmin: int = 2) -> list[CodeParams]:
    """Every valid parameter set with nmin <= n <= nmax, in a fixed order."""
    out = []
    for n in range(nmin, nmax + 1):
        for d in range(1, n):
            for eps in (1, -1):
                for ep in (1, -1):
                    p = CodeParams("nd", n, d, eps, epsprime=ep)
                    if is_valid(p):
                        out.append(p)
        for d in range(1, n + 1):
            for eps in (1, -1):
                for delta in (0, 1):
                    p = CodeParams("ti", n, d, eps, delta=delta)
                    if is_valid(p):
                        out.append(p)
    return out
