"""Distances, minimum distance, incidence-transitivity checks and subgroup orbits."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .codes import (
    Code,
    CodeParams,
    Codeword,
    check_scale,
    codeword_nd,
    code_size_formula,
    enumerate_code,
    k_formula,
    validate,
)
from .forms import (
    ExtQuadraticForm,
    QuadraticForm,
    base_form,
    eps_str,
    evaluate,
    form_index,
    form_type,
    perp,
    restrict_type,
    trace_reduce,
    to_ext,
    ext_evaluate,
)
from .gf2 import (
    ParameterError,
    Subspace,
    check_half_dim,
    e,
    f,
    frobenius_class,
    FieldElem,
    gf_trace,
    rref,
)
from .group import (
    GeneratorSet,
    OrbitPart,
    OrbitPartition,
    closure_order,
    nondeg_stabiliser_gens,
    orbit_bfs,
    orbit_partition,
    ti_stabiliser_gens,
    transvection,
)

STRATEGIES = ("fixed-first", "exhaustive")


def distance(a: Codeword, b: Codeword) -> int:
    """Johnson distance k - |a & b|."""
    if a.index is not b.index and a.index != b.index:
        raise ParameterError("codewords come from different form indexes")
    return (a.bits ^ b.bits).bit_count() >> 1


# ------------------------------------------------------------ closed forms


def ti_min_distance(n: int, d: int, eps: int) -> int:
    if eps > 0:
        return 2 ** (2 * n - d - 2) if d < n else 2 ** (n - 1)
    return 2 ** (n - 2) * (2 ** (n - d) - 1)


def nd_conjectured_min_distance(n: int, d: int, eps: int) -> int:
    base = 2 ** (2 * n - 4)
    if eps > 0 and abs(n - 2 * d) == 1:
        return base - 2 ** (n - 3)
    return base


def expected_min_distance(p: CodeParams) -> int:
    if p.family == "ti":
        return ti_min_distance(p.n, p.d, p.eps)
    return nd_conjectured_min_distance(p.n, p.d, p.eps)


# --------------------------------------------------------- minimum distance


@dataclass
class DistanceReport:
    params: CodeParams
    min_distance: int
    witness: tuple[Subspace, Subspace]
    strategy: str
    conjecture_expected: int | None
    agrees: bool
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "min_distance": self.min_distance,
            "witness": [self.witness[0].to_json(), self.witness[1].to_json()],
            "strategy": self.strategy,
            "conjecture_expected": self.conjecture_expected,
            "agrees": self.agrees,
            "notes": list(self.notes),
        }


def _pair_key(a: Codeword, b: Codeword) -> tuple:
    return tuple(sorted((a.u.rows, b.u.rows)))


def _scan_from(first: Codeword, others: list[Codeword]) -> tuple[int, tuple] | None:
    best = None
    fb = first.bits
    for w in others:
        dist = (fb ^ w.bits).bit_count() >> 1
        if best is None or dist < best[0]:
            best = (dist, _pair_key(first, w), first, w)
        elif dist == best[0]:
            key = _pair_key(first, w)
            if key < best[1]:
                best = (dist, key, first, w)
    return best


def _merge(results):
    best = None
    for r in results:
        if r is None:
            continue
        if best is None or (r[0], r[1]) < (best[0], best[1]):
            best = r
    return best


def _chunks(seq: list, parts: int) -> list[list]:
    parts = max(1, min(parts, len(seq)))
    step = -(-len(seq) // parts)
    return [seq[i : i + step] for i in range(0, len(seq), step)]


def min_distance(code: Code, strategy: str = "fixed-first", threads: int = 1) -> DistanceReport:
    """Minimum Johnson distance of ``code`` with a lexicographically least witness.

    fixed-first compares words[0] against every other word, which finds the
    minimum whenever the automorphism group is transitive on codewords.
    exhaustive compares every pair.
    """
    if strategy not in STRATEGIES:
        raise ParameterError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    words = list(code.words)
    if len(words) < 2:
        raise ParameterError("minimum distance needs at least two codewords")
    notes = []
    if strategy == "fixed-first":
        jobs = [(words[0], chunk) for chunk in _chunks(words[1:], threads)]
        notes.append(
            "fixed-first: valid because Sp(2n,2) is transitive on the codewords of this family"
        )
    else:
        jobs = [(words[i], words[i + 1 :]) for i in range(len(words) - 1)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            best = _merge(pool.map(lambda job: _scan_from(*job), jobs))
    else:
        best = _merge(_scan_from(*job) for job in jobs)
    dist, _, a, b = best
    pair = sorted((a.u, b.u), key=lambda u: u.rows)
    expected = expected_min_distance(code.params) if code.conforming else None
    if code.params.family == "nd":
        notes.append("expected value is the conjectured nd minimum distance")
    return DistanceReport(
        code.params, dist, (pair[0], pair[1]), strategy, expected,
        expected is not None and dist == expected, notes,
    )


# ------------------------------------------------------------ nd witnesses


@dataclass
class Witness:
    kind: str
    u1: Subspace
    u2: Subspace
    expected: int

    def to_json(self) -> dict:
        return {"kind": self.kind, "u1": self.u1.to_json(), "u2": self.u2.to_json(),
                "expected": self.expected}


def _block(n: int, idx) -> list[int]:
    return [v for i in idx for v in (e(i), f(i))]


def witness_b_distance(n: int, d: int, eps: int) -> int:
    a = abs(n - 2 * d)
    num = (2 ** (n - a) - 1) * (2**a - eps)
    return num << (n - 3) if n >= 3 else num >> (3 - n)


def distance_witnesses_nd(n: int, d: int, eps: int, epsprime: int) -> list[Witness]:
    """Explicit codeword pairs with their predicted distances.

    Kind "a" exists for n >= 3 and sits at distance 2^(2n-4).  Kind "b" pairs
    orthogonal subspaces and exists unless (d, eps) = (n/2, +).  For d > n/2
    both are built in dimension n-d and replaced by their perps.
    """
    validate(CodeParams("nd", n, d, eps, epsprime=epsprime))
    n2 = 2 * n
    dd = min(d, n - d)
    flip = d > n - d
    pairs = []
    if n >= 3:
        wprime = _block(n, range(3, dd + 2))
        u1 = rref(_block(n, [1]) + wprime, n2)
        u2 = rref([e(1), f(1) | f(2)] + wprime, n2)
        pairs.append(("a", u1, u2, 2 ** (2 * n - 4)))
    if not (2 * d == n and eps > 0):
        u1 = rref(_block(n, range(1, dd + 1)), n2)
        u2 = perp(u1) if 2 * dd == n else rref(_block(n, range(dd + 1, 2 * dd + 1)), n2)
        pairs.append(("b", u1, u2, witness_b_distance(n, d, eps)))
    out = []
    for kind, u1, u2, dist in pairs:
        if flip:
            u1, u2 = perp(u1), perp(u2)
        out.append(Witness(kind, u1, u2, dist))
    return out


def witness_distance(w: Witness, n: int, d: int, eps: int, epsprime: int) -> int:
    p = CodeParams("nd", n, d, eps, epsprime=epsprime)
    return distance(codeword_nd(w.u1, p), codeword_nd(w.u2, p))


# ------------------------------------------------------------- SIT checks


@dataclass
class SitReport:
    params: CodeParams
    two_orbit_check: bool
    pair_transitive: bool
    orbit_sizes: list[int]
    pair_orbit_size: int
    expected_pair_orbit: int
    closure_order: int | None
    expected_closure_order: int | None
    status: str
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "status": self.status,
            "two_orbit_check": self.two_orbit_check,
            "pair_transitive": self.pair_transitive,
            "orbit_sizes": self.orbit_sizes,
            "pair_orbit_size": self.pair_orbit_size,
            "expected_pair_orbit": self.expected_pair_orbit,
            "closure_order": self.closure_order,
            "expected_closure_order": self.expected_closure_order,
            "notes": list(self.notes),
        }


def stabiliser_gens(code: Code, word: Codeword) -> GeneratorSet:
    if code.params.family == "nd":
        return nondeg_stabiliser_gens(word.u)
    return ti_stabiliser_gens(word.u)


def sit_verify(code: Code, allow_long: bool = False, closure_limit_n: int = 3) -> SitReport:
    """Check the codeword stabiliser is transitive on Delta x complement(Delta).

    Uses the subspace stabiliser of words[0]: its orbits on Q^eps must be
    exactly Delta and its complement, and one pair orbit must have size
    |Delta| * |complement|.  A generator closure that misses the expected
    group order makes the verdict inconclusive.
    """
    check_scale(code.params.n, allow_long, "SIT verification", default_max=3, long_max=4)
    index = code.index
    word = code.words[0]
    gens = stabiliser_gens(code, word)
    notes = []
    order = None
    if code.params.n <= closure_limit_n:
        order = closure_order(gens)
    else:
        notes.append("generator closure order not computed at this n")
    delta = word.bits
    cobits = index.full ^ delta
    part = orbit_partition(gens.gens, index.order, "forms")
    as_bits = sorted(sum(1 << index.position(c) for c in p.members) for p in part.parts)
    two_orbit = len(part.parts) == 2 and set(as_bits) == {delta, cobits}
    first_in = index.order[(delta & -delta).bit_length() - 1]
    first_out = index.order[(cobits & -cobits).bit_length() - 1]
    pair_orbit = orbit_bfs(gens.gens, (first_in, first_out), "form-pairs")
    k = delta.bit_count()
    expected_pairs = k * (len(index) - k)
    pair_ok = pair_orbit.size == expected_pairs and all(
        (delta >> index.position(a)) & 1 and (cobits >> index.position(b)) & 1
        for a, b in pair_orbit.members
    )
    if order is not None and order != gens.expected_order:
        status = "inconclusive"
        notes.append("generator closure is smaller than the stabiliser")
    elif two_orbit and pair_ok:
        status = "pass"
    else:
        status = "fail"
    return SitReport(
        code.params, two_orbit, pair_ok, sorted(p.size for p in part.parts), pair_orbit.size,
        expected_pairs, order, gens.expected_order, status, notes,
    )


# --------------------------------------------------------- subgroup orbits


def c2_orbits(n: int, t: int, eps: int, verify: bool = True) -> OrbitPartition:
    """Split Q^eps by how many of t equal orthogonal blocks carry a minus-type restriction.

    With ``verify`` the parts are also checked to be single orbits of the
    block stabiliser Sp(2n/t, 2) wr S_t.
    """
    check_half_dim(n)
    if t < 2 or n % t:
        raise ParameterError("t must be at least 2 and divide n")
    w = n // t
    n2 = 2 * n
    blocks = [rref(_block(n, range(i * w + 1, (i + 1) * w + 1)), n2) for i in range(t)]
    index = form_index(n, eps)
    buckets: dict[int, list[int]] = {m: [] for m in range(t + 1)}
    for c in index.order:
        phi = QuadraticForm(n, c)
        m = sum(1 for b in blocks if restrict_type(phi, b) < 0)
        buckets[m].append(c)
    parts = [
        OrbitPart(buckets[m][0] if buckets[m] else None, buckets[m], f"O_{m}")
        for m in range(t + 1)
    ]
    out = OrbitPartition(parts, "forms")
    if verify:
        gens = [transvection(v, n) for b in blocks for v in b.elements()[1:]]
        gens += [_block_swap(n, w, i) for i in range(t - 1)]
        found = orbit_partition(gens, index.order, "forms")
        ok = sorted(sorted(p.members) for p in found.parts) == sorted(
            sorted(p.members) for p in parts if p.members
        )
        out.notes.append("parts are single orbits" if ok else "parts are NOT single orbits")
    return out


def _block_swap(n: int, w: int, i: int) -> tuple[int, ...]:
    """Permutation matrix exchanging blocks i and i+1 of w hyperbolic pairs each."""
    rows = list(1 << k for k in range(2 * n))
    a, b = 2 * w * i, 2 * w * (i + 1)
    for k in range(2 * w):
        rows[a + k], rows[b + k] = 1 << (b + k), 1 << (a + k)
    return tuple(rows)


def c2_nonempty_expected(t: int, eps: int) -> list[int]:
    return [m for m in range(t + 1) if (-1) ** m == eps]


def c3_expected_sizes(m: int, b: int, eps: int) -> dict[int, int]:
    """Expected class sizes keyed by the least element of the class."""
    n = m * b
    out = {0: (2 ** (n - b) + eps) * (2**n - eps)}
    for lam in range(1, 1 << b):
        if gf_trace(lam, b):
            continue
        cls = min(x.value for x in frobenius_class(FieldElem(lam, b)))
        if cls != lam:
            continue
        if lam == 1 and b == 2:
            out[lam] = 2 ** (n - b) * (2**n - eps)
        else:
            out[lam] = b * 2 ** (n - b) * (2**n - eps)
    return out


def c3_orbits(m: int, b: int, eps: int) -> OrbitPartition:
    """Classes theta_[lam] of forms phi_{c0 + c}, grouped by the Frobenius class of Phi(c).

    Phi is the GF(2^b) base form of type eps and phi_{c0} its trace reduction.
    Part sizes are certified; single-orbitness under the semilinear
    stabiliser is not checked.
    """
    n = m * b
    check_half_dim(n)
    phi_ext = ExtQuadraticForm(m, b, eps, (0,) * (2 * m))
    c0 = trace_reduce(phi_ext).c
    index = form_index(n, eps)
    if c0 not in index:
        raise AssertionError("trace reduction changed the type")
    classes: dict[int, list[int]] = {lam: [] for lam in c3_expected_sizes(m, b, eps)}
    outside = 0
    for v in range(1, 1 << (2 * n)):
        lam = ext_evaluate(phi_ext, to_ext(v, m, b))
        if gf_trace(lam, b):
            outside += 1
            continue
        key = min(x.value for x in frobenius_class(FieldElem(lam, b)))
        c = c0 ^ v
        if form_type(QuadraticForm(n, c)) != eps:
            raise AssertionError("trace-zero value gave a form of the other type")
        classes[key].append(c)
    parts = [OrbitPart(c0, [c0], "phi")]
    for key in sorted(classes):
        members = classes[key]
        parts.append(OrbitPart(members[0] if members else None, members, f"theta[{key}]"))
    out = OrbitPartition(parts, "forms")
    out.notes.append("sizes certified; single-orbit property not verified")
    return out


def c8_orbits(n: int, eps: int, verify: bool = True) -> OrbitPartition:
    """Split Q^eps by the values of phi and psi = phi_d at the translation vector.

    phi is the base form of type eps and d = e_n + f_n, which is
    phi-nonsingular for both types, so psi has the opposite type.
    """
    check_half_dim(n)
    if n < 2:
        raise ParameterError("n must be at least 2")
    phi = base_form(eps, n)
    d = e(n) | f(n)
    if evaluate(phi, d) != 1:
        raise AssertionError("d must be nonsingular for phi")
    psi_c = phi.c ^ d
    if form_type(QuadraticForm(n, psi_c)) != -eps:
        raise AssertionError("psi must have the opposite type")
    index = form_index(n, eps)
    omega0, omega1 = [], []
    for c_abs in index.order:
        c = c_abs ^ phi.c
        if c == 0:
            continue
        # phi_c has type eps, so phi(c) = 0; split on psi(c) = phi(c) + B(c, d)
        if evaluate(QuadraticForm(n, psi_c), c) == 0:
            omega0.append(c_abs)
        else:
            omega1.append(c_abs)
    parts = [
        OrbitPart(phi.c, [phi.c], "phi"),
        OrbitPart(omega0[0] if omega0 else None, omega0, "omega0"),
        OrbitPart(omega1[0] if omega1 else None, omega1, "omega1"),
    ]
    out = OrbitPartition(parts, "forms")
    if verify:
        psi = QuadraticForm(n, psi_c)
        gens = [
            transvection(v, n)
            for v in range(1, 1 << (2 * n))
            if evaluate(phi, v) == 1 and evaluate(psi, v) == 1
        ]
        found = orbit_partition(gens, index.order, "forms")
        ok = sorted(sorted(p.members) for p in found.parts) == sorted(
            sorted(p.members) for p in parts
        )
        out.notes.append("parts are single orbits" if ok else "inconclusive: orbits are finer than the parts")
    return out


def c8_expected_sizes(n: int, eps: int) -> list[int]:
    return [1, 2 ** (2 * n - 2) - 1, 2 ** (n - 1) * (2 ** (n - 1) + eps)]


# ------------------------------------------------------------------ tables

CSV_COLUMNS = (
    "family", "n", "d", "eps", "epsprime_or_delta", "k", "code_size",
    "min_distance", "conjecture_expected", "agrees",
)


def table_row(p: CodeParams, threads: int = 1, allow_long: bool = False) -> dict:
    code = enumerate_code(p, allow_long=allow_long)
    rep = min_distance(code, "fixed-first", threads)
    last = eps_str(p.epsprime) if p.family == "nd" else str(p.delta)
    return {
        "family": p.family,
        "n": p.n,
        "d": p.d,
        "eps": eps_str(p.eps),
        "epsprime_or_delta": last,
        "k": k_formula(p),
        "code_size": code_size_formula(p),
        "min_distance": rep.min_distance,
        "conjecture_expected": rep.conjecture_expected,
        "agrees": rep.agrees,
    }
