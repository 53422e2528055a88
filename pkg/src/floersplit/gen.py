"""Seeded random generator of structurally valid instances.

Instances are built so that the relation constraints hold by
construction: correction coefficients are planted first and the cobordism
blocks are then solved from the resulting affine-linear system (one
particular solution plus a random element of the homogeneous solution
space).  Rejection sampling would essentially never hit the relation set.

A family member lying in the span of the lower same-parity members has
its relation satisfied automatically once the lower ones hold, so only
the independent members contribute equations and planted coefficients;
the included rows are then linearly independent and the solve cannot
fail.  Remaining infeasibilities are retried internally and reported
with the seed if the retry budget runs out.

Chain-level complexes are drawn in split form: each degree decomposes
into an acyclic part mapped isomorphically one degree up and a harmonic
part, which plants the cohomology; the whole package (differential,
degree +4 operator, special data, cobordism map) is then conjugated by
random unimodular matrices so nothing stays coordinate-aligned.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass
from fractions import Fraction

from .cobordism import CobordismMap, validate_relations
from .errors import Infeasible, ValidationError
from .froyshov import (
    Case,
    ChainSpecial,
    SpecialPair,
    delta_degree,
    delta_prime_degree,
    derive_case,
    induce_special,
)
from .graded import CochainComplex, GradedMap, GradedSpace, cohomology, induced_map
from .instance import COHOMOLOGY, Instance, LEVEL_CHAIN, LEVEL_COHOMOLOGY
from .qlinalg import Matrix, Subspace, kernel_basis, solve

RETRY_BOUND = 40

_CASES = (Case.DELTA_SIDE, Case.DELTA_PRIME_SIDE, Case.BOTH_ZERO)


@dataclass(frozen=True)
class GenConfig:
    seed: int
    max_dim: int = 6
    n_max: int = 4
    case_mix: tuple[float, float, float] = (2.0, 2.0, 1.0)
    periodic: bool = False
    chain_level: bool = False
    entry_bound: int = 3

    def __post_init__(self):
        if self.max_dim < 0:
            raise ValidationError("max_dim must be nonnegative")
        if self.n_max < 1:
            raise ValidationError("n_max must be at least 1")
        if len(self.case_mix) != 3 or any(w < 0 for w in self.case_mix) or not any(self.case_mix):
            raise ValidationError("case_mix needs 3 nonnegative weights, not all zero")
        if self.entry_bound < 1:
            raise ValidationError("entry_bound must be positive")


class _Retry(Exception):
    pass


def _rand_matrix(rng: random.Random, rows: int, cols: int, bound: int) -> Matrix:
    return Matrix.from_rows(
        [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols=cols
    )


def _draw_member(rng, shape, bound, prev):
    """One family member: usually random, sometimes zero or a multiple of
    an earlier member so that inactive tower steps and underdetermined
    coefficient solves actually occur in sweeps."""
    rows, cols = shape
    roll = rng.random()
    if roll < 0.18:
        return Matrix.zeros(rows, cols)
    nonzero_prev = [m for m in prev if not m.is_zero]
    if roll < 0.33 and nonzero_prev:
        k = rng.randint(1, bound) * rng.choice((-1, 1))
        return rng.choice(nonzero_prev).scale(k)
    return _rand_matrix(rng, rows, cols, bound)


def _solve_member_block(rng, dim, members, bound, planted):
    """Solve member_n @ B = member_n + sum of planted * lower members.

    ``members`` are (n, row) pairs of one parity, ascending.  Members in
    the span of their lower family are skipped (their relation follows
    from the lower ones); coefficients are planted for the rest, over all
    lower same-parity indices, and recorded in ``planted``.
    """
    if not members:
        return _rand_matrix(rng, dim, dim, bound)
    span = Subspace.zero(dim)
    d_mat = Matrix.zeros(0, dim)
    r_mat = Matrix.zeros(0, dim)
    for idx, (n, row) in enumerate(members):
        member_span = Subspace.span(dim, row.transpose())
        if not span.contains(member_span):
            rhs = row
            for i, row_i in members[:idx]:
                c = rng.randint(-bound, bound)
                planted[(i, n)] = c
                rhs = rhs + row_i.scale(c)
            d_mat = d_mat.vstack(row)
            r_mat = r_mat.vstack(rhs)
        span = span.sum_with(member_span)
    part = solve(d_mat, r_mat)
    if part is None:
        raise _Retry  # cannot happen: included rows are independent
    ker = kernel_basis(d_mat)
    if ker.dim:
        part = part + ker.basis @ _rand_matrix(rng, ker.dim, dim, bound)
    return part


def _solve_vector_block(rng, dim, members, bound, planted):
    """Solve B @ member_n = member_n + sum of planted * lower members."""
    rows = [(n, col.transpose()) for n, col in members]
    return _solve_member_block(rng, dim, rows, bound, planted).transpose()


def _constrained_blocks(rng, space, sp, bound):
    """Solve the potentially constrained blocks; None elsewhere.

    Returns (blocks by degree, planted functional-side coefficients,
    planted vector-side coefficients).
    """
    blocks: dict[int, Matrix | None] = {q: None for q in range(8)}
    planted_a: dict[tuple[int, int], int] = {}
    planted_b: dict[tuple[int, int], int] = {}
    if sp.case is Case.DELTA_SIDE:
        even = [(n, sp.deltas[n]) for n in range(0, sp.n_max + 1, 2)]
        odd = [(n, sp.deltas[n]) for n in range(1, sp.n_max + 1, 2)]
        blocks[4] = _solve_member_block(rng, space.dim(4), even, bound, planted_a)
        blocks[0] = _solve_member_block(rng, space.dim(0), odd, bound, planted_a)
    elif sp.case is Case.DELTA_PRIME_SIDE:
        even = [(n, sp.deltas_prime[n]) for n in range(0, sp.n_max + 1, 2)]
        odd = [(n, sp.deltas_prime[n]) for n in range(1, sp.n_max + 1, 2)]
        blocks[1] = _solve_vector_block(rng, space.dim(1), even, bound, planted_b)
        blocks[5] = _solve_vector_block(rng, space.dim(5), odd, bound, planted_b)
    return blocks, planted_a, planted_b


def _mirror_planted(planted):
    """Copy even-pair coefficients onto the linked odd pairs."""
    for (i, n), c in list(planted.items()):
        if n % 2 == 0:
            planted[(i + 1, n + 1)] = c


def _draw_pair(rng, space, case, n_eff, bound, periodic):
    deltas = [Matrix.zeros(1, space.dim(delta_degree(n))) for n in range(n_eff + 1)]
    primes = [Matrix.zeros(space.dim(delta_prime_degree(n)), 1) for n in range(n_eff + 1)]
    if case is Case.DELTA_SIDE:
        for n in range(n_eff + 1):
            if periodic and n % 2 == 1:
                deltas[n] = deltas[n - 1]
            else:
                prev = [deltas[i] for i in range(n % 2, n, 2)]
                deltas[n] = _draw_member(rng, (1, space.dim(delta_degree(n))), bound, prev)
    elif case is Case.DELTA_PRIME_SIDE:
        for n in range(n_eff + 1):
            if periodic and n % 2 == 1:
                primes[n] = primes[n - 1]
            else:
                prev = [primes[i] for i in range(n % 2, n, 2)]
                primes[n] = _draw_member(rng, (space.dim(delta_prime_degree(n)), 1), bound, prev)
    # an unlucky draw may leave the active family all zero; retag
    return SpecialPair(n_eff, tuple(deltas), tuple(primes), derive_case(deltas, primes))


def _planted_metadata(planted_a, planted_b):
    return {
        "planted_a": sorted([i, n, c] for (i, n), c in planted_a.items()),
        "planted_b": sorted([i, n, c] for (i, n), c in planted_b.items()),
    }


def _build_instance(rng: random.Random, cfg: GenConfig) -> Instance:
    bound = cfg.entry_bound
    dims = [rng.randint(0, cfg.max_dim) for _ in range(8)]
    if cfg.periodic:
        dims[4:] = dims[:4]
    space = GradedSpace.of(dims)
    case = rng.choices(_CASES, weights=cfg.case_mix)[0]
    n_eff = cfg.n_max
    if cfg.periodic and n_eff % 2 == 0:
        n_eff += 1  # keep the linked towers the same length
    sp = _draw_pair(rng, space, case, n_eff, bound, cfg.periodic)

    if cfg.periodic:
        # linked towers are identical systems; solve once and mirror
        solved, planted_a, planted_b = {q: None for q in range(8)}, {}, {}
        if sp.case is Case.DELTA_SIDE:
            even = [(n, sp.deltas[n]) for n in range(0, sp.n_max + 1, 2)]
            solved[4] = _solve_member_block(rng, space.dim(4), even, bound, planted_a)
            solved[0] = solved[4]
            _mirror_planted(planted_a)
        elif sp.case is Case.DELTA_PRIME_SIDE:
            even = [(n, sp.deltas_prime[n]) for n in range(0, sp.n_max + 1, 2)]
            solved[1] = _solve_vector_block(rng, space.dim(1), even, bound, planted_b)
            solved[5] = solved[1]
            _mirror_planted(planted_b)
        blocks: list[Matrix | None] = [None] * 8
        for q in range(4):
            blocks[q] = solved[q] if solved[q] is not None else _rand_matrix(
                rng, space.dim(q), space.dim(q), bound
            )
            blocks[q + 4] = solved[q + 4] if solved[q + 4] is not None else blocks[q]
    else:
        solved, planted_a, planted_b = _constrained_blocks(rng, space, sp, bound)
        blocks = [
            solved[q] if solved[q] is not None
            else _rand_matrix(rng, space.dim(q), space.dim(q), bound)
            for q in range(8)
        ]
    w = GradedMap(space, space, 0, tuple(blocks))

    inst = Instance(
        space=space,
        pair=sp,
        w=w,
        w_label=f"W(seed={cfg.seed})",
        convention=COHOMOLOGY,
        level=LEVEL_COHOMOLOGY,
        metadata={
            "name": f"gen-{cfg.seed}",
            "seed": cfg.seed,
            "generator": "gen_instance",
            "case": sp.case.value,
            **_planted_metadata(planted_a, planted_b),
        },
    )
    report = validate_relations(CobordismMap(w), sp)
    if not report.ok:
        raise Infeasible(f"generated instance failed validation (seed {cfg.seed})")
    return inst


def gen_instance(cfg: GenConfig) -> Instance:
    """Deterministic-in-seed cohomology-level instance.

    The emitted instance always passes the relation validator and the
    dichotomy; unsolvable draws are retried on the same random stream, so
    identical configs give identical instances.
    """
    if cfg.chain_level:
        return gen_chain_instance(cfg)
    rng = random.Random(cfg.seed)
    for _ in range(RETRY_BOUND):
        try:
            return _build_instance(rng, cfg)
        except _Retry:
            continue
    raise Infeasible(f"no valid instance within {RETRY_BOUND} attempts for seed {cfg.seed}")


# -- chain level -----------------------------------------------------


def _unimodular(rng: random.Random, n: int):
    """Random unimodular matrix with its exact inverse (shears and swaps)."""
    if n == 0:
        return Matrix.identity(0), Matrix.identity(0)
    p = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    ops = []
    for _ in range(2 * n + 2):
        kind = rng.random()
        i, j = rng.randrange(n), rng.randrange(n)
        if kind < 0.7 and i != j:
            c = rng.randint(-2, 2)
            ops.append(("shear", i, j, c))
            for k in range(n):
                p[i][k] += c * p[j][k]
        elif kind < 0.9 and i != j:
            ops.append(("swap", i, j, 0))
            p[i], p[j] = p[j], p[i]
        else:
            ops.append(("neg", i, 0, 0))
            p[i] = [-x for x in p[i]]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for kind, i, j, c in reversed(ops):
        if kind == "shear":
            for k in range(n):
                inv[i][k] -= c * inv[j][k]
        elif kind == "swap":
            inv[i], inv[j] = inv[j], inv[i]
        else:
            inv[i] = [-x for x in inv[i]]

    def mk(rows):
        return Matrix(n, n, tuple(tuple(r) for r in rows))

    return mk(p), mk(inv)


def _split_chain_map(rng, a, h, cf, shift, hh_blocks, bound):
    """Chain map in the split basis: per degree [acyclic | image | harmonic].

    The image part is forced to follow the acyclic part one degree down
    and three sub-blocks vanish; everything else is free.  The harmonic
    diagonal is prescribed where a cohomology-level block was solved.
    """
    aa = {q: _rand_matrix(rng, a[(q + shift) % 8], a[q], bound) for q in range(8)}
    blocks = []
    for q in range(8):
        t = (q + shift) % 8
        bq, bt = a[(q - 1) % 8], a[(t - 1) % 8]
        rows, cols = cf[t], cf[q]
        m = [[Fraction(0)] * cols for _ in range(rows)]

        def put(block, r0, c0):
            for i in range(block.rows):
                for j in range(block.cols):
                    m[r0 + i][c0 + j] = block.entries[i][j]

        hh = hh_blocks.get(q)
        if hh is None:
            hh = _rand_matrix(rng, h[t], h[q], bound)
        put(aa[q], 0, 0)
        put(_rand_matrix(rng, bt, a[q], bound), a[t], 0)
        put(_rand_matrix(rng, h[t], a[q], bound), a[t] + bt, 0)
        put(aa[(q - 1) % 8], a[t], a[q])  # image slot follows the acyclic part below
        put(_rand_matrix(rng, bt, h[q], bound), a[t], a[q] + bq)
        put(hh, a[t] + bt, a[q] + bq)
        blocks.append(Matrix(rows, cols, tuple(tuple(r) for r in m)))
    return blocks


def _extend_planted_family(d0, p0, vhh, h, n_min):
    """Iterate the planted family until each parity span stops growing."""
    deltas, primes = [], []
    spans = {
        ("d", 0): Subspace.zero(h[4]),
        ("d", 1): Subspace.zero(h[0]),
        ("p", 0): Subspace.zero(h[1]),
        ("p", 1): Subspace.zero(h[5]),
    }
    done = {k: False for k in spans}
    cur_d, cur_p = d0, p0
    n = -1
    cap = n_min + 2 * (max(h) + 2)
    while True:
        n += 1
        deltas.append(cur_d)
        primes.append(cur_p)
        par = n % 2
        for fam, member in (("d", cur_d.transpose()), ("p", cur_p)):
            grown = spans[fam, par].sum_with(Subspace.span(member.rows, member))
            if grown.dim == spans[fam, par].dim:
                done[fam, par] = True
            spans[fam, par] = grown
        if n >= n_min and all(done.values()):
            return deltas, primes, n
        if n > cap:
            raise Infeasible("family spans failed to stabilize")
        cur_d = cur_d @ vhh[delta_degree(n + 1)]
        cur_p = vhh[delta_prime_degree(n)] @ cur_p


def _block_of(m: Matrix, a, h, cf, q, shift):
    """Harmonic-to-harmonic sub-block of a split-basis chain map block."""
    t = (q + shift) % 8
    return m.submatrix(range(cf[t] - h[t], cf[t]), range(cf[q] - h[q], cf[q]))


def _build_chain_instance(rng: random.Random, cfg: GenConfig) -> Instance:
    bound = cfg.entry_bound
    amax = max(1, cfg.max_dim // 2)
    a = [rng.randint(0, amax) for _ in range(8)]
    h = [rng.randint(0, cfg.max_dim) for _ in range(8)]
    if cfg.periodic:
        a[4:] = a[:4]
        h[4:] = h[:4]
    cf = [a[q] + a[(q - 1) % 8] + h[q] for q in range(8)]
    cf_space = GradedSpace.of(cf)
    case = rng.choices(_CASES, weights=cfg.case_mix)[0]

    # differential in split form: acyclic slot to image slot one degree up
    d_blocks = []
    for q in range(8):
        t = (q + 1) % 8
        m = [[Fraction(0)] * cf[q] for _ in range(cf[t])]
        for i in range(a[q]):
            m[a[t] + i][i] = Fraction(1)
        d_blocks.append(Matrix(cf[t], cf[q], tuple(tuple(r) for r in m)))

    # degree +4 operator; an identity harmonic diagonal in periodic mode
    # links the towers so the reduced theory mirrors too
    v_hh = {q: Matrix.identity(h[q]) for q in range(8)} if cfg.periodic else {}
    v_blocks = _split_chain_map(rng, a, h, cf, 4, v_hh, bound)
    vhh = {q: _block_of(v_blocks[q], a, h, cf, q, 4) for q in range(8)}

    # special data: one family's class seed is zeroed, fixing the dichotomy
    delta_chain = [rng.randint(-bound, bound) for _ in range(cf[4])]
    for i in range(a[3]):
        delta_chain[a[4] + i] = 0  # must kill coboundaries
    prime_chain = [rng.randint(-bound, bound) for _ in range(cf[1])]
    for i in range(a[1]):
        prime_chain[i] = 0  # must be a cocycle
    if case is not Case.DELTA_SIDE:
        for i in range(h[4]):
            delta_chain[cf[4] - h[4] + i] = 0
    if case is not Case.DELTA_PRIME_SIDE:
        for i in range(h[1]):
            prime_chain[cf[1] - h[1] + i] = 0
    delta_row = Matrix.row_vector(delta_chain, cols=cf[4])
    prime_col = Matrix.column(prime_chain)

    d0 = Matrix.row_vector([delta_chain[cf[4] - h[4] + i] for i in range(h[4])], cols=h[4])
    p0 = Matrix.column([prime_chain[cf[1] - h[1] + i] for i in range(h[1])])
    deltas, primes, n_eff = _extend_planted_family(d0, p0, vhh, h, cfg.n_max)

    pair = SpecialPair(n_eff, tuple(deltas), tuple(primes), derive_case(deltas, primes))
    hspace = GradedSpace.of(h)
    if cfg.periodic:
        solved, planted_a, planted_b = {q: None for q in range(8)}, {}, {}
        if pair.case is Case.DELTA_SIDE:
            even = [(n, pair.deltas[n]) for n in range(0, pair.n_max + 1, 2)]
            solved[4] = _solve_member_block(rng, hspace.dim(4), even, bound, planted_a)
            solved[0] = solved[4]
            _mirror_planted(planted_a)
        elif pair.case is Case.DELTA_PRIME_SIDE:
            even = [(n, pair.deltas_prime[n]) for n in range(0, pair.n_max + 1, 2)]
            solved[1] = _solve_vector_block(rng, hspace.dim(1), even, bound, planted_b)
            solved[5] = solved[1]
            _mirror_planted(planted_b)
    else:
        solved, planted_a, planted_b = _constrained_blocks(rng, hspace, pair, bound)

    w_hh: dict[int, Matrix] = {}
    span_w = range(4) if cfg.periodic else range(8)
    for q in span_w:
        blk = solved[q]
        if blk is None and cfg.periodic and solved[q + 4] is not None:
            blk = solved[q + 4]
        if blk is None:
            blk = _rand_matrix(rng, h[q], h[q], bound)
        w_hh[q] = blk
    if cfg.periodic:
        for q in range(4):
            w_hh[q + 4] = w_hh[q]
    w_blocks = _split_chain_map(rng, a, h, cf, 0, w_hh, bound)

    # conjugate everything by one unimodular change of basis per degree
    ps, pinvs = [], []
    for q in range(8):
        if cfg.periodic and q >= 4:
            ps.append(ps[q - 4])
            pinvs.append(pinvs[q - 4])
        else:
            p, pinv = _unimodular(rng, cf[q])
            ps.append(p)
            pinvs.append(pinv)
    d_blocks = [ps[(q + 1) % 8] @ d_blocks[q] @ pinvs[q] for q in range(8)]
    v_blocks = [ps[(q + 4) % 8] @ v_blocks[q] @ pinvs[q] for q in range(8)]
    w_blocks = [ps[q] @ w_blocks[q] @ pinvs[q] for q in range(8)]
    delta_row = delta_row @ pinvs[4]
    prime_col = ps[1] @ prime_col

    cx = CochainComplex(cf_space, GradedMap(cf_space, cf_space, 1, tuple(d_blocks)))
    cs = ChainSpecial(delta_row, prime_col, GradedMap(cf_space, cf_space, 4, tuple(v_blocks)))
    coh = cohomology(cx)
    if coh.h_space.dims != tuple(h):
        raise Infeasible(f"planted cohomology dims not reproduced (seed {cfg.seed})")
    pair_induced = induce_special(cs, coh, cfg.n_max)
    chain_w = GradedMap(cf_space, cf_space, 0, tuple(w_blocks))
    w = induced_map(chain_w, coh, coh)

    inst = Instance(
        space=coh.h_space,
        pair=pair_induced,
        w=w,
        w_label=f"W(seed={cfg.seed})",
        convention=COHOMOLOGY,
        level=LEVEL_CHAIN,
        complex=cx,
        chain_special=cs,
        chain_w=chain_w,
        metadata={
            "name": f"genchain-{cfg.seed}",
            "seed": cfg.seed,
            "generator": "gen_chain_instance",
            "case": pair_induced.case.value,
            "planted_h_dims": list(h),
            **_planted_metadata(planted_a, planted_b),
        },
    )
    report = validate_relations(CobordismMap(w), pair_induced)
    if not report.ok:
        raise Infeasible(f"generated chain instance failed validation (seed {cfg.seed})")
    return inst


def gen_chain_instance(cfg: GenConfig) -> Instance:
    """Deterministic-in-seed chain-level instance with planted cohomology."""
    rng = random.Random(cfg.seed)
    for _ in range(RETRY_BOUND):
        try:
            return _build_chain_instance(rng, cfg)
        except _Retry:
            continue
    raise Infeasible(f"no valid chain instance within {RETRY_BOUND} attempts for seed {cfg.seed}")


def product_cobordism(instance: Instance) -> Instance:
    """Same spaces and special pair, cobordism map replaced by identity."""
    chain_ident = GradedMap.identity(instance.complex.space) if instance.complex else None
    return instance.with_w(GradedMap.identity(instance.space), "product", chain_ident)


def redraw_cobordism(instance: Instance, seed: int, entry_bound: int = 3) -> Instance:
    """Fresh valid cobordism map for the same space and special pair.

    Used to exercise independence of the reported invariants from the
    choice of map; new correction coefficients are planted and a new
    solution of the relation system is drawn.
    """
    rng = random.Random(seed)
    sp, space = instance.pair, instance.space
    for _ in range(RETRY_BOUND):
        try:
            solved, _, _ = _constrained_blocks(rng, space, sp, entry_bound)
        except _Retry:
            continue
        blocks = [
            solved[q] if solved[q] is not None
            else _rand_matrix(rng, space.dim(q), space.dim(q), entry_bound)
            for q in range(8)
        ]
        w = GradedMap(space, space, 0, tuple(blocks))
        if validate_relations(CobordismMap(w), sp).ok:
            # the fresh map has no chain-level lift, so the result is a
            # plain cohomology-level instance
            return dataclasses.replace(
                instance,
                w=w, w_label=f"W(redraw={seed})",
                level=LEVEL_COHOMOLOGY, complex=None, chain_special=None, chain_w=None,
            )
    raise Infeasible(f"no replacement cobordism within {RETRY_BOUND} attempts for seed {seed}")
