"""Cobordism-induced maps and the splitting verdict.

Validates the relations tying a degree-preserving self-map to the special
families, extracts the correction coefficients, induces the map on the
reduced theory, computes the Lefschetz-number invariants, checks the two
splitting identities, and replays the filtration towers step by step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InvarianceViolation,
    NoSolution,
    RelationViolation,
    StepMismatch,
    TheoremCounterexample,
)
from .froyshov import (
    Case,
    ReducedResult,
    SpecialPair,
    delta_degree,
    delta_prime_degree,
    froyshov_h,
    reduced,
)
from .graded import GradedMap, lefschetz, regrade
from .instance import COHOMOLOGY, HOMOLOGY, Instance
from .qlinalg import (
    Matrix,
    Subspace,
    induced_on_quotient,
    intersect,
    kernel_basis,
    quotient,
    restrict,
    rref,
    solve,
    trace,
)


@dataclass(frozen=True)
class CobordismMap:
    """Degree-preserving self-map of a graded cohomology space."""

    w: GradedMap
    label: str = "W"

    def __post_init__(self):
        if self.w.shift != 0 or self.w.source != self.w.target:
            raise ValueError("cobordism map must be a degree-preserving endomap")


@dataclass(frozen=True)
class RelationViolationRecord:
    relation: str   # "delta" or "delta_prime"
    n: int
    degree: int
    defect: Matrix


@dataclass(frozen=True)
class RelationReport:
    """Solved correction coefficients and any exact relation failures.

    Coefficients exist only for same-parity pairs (i, n) with i < n; the
    grading forces the opposite-parity ones to vanish.  When the lower
    family members are linearly dependent the solve is underdetermined;
    the reported solution zeroes the free variables and the pair (i, n)
    ambiguity is flagged through ``nonunique_a`` / ``nonunique_b``.
    """

    ok: bool
    a: dict[tuple[int, int], Fraction]
    b: dict[tuple[int, int], Fraction]
    violations: tuple[RelationViolationRecord, ...]
    a_integral: bool
    b_integral: bool
    nonunique_a: tuple[int, ...]
    nonunique_b: tuple[int, ...]

    def raise_if_invalid(self) -> None:
        for v in self.violations:
            if v.n == 0:
                raise RelationViolation(
                    f"degree-zero {v.relation} relation fails at degree {v.degree}"
                )
        if self.violations:
            v = self.violations[0]
            raise NoSolution(
                f"{v.relation} relation defect at n={v.n} is outside the span of lower members"
            )


def _same_parity_lower(n: int):
    return range(n % 2, n, 2)


def validate_relations(w: CobordismMap, sp: SpecialPair) -> RelationReport:
    """Check the relations between the map and both special families.

    The degree-zero members must be fixed exactly (functional side:
    delta_0 o W = delta_0; vector side: W o delta'_0 = delta'_0).  For
    n >= 1 the defect of member n must lie in the span of the lower
    same-parity members; the coefficients of one exact decomposition are
    returned, with integrality and uniqueness reported.
    """
    a: dict[tuple[int, int], Fraction] = {}
    b: dict[tuple[int, int], Fraction] = {}
    violations: list[RelationViolationRecord] = []
    nonunique_a: list[int] = []
    nonunique_b: list[int] = []

    for n in range(sp.n_max + 1):
        deg = delta_degree(n)
        block = w.w.block(deg)
        defect = sp.deltas[n] @ block - sp.deltas[n]
        lower = list(_same_parity_lower(n))
        if n == 0:
            if not defect.is_zero:
                violations.append(RelationViolationRecord("delta", 0, deg, defect))
            continue
        stacked = Matrix.zeros(0, sp.deltas[n].cols)
        for i in lower:
            stacked = stacked.vstack(sp.deltas[i])
        coeffs = solve(stacked.transpose(), defect.transpose())
        if coeffs is None:
            violations.append(RelationViolationRecord("delta", n, deg, defect))
            continue
        for idx, i in enumerate(lower):
            a[(i, n)] = coeffs.entry(idx, 0)
        if rref(stacked).rank < len(lower):
            nonunique_a.append(n)

    for n in range(sp.n_max + 1):
        deg = delta_prime_degree(n)
        block = w.w.block(deg)
        defect = block @ sp.deltas_prime[n] - sp.deltas_prime[n]
        lower = list(_same_parity_lower(n))
        if n == 0:
            if not defect.is_zero:
                violations.append(RelationViolationRecord("delta_prime", 0, deg, defect))
            continue
        stacked = Matrix.zeros(sp.deltas_prime[n].rows, 0)
        for i in lower:
            stacked = stacked.hstack(sp.deltas_prime[i])
        coeffs = solve(stacked, defect)
        if coeffs is None:
            violations.append(RelationViolationRecord("delta_prime", n, deg, defect))
            continue
        for idx, i in enumerate(lower):
            b[(i, n)] = coeffs.entry(idx, 0)
        if rref(stacked).rank < len(lower):
            nonunique_b.append(n)

    return RelationReport(
        ok=not violations,
        a=a,
        b=b,
        violations=tuple(violations),
        a_integral=all(x.denominator == 1 for x in a.values()),
        b_integral=all(x.denominator == 1 for x in b.values()),
        nonunique_a=tuple(nonunique_a),
        nonunique_b=tuple(nonunique_b),
    )


def reduced_induced(w: CobordismMap, red: ReducedResult) -> GradedMap:
    """Map induced on Z/B, after checking both subspaces are invariant."""
    blocks = []
    for q in range(8):
        z, bq, qs = red.z[q], red.b[q], red.quotients[q]
        try:
            on_z = restrict(w.w.block(q), z)
        except InvarianceViolation:
            raise InvarianceViolation(f"W does not preserve Z^{q}") from None
        try:
            blocks.append(induced_on_quotient(on_z, qs))
        except InvarianceViolation:
            raise InvarianceViolation(f"W does not preserve B^{q}") from None
    return GradedMap(red.hf_red, red.hf_red, 0, tuple(blocks))


def lambda_fo(w: CobordismMap, convention: str = COHOMOLOGY) -> Fraction:
    """Half the Lefschetz number, signed by the grading convention."""
    lef = lefschetz(w.w)
    if convention == HOMOLOGY:
        return lef / 2
    if convention == COHOMOLOGY:
        return -lef / 2
    raise ValueError(f"unknown convention {convention!r}")


def h_of_x(w: CobordismMap, w_hat: GradedMap, convention: str = COHOMOLOGY) -> Fraction:
    """Half the difference of reduced and full Lefschetz numbers."""
    lef_w = lefschetz(w.w)
    lef_hat = lefschetz(w_hat)
    if convention == HOMOLOGY:
        return (lef_hat - lef_w) / 2
    if convention == COHOMOLOGY:
        return (lef_w - lef_hat) / 2
    raise ValueError(f"unknown convention {convention!r}")


@dataclass(frozen=True)
class TowerStep:
    index: int        # family index of this step
    dim: int          # dim of the stage after the step
    trace: Fraction   # trace of the map on that stage
    active: bool      # member acted nontrivially on the previous stage
    drop: Fraction    # previous trace minus this trace


@dataclass(frozen=True)
class TowerLog:
    degree: int
    kind: str         # "kernel" (intersecting kernels) or "span" (growing quotients)
    start_dim: int
    start_trace: Fraction
    steps: tuple[TowerStep, ...]
    final_dim: int
    final_trace: Fraction
    removed: int      # dim(H/Z) for kernel towers, dim(B) for span towers


@dataclass(frozen=True)
class CaseTrace:
    case: Case
    towers: tuple[TowerLog, ...]

    def tower(self, degree: int) -> TowerLog:
        for t in self.towers:
            if t.degree == degree:
                return t
        raise ValueError(f"no tower at degree {degree}")


def _kernel_tower(block: Matrix, members, degree: int) -> TowerLog:
    """Replay a decreasing tower of common kernels under a fixed map.

    Each step intersects with one more functional's kernel; the map
    restricts to every stage because its defect is spanned by earlier
    members, which vanish there.  The trace must drop by exactly one when
    the functional is nonzero on the previous stage and stay put
    otherwise; the telescoped conclusion equates the total drop with the
    codimension of the final stage.
    """
    dim = block.rows
    cur = Subspace.full(dim)
    prev_trace = trace(block)
    start_trace = prev_trace
    steps = []
    for k, f in members:
        active = not (f @ cur.basis).is_zero
        cur = intersect(cur, kernel_basis(f))
        t = trace(restrict(block, cur))
        drop = prev_trace - t
        expected = Fraction(1 if active else 0)
        if drop != expected:
            raise StepMismatch(
                f"kernel tower at degree {degree}: step {k} dropped {drop}, expected {expected}"
            )
        steps.append(TowerStep(k, cur.dim, t, active, drop))
        prev_trace = t
    final_trace = prev_trace
    if start_trace != (dim - cur.dim) + final_trace:
        raise StepMismatch(f"kernel tower at degree {degree}: telescoped identity fails")
    return TowerLog(degree, "kernel", dim, start_trace, tuple(steps), cur.dim, final_trace, dim - cur.dim)


def _span_tower(block: Matrix, members, degree: int) -> TowerLog:
    """Replay an increasing tower of spans through the quotient maps.

    Each step enlarges the span by one vector and induces the map on the
    shrinking quotient; the trace drops by one exactly when the new
    vector's class in the previous quotient is nonzero.  Two exact
    identities are checked at the end: the induction conclusion relating
    the first quotient's trace to the final one, and the exact-sequence
    step relating it to the trace on the full space.
    """
    dim = block.rows
    cur = Subspace.zero(dim)
    start_trace = trace(block)
    prev_trace = start_trace
    steps = []
    first_quotient_trace = None
    first_span_dim = None
    for k, vec in members:
        active = not cur.contains(Subspace.span(dim, vec))
        cur = cur.sum_with(Subspace.span(dim, vec))
        qs = quotient(dim, cur)
        t = trace(induced_on_quotient(block, qs))
        drop = prev_trace - t
        expected = Fraction(1 if active else 0)
        if drop != expected:
            raise StepMismatch(
                f"span tower at degree {degree}: step {k} dropped {drop}, expected {expected}"
            )
        steps.append(TowerStep(k, dim - cur.dim, t, active, drop))
        prev_trace = t
        if first_quotient_trace is None:
            first_quotient_trace = t
            first_span_dim = cur.dim
    final_trace = prev_trace
    if steps:
        if first_quotient_trace != (cur.dim - first_span_dim) + final_trace:
            raise StepMismatch(f"span tower at degree {degree}: induction conclusion fails")
        if first_quotient_trace != start_trace - first_span_dim:
            raise StepMismatch(f"span tower at degree {degree}: exact-sequence step fails")
    if start_trace - final_trace != cur.dim:
        raise StepMismatch(f"span tower at degree {degree}: total drop differs from dim B")
    return TowerLog(degree, "span", dim, start_trace, tuple(steps), dim - cur.dim, final_trace, cur.dim)


def trace_case1(instance: Instance) -> CaseTrace:
    """Replay the kernel towers in degrees 0 and 4 (vanishing vector side)."""
    sp = instance.pair
    if sp.case is Case.DELTA_PRIME_SIDE:
        raise ValueError("kernel-tower replay needs a vanishing delta' family")
    w = instance.w
    towers = (
        _kernel_tower(w.block(0), [(n, sp.deltas[n]) for n in range(1, sp.n_max + 1, 2)], 0),
        _kernel_tower(w.block(4), [(n, sp.deltas[n]) for n in range(0, sp.n_max + 1, 2)], 4),
    )
    return CaseTrace(sp.case, towers)


def trace_case2(instance: Instance) -> CaseTrace:
    """Replay the span towers in degrees 1 and 5 (vanishing functional side)."""
    sp = instance.pair
    if sp.case is Case.DELTA_SIDE:
        raise ValueError("span-tower replay needs a vanishing delta family")
    w = instance.w
    towers = (
        _span_tower(w.block(1), [(n, sp.deltas_prime[n]) for n in range(0, sp.n_max + 1, 2)], 1),
        _span_tower(w.block(5), [(n, sp.deltas_prime[n]) for n in range(1, sp.n_max + 1, 2)], 5),
    )
    return CaseTrace(sp.case, towers)


def trace_towers(instance: Instance) -> CaseTrace:
    """Replay the towers matching the instance's case."""
    if instance.pair.case is Case.DELTA_PRIME_SIDE:
        return trace_case2(instance)
    return trace_case1(instance)


@dataclass(frozen=True)
class SplittingVerdict:
    """All five invariants plus the two identities, in one convention.

    The Lefschetz numbers are reported in the instance's declared
    convention; the three derived invariants have convention-independent
    values.  ``identity_splitting`` is the statement that lambda plus h(X)
    equals half the reduced Lefschetz number read in the homology
    convention (equivalently minus half of it in the cohomology one).
    """

    lef_w: Fraction
    lef_w_hat: Fraction
    lambda_fo: Fraction
    h_x: Fraction
    h_y: Fraction
    identity_hx_equals_hy: bool
    identity_splitting: bool
    convention: str
    reduced_dims: tuple[int, ...]
    hf_dims: tuple[int, ...]
    case: Case
    w_label: str
    trace_log: CaseTrace | None = None

    @property
    def passed(self) -> bool:
        return self.identity_hx_equals_hy and self.identity_splitting


def verify_splitting(
    instance: Instance, with_trace: bool = False, raise_on_failure: bool = False
) -> SplittingVerdict:
    """Validate an instance and check both splitting identities exactly.

    Validation errors propagate.  On a validated instance a failing
    identity would contradict the trace replay that the towers certify,
    so with ``raise_on_failure`` it is reported as TheoremCounterexample;
    seeing one means an engine bug, not interesting mathematics.
    """
    sp = instance.pair
    sp.validate_against(instance.space)
    w = CobordismMap(instance.w, instance.w_label)
    validate_relations(w, sp).raise_if_invalid()
    red = reduced(instance.space, sp)
    w_hat = reduced_induced(w, red)

    lef_w_coh = lefschetz(w.w)
    lef_hat_coh = lefschetz(w_hat)
    lam = lambda_fo(w, COHOMOLOGY)
    hx = h_of_x(w, w_hat, COHOMOLOGY)
    hy = froyshov_h(instance.space, red, COHOMOLOGY)

    # regraded cross-check: recompute both Lefschetz numbers after the
    # degree relabeling and re-derive the invariants in the other convention
    w_re = CobordismMap(regrade(w.w), w.label)
    hat_re = regrade(w_hat)
    if lefschetz(w_re.w) != -lef_w_coh or lefschetz(hat_re) != -lef_hat_coh:
        raise TheoremCounterexample("regrade failed to negate a Lefschetz number")
    if lambda_fo(w_re, HOMOLOGY) != lam or h_of_x(w_re, hat_re, HOMOLOGY) != hx:
        raise TheoremCounterexample("convention cross-check failed")

    view_hom = instance.convention == HOMOLOGY
    verdict = SplittingVerdict(
        lef_w=-lef_w_coh if view_hom else lef_w_coh,
        lef_w_hat=-lef_hat_coh if view_hom else lef_hat_coh,
        lambda_fo=lam,
        h_x=hx,
        h_y=hy,
        identity_hx_equals_hy=hx == hy,
        identity_splitting=lam + hx == -lef_hat_coh / 2,
        convention=instance.convention,
        reduced_dims=regrade(red.hf_red).dims if view_hom else red.hf_red.dims,
        hf_dims=regrade(instance.space).dims if view_hom else instance.space.dims,
        case=sp.case,
        w_label=instance.w_label,
        trace_log=trace_towers(instance) if with_trace else None,
    )
    if raise_on_failure and not verdict.passed:
        raise TheoremCounterexample(
            f"splitting identities failed on a validated instance: {verdict}"
        )
    return verdict


@dataclass(frozen=True)
class RefinementReport:
    """Degreewise trace differences against the dimensions they must equal.

    On the functional side the difference of traces in degrees 0 and 4
    equals the codimension of Z there; on the vector side the difference
    in degrees 1 and 5 equals the dimension of B; every other degree
    contributes no difference at all.
    """

    diffs: tuple[Fraction, ...]
    expected: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return all(d == e for d, e in zip(self.diffs, self.expected))


def trace_refinement(instance: Instance) -> RefinementReport:
    sp = instance.pair
    w = CobordismMap(instance.w, instance.w_label)
    red = reduced(instance.space, sp)
    w_hat = reduced_induced(w, red)
    diffs = tuple(trace(w.w.block(q)) - trace(w_hat.block(q)) for q in range(8))
    expected = []
    for q in range(8):
        if q in (0, 4):
            expected.append(instance.space.dim(q) - red.z[q].dim)
        elif q in (1, 5):
            expected.append(red.b[q].dim)
        else:
            expected.append(0)
    return RefinementReport(diffs, tuple(expected))
