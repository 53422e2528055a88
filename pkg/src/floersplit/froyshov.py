"""Special boundary structure and the reduced theory.

Chain level: a functional on degree-4 cochains vanishing on coboundaries,
a cocycle vector in degree 1, and a degree +4 chain operator.  Cohomology
level: the induced families delta_n (functionals on degrees 4, 0
alternating with n) and delta'_n (vectors in degrees 1, 5 alternating),
the dichotomy between them, the subspaces Z and B they carve out, the
reduced groups Z/B, and the Froyshov invariant as half an Euler
characteristic difference.

The degree +4 operator is required to be a strict chain map.  That is the
minimal condition making the induced families well defined on cohomology;
genuinely geometric data satisfies a weaker homotopy identity that this
engine does not model.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DichotomyViolation, InclusionViolation, ValidationError
from .graded import CochainComplex, CohomologyResult, GradedMap, GradedSpace, euler, induced_map
from .qlinalg import Matrix, QuotientSpace, Subspace, intersect, kernel_basis, quotient


class Case(Enum):
    """Which special family is allowed to be nonzero."""

    DELTA_SIDE = "delta_side"
    DELTA_PRIME_SIDE = "delta_prime_side"
    BOTH_ZERO = "both_zero"


def delta_degree(n: int) -> int:
    """Degree carrying the n-th functional: 4 for even n, 0 for odd."""
    return (4 - 4 * n) % 8


def delta_prime_degree(n: int) -> int:
    """Degree carrying the n-th vector: 1 for even n, 5 for odd."""
    return (1 + 4 * n) % 8


@dataclass(frozen=True)
class ChainSpecial:
    """Chain-level special data: functional, vector, degree +4 operator."""

    delta: Matrix        # 1 x dim CF^4
    delta_prime: Matrix  # dim CF^1 x 1
    v: GradedMap         # shift +4 chain map


def validate_chain_special(cs: ChainSpecial, cx: CochainComplex) -> None:
    """Check the chain-level invariants against a complex.

    The functional must kill coboundaries (delta o d_3 = 0), the vector
    must be a cocycle (d_1 o delta' = 0), and the degree +4 operator must
    commute with the differential.
    """
    if cs.delta.rows != 1 or cs.delta.cols != cx.space.dim(4):
        raise ValidationError("delta must be a functional on the degree-4 cochains")
    if cs.delta_prime.cols != 1 or cs.delta_prime.rows != cx.space.dim(1):
        raise ValidationError("delta' must be a vector in the degree-1 cochains")
    if not (cs.delta @ cx.d.block(3)).is_zero:
        raise ValidationError("delta does not vanish on coboundaries (delta o d != 0)")
    if not (cx.d.block(1) @ cs.delta_prime).is_zero:
        raise ValidationError("delta'(1) is not a cocycle (d o delta' != 0)")
    if cs.v.shift != 4 or cs.v.source != cx.space or cs.v.target != cx.space:
        raise ValidationError("v must be a degree +4 endomap of the complex")
    for q in range(8):
        if cs.v.block(q + 1) @ cx.d.block(q) != cx.d.block(q + 4) @ cs.v.block(q):
            raise ValidationError(f"v is not a chain map at degree {q}")


@dataclass(frozen=True)
class SpecialPair:
    """Cohomology-level families with their case tag.

    ``deltas[n]`` is a row functional on degree 4 (n even) or 0 (n odd);
    ``deltas_prime[n]`` is a column vector in degree 1 (n even) or 5
    (n odd).  Exactly one family may be nonzero; the other is stored as
    zero matrices, which encodes the dichotomy at the type level.
    """

    n_max: int
    deltas: tuple[Matrix, ...]
    deltas_prime: tuple[Matrix, ...]
    case: Case

    def __post_init__(self):
        if self.n_max < 0:
            raise ValidationError("n_max must be nonnegative")
        if len(self.deltas) != self.n_max + 1 or len(self.deltas_prime) != self.n_max + 1:
            raise ValidationError("families must have entries for 0 <= n <= n_max")
        d_nonzero = any(not m.is_zero for m in self.deltas)
        p_nonzero = any(not m.is_zero for m in self.deltas_prime)
        if d_nonzero and p_nonzero:
            raise DichotomyViolation("both special families have a nonzero member")
        if self.case is Case.DELTA_SIDE and p_nonzero:
            raise DichotomyViolation("delta-side pair carries a nonzero delta' member")
        if self.case is Case.DELTA_PRIME_SIDE and d_nonzero:
            raise DichotomyViolation("delta'-side pair carries a nonzero delta member")
        if self.case is Case.BOTH_ZERO and (d_nonzero or p_nonzero):
            raise ValidationError("both-zero pair carries a nonzero member")

    def validate_against(self, h: GradedSpace) -> None:
        for n, m in enumerate(self.deltas):
            if (m.rows, m.cols) != (1, h.dim(delta_degree(n))):
                raise ValidationError(f"deltas[{n}] has the wrong shape for degree {delta_degree(n)}")
        for n, m in enumerate(self.deltas_prime):
            if (m.rows, m.cols) != (h.dim(delta_prime_degree(n)), 1):
                raise ValidationError(
                    f"deltas_prime[{n}] has the wrong shape for degree {delta_prime_degree(n)}"
                )

    @staticmethod
    def both_zero(h: GradedSpace, n_max: int = 1) -> "SpecialPair":
        return SpecialPair(
            n_max,
            tuple(Matrix.zeros(1, h.dim(delta_degree(n))) for n in range(n_max + 1)),
            tuple(Matrix.zeros(h.dim(delta_prime_degree(n)), 1) for n in range(n_max + 1)),
            Case.BOTH_ZERO,
        )


def derive_case(deltas, deltas_prime) -> Case:
    d_nonzero = any(not m.is_zero for m in deltas)
    p_nonzero = any(not m.is_zero for m in deltas_prime)
    if d_nonzero and p_nonzero:
        raise DichotomyViolation("both special families are nonzero on cohomology")
    if d_nonzero:
        return Case.DELTA_SIDE
    if p_nonzero:
        return Case.DELTA_PRIME_SIDE
    return Case.BOTH_ZERO


def induce_special(cs: ChainSpecial, coh: CohomologyResult, n_max: int = 4) -> SpecialPair:
    """Induce the cohomology-level families from chain-level data.

    Members are computed as the class-level iterates of the degree +4
    operator applied to the induced functional and vector.  The family is
    extended beyond ``n_max`` until the span of each parity subfamily
    stops growing; each subfamily is a Krylov sequence of a fixed
    operator, so one non-growing step means the span is final and the
    subspaces Z and B computed from the family are stable.
    """
    if n_max < 1:
        raise ValidationError("n_max must be at least 1")
    cx = coh.complex
    validate_chain_special(cs, cx)
    vh = induced_map(cs.v, coh, coh)
    h = coh.h_space

    cur_delta = cs.delta @ coh.rep_section[4]
    cur_prime = coh.class_projection[1] @ cs.delta_prime
    deltas: list[Matrix] = []
    primes: list[Matrix] = []
    # span of each parity subfamily; key (family, parity)
    spans = {
        ("delta", 0): Subspace.zero(h.dim(4)),
        ("delta", 1): Subspace.zero(h.dim(0)),
        ("prime", 0): Subspace.zero(h.dim(1)),
        ("prime", 1): Subspace.zero(h.dim(5)),
    }
    done = {k: False for k in spans}
    hard_cap = n_max + 2 * (max(h.dims) + 2)
    n = -1
    while True:
        n += 1
        deltas.append(cur_delta)
        primes.append(cur_prime)
        p = n % 2
        for fam, member in (("delta", cur_delta.transpose()), ("prime", cur_prime)):
            grown = spans[fam, p].sum_with(Subspace.span(member.rows, member))
            if grown.dim == spans[fam, p].dim:
                done[fam, p] = True
            spans[fam, p] = grown
        if n >= n_max and all(done.values()):
            break
        if n >= hard_cap:
            raise RuntimeError("family spans failed to stabilize below the hard cap")
        cur_delta = cur_delta @ vh.block(delta_degree(n + 1))
        cur_prime = vh.block(delta_prime_degree(n)) @ cur_prime
    case = derive_case(deltas, primes)
    return SpecialPair(n, tuple(deltas), tuple(primes), case)


def z_subspaces(h: GradedSpace, sp: SpecialPair) -> tuple[Subspace, ...]:
    """Common kernels of the functionals: cut down in degrees 0 and 4 only."""
    sp.validate_against(h)
    out = []
    for q in range(8):
        if q == 0:
            z = Subspace.full(h.dim(0))
            for n in range(1, sp.n_max + 1, 2):
                z = intersect(z, kernel_basis(sp.deltas[n]))
        elif q == 4:
            z = Subspace.full(h.dim(4))
            for n in range(0, sp.n_max + 1, 2):
                z = intersect(z, kernel_basis(sp.deltas[n]))
        else:
            z = Subspace.full(h.dim(q))
        out.append(z)
    return tuple(out)


def b_subspaces(h: GradedSpace, sp: SpecialPair) -> tuple[Subspace, ...]:
    """Spans of the vectors: nonzero in degrees 1 and 5 only."""
    sp.validate_against(h)
    out = []
    for q in range(8):
        if q == 1:
            cols = [sp.deltas_prime[n] for n in range(0, sp.n_max + 1, 2)]
        elif q == 5:
            cols = [sp.deltas_prime[n] for n in range(1, sp.n_max + 1, 2)]
        else:
            cols = []
        b = Subspace.zero(h.dim(q))
        for c in cols:
            b = b.sum_with(Subspace.span(h.dim(q), c))
        out.append(b)
    return tuple(out)


@dataclass(frozen=True)
class ReducedResult:
    """Z and B subspaces, the reduced dimensions, and quotient structure.

    ``quotients[q]`` presents Z^q / B^q with ambient space the Z^q
    coordinates (so its subspace is B^q rewritten in the basis of Z^q).
    """

    z: tuple[Subspace, ...]
    b: tuple[Subspace, ...]
    hf_red: GradedSpace
    quotients: tuple[QuotientSpace, ...]


def reduced_from_subspaces(
    h: GradedSpace, z: tuple[Subspace, ...], b: tuple[Subspace, ...]
) -> ReducedResult:
    quots, dims = [], []
    for q in range(8):
        if z[q].ambient_dim != h.dim(q) or b[q].ambient_dim != h.dim(q):
            raise ValidationError(f"subspace ambient mismatch at degree {q}")
        if not z[q].contains(b[q]):
            raise InclusionViolation(f"B^{q} is not contained in Z^{q}")
        b_in_z = z[q].coordinates_of(b[q].basis)
        qs = quotient(z[q].dim, Subspace.span(z[q].dim, b_in_z))
        quots.append(qs)
        dims.append(qs.dim)
    return ReducedResult(tuple(z), tuple(b), GradedSpace(tuple(dims)), tuple(quots))


def reduced(h: GradedSpace, sp: SpecialPair) -> ReducedResult:
    """The reduced theory Z/B determined by a special pair."""
    return reduced_from_subspaces(h, z_subspaces(h, sp), b_subspaces(h, sp))


def froyshov_h(h: GradedSpace, red: ReducedResult, convention: str = "cohomology") -> Fraction:
    """Half the Euler characteristic difference of full and reduced theories.

    Cohomology convention: (chi(HF) - chi(reduced)) / 2; the signs swap in
    homology convention.  The value is an integer for genuinely periodic
    data; half-integers are possible on synthetic instances and are
    reported as-is.
    """
    if convention == "cohomology":
        return Fraction(euler(h) - euler(red.hf_red), 2)
    if convention == "homology":
        return Fraction(euler(red.hf_red) - euler(h), 2)
    raise ValueError(f"unknown convention {convention!r}")


@dataclass(frozen=True)
class PeriodicityReport:
    """Advisory 4-periodicity check; synthetic instances may fail it."""

    hf_periodic: bool
    reduced_periodic: bool


def check_periodicity(h: GradedSpace, red: ReducedResult) -> PeriodicityReport:
    def per(dims):
        return all(dims[q] == dims[(q + 4) % 8] for q in range(8))

    return PeriodicityReport(per(h.dims), per(red.hf_red.dims))


@dataclass(frozen=True)
class StabilizationReport:
    """Index after which each tower stops moving; None means it never moved."""

    z0: int | None
    z4: int | None
    b1: int | None
    b5: int | None


def stabilization_indices(h: GradedSpace, sp: SpecialPair) -> StabilizationReport:
    sp.validate_against(h)

    def kernel_tower(degree: int, indices):
        cur = Subspace.full(h.dim(degree))
        last_change = None
        for n in indices:
            nxt = intersect(cur, kernel_basis(sp.deltas[n]))
            if nxt != cur:
                last_change = n
            cur = nxt
        return last_change

    def span_tower(degree: int, indices):
        cur = Subspace.zero(h.dim(degree))
        last_change = None
        for n in indices:
            nxt = cur.sum_with(Subspace.span(h.dim(degree), sp.deltas_prime[n]))
            if nxt != cur:
                last_change = n
            cur = nxt
        return last_change

    return StabilizationReport(
        z0=kernel_tower(0, range(1, sp.n_max + 1, 2)),
        z4=kernel_tower(4, range(0, sp.n_max + 1, 2)),
        b1=span_tower(1, range(0, sp.n_max + 1, 2)),
        b5=span_tower(5, range(1, sp.n_max + 1, 2)),
    )
