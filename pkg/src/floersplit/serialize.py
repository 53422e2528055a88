"""Versioned JSON instance documents: parsing, validation, export.

Documents carry their grading convention; everything degree-indexed in a
homology-convention document is relabeled on load (degree q to 5 - q mod
8) so the engine always works in the cohomology convention, and written
back out the same way so the user's numbers round-trip bit-exactly.
Rational entries are integers or "p/q" strings, never floats.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cobordism import CobordismMap, reduced_induced, validate_relations
from .errors import ParseError
from .froyshov import (
    Case,
    ChainSpecial,
    SpecialPair,
    delta_degree,
    delta_prime_degree,
    induce_special,
    reduced,
)
from .graded import CochainComplex, GradedMap, GradedSpace, cohomology, induced_map, regrade
from .instance import COHOMOLOGY, HOMOLOGY, Instance, LEVEL_CHAIN, LEVEL_COHOMOLOGY

SCHEMA_VERSION = "1"


def _doc_degree(q_internal: int, convention: str) -> int:
    """Document-side index of an internal degree."""
    return q_internal if convention == COHOMOLOGY else (5 - q_internal) % 8


def rational_to_json(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from_json(v) -> Fraction:
    if isinstance(v, bool):
        raise ParseError("booleans are not rational entries")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"bad rational string {v!r}") from e
    raise ParseError(f"rational entries must be integers or 'p/q' strings, got {type(v).__name__}")


def matrix_to_json(m) -> list:
    return [[rational_to_json(x) for x in row] for row in m.entries]


def matrix_from_json(obj, rows: int, cols: int, where: str):
    from .qlinalg import Matrix

    if not isinstance(obj, list) or len(obj) != rows:
        raise ParseError(f"{where}: expected {rows} rows, got {obj!r}")
    data = []
    for r in obj:
        if not isinstance(r, list) or len(r) != cols:
            raise ParseError(f"{where}: expected rows of length {cols}")
        data.append([rational_from_json(x) for x in r])
    return Matrix.from_rows(data, cols=cols)


def _graded_map_from_json(obj, space: GradedSpace, shift: int, where: str) -> GradedMap:
    if not isinstance(obj, list) or len(obj) != 8:
        raise ParseError(f"{where}: expected 8 blocks")
    blocks = [
        matrix_from_json(obj[q], space.dim(q + shift), space.dim(q), f"{where}[{q}]")
        for q in range(8)
    ]
    return GradedMap(space, space, shift, tuple(blocks))


def _dims_from_json(obj, where: str) -> GradedSpace:
    if not isinstance(obj, list) or len(obj) != 8:
        raise ParseError(f"{where}: expected 8 dimensions")
    for d in obj:
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            raise ParseError(f"{where}: dimensions must be nonnegative integers")
    return GradedSpace.of(obj)


def _family_from_json(doc_special, h_doc: GradedSpace, convention: str, n_max: int):
    """Parse both families; missing or empty arrays mean all-zero."""
    from .qlinalg import Matrix

    deltas, primes = [], []
    raw_d = doc_special.get("deltas") or []
    raw_p = doc_special.get("deltas_prime") or []
    if raw_d and len(raw_d) != n_max + 1:
        raise ParseError("deltas must have n_max + 1 members or be empty")
    if raw_p and len(raw_p) != n_max + 1:
        raise ParseError("deltas_prime must have n_max + 1 members or be empty")
    for n in range(n_max + 1):
        dim = h_doc.dims[_doc_degree(delta_degree(n), convention)]
        if raw_d:
            deltas.append(matrix_from_json(raw_d[n], 1, dim, f"deltas[{n}]"))
        else:
            deltas.append(Matrix.zeros(1, dim))
        pdim = h_doc.dims[_doc_degree(delta_prime_degree(n), convention)]
        if raw_p:
            primes.append(matrix_from_json(raw_p[n], pdim, 1, f"deltas_prime[{n}]"))
        else:
            primes.append(Matrix.zeros(pdim, 1))
    return tuple(deltas), tuple(primes)


def validate_instance(instance: Instance) -> None:
    """Run the full structural validation an instance must pass.

    Checks the family shapes, the relations (raising the typed error),
    the containment of B in Z, and the invariance needed to induce the
    map on the reduced theory.
    """
    instance.pair.validate_against(instance.space)
    w = CobordismMap(instance.w, instance.w_label)
    validate_relations(w, instance.pair).raise_if_invalid()
    red = reduced(instance.space, instance.pair)
    reduced_induced(w, red)


def document_to_instance(doc: Any) -> Instance:
    """Parse, regrade to the internal convention, and fully validate."""
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {doc.get('schema_version')!r}")
    convention = doc.get("convention")
    if convention not in (HOMOLOGY, COHOMOLOGY):
        raise ParseError(f"unknown convention {convention!r}")
    level = doc.get("level")
    if level not in (LEVEL_COHOMOLOGY, LEVEL_CHAIN):
        raise ParseError(f"unknown level {level!r}")
    metadata = doc.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise ParseError("metadata must be an object")
    cob = doc.get("cobordism")
    if not isinstance(cob, dict) or "blocks" not in cob:
        raise ParseError("cobordism section with blocks is required")
    label = str(cob.get("label", "W"))
    spaces = doc.get("spaces")
    if not isinstance(spaces, dict):
        raise ParseError("spaces section is required")

    if level == LEVEL_COHOMOLOGY:
        h_doc = _dims_from_json(spaces.get("hf"), "spaces.hf")
        special = doc.get("special")
        if not isinstance(special, dict):
            raise ParseError("special section is required")
        n_max = special.get("n_max")
        if not isinstance(n_max, int) or isinstance(n_max, bool) or n_max < 0:
            raise ParseError("special.n_max must be a nonnegative integer")
        case_str = special.get("case")
        try:
            case = Case(case_str)
        except ValueError:
            raise ParseError(f"unknown case {case_str!r}") from None
        deltas, primes = _family_from_json(special, h_doc, convention, n_max)
        w_doc = _graded_map_from_json(cob["blocks"], h_doc, 0, "cobordism.blocks")
        if convention == HOMOLOGY:
            space, w = regrade(h_doc), regrade(w_doc)
        else:
            space, w = h_doc, w_doc
        pair = SpecialPair(n_max, deltas, primes, case)
        inst = Instance(
            space=space, pair=pair, w=w, w_label=label,
            convention=convention, level=level, metadata=metadata,
        )
        validate_instance(inst)
        return inst

    cf_doc = _dims_from_json(spaces.get("cf"), "spaces.cf")
    d_shift_doc = 1 if convention == COHOMOLOGY else 7
    d_doc = _graded_map_from_json(doc.get("differential"), cf_doc, d_shift_doc, "differential")
    v_doc = _graded_map_from_json(doc.get("v"), cf_doc, 4, "v")
    w_doc = _graded_map_from_json(cob["blocks"], cf_doc, 0, "cobordism.blocks")
    delta = matrix_from_json(
        doc.get("delta"), 1, cf_doc.dims[_doc_degree(4, convention)], "delta"
    )
    delta_prime = matrix_from_json(
        doc.get("delta_prime"), cf_doc.dims[_doc_degree(1, convention)], 1, "delta_prime"
    )
    n_max = doc.get("n_max", 4)
    if not isinstance(n_max, int) or isinstance(n_max, bool) or n_max < 1:
        raise ParseError("n_max must be a positive integer")
    if convention == HOMOLOGY:
        cf_space, d_map, v_map, w_chain = (
            regrade(cf_doc), regrade(d_doc), regrade(v_doc), regrade(w_doc)
        )
    else:
        cf_space, d_map, v_map, w_chain = cf_doc, d_doc, v_doc, w_doc
    cx = CochainComplex(cf_space, d_map)
    cs = ChainSpecial(delta, delta_prime, v_map)
    coh = cohomology(cx)
    pair = induce_special(cs, coh, n_max)
    w = induced_map(w_chain, coh, coh)
    inst = Instance(
        space=coh.h_space, pair=pair, w=w, w_label=label,
        convention=convention, level=level,
        complex=cx, chain_special=cs, chain_w=w_chain, metadata=metadata,
    )
    validate_instance(inst)
    return inst


def instance_to_document(instance: Instance) -> dict:
    """Serialize back out in the instance's declared convention."""
    conv = instance.convention
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "level": instance.level,
        "convention": conv,
        "metadata": dict(instance.metadata),
    }
    if instance.level == LEVEL_COHOMOLOGY:
        space_doc = regrade(instance.space) if conv == HOMOLOGY else instance.space
        w_doc = regrade(instance.w) if conv == HOMOLOGY else instance.w
        doc["spaces"] = {"hf": list(space_doc.dims)}
        doc["special"] = {
            "case": instance.pair.case.value,
            "n_max": instance.pair.n_max,
            "deltas": [matrix_to_json(m) for m in instance.pair.deltas],
            "deltas_prime": [matrix_to_json(m) for m in instance.pair.deltas_prime],
        }
        doc["cobordism"] = {
            "label": instance.w_label,
            "blocks": [matrix_to_json(b) for b in w_doc.blocks],
        }
        return doc
    cx, cs = instance.complex, instance.chain_special
    cf_doc = regrade(cx.space) if conv == HOMOLOGY else cx.space
    d_doc = regrade(cx.d) if conv == HOMOLOGY else cx.d
    v_doc = regrade(cs.v) if conv == HOMOLOGY else cs.v
    w_doc = regrade(instance.chain_w) if conv == HOMOLOGY else instance.chain_w
    doc["spaces"] = {"cf": list(cf_doc.dims)}
    doc["differential"] = [matrix_to_json(b) for b in d_doc.blocks]
    doc["v"] = [matrix_to_json(b) for b in v_doc.blocks]
    doc["delta"] = matrix_to_json(cs.delta)
    doc["delta_prime"] = matrix_to_json(cs.delta_prime)
    doc["n_max"] = instance.pair.n_max
    doc["cobordism"] = {
        "label": instance.w_label,
        "blocks": [matrix_to_json(b) for b in w_doc.blocks],
    }
    return doc


def dumps(instance: Instance) -> str:
    return json.dumps(instance_to_document(instance), indent=2, sort_keys=True)


def load(path: str) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    return document_to_instance(doc)


def export(instance: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(instance))
        f.write("\n")
