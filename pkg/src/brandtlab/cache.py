"""Versioned JSON cache for class sets, Brandt matrices, class maps and
eigensystem summaries.

One file per (a, b, N1, N2, M). Rationals are written as "num/den" strings so
files diff cleanly and reload exactly.
"""

import json
import os
from fractions import Fraction
from pathlib import Path

from .arith import Lattice
from .quatalg import (
    ClassSetData, QAlgebra, QOrder, RightIdeal, algebra_from_level, brandt,
    class_set, register_class_set, validate_level,
)

SCHEMA = 1


def q(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def unq(s):
    return Fraction(s)


def cache_dir(explicit=None):
    if explicit:
        return Path(explicit)
    env = os.environ.get("BRANDTLAB_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "brandtlab"


def _key(B, lt):
    return f"classset_a{B.a}_b{B.b}_{lt.N1}_{lt.N2}_{lt.M}.json"


def _rows(L):
    return [[q(x) for x in r] for r in L.rows]


def _lattice(rows):
    return Lattice(tuple(tuple(unq(x) for x in r) for r in rows))


def dump_class_set(cs, extra=None):
    B, lt = cs.algebra, cs.level
    doc = {
        "schema": SCHEMA,
        "algebra": [B.a, B.b, B.D_B],
        "level": list(lt.astuple()),
        "coprime_to": cs.coprime_to,
        "bfs_primes": list(cs.bfs_primes),
        "order": _rows(cs.order.basis),
        "ideals": [{"rows": _rows(I.lattice), "norm": q(I.norm)} for I in cs.ideals],
        "left_orders": [_rows(O.basis) for O in cs.left_orders],
        "weights": list(cs.weights),
        "brandt": {
            str(m): [[q(x) for x in row] for row in A.entries]
            for m, A in sorted(cs._brandt.items())
        },
    }
    if extra:
        doc.update(extra)
    return doc


def load_class_set(doc):
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unknown cache schema {doc.get('schema')}")
    a, b, D = doc["algebra"]
    B = QAlgebra(a, b, D)
    lt = validate_level(*doc["level"])
    order = QOrder(B, _lattice(doc["order"]), lt)
    ideals = [RightIdeal(_lattice(d["rows"]), unq(d["norm"])) for d in doc["ideals"]]
    lefts = [QOrder(B, _lattice(r)) for r in doc["left_orders"]]
    cs = ClassSetData(
        B, order, ideals, lefts, list(doc["weights"]), lt,
        tuple(doc["bfs_primes"]), doc["coprime_to"],
    )
    from .quatalg import BrandtMatrix

    for m, rows in doc.get("brandt", {}).items():
        cs._brandt[int(m)] = BrandtMatrix(int(m), tuple(tuple(unq(x) for x in r) for r in rows))
    return cs


class Cache:
    """Directory of JSON files; reads are shared, writes go through a temp
    file and an atomic rename."""

    def __init__(self, path=None):
        self.path = cache_dir(path)

    def file_for(self, lt):
        return self.path / _key(algebra_from_level(lt), lt)

    def read(self, lt):
        f = self.file_for(lt)
        if not f.exists():
            return None
        with open(f) as fh:
            return json.load(fh)

    def write(self, doc, lt):
        self.path.mkdir(parents=True, exist_ok=True)
        f = self.file_for(lt)
        tmp = f.with_suffix(f".tmp{os.getpid()}")
        with open(tmp, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
        os.replace(tmp, f)

    def class_set(self, N1, N2, M, brandt_upto=0):
        """Class set from disk if present (and registered as the in-memory
        value), otherwise computed and written."""
        lt = validate_level(N1, N2, M)
        doc = self.read(lt)
        if doc is not None:
            cs = load_class_set(doc)
            register_class_set(cs)
            missing = [m for m in range(1, brandt_upto + 1) if m not in cs._brandt]
            if missing:
                for m in missing:
                    brandt(cs, m)
                self.update(lt, cs)
            return cs
        cs = class_set(N1, N2, M)
        for m in range(1, brandt_upto + 1):
            brandt(cs, m)
        self.update(lt, cs)
        return cs

    def update(self, lt, cs, **sections):
        old = self.read(lt) or {}
        doc = dump_class_set(cs)
        for k in ("class_maps", "eigensystems"):
            if k in old:
                doc[k] = old[k]
        for k, v in sections.items():
            doc.setdefault(k, {}).update(v)
        self.write(doc, lt)

    def record_class_map(self, lt, cmd):
        entry = {
            str(cmd.field.D_K): {
                "fibers": list(cmd.fibers),
                "base_index": cmd.base_index,
                "generator": [q(x) for x in cmd.generator_image],
                "images": sorted([[t.a, t.b, t.c, i] for t, i in cmd.images.items()]),
            }
        }
        self.update(lt, cmd.class_set if cmd.base_index == 0 else class_set(*lt.astuple()), class_maps=entry)

    def record_eigensystems(self, lt, sd):
        rows = {}
        for es in sd.systems:
            rows[es.label] = {
                "degree": es.degree,
                "multiplicity": es.multiplicity,
                "eisenstein": es.is_eisenstein,
                "exact_level": es.exact_level,
                "local_types": {str(p): t for p, t in sorted(es.local_types.items())},
                "eigenvalues": {
                    str(m): (q(v) if isinstance(v, Fraction) else [q(c) for c in v])
                    for m, v in es.eigenvalue_summary().items()
                },
            }
        self.update(lt, sd.class_set, eigensystems=rows)
