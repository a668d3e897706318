"""Exhaustive generators for small algebras and datums over F_p.

Everything is produced in lexicographic order of the flattened residues, so
sweeps are reproducible without seeds.
"""

from __future__ import annotations

import numpy as np

from .algebra import Algebra, passes_identity
from .errors import EnumerationTooLarge
from .field import FieldSpec, digits
from .unified import Blocks, ExtendingDatum

DATUM_PARTS = ("la", "ra", "lv", "rv", "f", "dot")


def all_products(F: FieldSpec, n: int) -> np.ndarray:
    """Every n x n x n structure-constant table over F_p, stacked."""
    count = F.p ** (n ** 3)
    return digits(F, 0, count, n ** 3).reshape(count, n, n, n)


def passing_products(F: FieldSpec, n: int, kind: str) -> np.ndarray:
    scs = all_products(F, n)
    return scs[passes_identity(F, scs, kind)]


def datum_shapes(nA: int, nV: int) -> list[tuple]:
    return [(nA, nV, nV), (nA, nV, nV), (nV, nA, nA), (nV, nA, nA), (nV, nV, nA), (nV, nV, nV)]


def datum_space_size(p: int, nA: int, nV: int) -> int:
    return p ** sum(int(np.prod(s)) for s in datum_shapes(nA, nV))


def all_datum_blocks(F: FieldSpec, mA, nV: int, cap: int = 10**6) -> Blocks:
    """Every extending datum on the base ``mA`` with dim V = nV, as batched blocks."""
    nA = np.shape(mA)[0]
    shapes = datum_shapes(nA, nV)
    sizes = [int(np.prod(s)) for s in shapes]
    total = F.p ** sum(sizes)
    if total > cap:
        raise EnumerationTooLarge(total, cap, "datum space")
    rows = digits(F, 0, total, sum(sizes))
    parts = np.split(rows, np.cumsum(sizes)[:-1], axis=1)
    tensors = [part.reshape((total,) + s) for part, s in zip(parts, shapes)]
    return Blocks(np.asarray(mA), *tensors)


def datum_at(F: FieldSpec, blocks: Blocks, k: int, base: Algebra | None = None) -> ExtendingDatum:
    A = base if base is not None else Algebra(F, blocks.mA)
    return ExtendingDatum(A, *(getattr(blocks, n)[k] for n in DATUM_PARTS))


def select(blocks: Blocks, mask) -> Blocks:
    return Blocks(blocks.mA, *(getattr(blocks, n)[mask] for n in DATUM_PARTS))
