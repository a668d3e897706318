"""Check reports: named condition violations with basis-index witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import FieldSpec


@dataclass(frozen=True)
class Violation:
    condition_id: str
    witness: tuple[int, ...]  # 0-based basis indices, in the condition's variable order
    lhs: tuple
    rhs: tuple


@dataclass
class CheckReport:
    violations: list[Violation] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.passed

    @property
    def witness(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def failed_conditions(self) -> list[str]:
        seen = []
        for v in self.violations:
            if v.condition_id not in seen:
                seen.append(v.condition_id)
        return seen

    def extend(self, other: CheckReport, prefix: str = "") -> CheckReport:
        for v in other.violations:
            self.violations.append(
                Violation(prefix + v.condition_id, v.witness, v.lhs, v.rhs)
            )
        return self

    def to_json(self, F: FieldSpec, labels=None) -> dict:
        def name(i):
            return labels[i] if labels and i < len(labels) else i + 1

        return {
            "pass": self.passed,
            "violations": [
                {
                    "condition": v.condition_id,
                    "witness": [name(i) for i in v.witness],
                    "lhs": [F.format(x) for x in v.lhs],
                    "rhs": [F.format(x) for x in v.rhs],
                }
                for v in self.violations
            ],
            **({"info": self.info} if self.info else {}),
        }


def residual_violations(cid: str, lhs, rhs, nfree: int) -> list[Violation]:
    """Violations of ``lhs == rhs`` for unbatched arrays of shape (free..., out).

    ``nfree`` leading axes are basis indices; the remaining axes (zero or one)
    hold the output coordinates.  Results are in lexicographic witness order.
    """
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    out = []
    for idx in np.ndindex(lhs.shape[:nfree]):
        a = lhs[idx]
        b = rhs[idx]
        a_t = tuple(np.atleast_1d(a).tolist())
        b_t = tuple(np.atleast_1d(b).tolist())
        if a_t != b_t:
            out.append(Violation(cid, tuple(int(i) for i in idx), a_t, b_t))
    return out


def batch_failures(F: FieldSpec, residual, nfree_and_out: int) -> np.ndarray:
    """Boolean mask over batch axes: True where any entry of the residual is nonzero."""
    r = np.asarray(F.reduce(residual))
    axes = tuple(range(r.ndim - nfree_and_out, r.ndim))
    return np.any(r != 0, axis=axes) if axes else (r != 0)


@dataclass
class Equation:
    """One named identity ``lhs == rhs`` evaluated on every basis tuple.

    Arrays have shape ``(batch..., free..., out)``; ``vector`` is False for
    scalar-valued identities that carry no output axis.
    """

    cid: str
    lhs: object
    rhs: object
    nfree: int
    vector: bool = True

    @property
    def ntrail(self) -> int:
        return self.nfree + (1 if self.vector else 0)


def report_from(F: FieldSpec, equations, info=None) -> CheckReport:
    report = CheckReport(info=dict(info or {}))
    for eq in equations:
        lhs = F.reduce(np.asarray(eq.lhs))
        rhs = F.reduce(np.asarray(eq.rhs))
        lhs, rhs = np.broadcast_arrays(lhs, rhs)
        if lhs.ndim != eq.ntrail:
            raise ValueError(f"{eq.cid}: report_from needs unbatched arrays")
        report.violations.extend(residual_violations(eq.cid, lhs, rhs, eq.nfree))
    return report


def batch_verdict(F: FieldSpec, equations, batch_shape) -> np.ndarray:
    """True where every equation holds, over the leading batch axes."""
    ok = np.ones(batch_shape, dtype=bool)
    for eq in equations:
        lhs, rhs = np.broadcast_arrays(np.asarray(eq.lhs), np.asarray(eq.rhs))
        bad = batch_failures(F, lhs - rhs, eq.ntrail)
        ok &= ~np.broadcast_to(bad, batch_shape)
    return ok
