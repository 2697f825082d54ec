from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Caps:
    """Size limits shared by every module.

    enum   -- largest order that is enumerated element by element
    table  -- largest order for which the full Cayley table is materialised
    dense  -- largest order for the dense eigensolver
    work   -- largest tuple count for exact word-value enumeration
    """

    enum: int = 10**7
    table: int = 6000
    dense: int = 4096
    work: int = 10**9

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_CAPS = Caps()

EIG_TOL = 1e-10
EIG_MAXITER = 10**4
VERIFY_SLACK = 1e-6
CHAR_TOL = 1e-8
PR_STEPS = 50
