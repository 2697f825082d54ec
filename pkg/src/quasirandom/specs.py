"""Text specs for groups (``PSL(2,7)``, ``table:k4.txt``) and subsets (``random:117:42``)."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import InputError
from .gf import prime_power
from .groups import construct_family
from .subsets import SubsetMask, coset, random_subset, random_symmetric_subset

FAMILIES = {
    "psl": "PSL", "sl": "SL", "su": "SU", "psu": "PSU", "gl": "GL",
    "alt": "Alt", "a": "Alt", "alternating": "Alt",
    "sym": "Sym", "s": "Sym", "symmetric": "Sym",
    "c": "C", "cyclic": "C",
    "d": "D", "dihedral": "D",
    "q8": "Q8", "quaternion": "Q8",
}
ARITY = {"PSL": 2, "SL": 2, "SU": 2, "PSU": 2, "GL": 2, "Alt": 1, "Sym": 1, "C": 1, "D": 1, "Q8": 0}


class SpecError(InputError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at column {pos + 1} in {text!r}")
        self.pos = pos


@dataclass(frozen=True)
class GroupSpec:
    family: str
    params: tuple = ()
    path: str | None = None

    def __str__(self):
        if self.family == "table":
            return f"table:{self.path}"
        if self.family == "Q8":
            return "Q8"
        return f"{self.family}({','.join(str(p) for p in self.params)})"

    def build(self, caps: Caps = DEFAULT_CAPS):
        if self.family == "table":
            return construct_family("table", self.path, caps=caps)
        return construct_family(self.family, *self.params, caps=caps)


_NAME = re.compile(r"\s*([A-Za-z][A-Za-z0-9]*)\s*")
_INT = re.compile(r"\s*(-?\d+)\s*")


def parse_group_spec(text: str) -> GroupSpec:
    if text.startswith("table:"):
        path = text[len("table:"):]
        if not path:
            raise SpecError("missing table path", text, len(text))
        return GroupSpec("table", (), path)
    m = _NAME.match(text)
    if not m:
        raise SpecError("expected a family name", text, 0)
    raw = m.group(1)
    fam = FAMILIES.get(raw.lower())
    if fam is None:
        raise SpecError(f"unknown family {raw!r}", text, m.start(1))
    pos = m.end()
    params = []
    if pos < len(text) and text[pos] == "(":
        pos += 1
        if text[pos:].strip().startswith(")"):
            pos = text.index(")", pos) + 1
        else:
            while True:
                im = _INT.match(text, pos)
                if not im:
                    raise SpecError("expected an integer", text, pos)
                params.append(int(im.group(1)))
                pos = im.end()
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                if pos < len(text) and text[pos] == ")":
                    pos += 1
                    break
                raise SpecError("expected ',' or ')'", text, pos)
    rest = text[pos:]
    if rest.strip():
        raise SpecError("trailing characters", text, pos + len(rest) - len(rest.lstrip()))
    if len(params) != ARITY[fam]:
        raise SpecError(f"{fam} takes {ARITY[fam]} parameter(s), got {len(params)}", text, 0)
    if any(p < 1 for p in params):
        raise SpecError("parameters must be positive", text, 0)
    if ARITY[fam] == 2:
        prime_power(params[1])
    return GroupSpec(fam, tuple(params))


# subsets ---------------------------------------------------------------------


@dataclass(frozen=True)
class SubsetSpec:
    kind: str  # explicit | random | symrandom | coset | all | empty | gens
    indices: tuple = ()
    size: tuple = ()  # (lo, hi)
    seed: int | None = None
    rep: int | None = None

    def __str__(self):
        if self.kind == "explicit":
            return ",".join(str(i) for i in self.indices)
        if self.kind in ("random", "symrandom"):
            lo, hi = self.size
            s = str(lo) if lo == hi else f"{lo}-{hi}"
            return f"{self.kind}:{s}" + ("" if self.seed is None else f":{self.seed}")
        if self.kind == "coset":
            return f"coset:{','.join(str(i) for i in self.indices)}:{self.rep}"
        return self.kind


def _int_list(text, whole):
    text = text.strip().strip("[]{}")
    if not text:
        return ()
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"malformed index list in subset spec {whole!r}") from None


def parse_subset_spec(text: str) -> SubsetSpec:
    t = text.strip()
    if t in ("all", "empty", "gens"):
        return SubsetSpec(t)
    head, _, rest = t.partition(":")
    if head in ("random", "symrandom"):
        parts = rest.split(":")
        if not parts[0] or len(parts) > 2:
            raise InputError(f"expected {head}:<size>[:<seed>], got {text!r}")
        try:
            lo, _, hi = parts[0].partition("-")
            size = (int(lo), int(hi or lo))
            seed = int(parts[1]) if len(parts) == 2 else None
        except ValueError:
            raise InputError(f"malformed {head} spec {text!r}") from None
        if size[0] > size[1] or size[0] < 0:
            raise InputError(f"bad size range in {text!r}")
        return SubsetSpec(head, size=size, seed=seed)
    if head == "coset":
        gens, _, rep = rest.rpartition(":")
        try:
            return SubsetSpec("coset", indices=_int_list(gens, text), rep=int(rep))
        except ValueError:
            raise InputError(f"expected coset:<gens>:<rep>, got {text!r}") from None
    return SubsetSpec("explicit", indices=_int_list(t, text))


def resolve_subset(spec: SubsetSpec, G, rng: np.random.Generator) -> SubsetMask:
    """Materialise a subset; random kinds draw from ``rng``."""
    if spec.kind == "explicit":
        return SubsetMask.from_indices(G, spec.indices)
    if spec.kind == "all":
        return SubsetMask.full(G)
    if spec.kind == "empty":
        return SubsetMask.empty(G)
    if spec.kind == "gens":
        return SubsetMask.from_indices(G, G.gens)
    if spec.kind == "coset":
        return coset(G, spec.indices, spec.rep)
    lo, hi = spec.size
    size = lo if lo == hi else int(rng.integers(lo, hi + 1))
    if spec.kind == "random":
        return random_subset(G, size, rng)
    return random_symmetric_subset(G, size, rng)


def trial_rngs(spec: SubsetSpec, master: np.random.Generator, trials: int) -> list:
    """One generator per trial: from the spec's own seed if it has one, else from ``master``."""
    if spec.seed is None:
        seed = int(master.integers(2**63))
    else:
        seed = spec.seed
    if trials == 1:
        return [np.random.default_rng(seed)]
    return [np.random.default_rng([seed, i]) for i in range(trials)]
