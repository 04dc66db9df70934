"""Premise-order augmentation.

Kendall tau here is always measured against the original (identity) order
and is computed from exact integer pair counts; bin membership uses exact
rational comparison so values sitting on a bin boundary never drift across
it through floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from random import Random
from typing import Iterable, Sequence

from .errors import OrderAugError
from .model import Instance, Permutation, Premise

__all__ = [
    "TauBin",
    "BUILTIN_BINS",
    "ConditionVariant",
    "TooShort",
    "BinUnreachable",
    "AttemptsExhausted",
    "kendall_tau",
    "kendall_tau_exact",
    "inversion_count",
    "sample_random_permutation",
    "sample_permutation_in_bin",
    "shuffle_premises",
    "shuffle_test_set",
]


class TooShort(OrderAugError):
    code = "TooShort"


class BinUnreachable(OrderAugError):
    code = "BinUnreachable"


class AttemptsExhausted(OrderAugError):
    code = "AttemptsExhausted"


@dataclass(frozen=True)
class TauBin:
    """Half-open tau interval [lo, hi). ``unconstrained`` marks the `random` bin."""

    lo: Fraction
    hi: Fraction
    unconstrained: bool = False

    def __post_init__(self):
        if not self.unconstrained and not (-1 <= self.lo < self.hi <= 1):
            raise ValueError(f"need -1 <= lo < hi <= 1, got [{self.lo}, {self.hi})")

    @classmethod
    def random(cls) -> "TauBin":
        return cls(Fraction(-1), Fraction(1), unconstrained=True)

    @classmethod
    def starting_at(cls, lo) -> "TauBin":
        """The 0.2-wide bin whose lower edge is ``lo``."""
        lo = _as_fraction(lo)
        return cls(lo, lo + Fraction(1, 5))

    @classmethod
    def parse(cls, text: str) -> "TauBin":
        """Accepts ``random``, ``[lo,hi)``, or a bare lower edge like ``-0.4``."""
        text = text.strip()
        if text.lower() == "random":
            return cls.random()
        if text.startswith("["):
            body = text.lstrip("[").rstrip(")").rstrip("]")
            lo_s, hi_s = body.split(",")
            return cls(_as_fraction(lo_s.strip()), _as_fraction(hi_s.strip()))
        return cls.starting_at(text)

    def contains(self, tau: Fraction) -> bool:
        return self.unconstrained or self.lo <= tau < self.hi

    def __str__(self) -> str:
        if self.unconstrained:
            return "random"
        return f"[{float(self.lo)},{float(self.hi)})"


def _as_fraction(x) -> Fraction:
    # str() first so 0.8 means the decimal 0.8, not its binary float neighbour
    if isinstance(x, Fraction):
        return x
    return Fraction(str(x))


# The ten 0.2-wide bins covering [-1, 1). [0.8, 1.0) excludes the identity.
BUILTIN_BINS: tuple[TauBin, ...] = tuple(
    TauBin(Fraction(k, 5), Fraction(k + 1, 5)) for k in range(-5, 5)
)


def inversion_count(mapping: Sequence[int]) -> int:
    """Number of pairs i < j with mapping[i] > mapping[j]."""
    inv = 0
    for i in range(len(mapping)):
        mi = mapping[i]
        for j in range(i + 1, len(mapping)):
            if mi > mapping[j]:
                inv += 1
    return inv


def kendall_tau_exact(p: Permutation) -> Fraction:
    """tau = (concordant - discordant) / (n choose 2) against the identity."""
    if p.n < 2:
        raise TooShort(f"kendall tau needs n >= 2, got n={p.n}")
    total = math.comb(p.n, 2)
    discordant = inversion_count(p.mapping)
    return Fraction(total - 2 * discordant, total)


def kendall_tau(p: Permutation) -> float:
    return float(kendall_tau_exact(p))


def sample_random_permutation(n: int, rng: Random) -> Permutation:
    """Uniform over the n! - 1 non-identity permutations (identity resampled)."""
    if n < 2:
        raise TooShort(f"cannot shuffle fewer than 2 items, got n={n}")
    seq = list(range(1, n + 1))
    for _ in range(100_000):
        rng.shuffle(seq)
        perm = Permutation.from_sequence(seq)
        if not perm.is_identity():
            return perm
    raise AttemptsExhausted("random sampler kept drawing the identity")


def _inversion_range(n: int, bin: TauBin) -> tuple[int, int]:
    """Integer inversion counts whose tau lands in the bin, as [lo, hi].

    tau = 1 - 2*inv/C  maps  tau in [bin.lo, bin.hi)  to
    inv in (C*(1-bin.hi)/2, C*(1-bin.lo)/2].
    """
    total = math.comb(n, 2)
    exclusive_lo = Fraction(total) * (1 - bin.hi) / 2
    inclusive_hi = Fraction(total) * (1 - bin.lo) / 2
    t_lo = max(math.floor(exclusive_lo) + 1, 0)
    t_hi = min(math.floor(inclusive_hi), total)
    if t_lo > t_hi:
        raise BinUnreachable(f"no permutation of length {n} has tau in {bin}")
    return t_lo, t_hi


def sample_permutation_in_bin(
    n: int, bin: TauBin, rng: Random, max_attempts: int = 10_000
) -> Permutation:
    """Sample a permutation whose exact tau lies in [bin.lo, bin.hi).

    Extreme bins carry vanishing mass under uniform sampling, so instead of
    rejection we walk: start at the identity (non-negative bins) or the full
    reversal (negative bins), apply random adjacent transpositions -- each
    moves tau by exactly 2/(n choose 2) -- monotonically until a target
    inversion count inside the bin is hit, then mix with local transpositions
    rejected whenever they would leave the bin.
    """
    if n < 2:
        raise TooShort(f"cannot target a tau bin with n={n}")
    if bin.unconstrained:
        return sample_random_permutation(n, rng)
    t_lo, t_hi = _inversion_range(n, bin)
    target = rng.randint(t_lo, t_hi)

    if bin.lo < 0:
        seq = list(range(n, 0, -1))
        inv = math.comb(n, 2)
    else:
        seq = list(range(1, n + 1))
        inv = 0

    while inv != target:
        ascending = inv < target
        candidates = [
            j for j in range(n - 1) if (seq[j] < seq[j + 1]) == ascending
        ]
        j = rng.choice(candidates)
        seq[j], seq[j + 1] = seq[j + 1], seq[j]
        inv += 1 if ascending else -1

    # local diversity: random adjacent swaps, staying inside the bin
    for _ in range(4 * n):
        j = rng.randrange(n - 1)
        delta = 1 if seq[j] < seq[j + 1] else -1
        if t_lo <= inv + delta <= t_hi:
            seq[j], seq[j + 1] = seq[j + 1], seq[j]
            inv += delta

    perm = Permutation.from_sequence(seq)
    assert bin.contains(kendall_tau_exact(perm))
    return perm


@dataclass(frozen=True)
class ConditionVariant:
    """One premise-shuffled copy of an instance (or a flagged passthrough)."""

    instance: Instance
    permutation: Permutation
    passthrough: bool = False


def apply_permutation(inst: Instance, perm: Permutation, new_id: str) -> Instance:
    """Reorder premises per ``perm`` and renumber them 1..n in the new order.

    FOL strings travel with their premise; conclusion and label are untouched.
    """
    if perm.n != inst.n:
        raise ValueError(f"permutation length {perm.n} != premise count {inst.n}")
    reordered = perm.apply(list(inst.premises))
    renumbered = tuple(
        Premise(index=i, text=p.text, fol=p.fol) for i, p in enumerate(reordered, start=1)
    )
    return replace(inst, id=new_id, premises=renumbered)


def _all_non_identity(n: int) -> list[Permutation]:
    out = []
    for seq in itertools.permutations(range(1, n + 1)):
        perm = Permutation.from_sequence(seq)
        if not perm.is_identity():
            out.append(perm)
    return out


def shuffle_premises(
    inst: Instance,
    k: int,
    mode: TauBin,
    rng: Random,
    max_attempts: int = 10_000,
) -> list[ConditionVariant]:
    """Produce up to ``k`` premise-shuffled copies with pairwise-distinct orders.

    Instances with fewer than 2 premises cannot be shuffled and come back as
    a single passthrough variant. When the pool of candidate permutations is
    smaller than ``k`` (tiny n in random mode) every candidate is emitted.
    """
    if inst.n < 2:
        return [ConditionVariant(inst, Permutation.identity(inst.n), passthrough=True)]

    perms: list[Permutation] = []
    if mode.unconstrained and inst.n <= 7 and k >= math.factorial(inst.n) - 1:
        perms = _all_non_identity(inst.n)
        rng.shuffle(perms)
    else:
        seen: set[tuple[int, ...]] = set()
        attempts = 0
        while len(perms) < k:
            if attempts >= max_attempts:
                raise AttemptsExhausted(
                    f"could not find {k} distinct permutations for {inst.id} "
                    f"within {max_attempts} attempts"
                )
            attempts += 1
            perm = sample_permutation_in_bin(inst.n, mode, rng, max_attempts)
            if perm.mapping not in seen:
                seen.add(perm.mapping)
                perms.append(perm)

    return [
        ConditionVariant(apply_permutation(inst, perm, f"{inst.id}#cond{i}"), perm)
        for i, perm in enumerate(perms, start=1)
    ]


def shuffle_test_set(
    instances: Iterable[Instance], rng: Random, k: int = 1
) -> list[ConditionVariant]:
    """Randomly shuffle every instance's premises, k copies each, labels kept."""
    out: list[ConditionVariant] = []
    for inst in instances:
        out.extend(shuffle_premises(inst, k, TauBin.random(), rng))
    return out
