"""Partitions: weakly decreasing sequences of positive integers."""

from __future__ import annotations

__all__ = ["Partition", "partitions_up_to_weight", "strict_partitions_up_to_weight"]


class Partition:
    """An integer partition.

    Trailing zeros are stripped on construction; two sequences differing
    only by trailing zeros denote the same partition.
    """

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        if isinstance(parts, Partition):
            parts = parts.parts
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        for i, p in enumerate(parts):
            if p <= 0:
                raise ValueError("parts must be positive")
            if i and parts[i - 1] < p:
                raise ValueError("parts must be weakly decreasing")
        self.parts = parts

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        return self.parts == tuple(other)

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "Partition(%s)" % (self.parts,)

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    @property
    def weight(self):
        return sum(self.parts)

    @property
    def length(self):
        return len(self.parts)

    def is_strict(self):
        """True when all parts are distinct."""
        return all(self.parts[i] > self.parts[i + 1]
                   for i in range(len(self.parts) - 1))

    def contains(self, other):
        """Containment of Young diagrams: other_i <= self_i for all i."""
        other = Partition(other)
        if len(other) > len(self):
            return False
        return all(o <= s for s, o in zip(self.parts, other.parts))

    def part(self, i, default=0):
        """The i-th part, 1-indexed, 0 beyond the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else default

    def padded(self, n):
        """Parts padded with zeros to length n (plain tuple)."""
        if n < len(self.parts):
            raise ValueError("cannot pad to a shorter length")
        return self.parts + (0,) * (n - len(self.parts))

    def __add__(self, other):
        other = Partition(other)
        n = max(len(self), len(other))
        return Partition(tuple(self.part(i + 1) + other.part(i + 1)
                               for i in range(n)))

    @staticmethod
    def rho(n):
        """The staircase (n, n-1, ..., 1); rho(0) is empty."""
        return Partition(range(n, 0, -1))

    @staticmethod
    def rectangle(k, length):
        """The rectangular partition (k^length)."""
        return Partition((k,) * length if k else ())


def partitions_up_to_weight(max_weight, max_length=None):
    """All partitions of weight <= max_weight (and bounded length),
    including the empty partition, in a deterministic order."""
    out = [Partition()]

    def rec(prefix, remaining, largest):
        for p in range(min(remaining, largest), 0, -1):
            cur = prefix + [p]
            if max_length is None or len(cur) <= max_length:
                out.append(Partition(cur))
                rec(cur, remaining - p, p)

    rec([], max_weight, max_weight)
    out.sort(key=lambda lam: (lam.weight, lam.parts))
    return out


def strict_partitions_up_to_weight(max_weight, max_length=None):
    return [lam for lam in partitions_up_to_weight(max_weight, max_length)
            if lam.is_strict() and lam.length > 0]
