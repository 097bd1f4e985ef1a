"""Exact values of the partition function p(n).

The primary route is Euler's pentagonal-number recurrence over a shared,
growable :class:`PartitionTable`.  :func:`p_brute` counts partitions by a
dynamic program over the largest allowed part and shares no code with the
recurrence, so the two can check each other.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

__all__ = [
    "ORACLE_CEILING",
    "OracleRangeError",
    "PartitionTable",
    "TableFormatError",
    "EmptyTableError",
    "brute_force_table",
    "default_table",
    "load_table",
    "p_brute",
    "p_exact",
    "save_table",
]

ORACLE_CEILING = 2000


class OracleRangeError(ValueError):
    """The brute-force oracle was asked for n above its ceiling."""


class TableFormatError(ValueError):
    """A table file does not follow the ``<n> <p(n)>`` line format."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class EmptyTableError(TableFormatError):
    pass


def _pentagonal_offsets(limit: int) -> list[tuple[int, int]]:
    """Generalized pentagonal numbers <= limit paired with their recurrence sign."""
    out = []
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > limit:
            break
        sign = 1 if k % 2 else -1
        out.append((g1, sign))
        g2 = k * (3 * k + 1) // 2
        if g2 <= limit:
            out.append((g2, sign))
        k += 1
    return out


class PartitionTable:
    """p(0), ..., p(n_max) computed by the pentagonal recurrence.

    Lookups beyond ``n_max`` extend the table; growth at least doubles the
    size so repeated small extensions stay cheap.
    """

    def __init__(self, values: Optional[Iterable[int]] = None):
        self._values: list[int] = [1] if values is None else [int(v) for v in values]
        if not self._values:
            raise EmptyTableError("a partition table needs at least p(0)")
        if self._values[0] != 1:
            raise ValueError("p(0) must be 1")

    @property
    def n_max(self) -> int:
        return len(self._values) - 1

    @property
    def values(self) -> Sequence[int]:
        return tuple(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartitionTable):
            return NotImplemented
        return self._values == other._values

    def __repr__(self) -> str:
        return f"PartitionTable(n_max={self.n_max})"

    def __getitem__(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.n_max:
            self.extend(n)
        return self._values[n]

    def extend(self, n: int, exact: bool = False) -> None:
        """Make sure p(n) is present.  Without ``exact`` the table may overshoot."""
        if n <= self.n_max:
            return
        target = n if exact else max(n, 2 * self.n_max)
        vals = self._values
        offsets = _pentagonal_offsets(target)
        for m in range(len(vals), target + 1):
            total = 0
            for g, sign in offsets:
                if g > m:
                    break
                if sign > 0:
                    total += vals[m - g]
                else:
                    total -= vals[m - g]
            vals.append(total)

    def validate(self) -> None:
        """Recompute every entry with the recurrence; raise on the first mismatch."""
        fresh = PartitionTable()
        fresh.extend(self.n_max, exact=True)
        for n, (a, b) in enumerate(zip(self._values, fresh._values)):
            if a != b:
                raise TableFormatError(f"p({n}) = {a} disagrees with the recurrence", line=n + 1)


_DEFAULT: Optional[PartitionTable] = None


def default_table() -> PartitionTable:
    """Process-wide table shared by every scan."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = PartitionTable()
    return _DEFAULT


def p_exact(n: int, table: Optional[PartitionTable] = None) -> int:
    if n < 0:
        raise ValueError("p(n) is requested for n >= 0")
    table = default_table() if table is None else table
    return table[n]


def brute_force_table(n_max: int, ceiling: int = ORACLE_CEILING) -> list[int]:
    """p(0..n_max) by counting partitions with parts <= k for k = 1, 2, ..."""
    if n_max > ceiling:
        raise OracleRangeError(f"oracle ceiling is {ceiling}, asked for {n_max}")
    counts = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        for m in range(part, n_max + 1):
            counts[m] += counts[m - part]
    return counts


def p_brute(n: int, ceiling: int = ORACLE_CEILING) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return brute_force_table(n, ceiling)[n]


# -- persistence -------------------------------------------------------------


def save_table(table: PartitionTable, destination: Union[str, os.PathLike]) -> None:
    path = Path(destination)
    with path.open("w", encoding="ascii", newline="\n") as fh:
        for n, v in enumerate(table.values):
            fh.write(f"{n} {v}\n")


def load_table(source: Union[str, os.PathLike], check: bool = False) -> PartitionTable:
    """Read a table file.  ``check`` also recomputes every value."""
    values: list[int] = []
    with Path(source).open("r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.endswith("\n"):
                raise TableFormatError("missing trailing newline", lineno)
            parts = line[:-1].split(" ")
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise TableFormatError(f"expected '<n> <digits>', got {line[:-1]!r}", lineno)
            n, v = int(parts[0]), int(parts[1])
            if n != len(values):
                raise TableFormatError(f"expected index {len(values)}, got {n}", lineno)
            if n == 0 and v != 1:
                raise TableFormatError("p(0) must be 1", lineno)
            if n >= 2 and v < values[-1]:
                raise TableFormatError("values must be nondecreasing", lineno)
            values.append(v)
    if not values:
        raise EmptyTableError("table file is empty")
    table = PartitionTable(values)
    if check:
        table.validate()
    return table
