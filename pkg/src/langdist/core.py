"""Shared types and elementary string utilities.

Conventions used across the package:

* Positions that appear in results (mismatch information, edit operations,
  occurrence end positions) are 1-based, and ``T(i..j]`` denotes the
  fragment ``T[i+1..j]``.
* Strings are arbitrary Python sequences (``str``, ``bytes``, tuples of ints).
  The sketch-based code works on integer symbols; :func:`as_symbols` performs
  the conversion.
* A capped distance is a plain ``int`` in ``[0..k+1]`` where ``k + 1`` stands
  for "more than ``k`` (possibly infinite)".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence, Union

Symbol = Union[int, str]
MismatchInfo = tuple  # tuple of (pos, a, b) triples with increasing pos


class UnequalLength(ValueError):
    """Raised where the Hamming distance would be infinite."""


class InvalidScript(ValueError):
    """Raised when an edit operation refers to a position outside the string."""


class _Exceeds:
    """Singleton marking a distance above the threshold."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EXCEEDS"

    def __bool__(self) -> bool:
        return False


EXCEEDS = _Exceeds()


def capped(d: float | int, k: int) -> int:
    """Return ``min(k + 1, d)`` as an int (``d`` may be ``math.inf``)."""
    return int(d) if d <= k else k + 1


def as_symbols(text) -> tuple[int, ...]:
    """Convert text to a tuple of non-negative integer symbols."""
    if isinstance(text, str):
        return tuple(ord(c) for c in text)
    if isinstance(text, (bytes, bytearray, memoryview)):
        return tuple(bytes(text))
    return tuple(int(c) for c in text)


# ---------------------------------------------------------------------------
# Hamming distance and mismatch information


def hamming(u: Sequence, v: Sequence) -> MismatchInfo:
    """Mismatch information ``MI(u, v)`` as a tuple of ``(pos, u[pos], v[pos])``.

    Raises:
        UnequalLength: if ``len(u) != len(v)``.
    """
    if len(u) != len(v):
        raise UnequalLength(f"lengths {len(u)} and {len(v)} differ")
    return tuple((i + 1, a, b) for i, (a, b) in enumerate(zip(u, v)) if a != b)


def hamming_distance(u: Sequence, v: Sequence) -> int:
    if len(u) != len(v):
        raise UnequalLength(f"lengths {len(u)} and {len(v)} differ")
    return sum(1 for a, b in zip(u, v) if a != b)


def swap_mi(mi: MismatchInfo) -> MismatchInfo:
    """``MI(v, u)`` from ``MI(u, v)``."""
    return tuple((p, b, a) for p, a, b in mi)


def shift_mi(mi: MismatchInfo, offset: int) -> MismatchInfo:
    return tuple((p + offset, a, b) for p, a, b in mi)


def lcp(u: Sequence, v: Sequence, i: int = 0, j: int = 0) -> int:
    """Length of the longest common prefix of ``u[i:]`` and ``v[j:]`` (0-based starts)."""
    n = min(len(u) - i, len(v) - j)
    x = 0
    while x < n and u[i + x] == v[j + x]:
        x += 1
    return x


def prefix_function(s: Sequence) -> list[int]:
    """Knuth-Morris-Pratt border table: ``pi[x]`` is the longest border of ``s[:x+1]``."""
    pi = [0] * len(s)
    b = 0
    for x in range(1, len(s)):
        while b and s[x] != s[b]:
            b = pi[b - 1]
        if s[x] == s[b]:
            b += 1
        pi[x] = b
    return pi


def find_all(needle: Sequence, hay: Sequence) -> list[int]:
    """0-based start offsets of exact occurrences of ``needle`` in ``hay``."""
    m = len(needle)
    if m == 0:
        return list(range(len(hay) + 1))
    pi = prefix_function(needle)
    out = []
    b = 0
    for x, c in enumerate(hay):
        while b and c != needle[b]:
            b = pi[b - 1]
        if c == needle[b]:
            b += 1
        if b == m:
            out.append(x - m + 1)
            b = pi[b - 1]
    return out


def is_primitive(q: Sequence) -> bool:
    """True iff ``q`` occurs in ``q+q`` only at offsets 0 and ``|q|``."""
    if len(q) == 0:
        raise ValueError("primitivity is defined for non-empty strings")
    qq = list(q) + list(q)
    return find_all(list(q), qq[1:-1]) == []


def smallest_period(s: Sequence) -> int:
    if not s:
        return 0
    return len(s) - prefix_function(s)[-1]


# ---------------------------------------------------------------------------
# Periodic extensions


class PowerPrefix(Sequence):
    """Read-only view of ``Q^∞[1..length]`` backed by ``q`` (0-based indexing)."""

    def __init__(self, q: Sequence, length: int):
        if len(q) == 0:
            raise ValueError("period must be non-empty")
        self.q = q
        self.length = length

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return [self[x] for x in range(*idx.indices(self.length))]
        if idx < 0:
            idx += self.length
        if not 0 <= idx < self.length:
            raise IndexError(idx)
        return self.q[idx % len(self.q)]

    def materialize(self):
        items = [self.q[x % len(self.q)] for x in range(self.length)]
        return "".join(items) if isinstance(self.q, str) else tuple(items)


def infinite_power_prefix(q: Sequence, length: int) -> PowerPrefix:
    return PowerPrefix(q, length)


# ---------------------------------------------------------------------------
# Edit scripts


class Ins(NamedTuple):
    pos: int
    ch: Symbol


class Del(NamedTuple):
    pos: int


class Sub(NamedTuple):
    pos: int
    ch: Symbol


EditOp = Union[Ins, Del, Sub]


@dataclass(frozen=True)
class EditScript:
    """Operations applied left to right; each position refers to the current string.

    ``Ins(p, c)`` makes ``c`` the new ``p``-th character (``1 <= p <= len+1``),
    ``Del(p)`` removes the ``p``-th character and ``Sub(p, c)`` overwrites it.
    """

    ops: tuple = ()

    @property
    def cost(self) -> int:
        return len(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[EditOp]:
        return iter(self.ops)


def apply_script(u: Sequence, script: EditScript | Sequence[EditOp]):
    """Apply the edit operations in order; returns the same kind of sequence as ``u``."""
    cur = list(u)
    for op in script:
        if isinstance(op, Ins):
            if not 1 <= op.pos <= len(cur) + 1:
                raise InvalidScript(f"insert at {op.pos} in length {len(cur)}")
            cur.insert(op.pos - 1, op.ch)
        elif isinstance(op, Del):
            if not 1 <= op.pos <= len(cur):
                raise InvalidScript(f"delete at {op.pos} in length {len(cur)}")
            del cur[op.pos - 1]
        elif isinstance(op, Sub):
            if not 1 <= op.pos <= len(cur):
                raise InvalidScript(f"substitute at {op.pos} in length {len(cur)}")
            cur[op.pos - 1] = op.ch
        else:
            raise InvalidScript(f"unknown operation {op!r}")
    if isinstance(u, str):
        return "".join(cur)
    if isinstance(u, (bytes, bytearray)):
        return bytes(cur)
    return tuple(cur)


def script_alignment(script: EditScript, m: int) -> list[tuple[int, int]]:
    """Alignment path ``(u_t, v_t)`` for a script whose operations move left to right.

    Scripts produced by the DP tracebacks in this package have non-decreasing
    positions, which is what makes the path well defined.
    """
    path = [(0, 0)]
    u_pos = v_pos = 0  # characters of u consumed / of v produced
    for op in script:
        # copy matched characters up to the operation
        while v_pos + 1 < op.pos:
            u_pos += 1
            v_pos += 1
            path.append((u_pos, v_pos))
        if isinstance(op, Ins):
            v_pos += 1
        elif isinstance(op, Del):
            u_pos += 1
        else:
            u_pos += 1
            v_pos += 1
        path.append((u_pos, v_pos))
    while u_pos < m:
        u_pos += 1
        v_pos += 1
        path.append((u_pos, v_pos))
    return path


# ---------------------------------------------------------------------------
# Period certificates


@dataclass(frozen=True)
class PeriodCertificate:
    """Witness that a string is close to ``Q^∞`` for a short primitive ``Q``.

    For ``kind == "hamming"`` the witness is ``MI(U, Q^∞[1..|U|])``; for
    ``kind == "edit"`` it is an edit script turning ``U`` into a prefix of ``Q^∞``.
    """

    q: tuple
    kind: str
    witness: object
    budget: int

    def verify(self, u: Sequence) -> bool:
        """Check primitivity, the length bound, the cost bound and the witness itself."""
        u = as_symbols(u)
        q = tuple(self.q)
        if not q or not is_primitive(q):
            return False
        if len(q) * 128 * self.budget > len(u):
            return False
        if self.kind == "hamming":
            mi = self.witness
            return len(mi) <= 2 * self.budget and tuple(mi) == hamming(
                u, PowerPrefix(q, len(u)).materialize()
            )
        if self.kind == "edit":
            script = self.witness
            if script.cost > 2 * self.budget:
                return False
            try:
                target = apply_script(u, script)
            except InvalidScript:
                return False
            return tuple(target) == PowerPrefix(q, len(target)).materialize()
        return False


# ---------------------------------------------------------------------------
# Text cursor


@dataclass
class TextCursor:
    """The text read so far; keeps the characters only in the read-only model."""

    keep: bool = True
    length: int = 0
    buffer: list = field(default_factory=list)

    def push(self, ch) -> int:
        self.length += 1
        if self.keep:
            self.buffer.append(ch)
        return self.length

    def __len__(self) -> int:
        return self.length

    def at(self, i: int):
        """1-based random access to an already read character."""
        if not self.keep:
            raise RuntimeError("streaming cursor keeps no characters")
        if not 1 <= i <= self.length:
            raise IndexError(i)
        return self.buffer[i - 1]


# ---------------------------------------------------------------------------
# Read-only views (no copying)


class SliceView(Sequence):
    """``base[start:start+length]`` without copying (0-based indexing)."""

    __slots__ = ("base", "start", "length")

    def __init__(self, base: Sequence, start: int, length: int):
        self.base = base
        self.start = start
        self.length = length

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return [self[x] for x in range(*idx.indices(self.length))]
        if not 0 <= idx < self.length:
            raise IndexError(idx)
        return self.base[self.start + idx]


class ReversedPrefixView(Sequence):
    """``base[:length]`` reversed, without copying (0-based indexing).

    ``size`` truncates the view to its first ``size`` characters.
    """

    __slots__ = ("base", "length", "size")

    def __init__(self, base: Sequence, length: int, size: int | None = None):
        self.base = base
        self.length = length
        self.size = length if size is None else min(size, length)

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return [self[x] for x in range(*idx.indices(self.size))]
        if not 0 <= idx < self.size:
            raise IndexError(idx)
        return self.base[self.length - 1 - idx]


def symbol(ch) -> int:
    """Integer symbol for a single character."""
    return ord(ch) if isinstance(ch, str) else int(ch)


class GrowBuffer:
    """Append-only int64 buffer for a read-only text (``arr[:n]`` is valid)."""

    __slots__ = ("arr", "n")

    def __init__(self, capacity: int = 64):
        import numpy as np

        self.arr = np.zeros(max(capacity, 1), dtype=np.int64)
        self.n = 0

    def append(self, c: int) -> None:
        if self.n == len(self.arr):
            import numpy as np

            bigger = np.zeros(2 * len(self.arr), dtype=np.int64)
            bigger[: self.n] = self.arr
            self.arr = bigger
        self.arr[self.n] = c
        self.n += 1

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, idx):
        return int(self.arr[:self.n][idx]) if not isinstance(idx, slice) else self.arr[:self.n][idx].tolist()
