"""Lexicographic order, admissibility and the K-set criterion for specification.

For a pair of critical sequences ``u`` (coding of 0) and ``v`` (coding of
``1^-``)::

    K(u) = {n : v[1..n] == u[1+j..n+j] for some j >= 1}
    K(v) = {n : u[1..n] == v[1+j..n+j] for some j >= 1}

For ``beta > 2`` the shift has specification iff both sets are finite.  Both
sets are initial segments ``{1, ..., M}`` (a match of length ``n`` is also a
match of every shorter length), so each is described by its supremum ``M``.
When ``u`` and ``v`` are eventually periodic that supremum is computed exactly.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .dynamics import Params, coding, left_limit_coding
from .symbols import SymbolSeq


class Incomparable(ValueError):
    """Two finite words that agree on their common length but differ in length."""


def lex_cmp(a, b) -> int:
    """Return -1, 0 or 1 comparing two sequences lexicographically."""
    a = a if isinstance(a, SymbolSeq) else SymbolSeq.finite(a)
    b = b if isinstance(b, SymbolSeq) else SymbolSeq.finite(b)
    if a.is_infinite and b.is_infinite:
        n = a.horizon(b)
    else:
        n = min(x for x in (a.available(), b.available()) if x is not None)
    for x, y in zip(a.prefix(n), b.prefix(n)):
        if x != y:
            return -1 if x < y else 1
    if a.is_infinite and b.is_infinite:
        return 0
    if not a.is_infinite and not b.is_infinite and len(a) == len(b):
        return 0
    raise Incomparable(f"{a} and {b} agree on {n} symbols but have different lengths")


def _prefix_cmp(word: tuple[int, ...], ref: tuple[int, ...]) -> int:
    for x, y in zip(word, ref):
        if x != y:
            return -1 if x < y else 1
    return 0


def admissible(p: Params, w, depth: int, u: SymbolSeq | None = None, v: SymbolSeq | None = None) -> str:
    """Check ``u <= shift^k(w) <= v`` on every suffix of ``w``.

    Comparisons use the first ``depth`` symbols of the critical sequences.
    Returns ``"no"`` on any strict violation, ``"unknown"`` if some suffix
    longer than ``depth`` ties with a critical prefix over all ``depth``
    symbols, and ``"yes"`` otherwise.
    """
    word = w.prefix(len(w)) if isinstance(w, SymbolSeq) else tuple(w)
    if any(not 0 <= d <= p.ell for d in word):
        raise ValueError(f"digits must lie in 0..{p.ell}")
    up = (u if u is not None else coding(p, 0, depth)).prefix(depth)
    vp = (v if v is not None else left_limit_coding(p, depth)).prefix(depth)
    verdict = "yes"
    for k in range(len(word)):
        s = word[k:]
        m = min(len(s), depth)
        lo = _prefix_cmp(s[:m], up[:m])
        hi = _prefix_cmp(s[:m], vp[:m])
        if lo < 0 or hi > 0:
            return "no"
        if len(s) > depth and (lo == 0 or hi == 0):
            verdict = "unknown"
    return verdict


class KVerdict(str, enum.Enum):
    EMPTY_CERTIFIED = "EMPTY_CERTIFIED"
    FINITE_CERTIFIED = "FINITE_CERTIFIED"
    INFINITE_CERTIFIED = "INFINITE_CERTIFIED"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class KReport:
    """Window matches found by search, plus an exact verdict when available.

    ``found`` holds ``(n, j)`` with ``j`` the smallest offset witnessing ``n``.
    ``exact_max`` is the true supremum of the set when certified
    (``None`` for infinite or unknown).
    """

    found: tuple[tuple[int, int], ...]
    depth_checked: int
    exact_verdict: KVerdict
    exact_max: int | None = field(default=None, compare=False)

    @property
    def elements(self) -> list[int]:
        return [n for n, _ in self.found]

    @property
    def certified_finite(self) -> bool:
        return self.exact_verdict in (KVerdict.EMPTY_CERTIFIED, KVerdict.FINITE_CERTIFIED)

    @property
    def reaches_depth(self) -> bool:
        """Matches of every searched length: the set grows through the search depth."""
        return bool(self.found) and self.found[-1][0] == self.depth_checked

    def to_dict(self) -> dict:
        return {
            "found": [{"n": n, "j": j} for n, j in self.found],
            "depth": self.depth_checked,
            "verdict": self.exact_verdict.value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "KReport":
        return cls(
            found=tuple((int(e["n"]), int(e["j"])) for e in d["found"]),
            depth_checked=int(d["depth"]),
            exact_verdict=KVerdict(d["verdict"]),
        )


def _z_function(s: list[int]) -> list[int]:
    n = len(s)
    z = [0] * n
    if n:
        z[0] = n
    left = right = 0
    for i in range(1, n):
        if i < right:
            z[i] = min(right - i, z[i - left])
        while i + z[i] < n and s[z[i]] == s[i + z[i]]:
            z[i] += 1
        if i + z[i] > right:
            left, right = i, i + z[i]
    return z


def _window_search(pattern: tuple[int, ...], text: tuple[int, ...], n_max: int, j_max: int):
    """Longest match of ``pattern`` at each offset ``j = 1..j_max`` of ``text``."""
    # -1 separates the pattern from the text (digits are non-negative)
    z = _z_function(list(pattern[:n_max]) + [-1] + list(text))
    base = min(len(pattern), n_max) + 1
    return [min(z[base + j], n_max) for j in range(1, j_max + 1)]


def _found_from_lcps(lcps: list[int]) -> tuple[tuple[int, int], ...]:
    found = []
    best = 0
    for j, length in enumerate(lcps, start=1):
        if length > best:
            found.extend((n, j) for n in range(best + 1, length + 1))
            best = length
    return tuple(found)


def _lcp(a: SymbolSeq, b: SymbolSeq) -> int | None:
    """Longest common prefix of ``a`` (possibly finite) and infinite ``b``.

    ``None`` when the sequences agree as far as both are known.
    """
    n = a.horizon(b) if a.is_infinite else len(a)
    for i, (x, y) in enumerate(zip(a.prefix(n), b.prefix(n))):
        if x != y:
            return i
    return None


def exact_k_max(pattern: SymbolSeq, text: SymbolSeq) -> int | None:
    """Supremum over ``j >= 1`` of the match length of ``pattern`` in ``shift^j(text)``.

    ``text`` must be eventually periodic, so only finitely many distinct
    shifts exist.  ``None`` means the supremum is not determined: some shift
    equals ``pattern`` (infinite set) or matches all known digits of a finite
    ``pattern``.
    """
    if not text.is_infinite:
        raise ValueError("text must be eventually periodic")
    best = 0
    for j in range(1, len(text.preperiod) + len(text.period) + 1):
        lcp = _lcp(pattern, text.shift(j))
        if lcp is None:
            return None
        best = max(best, lcp)
    return best


def _k_report(pattern: SymbolSeq, text: SymbolSeq, n_max: int, j_max: int) -> KReport:
    need = n_max + j_max
    if not pattern.is_infinite and len(pattern) < n_max:
        raise ValueError(f"need {n_max} digits of {pattern}")
    if not text.is_infinite and len(text) < need:
        raise ValueError(f"need {need} digits of {text}")
    lcps = _window_search(pattern.prefix(n_max), text.prefix(need), n_max, j_max)
    found = _found_from_lcps(lcps)
    verdict, exact = KVerdict.UNKNOWN, None
    if text.is_infinite:
        exact = exact_k_max(pattern, text)
        if exact is not None:
            verdict = KVerdict.EMPTY_CERTIFIED if exact == 0 else KVerdict.FINITE_CERTIFIED
        elif pattern.is_infinite:
            verdict = KVerdict.INFINITE_CERTIFIED
    return KReport(found, n_max, verdict, exact)


def k_sets(u: SymbolSeq, v: SymbolSeq, n_max: int, j_max: int | None = None) -> tuple[KReport, KReport]:
    """Search reports for ``K(u)`` and ``K(v)``; offsets ``1..j_max`` (default ``4*n_max``)."""
    if j_max is None:
        j_max = 4 * n_max
    return _k_report(v, u, n_max, j_max), _k_report(u, v, n_max, j_max)


def alphabet_certificate(u: SymbolSeq, v: SymbolSeq) -> tuple[bool, bool]:
    """``(K(u) empty, K(v) empty)`` decided from first symbols and tail alphabets.

    ``K(u)`` is empty exactly when ``v``'s first symbol never occurs in
    ``shift(u)``.  That needs all of ``u`` but only the first symbol of ``v``,
    so a side whose tail is only a finite prefix reports ``False`` (not
    certified).
    """
    if not (u.is_infinite or v.is_infinite):
        raise ValueError("alphabet certificate needs an eventually periodic sequence")
    empty_u = u.is_infinite and v[0] not in u.symbols(1)
    empty_v = v.is_infinite and u[0] not in v.symbols(1)
    return empty_u, empty_v


class SpecStatus(str, enum.Enum):
    SPEC_CERTIFIED = "SPEC_CERTIFIED"
    SPEC_LIKELY = "SPEC_LIKELY"
    UNKNOWN = "UNKNOWN"


class UnsupportedRegime(ValueError):
    """Certified specification checks need ``beta > 2``."""


@dataclass(frozen=True)
class SpecVerdict:
    status: SpecStatus
    depth: int
    u: SymbolSeq
    v: SymbolSeq
    k_u: KReport
    k_v: KReport
    reason: str
    growing_k: bool = False

    def __str__(self):
        s = self.status.value
        if self.status is SpecStatus.SPEC_LIKELY:
            s += f"({self.depth})"
        if self.growing_k:
            s += f" [K grows through depth {self.depth}]"
        return s


def spec_check(p: Params, depth: int, u: SymbolSeq | None = None, v: SymbolSeq | None = None) -> SpecVerdict:
    """Decide specification of the (alpha, beta)-shift through its K-sets.

    Exact codings are attempted first; when both critical orbits close up the
    verdict is exact.  Otherwise only depth-bounded evidence is produced and
    non-specification is never asserted.  ``u``/``v`` may be supplied to
    override the computed codings.
    """
    n_max, j_max = depth, 4 * depth
    need = n_max + j_max
    if u is None:
        u = coding(p, 0, max(need, 10 * depth))
    if v is None:
        v = left_limit_coding(p, max(need, 10 * depth))
    k_u, k_v = k_sets(u, v, n_max, j_max)
    # u = 0^inf and v = m^inf: every word over {0..m} is admissible
    full_shift = u == SymbolSeq((), (0,)) and not v.preperiod and len(v.period) == 1
    if full_shift:
        return SpecVerdict(SpecStatus.SPEC_CERTIFIED, depth, u, v, k_u, k_v, "full shift")
    if p.beta <= 2:
        raise UnsupportedRegime(f"beta={p.beta} <= 2: the K-set criterion does not apply")
    if k_u.certified_finite and k_v.certified_finite:
        reason = "exact K-sets"
        if all(alphabet_certificate(u, v)):
            reason = "alphabet certificate"
        return SpecVerdict(SpecStatus.SPEC_CERTIFIED, depth, u, v, k_u, k_v, reason)
    growing = k_u.reaches_depth or k_v.reaches_depth
    if KVerdict.INFINITE_CERTIFIED in (k_u.exact_verdict, k_v.exact_verdict):
        return SpecVerdict(SpecStatus.UNKNOWN, depth, u, v, k_u, k_v, "a K-set contains every length", True)
    stable = all(
        r.certified_finite or not r.found or r.found[-1][0] <= depth // 2 for r in (k_u, k_v)
    )
    if stable and not growing:
        return SpecVerdict(SpecStatus.SPEC_LIKELY, depth, u, v, k_u, k_v, "K-sets stabilised below half depth")
    return SpecVerdict(SpecStatus.UNKNOWN, depth, u, v, k_u, k_v, "no stable K-set evidence", growing)

