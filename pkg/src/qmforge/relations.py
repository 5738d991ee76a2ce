"""Extension-relation rewriting: traces, retargeting, and normal forms.

The kernel of the passage from counting sums to bounded-distance classes is
spanned by the left/right extension relations

    l_w = #w - sum_{s != w_1^-1} #(sw)      r_w = #w - sum_{s != w_k^-1} #(ws)

(each evaluates to the indicator "starts with w" / "ends with w", hence is
bounded).  Every rewrite here is a chain of single steps, each consuming one
r/l pair anchored at a base word u; the step on Brooks sums

    phi(u b) = phi(u) - phi(u b^-1) - sum_{s in S_b, s != u_t^-1} phi(u s)
               - r_u + l_{u^-1}

and its exponent-shifting variants are exact identities of counting sums, so
a trace of (kind, base, coefficient) entries certifies
input - output = traced combination, symbolically and with zero tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .counting import BrooksSum, Mode, as_counting, brooks_sum, counting_sum
from .freegroup import (
    B,
    Alphabet,
    Kind,
    Word,
    b_form,
    b_power,
    inverse,
    is_truncated,
    kind_of,
    tau,
    word_sort_key,
)


class RelationKind(Enum):
    LEFT = "LEFT"
    RIGHT = "RIGHT"


def extension_relation(kind: RelationKind, w: Word, alphabet: Alphabet) -> BrooksSum:
    """The relation l_w or r_w as a COUNTING-mode sum."""
    if not w:
        raise ValueError("no extension relation at the identity")
    entries: dict[Word, Fraction] = {w: Fraction(1)}
    if kind is RelationKind.LEFT:
        for s in alphabet.letters():
            if s != -w[0]:
                u = (s,) + w
                entries[u] = entries.get(u, Fraction(0)) - 1
    else:
        for s in alphabet.letters():
            if s != -w[-1]:
                u = w + (s,)
                entries[u] = entries.get(u, Fraction(0)) - 1
    return counting_sum(entries)


@dataclass(frozen=True)
class TraceStep:
    kind: RelationKind
    base: Word
    coefficient: Fraction


@dataclass(frozen=True)
class RewriteTrace:
    steps: tuple[TraceStep, ...]

    def __add__(self, other: "RewriteTrace") -> "RewriteTrace":
        return RewriteTrace(self.steps + other.steps)

    def combination(self, alphabet: Alphabet) -> BrooksSum:
        """The traced sum of relations, as a COUNTING sum."""
        total = counting_sum({})
        for step in self.steps:
            total = total + extension_relation(step.kind, step.base, alphabet).scale(
                step.coefficient
            )
        return total

    def certifies(self, before: BrooksSum, after: BrooksSum, alphabet: Alphabet) -> bool:
        """Exact symbolic check: before - after equals the traced combination."""
        diff = as_counting(before) - as_counting(after)
        return (diff - self.combination(alphabet)).is_zero()


EMPTY_TRACE = RewriteTrace(())


def _pair(base: Word, lead: RelationKind, c: Fraction) -> tuple[TraceStep, TraceStep]:
    """Trace entries (lead, base, -c) and (mirror, base^-1, +c).

    Rewriting one exponent step of a Brooks key consumes the relation pair
    r_base - l_{base^-1} (or the mirror) with a single coefficient; the pair
    keeps the certificate exact on both the word and its inverse.
    """
    other = RelationKind.LEFT if lead is RelationKind.RIGHT else RelationKind.RIGHT
    return (TraceStep(lead, base, -c), TraceStep(other, inverse(base), c))


class _Rewriter:
    """Accumulates a weight and a trace while single-stepping exponents."""

    def __init__(self, alphabet: Alphabet) -> None:
        self.alphabet = alphabet
        self.weight: dict[Word, Fraction] = {}
        self.steps: list[TraceStep] = []

    def emit(self, w: Word, c: Fraction) -> None:
        if c == 0:
            return
        if not w:
            raise AssertionError("rewriting emitted the identity")
        self.weight[w] = self.weight.get(w, Fraction(0)) + c

    def result(self) -> tuple[BrooksSum, RewriteTrace]:
        return brooks_sum(self.weight), RewriteTrace(tuple(self.steps))

    # -- single steps on a trailing exponent -------------------------------

    def _right_strip(self, core: Word, m: int, c: Fraction) -> tuple[int, Fraction]:
        """One step of phi(core b^m) with |m| shrinking; returns new carrier."""
        sgn = 1 if m > 0 else -1
        if abs(m) >= 2:
            base = core + b_power(m - sgn)
            self.steps.extend(_pair(base, RelationKind.RIGHT, c))
            for s in self.alphabet.s_b():
                self.emit(base + (s,), -c)
            return m - sgn, c
        # crossing zero: phi(core b^sgn) = phi(core) - phi(core b^-sgn) - debris
        self.steps.extend(_pair(core, RelationKind.RIGHT, c))
        self.emit(core, c)
        for s in self.alphabet.s_b():
            if s != -core[-1]:
                self.emit(core + (s,), -c)
        return -sgn, -c

    def _right_grow(self, core: Word, m: int, c: Fraction) -> tuple[int, Fraction]:
        sgn = 1 if m > 0 else -1
        base = core + b_power(m)
        self.steps.extend(_pair(base, RelationKind.RIGHT, -c))
        for s in self.alphabet.s_b():
            self.emit(base + (s,), c)
        return m + sgn, c

    def retarget_right(self, core: Word, m_from: int, m_to: int, c: Fraction) -> None:
        """Walk phi(core b^m_from) to +-phi(core b^m_to) plus debris.

        The core may be empty (pure b-powers) or any word ending in a non-b
        letter, possibly carrying its own leading exponent.  The carrier sign
        flips exactly when the walk crosses zero.
        """
        if m_from == 0 or m_to == 0:
            raise ValueError("exponents must be nonzero")
        m, coeff = m_from, c
        while m != m_to:
            if (m > 0) == (m_to > 0) and abs(m) < abs(m_to):
                m, coeff = self._right_grow(core, m, coeff)
            else:
                m, coeff = self._right_strip(core, m, coeff)
        self.emit(core + b_power(m_to), coeff)

    # -- mirrored steps on a leading exponent ------------------------------

    def _left_strip(self, core: Word, m: int, c: Fraction) -> tuple[int, Fraction]:
        sgn = 1 if m > 0 else -1
        if abs(m) >= 2:
            base = b_power(m - sgn) + core
            self.steps.extend(_pair(base, RelationKind.LEFT, c))
            for s in self.alphabet.s_b():
                self.emit((s,) + base, -c)
            return m - sgn, c
        self.steps.extend(_pair(core, RelationKind.LEFT, c))
        self.emit(core, c)
        for s in self.alphabet.s_b():
            if s != -core[0]:
                self.emit((s,) + core, -c)
        return -sgn, -c

    def _left_grow(self, core: Word, m: int, c: Fraction) -> tuple[int, Fraction]:
        sgn = 1 if m > 0 else -1
        base = b_power(m) + core
        self.steps.extend(_pair(base, RelationKind.LEFT, -c))
        for s in self.alphabet.s_b():
            self.emit((s,) + base, c)
        return m + sgn, c

    def retarget_left(self, core: Word, m_from: int, m_to: int, c: Fraction) -> None:
        if m_from == 0 or m_to == 0:
            raise ValueError("exponents must be nonzero")
        m, coeff = m_from, c
        while m != m_to:
            if (m > 0) == (m_to > 0) and abs(m) < abs(m_to):
                m, coeff = self._left_grow(core, m, coeff)
            else:
                m, coeff = self._left_strip(core, m, coeff)
        self.emit(b_power(m_to) + core, coeff)


class Side(Enum):
    LEFT = "LEFT"
    RIGHT = "RIGHT"


def retarget_power(
    side: Side,
    x: Word,
    m_fixed: int,
    m_from: int,
    m_to: int,
    alphabet: Alphabet,
) -> tuple[BrooksSum, RewriteTrace]:
    """Move one b-exponent of a key to a new nonzero value.

    For RIGHT the input key is b^{m_fixed} x b^{m_from} and the result is
    +-phi(b^{m_fixed} x b^{m_to}) plus words b^{m_fixed}·(block ending in a
    non-b letter); LEFT is the mirror image.  The target carries coefficient
    -1 exactly when the walk crosses zero.
    """
    if not x or not is_truncated(x):
        raise ValueError("x must be a nonempty b-truncated word")
    if m_from == 0 or m_to == 0:
        raise ValueError("retargeted exponents must be nonzero")
    rewriter = _Rewriter(alphabet)
    if side is Side.RIGHT:
        rewriter.retarget_right(b_power(m_fixed) + x, m_from, m_to, Fraction(1))
    else:
        rewriter.retarget_left(x + b_power(m_fixed), m_from, m_to, Fraction(1))
    return rewriter.result()


def eliminate_b_powers(f: BrooksSum, alphabet: Alphabet) -> tuple[BrooksSum, RewriteTrace]:
    """Equivalent sum whose only b-power key is b itself.

    Each canonical key b^m (m >= 2) unwinds along
    phi(b^m) ~ phi(b) - sum_{i=1..m-1} sum_{s in S_b} phi(b^i s).
    """
    if f.mode is not Mode.BROOKS:
        raise ValueError("b-power elimination applies to Brooks sums")
    rewriter = _Rewriter(alphabet)
    for v, c in f.weight.items():
        if tau(v) is None and len(v) >= 2:
            rewriter.retarget_right((), len(v), 1, c)
        else:
            rewriter.emit(v, c)
    return rewriter.result()


# ---------------------------------------------------------------------------
# Normal form


def normal_form(f: BrooksSum, alphabet: Alphabet) -> tuple[BrooksSum, RewriteTrace]:
    """Rewrite into normal form, returning the certificate trace.

    Phases, in the fixed order whose side-products never revisit an earlier
    phase: (1) unwind b-power keys (debris: b-left); (2) merge b-and-b keys
    sharing a skeleton up to inversion, left exponent first (debris: b-left,
    right-b, b-truncated); (3) merge b-left/right-b keys presenting the same
    column — a right-b key y b^q is the column key b^{-q} y^{-1} in disguise
    (debris: b-truncated only).  The b-truncated inverse condition is vacuous
    under canonical key orientation.  Surviving targets are chosen by
    smallest boundary exponents, then (length, lex); the rewriting lemma does
    not dictate a choice, so determinism is fixed here.
    """
    if f.mode is not Mode.BROOKS:
        raise ValueError("normal form applies to Brooks sums")
    current, trace = eliminate_b_powers(f, alphabet)
    current, trace2 = _merge_boxes(current, alphabet)
    current, trace3 = _merge_columns(current, alphabet)
    trace = trace + trace2 + trace3

    ok, violation = is_normal_form(current, alphabet)
    assert ok, f"normal form postcondition violated: {violation}"
    return current, trace


def _merge_boxes(f: BrooksSum, alphabet: Alphabet) -> tuple[BrooksSum, RewriteTrace]:
    """Collapse each b-and-b skeleton class (up to inversion) to one key."""
    rewriter = _Rewriter(alphabet)
    families: dict[Word, list[tuple[int, int, Fraction]]] = {}
    for v, c in f.weight.items():
        if kind_of(v) is not Kind.B_AND_B:
            rewriter.emit(v, c)
            continue
        t = tau(v)
        assert t is not None
        skel = min(t, inverse(t), key=word_sort_key)
        if t == skel:
            form = b_form(v)
            families.setdefault(skel, []).append((form.m0, form.mk, c))
        else:
            form = b_form(inverse(v))
            families.setdefault(skel, []).append((form.m0, form.mk, -c))
    for skel, members in sorted(families.items(), key=lambda kv: word_sort_key(kv[0])):
        p_t, q_t, _ = min(
            members,
            key=lambda pqc: (
                max(abs(pqc[0]), abs(pqc[1])),
                word_sort_key(b_power(pqc[0]) + skel + b_power(pqc[1])),
            ),
        )
        for p, q, c in members:
            inner = _Rewriter(alphabet)
            inner.retarget_left(skel + b_power(q), p, p_t, c)
            rewriter.steps.extend(inner.steps)
            for w, cw in inner.weight.items():
                form = b_form(w)
                if form.kind() is Kind.B_AND_B and form.m0 == p_t and tau(w) == skel:
                    rewriter.retarget_right(b_power(p_t) + skel, form.mk, q_t, cw)
                else:
                    rewriter.emit(w, cw)
    return rewriter.result()


def _merge_columns(f: BrooksSum, alphabet: Alphabet) -> tuple[BrooksSum, RewriteTrace]:
    """Collapse each b-left column, absorbing right-b keys of the inverse row.

    A b-left key b^m x sits in column x; a right-b key y b^q equals
    -phi(b^{-q} y^-1), i.e. column y^-1.  Keys sharing a column violate the
    support conditions (same skeleton, or the mixed inverse condition), so
    each column retargets onto one surviving exponent.  Distinct columns,
    including mutually inverse ones, may coexist.
    """
    rewriter = _Rewriter(alphabet)
    columns: dict[Word, list[tuple[int, Fraction]]] = {}
    for v, c in f.weight.items():
        kind = kind_of(v)
        if kind is Kind.B_LEFT:
            form = b_form(v)
            t = tau(v)
            assert t is not None
            columns.setdefault(t, []).append((form.m0, c))
        elif kind is Kind.RIGHT_B:
            w = inverse(v)
            form = b_form(w)
            t = tau(w)
            assert t is not None
            columns.setdefault(t, []).append((form.m0, -c))
        else:
            rewriter.emit(v, c)
    for skel, members in sorted(columns.items(), key=lambda kv: word_sort_key(kv[0])):
        m_t = min(
            (m for m, _ in members),
            key=lambda m: (abs(m), word_sort_key(b_power(m) + skel)),
        )
        for m, c in members:
            rewriter.retarget_left(skel, m, m_t, c)
    return rewriter.result()


@dataclass(frozen=True)
class NormalFormViolation:
    condition: int
    v: Word
    w: Optional[Word]


def is_normal_form(f: BrooksSum, alphabet: Alphabet) -> tuple[bool, Optional[NormalFormViolation]]:
    """Check the three support conditions over the canonical support.

    (1) a key with empty skeleton must be b itself; (2) distinct keys of one
    kind must have distinct skeletons; (3) for pairs of opposite kinds —
    both b-truncated, both b-and-b, or one b-left and one right-b — the
    skeleton of one inverse must differ from the other's skeleton.
    """
    if f.mode is not Mode.BROOKS:
        raise ValueError("normal form applies to Brooks sums")
    support = f.support()
    for v in support:
        if tau(v) is None and v != (B,):
            return False, NormalFormViolation(1, v, None)
    by_kind: dict[Kind, list[Word]] = {}
    for v in support:
        by_kind.setdefault(kind_of(v), []).append(v)
    for kind, words in by_kind.items():
        if kind is Kind.B_POWER:
            continue
        seen: dict[Word, Word] = {}
        for v in words:
            t = tau(v)
            assert t is not None
            if t in seen and seen[t] != v:
                return False, NormalFormViolation(2, seen[t], v)
            seen[t] = v
        if kind in (Kind.B_TRUNCATED, Kind.B_AND_B):
            for v in words:
                t_inv = tau(inverse(v))
                if t_inv in seen and seen[t_inv] != v:
                    return False, NormalFormViolation(3, v, seen[t_inv])
    for v in by_kind.get(Kind.B_LEFT, []):
        t_inv = tau(inverse(v))
        for w in by_kind.get(Kind.RIGHT_B, []):
            if tau(w) == t_inv:
                return False, NormalFormViolation(3, v, w)
    return True, None
