"""Finite firing sequences: Parikh vectors, per-sequence persistence,
permutation equivalence by adjacent transpositions, bounded SPE deciders,
diamond completion, and unification of Parikh-equivalent sequences.

Sequences are tuples of transition ids.  Two firable sequences are one
permutation apart when swapping two adjacent distinct letters leaves the
sequence firable; the equivalence closure of that relation partitions the
firable sequences of a given length into finite classes, which this module
enumerates explicitly.  Enumeration order is always lexicographic in
transition declaration order, so every "first witness" is deterministic.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    InputError,
    InvariantError,
    NotEnabledError,
    PreconditionError,
    ResourceExceededError,
    UnsupportedClassError,
)
from .net import (
    Marking,
    Net,
    classify_structure,
    enabled,
    enabled_transitions,
    fire,
    fire_sequence,
)


def default_class_guard() -> int:
    return int(os.environ.get("PERSINET_CLASS_GUARD", 10 ** 6))


def parikh(seq: Sequence[str]) -> dict:
    """Occurrence counts per transition; the empty sequence gives {}."""
    counts: dict = {}
    for t in seq:
        counts[t] = counts.get(t, 0) + 1
    return counts


def _word(seq) -> tuple:
    return tuple(seq)


@dataclass
class SeqPersistenceVerdict:
    persistent: bool
    failing_index: Optional[int] = None
    disabled_transition: Optional[str] = None

    def __bool__(self):
        return self.persistent


def sequence_persistence(net: Net, m0: Marking, seq: Sequence[str]) -> SeqPersistenceVerdict:
    """Check that no step of seq disables a distinct enabled transition.

    The failing index is 0-based; replaying that step re-disables the
    reported transition.  Non-firable input is an input error.
    """
    seq = _word(seq)
    cur = m0
    for i, a in enumerate(seq):
        before = enabled_transitions(net, cur)
        if a not in before:
            raise NotEnabledError(a, index=i)
        cur = fire(net, cur, a)
        for t in before:
            if t != a and not enabled(net, cur, t):
                return SeqPersistenceVerdict(False, failing_index=i, disabled_transition=t)
    return SeqPersistenceVerdict(True)


def _markings_along(net, m0, seq):
    """Markings m_0 .. m_n visited by seq (length |seq|+1)."""
    out = [m0]
    cur = m0
    for t in seq:
        cur = fire(net, cur, t)
        out.append(cur)
    return out


def _swap_neighbours(net, m0, word, marks):
    """Firable words one adjacent transposition away from word.

    marks are the markings along word.  Only the swapped window needs a
    check: the prefix is untouched and the suffix re-fires from the same
    marking by determinism.
    """
    out = []
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a == b:
            continue
        m = marks[i]
        if enabled(net, m, b) and enabled(net, fire(net, m, b), a):
            out.append(word[:i] + (b, a) + word[i + 2:])
    return out


def equivalence_class(net: Net, m0: Marking, seq: Sequence[str],
                      guard: Optional[int] = None) -> set:
    """The full permutation-equivalence class of seq, as a set of words.

    Classes are finite (fixed multiset of letters); a configurable guard
    caps the exploration and raises ResourceExceededError beyond it.
    """
    seq = _word(seq)
    fire_sequence(net, m0, seq)  # validates firability
    guard = default_class_guard() if guard is None else guard
    seen = {seq}
    queue = deque([seq])
    while queue:
        w = queue.popleft()
        marks = _markings_along(net, m0, w)
        for w2 in _swap_neighbours(net, m0, w, marks):
            if w2 not in seen:
                seen.add(w2)
                if len(seen) > guard:
                    raise ResourceExceededError(
                        f"equivalence class of {' '.join(seq)} exceeds guard {guard}",
                        partial=seen)
                queue.append(w2)
    return seen


def perm_equivalent(net: Net, m0: Marking, s1: Sequence[str], s2: Sequence[str],
                    guard: Optional[int] = None) -> bool:
    """Whether s2 is reachable from s1 by firable adjacent transpositions.

    Unequal Parikh vectors short-circuit to False (permutation equivalence
    preserves letter counts).
    """
    s1, s2 = _word(s1), _word(s2)
    fire_sequence(net, m0, s1)
    fire_sequence(net, m0, s2)
    if parikh(s1) != parikh(s2):
        return False
    if s1 == s2:
        return True
    guard = default_class_guard() if guard is None else guard
    seen = {s1}
    queue = deque([s1])
    while queue:
        w = queue.popleft()
        marks = _markings_along(net, m0, w)
        for w2 in _swap_neighbours(net, m0, w, marks):
            if w2 == s2:
                return True
            if w2 not in seen:
                seen.add(w2)
                if len(seen) > guard:
                    raise ResourceExceededError(
                        f"equivalence class of {' '.join(s1)} exceeds guard {guard}")
                queue.append(w2)
    return False


def _lex_key(net, word):
    return tuple(net.transition_index(t) for t in word)


def persistent_perm_equivalent(net: Net, m0: Marking, seq: Sequence[str],
                               guard: Optional[int] = None) -> Optional[tuple]:
    """First persistent member of seq's permutation class, canonical order.

    A persistent input is returned unchanged (identity permutation); the
    class is finite, so None is a definitive no.
    """
    seq = _word(seq)
    if sequence_persistence(net, m0, seq).persistent:
        return seq
    members = equivalence_class(net, m0, seq, guard=guard)
    best = None
    for w in members:
        if sequence_persistence(net, m0, w).persistent:
            if best is None or _lex_key(net, w) < _lex_key(net, best):
                best = w
    return best


def persistent_parikh_equivalent(net: Net, m0: Marking, target) -> Optional[tuple]:
    """First persistent firable sequence with the given Parikh vector.

    Depth-first search in canonical transition order with remaining-budget
    pruning; prefixes that are already nonpersistent are cut, which is sound
    because every prefix of a persistent sequence is persistent.  Returns
    None when the (finite) search space is exhausted.
    """
    target = dict(target)
    for t, n in target.items():
        net.transition_index(t)
        if n < 0:
            raise InputError("Parikh vector entries must be naturals")
    budget = {t: n for t, n in target.items() if n > 0}
    total = sum(budget.values())

    word: list = []
    path = [m0]

    def step() -> Optional[tuple]:
        if len(word) == total:
            return tuple(word)
        m = path[-1]
        before = enabled_transitions(net, m)
        for t in net.transitions:
            if budget.get(t, 0) == 0 or t not in before:
                continue
            m2 = fire(net, m, t)
            if any(u != t and enabled(net, m, u) and not enabled(net, m2, u)
                   for u in before):
                continue  # nonpersistent step, no persistent completion exists
            budget[t] -= 1
            word.append(t)
            path.append(m2)
            hit = step()
            if hit is not None:
                return hit
            budget[t] += 1
            word.pop()
            path.pop()
        return None

    return step()


@dataclass
class SpeVerdict:
    """Outcome of a bounded check that nonpersistent sequences are permutable.

    mode "perm" demands a persistent permutation equivalent, mode "parikh" a
    persistent Parikh equivalent.  A refutation is exact (classes are
    finite); holds-up-to-bound is evidence relative to the bound only.
    """

    mode: str
    bound: int
    status: str  # "holds-up-to-bound" | "refuted"
    counterexample: Optional[tuple] = None
    searched_count: int = 0

    @property
    def refuted(self):
        return self.status == "refuted"


SPE = "perm"
SPE_PARIKH = "parikh"


def lex_min_realization(net: Net, m0: Marking, target) -> Optional[tuple]:
    """Lexicographically first firable sequence with this Parikh vector."""
    budget = {t: n for t, n in dict(target).items() if n > 0}
    total = sum(budget.values())
    word: list = []

    def step(m) -> Optional[tuple]:
        if len(word) == total:
            return tuple(word)
        for t in net.transitions:
            if budget.get(t, 0) and enabled(net, m, t):
                budget[t] -= 1
                word.append(t)
                hit = step(fire(net, m, t))
                if hit is not None:
                    return hit
                budget[t] += 1
                word.pop()
        return None

    return step(m0)


def spe_check(net: Net, bound: int, mode: str = SPE,
              m0: Optional[Marking] = None,
              guard: Optional[int] = None) -> SpeVerdict:
    """Search firing sequences of length <= bound for one that cannot be
    rewritten into a persistent equivalent.

    The reported counterexample is the shortest, lexicographically first
    refuting sequence.  The start marking is an explicit parameter: the
    property is marking-sensitive and does not transfer to successors.

    Mode "perm" enumerates sequences breadth-first and exhausts whole
    permutation classes (memoised, so each class is settled once).  Mode
    "parikh" exploits that the answer depends on the Parikh vector alone
    and enumerates the reachable vectors level by level instead, which
    visits each (much smaller) vector set once; a vector refutes when no
    persistent sequence realises it, and every realisation is then a
    counterexample, the canonical one being reported.
    """
    if mode not in (SPE, SPE_PARIKH):
        raise InputError(f"unknown mode '{mode}' (want '{SPE}' or '{SPE_PARIKH}')")
    if bound < 1:
        raise InputError("bound must be >= 1")
    start = net.initial if m0 is None else m0
    net._check_behavioural()
    searched = 0

    if mode == SPE_PARIKH:
        frontier = {(): start}
        seen = {()}
        for _ in range(bound):
            nxt = {}
            bad = []
            for key, m in frontier.items():
                for t in enabled_transitions(net, m):
                    counts = dict(key)
                    counts[t] = counts.get(t, 0) + 1
                    k2 = tuple(sorted(counts.items()))
                    if k2 in seen:
                        continue
                    seen.add(k2)
                    searched += 1
                    nxt[k2] = fire(net, m, t)
                    if persistent_parikh_equivalent(net, start, counts) is None:
                        bad.append(counts)
            if bad:
                witness = min((lex_min_realization(net, start, v) for v in bad),
                              key=lambda w: _lex_key(net, w))
                return SpeVerdict(mode, bound, "refuted", witness, searched)
            frontier = nxt
            if not frontier:
                break
        return SpeVerdict(mode, bound, "holds-up-to-bound", None, searched)

    settled_words = set()  # class members already known to have an equivalent
    frontier = [((), start, True)]  # (word, marking, persistent so far)
    for _ in range(bound):
        nxt = []
        for word, m, pers in frontier:
            before = enabled_transitions(net, m)
            for t in before:
                m2 = fire(net, m, t)
                searched += 1
                step_ok = all(u == t or enabled(net, m2, u) for u in before)
                w2 = word + (t,)
                p2 = pers and step_ok
                nxt.append((w2, m2, p2))
                if p2 or w2 in settled_words:
                    continue
                members = equivalence_class(net, start, w2, guard=guard)
                if not any(sequence_persistence(net, start, w).persistent
                           for w in members):
                    return SpeVerdict(mode, bound, "refuted", w2, searched)
                settled_words.update(members)
        frontier = nxt
        if not frontier:
            break
    return SpeVerdict(mode, bound, "holds-up-to-bound", None, searched)


# -- diamonds and unification --------------------------------------------------

def complete_diamond(net: Net, m: Marking, y: str, x: str) -> Marking:
    """Close a three-quarter diamond m -y-> m'' -x-> M^ with m -x-> m'.

    For pure plain nets the missing edge m' -y-> M^ always exists; its
    absence on such a net is an internal invariant failure.  Impure or
    non-plain nets are rejected: a side condition can consume and return
    the very token the diamond argument counts on.
    """
    report = classify_structure(net)
    if not report.plain or not report.pure:
        raise UnsupportedClassError(
            "diamond completion needs a pure, plain net "
            f"('{net.name}' is{' not plain' if not report.plain else ''}"
            f"{' not pure' if not report.pure else ''})")
    net._check_marking(m)
    if not enabled(net, m, y):
        raise InputError(f"premise failed: '{y}' is not enabled")
    m_via_y = fire(net, m, y)
    if not enabled(net, m_via_y, x):
        raise InputError(f"premise failed: '{x}' is not enabled after '{y}'")
    if not enabled(net, m, x):
        raise InputError(f"premise failed: '{x}' is not enabled")
    m_via_x = fire(net, m, x)
    if not enabled(net, m_via_x, y):
        raise InvariantError(
            f"diamond completion failed on a pure plain net at {m} with "
            f"y='{y}', x='{x}'")
    hat = fire(net, m_via_x, y)
    if hat != fire(net, m_via_y, x):
        raise InvariantError("diamond corners disagree; firing rule broken")
    return hat


def _move_back(net, m0, word, src: int, dst: int):
    """Commute word[src] backwards to position dst via diamond completions.

    Every intermediate swap is validated by complete_diamond, so the result
    is firable and one-permutation-per-step equivalent to the input.
    """
    w = list(word)
    letter = w[src]
    for i in range(src, dst, -1):
        prefix_mark = fire_sequence(net, m0, w[:i - 1])
        complete_diamond(net, prefix_mark, w[i - 1], letter)
        w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def _all_short_sequences_persistent(net, m0, max_len):
    """Exhaustively verify every firable sequence up to max_len is persistent."""
    frontier = [((), m0)]
    for _ in range(max_len):
        nxt = []
        for word, m in frontier:
            before = enabled_transitions(net, m)
            for t in before:
                m2 = fire(net, m, t)
                for u in before:
                    if u != t and not enabled(net, m2, u):
                        return word + (t,)
                nxt.append((word + (t,), m2))
        frontier = nxt
    return None


def unify_parikh_equivalent(net: Net, alpha: Sequence[str], beta: Sequence[str],
                            check_premises: Optional[bool] = None):
    """Permute two Parikh-equivalent sequences onto a common final diamond.

    Both sequences have length n, equal Parikh vectors and different last
    letters; provided the net is pure and plain and every firing sequence of
    length <= n-1 is persistent, there is a marking J reachable by a
    persistent sequence sigma of length n-2 such that J enables both last
    letters and sigma plus the two last letters is Parikh-equal to alpha.

    The construction works by locating, after the longest common prefix, the
    first occurrence of alpha's next letter inside beta and commuting it
    backwards one diamond at a time, which strictly grows the common prefix;
    when that occurrence is beta's own last letter the move would change the
    target diamond, so the roles flip and alpha is rewritten instead.  If
    both rewrites degenerate this way the diamond is pinned down directly by
    an exact search over sequences with the required Parikh vector: for that
    corner case a witness is not always guaranteed to exist, and its absence
    raises an invariant error carrying the instance.

    check_premises defaults to on for n <= 8 (the verification enumerates
    every short sequence and is exponential).  Returns (sigma, J).
    """
    alpha, beta = _word(alpha), _word(beta)
    n = len(alpha)
    report = classify_structure(net)
    if not report.plain or not report.pure:
        raise UnsupportedClassError("sequence unification needs a pure, plain net")
    if len(beta) != n:
        raise InputError("sequences must have equal length")
    if n < 2:
        raise InputError("sequences must have length >= 2")
    if parikh(alpha) != parikh(beta):
        raise InputError("sequences must be Parikh-equivalent")
    if alpha[-1] == beta[-1]:
        raise InputError("last letters must differ")
    m0 = net.initial
    fire_sequence(net, m0, alpha)
    fire_sequence(net, m0, beta)

    if check_premises is None:
        check_premises = n <= 8
    if check_premises:
        bad = _all_short_sequences_persistent(net, m0, n - 1)
        if bad is not None:
            raise PreconditionError(
                f"premise failed: sequence {' '.join(bad)} of length {len(bad)} "
                f"is firable but not persistent")

    def fail(msg):
        if check_premises:
            return InvariantError(msg)
        return PreconditionError(msg + " (premises were not verified; they may not hold)")

    def move_back(word, src, dst):
        try:
            return _move_back(net, m0, word, src, dst)
        except InputError as exc:
            # the commuted letter must stay enabled while moving; it can only
            # lose enabledness if some short sequence is nonpersistent
            raise fail(f"diamond move failed: {exc}") from None

    a_n, b_n = alpha[-1], beta[-1]
    while True:
        m = 0
        while m < n and alpha[m] == beta[m]:
            m += 1
        if m == n:
            raise InvariantError("sequences became identical during unification")
        if m == n - 2:
            break
        head_a = alpha[m]
        j = next((k for k in range(m + 1, n) if beta[k] == head_a), None)
        if j is None:
            raise InvariantError("Parikh equality violated during unification")
        if j < n - 1:
            beta = move_back(beta, j, m)
            continue
        head_b = beta[m]
        i = next((k for k in range(m + 1, n) if alpha[k] == head_b), None)
        if i is None:
            raise InvariantError("Parikh equality violated during unification")
        if i < n - 1:
            alpha = move_back(alpha, i, m)
            continue
        # Doubly degenerate: each head's only later occurrence is the other
        # sequence's final letter.  Fall back to the exact search.
        want = parikh(alpha)
        want[a_n] -= 1
        want[b_n] -= 1
        sigma = persistent_parikh_equivalent(net, m0, want)
        if sigma is None:
            raise fail(
                "no unifying diamond exists: no persistent sequence realises "
                f"the required Parikh vector {want}")
        J = fire_sequence(net, m0, sigma)
        if not (enabled(net, J, a_n) and enabled(net, J, b_n)):
            raise fail(
                f"no unifying diamond exists: marking {J} does not enable both "
                f"'{a_n}' and '{b_n}'")
        return sigma, J

    sigma = alpha[:n - 2]
    J = fire_sequence(net, m0, sigma)
    # base case: last two letters are crossed, both legs fire from J
    if alpha[n - 2] != b_n or beta[n - 2] != a_n:
        raise InvariantError("base case letters are not crossed")
    if not (enabled(net, J, a_n) and enabled(net, J, b_n)):
        raise InvariantError("base case marking does not span the diamond")
    verdict = sequence_persistence(net, m0, sigma)
    if not verdict.persistent:
        raise fail(
            f"unifying prefix {' '.join(sigma)} is not persistent "
            f"(fails at step {verdict.failing_index})")
    return sigma, J
