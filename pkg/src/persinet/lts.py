"""Labelled transition systems, reachability-graph construction with bound
detection, LTS-level properties, and isomorphism of deterministic LTS.

Reachability graphs are built breadth-first in canonical transition order,
so state names M0, M1, ... and all reported witnesses are stable across runs
for a fixed net.  State identity is the full marking vector; there is no
symmetry reduction, which keeps every witness literal and replayable.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .errors import InputError, UnknownIdError, UnsupportedClassError
from .net import Net


def default_max_states() -> int:
    return int(os.environ.get("PERSINET_MAX_STATES", 100000))


class Lts:
    """A finite labelled transition system with an initial state.

    states and labels keep declaration order; edges are (state, label, state)
    triples.  Reachability graphs additionally carry a marking payload per
    state, and payloads are injective (markings identify states).
    """

    def __init__(self, name, states, labels, edges, initial, payload=None):
        states = tuple(states)
        labels = tuple(labels)
        if len(set(states)) != len(states):
            raise InputError(f"lts '{name}': duplicate state ids")
        if len(set(labels)) != len(labels):
            raise InputError(f"lts '{name}': duplicate label ids")
        state_set, label_set = set(states), set(labels)
        if initial not in state_set:
            raise UnknownIdError(f"lts '{name}': initial state '{initial}' not declared")
        edges = tuple(edges)
        seen = set()
        for s, a, s2 in edges:
            if s not in state_set or s2 not in state_set:
                raise UnknownIdError(f"lts '{name}': edge ({s},{a},{s2}) uses unknown state")
            if a not in label_set:
                raise UnknownIdError(f"lts '{name}': edge ({s},{a},{s2}) uses unknown label")
            if (s, a, s2) in seen:
                raise InputError(f"lts '{name}': duplicate edge ({s},{a},{s2})")
            seen.add((s, a, s2))
        if payload is not None:
            if set(payload) != state_set:
                raise InputError(f"lts '{name}': payload must cover exactly the states")
            values = list(payload.values())
            if len(set(values)) != len(values):
                raise InputError(f"lts '{name}': state payloads must be injective")

        self.name = name
        self.states = states
        self.labels = labels
        self.edges = edges
        self.initial = initial
        self.payload = dict(payload) if payload is not None else None

        self._succ = {s: {} for s in states}
        self._pred = {s: {} for s in states}
        for s, a, s2 in edges:
            self._succ[s].setdefault(a, []).append(s2)
            self._pred[s2].setdefault(a, []).append(s)

    def enabled_labels(self, s):
        """Labels with an outgoing edge at s, in label declaration order."""
        out = self._succ[s]
        return tuple(a for a in self.labels if a in out)

    def successors(self, s, a):
        return tuple(self._succ[s].get(a, ()))

    def succ(self, s, a) -> Optional[str]:
        """Unique successor under a, or None; raises if nondeterministic."""
        tgts = self._succ[s].get(a)
        if not tgts:
            return None
        if len(tgts) > 1:
            raise UnsupportedClassError(
                f"lts '{self.name}' is nondeterministic at ({s},{a})")
        return tgts[0]

    def is_label_deterministic(self) -> bool:
        """No state has two same-labelled outgoing or incoming edges."""
        for adj in (self._succ, self._pred):
            for per_label in adj.values():
                for tgts in per_label.values():
                    if len(tgts) > 1:
                        return False
        return True

    def deadlocks(self):
        return tuple(s for s in self.states if not self._succ[s])

    def state_of_payload(self, value):
        if self.payload is None:
            raise InputError(f"lts '{self.name}' carries no payload")
        for s, v in self.payload.items():
            if v == value:
                return s
        raise UnknownIdError(f"no state carries payload {value!r}")

    def __repr__(self):
        return f"Lts({self.name!r}, |S|={len(self.states)}, |E|={len(self.edges)})"

    def __eq__(self, other):
        # payload is derived data and does not survive printing
        if not isinstance(other, Lts):
            return NotImplemented
        return (self.name == other.name and self.states == other.states
                and self.labels == other.labels and self.edges == other.edges
                and self.initial == other.initial)

    __hash__ = None


@dataclass
class BoundReport:
    """Outcome of bounded reachability exploration.

    status is "bounded" or "cutoff-reached"; with a cutoff the net is not
    certified bounded and safe/k_bound describe only the explored part.
    """

    status: str
    k_bound: int
    place_bounds: dict
    safe: Optional[bool]
    state_count: int
    edge_count: int
    cutoff: int

    @property
    def bounded(self) -> Optional[bool]:
        return True if self.status == "bounded" else None


def build_rg(net: Net, max_states: Optional[int] = None):
    """Breadth-first reachability graph in canonical transition order.

    Returns (Lts, BoundReport).  States are named M0, M1, ... in discovery
    order and carry their marking as payload.  Exceeding max_states is not
    an error: the report comes back flagged "cutoff-reached".
    """
    net._check_behavioural()
    cutoff = default_max_states() if max_states is None else max_states
    if cutoff < 1:
        raise InputError("max_states must be >= 1")

    pre = net._pre
    post = net._post
    nt = len(net.transitions)

    index = {net.initial: 0}
    order = [net.initial]
    edges = []
    place_bounds = list(net.initial)
    queue = deque([net.initial])
    truncated = False
    while queue:
        m = queue.popleft()
        for ti in range(nt):
            ok = True
            for pi, w in pre[ti].items():
                if m[pi] < w:
                    ok = False
                    break
            if not ok:
                continue
            out = list(m)
            for pi, w in pre[ti].items():
                out[pi] -= w
            for pi, w in post[ti].items():
                out[pi] += w
            m2 = tuple(out)
            if m2 not in index:
                if len(order) >= cutoff:
                    truncated = True
                    continue
                index[m2] = len(order)
                order.append(m2)
                queue.append(m2)
                for pi, n in enumerate(m2):
                    if n > place_bounds[pi]:
                        place_bounds[pi] = n
            edges.append((index[m], ti, index[m2]))

    names = [f"M{i}" for i in range(len(order))]
    lts = Lts(
        name=f"rg({net.name})",
        states=names,
        labels=net.transitions,
        edges=[(names[i], net.transitions[ti], names[j]) for i, ti, j in edges],
        initial=names[0],
        payload={names[i]: order[i] for i in range(len(order))},
    )
    if truncated:
        report = BoundReport(
            status="cutoff-reached", k_bound=max(place_bounds),
            place_bounds={p: place_bounds[i] for i, p in enumerate(net.places)},
            safe=None, state_count=len(order), edge_count=len(edges), cutoff=cutoff)
    else:
        k = max(place_bounds) if place_bounds else 0
        report = BoundReport(
            status="bounded", k_bound=k,
            place_bounds={p: place_bounds[i] for i, p in enumerate(net.places)},
            safe=(k <= 1), state_count=len(order), edge_count=len(edges),
            cutoff=cutoff)
    return lts, report


@dataclass
class LtsReport:
    finite: bool
    totally_reachable: bool
    deterministic: bool
    deadlocks: tuple


def _parikh_spot_check(lts: Lts, depth: int = 3) -> bool:
    """Bounded check that same-Parikh paths agree on endpoints, both ways.

    Complements the structural per-state label functionality: full
    determinism also forbids same-Parikh paths joining distinct states.
    """
    for start in lts.states:
        frontier = {start: {()}}  # state -> parikh keys reaching it
        seen: dict = {}
        for _ in range(depth):
            nxt: dict = {}
            for s, keys in frontier.items():
                for a, tgts in lts._succ[s].items():
                    for s2 in tgts:
                        for key in keys:
                            k2 = tuple(sorted((*key, a)))
                            prev = seen.get(k2)
                            if prev is None:
                                seen[k2] = s2
                            elif prev != s2:
                                return False
                            nxt.setdefault(s2, set()).add(k2)
            frontier = nxt
    for target in lts.states:
        frontier = {target: {()}}
        seen = {}
        for _ in range(depth):
            nxt = {}
            for s, keys in frontier.items():
                for a, srcs in lts._pred[s].items():
                    for s0 in srcs:
                        for key in keys:
                            k2 = tuple(sorted((*key, a)))
                            prev = seen.get(k2)
                            if prev is None:
                                seen[k2] = s0
                            elif prev != s0:
                                return False
                            nxt.setdefault(s0, set()).add(k2)
            frontier = nxt
    return True


def lts_properties(lts: Lts, spot_depth: int = 3) -> LtsReport:
    """Finiteness, total reachability, determinism and deadlocks.

    Determinism combines per-state label functionality (successor and
    predecessor form) with a bounded Parikh-path spot check; deciding the
    full Parikh formulation on arbitrary LTS would be exhaustive, and
    reachability graphs satisfy it whenever the structural check passes.
    """
    seen = {lts.initial}
    queue = deque([lts.initial])
    while queue:
        s = queue.popleft()
        for tgts in lts._succ[s].values():
            for s2 in tgts:
                if s2 not in seen:
                    seen.add(s2)
                    queue.append(s2)
    totally = len(seen) == len(lts.states)
    deterministic = lts.is_label_deterministic() and _parikh_spot_check(lts, spot_depth)
    return LtsReport(
        finite=True, totally_reachable=totally, deterministic=deterministic,
        deadlocks=lts.deadlocks())


@dataclass
class PersistenceVerdict:
    persistent: bool
    witness: Optional[tuple] = None  # (state, t, u): u disabled after t

    def __bool__(self):
        return self.persistent


def persistence_check(lts: Lts) -> PersistenceVerdict:
    """Scan for a state where one enabled label disables another.

    Requires a deterministic LTS (reachability graphs always are); the
    common successor closing the diamond is then automatic whenever both
    orders fire, and is verified as an internal sanity condition.
    """
    if not lts.is_label_deterministic():
        raise UnsupportedClassError(
            f"persistence check needs a deterministic LTS, '{lts.name}' is not")
    for s in lts.states:
        en = lts.enabled_labels(s)
        for t in en:
            after_t = lts.succ(s, t)
            for u in en:
                if u == t:
                    continue
                if lts.succ(after_t, u) is None:
                    return PersistenceVerdict(False, (s, t, u))
        for t in en:
            for u in en:
                if u <= t:
                    continue
                r1 = lts.succ(lts.succ(s, t), u)
                r2 = lts.succ(lts.succ(s, u), t)
                if r1 != r2:
                    raise UnsupportedClassError(
                        f"lts '{lts.name}' closes a diamond at {s} on two different "
                        f"states; it cannot be a reachability graph")
    return PersistenceVerdict(True, None)


@dataclass
class IsoVerdict:
    isomorphic: bool
    mapping: Optional[dict] = None
    mismatch: Optional[tuple] = None  # (state-of-l1 or None, label or reason)

    def __bool__(self):
        return self.isomorphic


def isomorphic(l1: Lts, l2: Lts) -> IsoVerdict:
    """Bijection between two deterministic, totally reachable LTS.

    Labels must match up to set equality (the bijection is on states only).
    The synchronized traversal from the initial states in sorted label order
    builds the unique candidate; the first divergence is reported.
    """
    for lts in (l1, l2):
        rep = lts_properties(lts)
        if not rep.deterministic:
            raise UnsupportedClassError(f"lts '{lts.name}' is not deterministic")
        if not rep.totally_reachable:
            raise UnsupportedClassError(f"lts '{lts.name}' is not totally reachable")
    if set(l1.labels) != set(l2.labels):
        return IsoVerdict(False, mismatch=(None, "label sets differ"))
    if len(l1.states) != len(l2.states):
        return IsoVerdict(False, mismatch=(None, "state counts differ"))

    fwd = {l1.initial: l2.initial}
    bwd = {l2.initial: l1.initial}
    queue = deque([(l1.initial, l2.initial)])
    while queue:
        s1, s2 = queue.popleft()
        en1, en2 = set(l1.enabled_labels(s1)), set(l2.enabled_labels(s2))
        if en1 != en2:
            diff = sorted(en1 ^ en2)[0]
            return IsoVerdict(False, mismatch=(s1, diff))
        for a in sorted(en1):
            t1, t2 = l1.succ(s1, a), l2.succ(s2, a)
            if t1 in fwd:
                if fwd[t1] != t2:
                    return IsoVerdict(False, mismatch=(s1, a))
            elif t2 in bwd:
                return IsoVerdict(False, mismatch=(s1, a))
            else:
                fwd[t1] = t2
                bwd[t2] = t1
                queue.append((t1, t2))
    if len(fwd) != len(l1.states):
        # unreachable under total reachability, kept as a guard
        return IsoVerdict(False, mismatch=(None, "state counts differ"))
    return IsoVerdict(True, mapping=fwd)


def bfs_depths(lts: Lts) -> dict:
    """Shortest-path depth of every state from the initial one."""
    depth = {lts.initial: 0}
    queue = deque([lts.initial])
    while queue:
        s = queue.popleft()
        for a in lts.enabled_labels(s):
            for s2 in lts.successors(s, a):
                if s2 not in depth:
                    depth[s2] = depth[s] + 1
                    queue.append(s2)
    return depth


def shortest_path(lts: Lts, target: str) -> tuple:
    """Canonical shortest label path from the initial state to target."""
    parent = {lts.initial: None}
    queue = deque([lts.initial])
    while queue:
        s = queue.popleft()
        if s == target:
            break
        for a in lts.enabled_labels(s):
            for s2 in lts.successors(s, a):
                if s2 not in parent:
                    parent[s2] = (s, a)
                    queue.append(s2)
    if target not in parent:
        raise UnknownIdError(f"state '{target}' unreachable in '{lts.name}'")
    path = []
    cur = target
    while parent[cur] is not None:
        prev, a = parent[cur]
        path.append(a)
        cur = prev
    return tuple(reversed(path))
