"""Empirical theorem harness: a seeded random-net generator with class
constraints, per-theorem checkers with replayable reports, brute-force
oracles, and the implication matrix over the persistent-permutability
notions.

Theorems are checked, not proved: a checker confirms instances, skips nets
outside the theorem's class premise, and escalates any violation with a
full witness.  Every run records its seed and bounds so failures replay
exactly.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .errors import InputError, PreconditionError, ResourceExceededError
from .fairness import (
    AnalysisBounds,
    Lasso,
    PeMatrix,
    pe_probe_matrix,
    search_persistent_equivalent_lasso,
)
from .lts import bfs_depths, build_rg, persistence_check, shortest_path
from .net import (
    Net,
    classify_structure,
    enabled,
    enabled_transitions,
    fire,
    fire_sequence,
)
from .patterns import derive_nonDC_embedding
from .sequences import (
    SPE,
    SPE_PARIKH,
    complete_diamond,
    equivalence_class,
    parikh,
    perm_equivalent,
    persistent_parikh_equivalent,
    sequence_persistence,
    spe_check,
)

CLASS_CONSTRAINTS = ("CF", "FC", "EC", "DC", "AC", "pure", "plain", "pps", "safe")


@dataclass
class GenConfig:
    """Shape of a random net; same config and seed give the identical net."""

    places: int = 4
    transitions: int = 4
    max_weight: int = 1
    arc_density: float = 0.35
    token_budget: int = 3
    class_constraint: tuple = ()
    seed: int = 0

    def __post_init__(self):
        constraint = self.class_constraint
        if isinstance(constraint, str):
            constraint = (constraint,) if constraint and constraint != "none" else ()
        constraint = tuple(constraint)
        for c in constraint:
            if c not in CLASS_CONSTRAINTS:
                raise InputError(
                    f"unknown class constraint '{c}' (have {CLASS_CONSTRAINTS})")
        if ("FC" in constraint or "DC" in constraint or "AC" in constraint
                or "pps" in constraint or "plain" in constraint) and self.max_weight != 1:
            raise InputError("plainness-based constraints force max_weight=1")
        if not 0.0 <= self.arc_density <= 1.0:
            raise InputError("arc_density must lie in [0,1]")
        if min(self.places, self.transitions, self.token_budget) < 1:
            raise InputError("places, transitions and token_budget must be >= 1")
        object.__setattr__(self, "class_constraint", constraint)


def _repair_equal_conflict(rng, pre):
    """Copy one input vector across each conflict-connected component.

    Duplicating the full input-weight vector is the minimal change that
    makes conflicting transitions agree; copying can create new conflicts,
    so iterate to a fixpoint.
    """
    nt = len(pre)
    changed = True
    while changed:
        changed = False
        parent = list(range(nt))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(nt):
            for j in range(i + 1, nt):
                if set(pre[i]) & set(pre[j]):
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)
        for i in range(nt):
            rep = find(i)
            if pre[i] != pre[rep]:
                pre[i] = dict(pre[rep])
                changed = True


def gen_random_net(cfg: GenConfig, max_states: int = 4000) -> Net:
    """Sample a net honouring the class constraints, deterministically.

    Structural constraints are established constructively (CF by keeping one
    consumer per place, FC/EC by equalising the input vectors of conflicting
    transitions); behavioural ones (safe, and the safe part of pps) by
    rejection sampling with fresh draws from the same stream.  Every
    transition keeps at least one input and never produces more tokens than
    it consumes, so the sampled nets are bounded by construction.
    """
    rng = random.Random(cfg.seed)
    want = set(cfg.class_constraint)
    plain = bool(want & {"FC", "DC", "AC", "plain", "pps"}) or cfg.max_weight == 1
    for _ in range(400):
        places = [f"p{i}" for i in range(cfg.places)]
        transitions = [f"t{i}" for i in range(cfg.transitions)]
        pre = [dict() for _ in transitions]
        post = [dict() for _ in transitions]
        for ti in range(cfg.transitions):
            for pi in range(cfg.places):
                if rng.random() < cfg.arc_density:
                    pre[ti][pi] = 1 if plain else rng.randint(1, cfg.max_weight)
                if rng.random() < cfg.arc_density:
                    post[ti][pi] = 1 if plain else rng.randint(1, cfg.max_weight)
        if "pure" in want or "pps" in want:
            for ti in range(cfg.transitions):
                for pi in list(pre[ti]):
                    if pi in post[ti]:
                        del post[ti][pi]
        for ti in range(cfg.transitions):
            if not pre[ti]:
                pi = rng.randrange(cfg.places)
                pre[ti][pi] = 1
                post[ti].pop(pi, None)
        if "CF" in want:
            for pi in range(cfg.places):
                consumers = [ti for ti in range(cfg.transitions) if pi in pre[ti]]
                for ti in consumers[1:]:
                    del pre[ti][pi]
            free = [pi for pi in range(cfg.places)
                    if not any(pi in pre[ti] for ti in range(cfg.transitions))]
            rng.shuffle(free)
            for ti in range(cfg.transitions):
                if not pre[ti]:
                    if not free:
                        break
                    pi = free.pop()
                    pre[ti][pi] = 1
                    post[ti].pop(pi, None)
            if any(not pre[ti] for ti in range(cfg.transitions)):
                continue
        if "FC" in want or "EC" in want:
            _repair_equal_conflict(rng, pre)
        # cap each transition's output weight by its input weight: the total
        # token count can then never grow, which bounds the net outright
        for ti in range(cfg.transitions):
            room = sum(pre[ti].values())
            keep = {}
            for pi in sorted(post[ti], key=lambda x: rng.random()):
                w = min(post[ti][pi], room)
                if w >= 1:
                    keep[pi] = w
                    room -= w
            post[ti] = keep

        marking = {}
        for _ in range(cfg.token_budget):
            p = places[rng.randrange(cfg.places)]
            marking[p] = marking.get(p, 0) + 1
        arcs = []
        for ti, t in enumerate(transitions):
            for pi, w in pre[ti].items():
                arcs.append((places[pi], t, w))
            for pi, w in post[ti].items():
                arcs.append((t, places[pi], w))
        net = Net(f"gen{cfg.seed}", places, transitions, arcs, marking)

        report = classify_structure(net)
        if "plain" in want and not report.plain:
            continue
        if ("pure" in want or "pps" in want) and not report.pure:
            continue
        if "CF" in want and not report.choice_free:
            continue
        if "DC" in want and not report.dissymmetric_choice:
            continue
        if "AC" in want and not report.asymmetric_choice:
            continue
        if "FC" in want and not report.free_choice:
            continue
        if "EC" in want and not report.equal_conflict:
            continue
        if ("safe" in want or "pps" in want):
            _, bound = build_rg(net, max_states)
            if bound.status != "bounded" or not bound.safe:
                continue
        return net
    raise ResourceExceededError(
        f"rejection budget exhausted generating {sorted(want)} net for seed {cfg.seed}")


def _net_doc(net):
    from . import textio

    return textio.print_net(net)


THEOREM_IDS = (
    "EC-main",
    "DC-main",
    "CF-persistent",
    "perm-implies-parikh",
    "diamond-completion",
    "persistence-factorisation",
    "spe-implies-fpe-probe",
)


@dataclass
class TheoremReport:
    theorem: str
    instances: int = 0
    confirmations: int = 0
    skips: list = field(default_factory=list)       # (reason, payload)
    violations: list = field(default_factory=list)  # replayable witnesses
    bounds: Optional[AnalysisBounds] = None
    seed: Optional[int] = None
    wall_time: float = 0.0

    @property
    def ok(self):
        return not self.violations


def _nonpersistent_spot(net, rg):
    """(state, delta, leg_a, leg_b) for the nearest nonpersistent marking."""
    for s in rg.states:  # BFS order, so the first hit is nearest
        m = rg.payload[s]
        en = enabled_transitions(net, m)
        for t in en:
            m2 = fire(net, m, t)
            for u in en:
                if u != t and not enabled(net, m2, u):
                    return s, shortest_path(rg, s), t, u
    return None


def _random_firable(net, rng, max_len):
    word, m = [], net.initial
    for _ in range(rng.randint(0, max_len)):
        en = enabled_transitions(net, m)
        if not en:
            break
        t = rng.choice(en)
        word.append(t)
        m = fire(net, m, t)
    return tuple(word)


def _random_permutation(net, rng, word, swaps):
    """A firable word reached from word by random firable adjacent swaps."""
    from .sequences import _markings_along, _swap_neighbours

    cur = tuple(word)
    for _ in range(swaps):
        options = _swap_neighbours(net, net.initial, cur, _markings_along(net, net.initial, cur))
        if not options:
            break
        cur = rng.choice(options)
    return cur


def check_theorem(theorem: str, net: Net,
                  bounds: Optional[AnalysisBounds] = None,
                  seed: int = 0, max_states: int = 4000) -> TheoremReport:
    """Check one theorem on one net; skips record unmet class premises."""
    if theorem not in THEOREM_IDS:
        raise InputError(f"unknown theorem '{theorem}' (have {THEOREM_IDS})")
    bounds = bounds or AnalysisBounds()
    rng = random.Random(seed ^ 0x5EED)
    report = TheoremReport(theorem, bounds=bounds, seed=seed)
    t0 = time.perf_counter()
    cls = classify_structure(net)

    def skip(reason):
        report.skips.append((reason, net.name))

    def violation(payload):
        report.violations.append(payload)

    if theorem == "CF-persistent":
        if not cls.choice_free:
            skip("net is not choice-free")
        else:
            report.instances += 1
            rg, bound = build_rg(net, max_states)
            if bound.status != "bounded":
                skip("reachability graph exceeded the state budget")
            elif persistence_check(rg).persistent:
                report.confirmations += 1
            else:
                violation({"net": net.name, "witness": persistence_check(rg).witness})

    elif theorem == "EC-main":
        # an equal-conflict net that is nonpersistent can have no persistent
        # Parikh equivalent for the path into its nearest conflict
        if not cls.equal_conflict:
            skip("net is not equal-conflict")
        else:
            report.instances += 1
            rg, bound = build_rg(net, max_states)
            if bound.status != "bounded":
                skip("reachability graph exceeded the state budget")
            else:
                spot = _nonpersistent_spot(net, rg)
                if spot is None:
                    report.confirmations += 1  # persistent: conclusion holds
                else:
                    _, delta, leg_a, _ = spot
                    found = persistent_parikh_equivalent(
                        net, net.initial, parikh(delta + (leg_a,)))
                    if found is None:
                        report.confirmations += 1
                    else:
                        violation({"net": net.name, "delta": delta, "leg": leg_a,
                                   "equivalent": found})

    elif theorem == "DC-main":
        # contrapositive form: a pure plain nonpersistent net for which the
        # bounded Parikh-equivalence check finds no refutation must not be
        # DC, and the non-DC pattern must be derivable from its conflict.
        # Unlike the equal-conflict case the refuting sequence is not pinned
        # to the conflict path, so the full bounded check is required; on
        # suspicion the bound is raised before a violation is declared.
        if not (cls.plain and cls.pure):
            skip("net is not pure and plain")
        else:
            report.instances += 1
            rg, bound = build_rg(net, max_states)
            if bound.status != "bounded":
                skip("reachability graph exceeded the state budget")
            else:
                spot = _nonpersistent_spot(net, rg)
                if spot is None:
                    report.confirmations += 1  # persistent: conclusion holds
                else:
                    spe_bound = bounds.sequence_len
                    verdict = spe_check(net, spe_bound, SPE_PARIKH)
                    while (not verdict.refuted and cls.dissymmetric_choice
                           and spe_bound < 2 * bounds.sequence_len):
                        spe_bound += 4
                        verdict = spe_check(net, spe_bound, SPE_PARIKH)
                    if verdict.refuted:
                        report.confirmations += 1  # premise refuted, vacuous
                    elif cls.dissymmetric_choice:
                        # a genuine refutation of the implication: the
                        # conflict sits on a multi-token shared place and the
                        # persistent detours cover every Parikh vector
                        violation({"net": net.name,
                                   "document": _net_doc(net),
                                   "spe_bound": spe_bound,
                                   "reason": "DC net, nonpersistent, with no "
                                             "bounded refutation of the "
                                             "Parikh-equivalence premise"})
                    else:
                        try:
                            derive_nonDC_embedding(
                                net, spe_bound=bounds.sequence_len,
                                max_states=max_states)
                            report.confirmations += 1
                        except PreconditionError as exc:
                            # the implication's conclusion (not DC) holds, but
                            # the companion pattern is absent; record it
                            report.confirmations += 1
                            report.skips.append(
                                ("pattern not embedded though premises hold",
                                 {"net": net.name, "detail": str(exc)}))
                        except ResourceExceededError as exc:
                            report.skips.append(
                                ("derivation hit a resource bound",
                                 {"net": net.name, "detail": str(exc)}))

    elif theorem == "perm-implies-parikh":
        report.instances += 1
        sigma = _random_firable(net, rng, bounds.sequence_len)
        tau = _random_permutation(net, rng, sigma, swaps=4)
        if perm_equivalent(net, net.initial, sigma, tau) and parikh(sigma) != parikh(tau):
            violation({"net": net.name, "sigma": sigma, "tau": tau})
        else:
            report.confirmations += 1

    elif theorem == "diamond-completion":
        if not (cls.plain and cls.pure):
            skip("net is not pure and plain")
        else:
            rg, bound = build_rg(net, max_states)
            checked = False
            for s in rg.states[:50]:
                m = rg.payload[s]
                en = enabled_transitions(net, m)
                for y in en:
                    after = fire(net, m, y)
                    for x in enabled_transitions(net, after):
                        if not enabled(net, m, x):
                            continue
                        checked = True
                        hat = complete_diamond(net, m, y, x)
                        if hat != fire_sequence(net, m, (y, x)):
                            violation({"net": net.name, "marking": m, "y": y, "x": x})
            if checked:
                report.instances += 1
                if not report.violations:
                    report.confirmations += 1
            else:
                skip("no three-quarter diamond found to complete")

    elif theorem == "persistence-factorisation":
        report.instances += 1
        sigma = _random_firable(net, rng, bounds.sequence_len)
        cut = rng.randint(0, len(sigma))
        whole = sequence_persistence(net, net.initial, sigma).persistent
        head = sequence_persistence(net, net.initial, sigma[:cut]).persistent
        mid = fire_sequence(net, net.initial, sigma[:cut])
        tail = sequence_persistence(net, mid, sigma[cut:]).persistent
        if whole != (head and tail):
            violation({"net": net.name, "sigma": sigma, "cut": cut,
                       "whole": whole, "head": head, "tail": tail})
        else:
            report.confirmations += 1

    elif theorem == "spe-implies-fpe-probe":
        # outside the equal-conflict and pure-DC classes the implication can
        # fail; the checker records whether a fair probe run witnesses that
        report.instances += 1
        verdict = spe_check(net, bounds.sequence_len, SPE)
        probe = _fair_nonpersistent_lasso(net, bounds)
        if verdict.refuted or probe is None:
            skip("no fair nonpersistent lasso found to probe")
        else:
            search = search_persistent_equivalent_lasso(
                net, probe, bounds.max_prefix, bounds.max_cycle, bounds.depth)
            report.confirmations += 1
            report.skips.append(
                ("probe outcome", {"lasso": str(probe), "search": search.status}))

    report.wall_time = time.perf_counter() - t0
    return report


def _fair_nonpersistent_lasso(net, bounds):
    """A strongly fair, nonpersistent lasso of the net, if a short one exists."""
    from .fairness import fairness_classify, lasso_persistence
    from .fairness import validate_lasso
    from .errors import InputError as _IE

    rg, bound = build_rg(net, 2000)
    if bound.status != "bounded":
        return None
    depths = bfs_depths(rg)
    for s in rg.states:
        if depths[s] > bounds.max_prefix:
            continue
        prefix = shortest_path(rg, s)
        # canonical cycle search from s, capped length
        entry = rg.payload[s]
        stack = [((), entry)]
        while stack:
            word, m = stack.pop()
            for t in reversed(enabled_transitions(net, m)):
                m2 = fire(net, m, t)
                w2 = word + (t,)
                if m2 == entry:
                    lasso = Lasso(prefix, w2)
                    try:
                        validate_lasso(net, lasso)
                    except _IE:
                        continue
                    rep = fairness_classify(net, lasso)
                    if rep.strongly_fair and not lasso_persistence(net, lasso).persistent:
                        return lasso
                elif len(w2) < bounds.max_cycle:
                    stack.append((w2, m2))
    return None


def run_theorem_suite(theorem: str, cfg_base: GenConfig, seeds,
                      bounds: Optional[AnalysisBounds] = None) -> TheoremReport:
    """Run one theorem checker across many seeded random nets."""
    bounds = bounds or AnalysisBounds()
    total = TheoremReport(theorem, bounds=bounds, seed=None)
    t0 = time.perf_counter()
    for seed in seeds:
        cfg = GenConfig(
            places=cfg_base.places, transitions=cfg_base.transitions,
            max_weight=cfg_base.max_weight, arc_density=cfg_base.arc_density,
            token_budget=cfg_base.token_budget,
            class_constraint=cfg_base.class_constraint, seed=seed)
        try:
            net = gen_random_net(cfg)
        except ResourceExceededError:
            total.skips.append(("generation budget exhausted", seed))
            continue
        rep = check_theorem(theorem, net, bounds, seed=seed)
        total.instances += rep.instances
        total.confirmations += rep.confirmations
        total.skips.extend((reason, seed) for reason, _ in rep.skips)
        total.violations.extend({"seed": seed, **v} for v in rep.violations)
    total.wall_time = time.perf_counter() - t0
    return total


# -- brute-force oracles -------------------------------------------------------

def oracle_spe_check(net: Net, bound: int, mode: str = SPE):
    """Unpruned reference for spe_check: enumerate every firable sequence up
    to the bound and, for the nonpersistent ones, decide the question by
    exhausting the whole class (or all realisations of the Parikh vector)
    with no memoisation and no persistence pruning."""
    frontier = [((), net.initial)]
    searched = 0
    for _ in range(bound):
        nxt = []
        for word, m in frontier:
            for t in enabled_transitions(net, m):
                w2 = word + (t,)
                m2 = fire(net, m, t)
                searched += 1
                nxt.append((w2, m2))
                if sequence_persistence(net, net.initial, w2).persistent:
                    continue
                if mode == SPE:
                    members = equivalence_class(net, net.initial, w2)
                    good = any(sequence_persistence(net, net.initial, w).persistent
                               for w in members)
                else:
                    good = any(
                        sequence_persistence(net, net.initial, w).persistent
                        for w in _all_with_parikh(net, net.initial, parikh(w2)))
                if not good:
                    from .sequences import SpeVerdict
                    return SpeVerdict(mode, bound, "refuted", w2, searched)
        frontier = nxt
    from .sequences import SpeVerdict
    return SpeVerdict(mode, bound, "holds-up-to-bound", None, searched)


def _all_with_parikh(net, m0, target):
    """Every firable sequence realising the Parikh vector, no pruning."""
    total = sum(target.values())
    out = []

    def step(word, m, remaining):
        if len(word) == total:
            out.append(tuple(word))
            return
        for t in net.transitions:
            if remaining.get(t, 0) and enabled(net, m, t):
                remaining[t] -= 1
                step(word + [t], fire(net, m, t), remaining)
                remaining[t] += 1

    step([], m0, dict(target))
    return out


# -- implication matrix ---------------------------------------------------------

NOTIONS = ("APE", "JPE", "FPE", "SPE")
IMPLICATIONS = (("APE", "JPE"), ("APE", "SPE"), ("JPE", "FPE"))

REFUTED = "refuted"
REFUTED_IN_BOUNDS = "refuted-within-bounds"
HOLDS_EVIDENCE = "holds-evidence"


@dataclass
class ImplicationMatrix:
    evidence: dict                 # notion -> status
    witnesses: dict                # notion -> refuting run (if any)
    matrix: PeMatrix
    violations: list


def implication_matrix(net: Net, probes, bounds: Optional[AnalysisBounds] = None,
                       finite_regime: str = "maximal") -> ImplicationMatrix:
    """Assemble the evidence table over APE/JPE/FPE/SPE from probe runs.

    A probe with no (bounded) persistent equivalent refutes APE; if the
    probe is just it also refutes JPE, and if fair, FPE.  Refutations of
    finite probes are exact; lasso refutations stay bound-relative.  The
    known implications must never be violated by the assembled evidence;
    any violation is escalated in the report.
    """
    matrix = pe_probe_matrix(net, probes, bounds, finite_regime)
    evidence = {n: HOLDS_EVIDENCE for n in NOTIONS}
    witnesses = {}

    if matrix.spe.refuted:
        evidence["SPE"] = REFUTED
        witnesses["SPE"] = matrix.spe.counterexample

    def refute(notion, status, run):
        order = (HOLDS_EVIDENCE, REFUTED_IN_BOUNDS, REFUTED)
        if order.index(status) > order.index(evidence[notion]):
            evidence[notion] = status
            witnesses[notion] = run

    for row in matrix.probes:
        if row.equivalent == "found":
            continue
        exact = row.equivalent == "none"
        status = REFUTED if exact else REFUTED_IN_BOUNDS
        refute("APE", status, row.run)
        if row.just:
            refute("JPE", status, row.run)
        if row.fair:
            refute("FPE", status, row.run)

    # an exact SPE counterexample is a run, hence also an APE witness
    if evidence["SPE"] == REFUTED:
        refute("APE", REFUTED, witnesses["SPE"])

    violations = []
    rank = {REFUTED: 0, REFUTED_IN_BOUNDS: 1, HOLDS_EVIDENCE: 2}
    for strong, weak in IMPLICATIONS:
        # if the weaker notion is refuted the stronger one must be refuted
        if rank[evidence[weak]] < rank[evidence[strong]]:
            violations.append(
                f"{strong} => {weak} violated: {weak} is {evidence[weak]} "
                f"while {strong} is {evidence[strong]}")
    for row in matrix.probes:
        if row.fair and not row.just:
            violations.append(f"probe {row.run} is fair but not just")
        if row.just and not row.progress:
            violations.append(f"probe {row.run} is just but lacks progress")
    return ImplicationMatrix(evidence, witnesses, matrix, violations)
