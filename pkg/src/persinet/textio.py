"""Line-oriented text formats for nets, transition systems, patterns and
lassos, plus DOT export.

One declaration per line, '#' starts a comment, blank lines are ignored.
Printing emits a canonical form and parsing it back reproduces the object,
which the corpus round-trip suite pins down.

    net:      net NAME / place ID [init N] / trans ID / arc ID -> ID [W]
    lts:      lts NAME / state ID / initial ID / edge ID LABEL ID
    pattern:  pattern NAME / state ID / arc ID LABEL ID / exclude ID LABEL
    lasso:    "PREFIX ; CYCLE", transitions whitespace-separated, empty
              prefix allowed

An arc's direction disambiguates input from output weights; the default
weight is 1 and an explicit 0 is rejected (absent arcs mean 0).  Patterns
also accept 'edge' for 'arc'.
"""

from __future__ import annotations

from typing import Optional

from .errors import InputError, ParseError
from .fairness import Lasso, validate_lasso
from .lts import Lts
from .net import Net
from .patterns import Embedding, Pattern


def _lines(text):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _nat(token, no, minimum=0):
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"expected a natural number, got '{token}'", no) from None
    if value < minimum:
        raise ParseError(f"expected a number >= {minimum}, got '{token}'", no)
    return value


def parse_net(text: str) -> Net:
    name = None
    places, transitions, arcs = [], [], []
    marking = {}
    seen = set()
    for no, tok in _lines(text):
        kind = tok[0]
        if kind == "net":
            if name is not None:
                raise ParseError("duplicate 'net' header", no)
            if len(tok) != 2:
                raise ParseError("usage: net <name>", no)
            name = tok[1]
        elif kind == "place":
            if len(tok) not in (2, 4) or (len(tok) == 4 and tok[2] != "init"):
                raise ParseError("usage: place <id> [init <nat>]", no)
            pid = tok[1]
            if pid in seen:
                raise ParseError(f"duplicate id '{pid}'", no)
            seen.add(pid)
            places.append(pid)
            if len(tok) == 4:
                marking[pid] = _nat(tok[3], no)
        elif kind == "trans":
            if len(tok) != 2:
                raise ParseError("usage: trans <id>", no)
            tid = tok[1]
            if tid in seen:
                raise ParseError(f"duplicate id '{tid}'", no)
            seen.add(tid)
            transitions.append(tid)
        elif kind == "arc":
            if len(tok) not in (4, 5) or tok[2] != "->":
                raise ParseError("usage: arc <id> -> <id> [<weight>=1]", no)
            src, dst = tok[1], tok[3]
            weight = _nat(tok[4], no, minimum=1) if len(tok) == 5 else 1
            arcs.append((no, src, dst, weight))
        else:
            raise ParseError(f"unknown declaration '{kind}'", no)
    if name is None:
        raise ParseError("missing 'net <name>' header")
    declared = set(places) | set(transitions)
    for no, src, dst, _ in arcs:
        for x in (src, dst):
            if x not in declared:
                raise ParseError(f"arc uses undeclared id '{x}'", no)
    try:
        return Net(name, places, transitions,
                   [(s, d, w) for _, s, d, w in arcs], marking)
    except InputError as exc:
        raise ParseError(str(exc)) from None


def print_net(net: Net) -> str:
    out = [f"net {net.name}"]
    for i, p in enumerate(net.places):
        if net.initial[i]:
            out.append(f"place {p} init {net.initial[i]}")
        else:
            out.append(f"place {p}")
    for t in net.transitions:
        out.append(f"trans {t}")
    for src, dst, w in net.arcs():
        out.append(f"arc {src} -> {dst}" + (f" {w}" if w != 1 else ""))
    return "\n".join(out) + "\n"


def parse_lts(text: str) -> Lts:
    name, initial = None, None
    states, labels, edges = [], [], []
    seen_states, seen_edges = set(), set()
    for no, tok in _lines(text):
        kind = tok[0]
        if kind == "lts":
            if name is not None:
                raise ParseError("duplicate 'lts' header", no)
            name = tok[1] if len(tok) == 2 else None
            if name is None:
                raise ParseError("usage: lts <name>", no)
        elif kind == "state":
            if len(tok) != 2:
                raise ParseError("usage: state <id>", no)
            if tok[1] in seen_states:
                raise ParseError(f"duplicate state '{tok[1]}'", no)
            seen_states.add(tok[1])
            states.append(tok[1])
        elif kind == "initial":
            if len(tok) != 2:
                raise ParseError("usage: initial <id>", no)
            if initial is not None:
                raise ParseError("duplicate 'initial'", no)
            initial = tok[1]
        elif kind == "edge":
            if len(tok) != 4:
                raise ParseError("usage: edge <state> <label> <state>", no)
            s, a, s2 = tok[1:4]
            if (s, a, s2) in seen_edges:
                raise ParseError(f"duplicate edge {s} {a} {s2}", no)
            seen_edges.add((s, a, s2))
            if a not in labels:
                labels.append(a)
            edges.append((s, a, s2))
        else:
            raise ParseError(f"unknown declaration '{kind}'", no)
    if name is None:
        raise ParseError("missing 'lts <name>' header")
    if initial is None:
        raise ParseError("missing 'initial <id>'")
    try:
        return Lts(name, states, labels, edges, initial)
    except InputError as exc:
        raise ParseError(str(exc)) from None


def print_lts(lts: Lts) -> str:
    out = [f"lts {lts.name}"]
    out += [f"state {s}" for s in lts.states]
    out.append(f"initial {lts.initial}")
    out += [f"edge {s} {a} {s2}" for s, a, s2 in lts.edges]
    return "\n".join(out) + "\n"


def parse_pattern(text: str) -> Pattern:
    name = None
    states, labels, arcs, exclusions = [], [], [], []
    seen_states = set()
    for no, tok in _lines(text):
        kind = tok[0]
        if kind == "pattern":
            if name is not None:
                raise ParseError("duplicate 'pattern' header", no)
            if len(tok) != 2:
                raise ParseError("usage: pattern <name>", no)
            name = tok[1]
        elif kind == "state":
            if len(tok) != 2:
                raise ParseError("usage: state <id>", no)
            if tok[1] in seen_states:
                raise ParseError(f"duplicate state '{tok[1]}'", no)
            seen_states.add(tok[1])
            states.append(tok[1])
        elif kind in ("arc", "edge"):
            if len(tok) != 4:
                raise ParseError(f"usage: {kind} <state> <label> <state>", no)
            s, a, s2 = tok[1:4]
            if a not in labels:
                labels.append(a)
            arcs.append((s, a, s2))
        elif kind == "exclude":
            if len(tok) != 3:
                raise ParseError("usage: exclude <state> <label>", no)
            s, a = tok[1], tok[2]
            if a not in labels:
                labels.append(a)
            exclusions.append((s, a))
        else:
            raise ParseError(f"unknown declaration '{kind}'", no)
    if name is None:
        raise ParseError("missing 'pattern <name>' header")
    try:
        return Pattern(name, states, labels, arcs, exclusions)
    except InputError as exc:
        raise ParseError(str(exc)) from None


def print_pattern(pattern: Pattern) -> str:
    out = [f"pattern {pattern.name}"]
    out += [f"state {s}" for s in pattern.states]
    out += [f"arc {s} {a} {s2}" for s, a, s2 in pattern.arcs]
    out += [f"exclude {s} {a}" for s, a in pattern.exclusions]
    return "\n".join(out) + "\n"


def parse_lasso(text: str, net: Optional[Net] = None) -> Lasso:
    """Parse "prefix ; cycle"; with a net given the lasso is validated."""
    if ";" not in text:
        raise ParseError("a lasso is written '<prefix> ; <cycle>'")
    prefix_text, cycle_text = text.split(";", 1)
    if not cycle_text.split():
        raise ParseError("a lasso needs a nonempty cycle")
    lasso = Lasso(tuple(prefix_text.split()), tuple(cycle_text.split()))
    if net is not None:
        validate_lasso(net, lasso)
    return lasso


def print_lasso(lasso: Lasso) -> str:
    return f"{' '.join(lasso.prefix)} ; {' '.join(lasso.cycle)}"


def parse_sequence(text: str) -> tuple:
    """Whitespace-separated transitions; the empty string is the empty run."""
    return tuple(text.split())


def _q(s):
    return '"' + str(s).replace('"', r'\"') + '"'


def emit_dot(lts: Lts, highlights: Optional[Embedding] = None,
             pattern: Optional[Pattern] = None) -> str:
    """Render an LTS as a DOT digraph with stable node and edge order.

    With an embedding, the image states and arcs are drawn bold and each
    excluded pair is annotated on its image state.  The companion pattern
    supplies the arc and exclusion sets; the built-in consequence patterns
    are resolved by label arity when it is omitted.
    """
    bold_states, bold_edges, excluded = set(), set(), {}
    if highlights is not None:
        if pattern is None:
            from .patterns import builtin_pattern
            name = "nonDC" if len(highlights.state_map) > 3 else "nonpers"
            pattern = builtin_pattern(name)
        bold_states = {highlights.state_map[s] for s in pattern.states}
        for s, a, s2 in pattern.arcs:
            bold_edges.add((highlights.state_map[s], highlights.label_map[a],
                            highlights.state_map[s2]))
        for s, a in pattern.exclusions:
            excluded.setdefault(highlights.state_map[s], []).append(
                highlights.label_map[a])

    out = [f"digraph {_q(lts.name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for s in lts.states:
        attrs = []
        if s == lts.initial:
            attrs.append("shape=doublecircle")
        if s in bold_states:
            attrs.append("penwidth=2.5")
        if s in excluded:
            noes = " ".join(f"no {a}" for a in sorted(excluded[s]))
            attrs.append(f'xlabel="{noes}"')
        out.append(f"  {_q(s)}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for s, a, s2 in lts.edges:
        attrs = [f"label={_q(a)}"]
        if (s, a, s2) in bold_edges:
            attrs.append("penwidth=2.5")
        out.append(f"  {_q(s)} -> {_q(s2)} [{', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"
