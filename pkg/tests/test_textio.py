import pytest

from persinet import (
    ParseError,
    build_rg,
    builtin_pattern,
    corpus_load,
    corpus_names,
    emit_dot,
    find_embedding,
    parse_lasso,
    parse_lts,
    parse_net,
    parse_pattern,
    parse_sequence,
    print_lasso,
    print_lts,
    print_net,
    print_pattern,
)


class TestParseNet:
    def test_fig1_document(self):
        entry = corpus_load("fig1_basic")
        net = parse_net(entry.net_text)
        assert len(net.places) == 5 and len(net.transitions) == 4
        assert len(net.arcs()) == 8
        assert all(w == 1 for _, _, w in net.arcs())

    def test_zero_weight_rejected(self):
        with pytest.raises(ParseError):
            parse_net("net z\nplace p\ntrans t\narc p -> t 0\n")

    def test_no_transitions_is_valid(self):
        net = parse_net("net still\nplace p init 2\n")
        _, rep = build_rg(net)
        assert rep.state_count == 1

    def test_duplicate_id_rejected(self):
        with pytest.raises(ParseError) as err:
            parse_net("net d\nplace p\nplace p\n")
        assert err.value.line == 3

    def test_unknown_arc_id_rejected(self):
        with pytest.raises(ParseError):
            parse_net("net d\nplace p\ntrans t\narc p -> q\n")

    def test_place_transition_clash_rejected(self):
        with pytest.raises(ParseError):
            parse_net("net d\nplace x\ntrans x\n")

    def test_comments_and_blanks(self):
        net = parse_net("# heading\nnet c\n\nplace p init 1  # one token\ntrans t\narc p -> t\n")
        assert net.initial == (1,)


class TestParseLts:
    def test_ts1_document(self):
        entry = corpus_load("fig1_basic")
        lts = parse_lts(entry.lts_text)
        assert len(lts.states) == 8 and len(lts.edges) == 10
        assert lts.initial == "M0"

    def test_missing_initial(self):
        with pytest.raises(ParseError):
            parse_lts("lts x\nstate s\n")

    def test_duplicate_edge(self):
        with pytest.raises(ParseError):
            parse_lts("lts x\nstate s\ninitial s\nedge s a s\nedge s a s\n")


class TestParseLasso:
    def test_fig6(self, fig6):
        lasso = parse_lasso("y ; x a c", fig6)
        assert lasso.prefix == ("y",) and lasso.cycle == ("x", "a", "c")

    def test_empty_cycle_rejected(self):
        with pytest.raises(ParseError):
            parse_lasso(" ; ")

    def test_missing_semicolon(self):
        with pytest.raises(ParseError):
            parse_lasso("a b c")

    def test_roundtrip(self, fig6):
        lasso = parse_lasso("y ; x a c", fig6)
        assert parse_lasso(print_lasso(lasso), fig6) == lasso

    def test_sequences(self):
        assert parse_sequence("") == ()
        assert parse_sequence("a b  c") == ("a", "b", "c")


class TestParsePattern:
    def test_builtins_roundtrip(self):
        for name in ("nonpers", "nonDC"):
            p = builtin_pattern(name)
            assert parse_pattern(print_pattern(p)) == p

    def test_edge_synonym(self):
        a = parse_pattern("pattern x\nstate s\nstate t\narc s a t\n")
        b = parse_pattern("pattern x\nstate s\nstate t\nedge s a t\n")
        assert a == b


class TestRoundTrip:
    def test_whole_corpus_nets(self):
        for name in corpus_names():
            entry = corpus_load(name)
            assert parse_net(print_net(entry.net)) == entry.net, name

    def test_whole_corpus_lts(self):
        for name in corpus_names():
            entry = corpus_load(name)
            if entry.lts is not None:
                assert parse_lts(print_lts(entry.lts)) == entry.lts, name


GOLDEN_FIG1_DOT = """\
digraph "rg(fig1_basic)" {
  rankdir=LR;
  node [shape=circle];
  "M0" [shape=doublecircle];
  "M1";
  "M2";
  "M3";
  "M4";
  "M5";
  "M6";
  "M7";
  "M0" -> "M1" [label="c"];
  "M0" -> "M2" [label="d"];
  "M1" -> "M3" [label="a"];
  "M1" -> "M4" [label="d"];
  "M2" -> "M5" [label="b"];
  "M2" -> "M4" [label="c"];
  "M3" -> "M6" [label="d"];
  "M4" -> "M6" [label="a"];
  "M4" -> "M7" [label="b"];
  "M5" -> "M7" [label="c"];
}
"""


class TestDot:
    def test_golden_fig1(self, fig1):
        rg, _ = build_rg(fig1)
        assert emit_dot(rg) == GOLDEN_FIG1_DOT

    def test_stable_across_runs(self, fig14):
        one, _ = build_rg(fig14)
        two, _ = build_rg(fig14)
        assert emit_dot(one) == emit_dot(two)

    def test_embedding_highlight(self, fig1):
        rg, _ = build_rg(fig1)
        emb = find_embedding(builtin_pattern("nonpers"), rg)
        dot = emit_dot(rg, highlights=emb, pattern=builtin_pattern("nonpers"))
        assert '"M4" [penwidth=2.5];' in dot
        assert '"M6" [penwidth=2.5, xlabel="no b"];' in dot
        assert '"M4" -> "M6" [label="a", penwidth=2.5];' in dot

    def test_single_node_graph(self):
        from persinet import Lts

        lts = Lts("one", ["s"], [], [], "s")
        dot = emit_dot(lts)
        assert '"s" [shape=doublecircle];' in dot
        assert "->" not in dot
