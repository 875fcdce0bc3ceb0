import pytest

import persinet as pn
from persinet import (
    GenConfig,
    InputError,
    Lasso,
    corpus_load,
    disjoint_sum,
    fairness_classify,
    gen_random_net,
    lasso_equiv_at_depth,
    lasso_persistence,
    parse_lasso,
    pe_probe_matrix,
    project_sequence,
    search_persistent_equivalent_lasso,
    sequence_persistence,
    validate_lasso,
)
from persinet.fairness import FINITE_IS_FAIR, MAXIMAL_FINITE_IS_FAIR


def seq(text):
    return tuple(text.split())


class TestLassoValidation:
    def test_fig6(self, fig6):
        entry = validate_lasso(fig6, Lasso(("y",), seq("x a c")))
        assert entry == pn.fire(fig6, fig6.initial, "y")

    def test_fig14(self, fig14):
        validate_lasso(fig14, Lasso(("y",), seq("x a1 a2 b c")))

    def test_open_cycle_rejected(self, fig1):
        with pytest.raises(InputError):
            validate_lasso(fig1, Lasso((), ("c",)))

    def test_empty_cycle_rejected(self):
        with pytest.raises(InputError):
            Lasso((), ())


class TestFairnessClassify:
    def test_fig6_unfair_toward_b(self, fig6):
        rep = fairness_classify(fig6, Lasso(("y",), seq("x a c")))
        assert not rep.strongly_fair
        assert rep.neglected["b"] == "intermittently-neglected"
        assert rep.weakly_fair and rep.progress

    def test_fig14_fair(self, fig14):
        rep = fairness_classify(fig14, Lasso(("y",), seq("x a1 a2 b c")))
        assert rep.strongly_fair
        assert rep.neglected["y"] == "eventually-never-enabled"

    def test_fig15_progress_split(self):
        s = corpus_load("fig15_sum").net
        rep = fairness_classify(s, Lasso((), ("a",)))
        assert not rep.strongly_fair and not rep.weakly_fair and not rep.progress
        assert rep.neglected["b"] == "constantly-neglected"
        choice = corpus_load("fig15_choice").net
        rep = fairness_classify(choice, Lasso((), ("a",)))
        assert not rep.weakly_fair and rep.progress
        assert rep.neglected["b"] == "continuously-neglected"

    def test_tiers_weaken(self):
        # strongly fair => just => progress, across corpus and random lassos
        runs = [("fig5_acbc", " ; a c b c"), ("fig6_unfair", "y ; x a c"),
                ("fig14_counterexample", "y ; x a1 a2 b c"),
                ("fig15_sum", " ; a"), ("fig15_choice", " ; a"),
                ("fig8_variant", " ; c d a e"), ("fig8_variant", " ; c a d e")]
        for name, text in runs:
            net = corpus_load(name).net
            rep = fairness_classify(net, parse_lasso(text, net))
            assert not rep.strongly_fair or rep.weakly_fair
            assert not rep.weakly_fair or rep.progress

    def test_finite_regimes(self, fig1):
        maximal_run = seq("c a d")
        partial_run = seq("c")
        rep = fairness_classify(fig1, maximal_run, MAXIMAL_FINITE_IS_FAIR)
        assert rep.strongly_fair and rep.weakly_fair and rep.progress
        rep = fairness_classify(fig1, partial_run, MAXIMAL_FINITE_IS_FAIR)
        assert not rep.strongly_fair and not rep.progress
        rep = fairness_classify(fig1, partial_run, FINITE_IS_FAIR)
        assert rep.strongly_fair and rep.weakly_fair and not rep.progress


class TestLassoPersistence:
    def test_examples(self, fig5, fig14):
        assert lasso_persistence(fig5, Lasso((), seq("a c b c"))).persistent
        assert not lasso_persistence(fig14, Lasso(("y",), seq("x a1 a2 b c"))).persistent
        f8 = corpus_load("fig8_variant").net
        assert not lasso_persistence(f8, Lasso((), seq("c d a e"))).persistent

    def test_agrees_with_two_unrollings(self):
        cases = [("fig5_acbc", " ; a c b c"), ("fig6_unfair", "y ; x a c"),
                 ("fig8_variant", " ; c d a e"), ("fig8_variant", " ; c a d e"),
                 ("fig14_counterexample", "y ; x a1 a2 b c")]
        for name, text in cases:
            net = corpus_load(name).net
            lasso = parse_lasso(text, net)
            once = lasso_persistence(net, lasso).persistent
            twice = sequence_persistence(
                net, net.initial, lasso.prefix + lasso.cycle * 2).persistent
            assert once == twice, name


class TestLassoEquivalence:
    def test_fig7_swappable_forever(self):
        net = corpus_load("fig7_left").net
        verdict = lasso_equiv_at_depth(net, Lasso((), ("a", "b")),
                                       Lasso((), ("b", "a")), depth=10)
        assert verdict.status == "equivalent-at-depth"

    def test_self_equivalent(self, fig6):
        lasso = Lasso(("y",), seq("x a c"))
        assert lasso_equiv_at_depth(fig6, lasso, lasso, depth=8)

    def test_parikh_mismatch(self):
        net = corpus_load("fig7_right").net
        verdict = lasso_equiv_at_depth(net, Lasso((), ("a",)), Lasso((), ("b",)),
                                       depth=6)
        assert verdict.status == "not-equivalent"
        assert "signatures" in verdict.reason

    def test_equivalent_implies_equal_signature(self, fig6):
        from persinet.fairness import infinite_parikh_signature

        l1 = Lasso(("y",), seq("x a c"))
        l2 = Lasso(("y", "x", "a", "c"), seq("x a c"))
        verdict = lasso_equiv_at_depth(fig6, l1, l2, depth=6)
        if verdict.status == "equivalent-at-depth":
            assert infinite_parikh_signature(l1) == infinite_parikh_signature(l2)

    def test_rotations_denote_the_same_word(self, fig5):
        # (eps; a c b c) and (a; c b c a) unroll identically
        l1 = Lasso((), seq("a c b c"))
        l2 = Lasso(("a",), seq("c b c a"))
        assert l1.unroll(12) == l2.unroll(12)
        verdict = lasso_equiv_at_depth(fig5, l1, l2, depth=8)
        assert verdict.status == "equivalent-at-depth"

    def test_private_places_swap_like_shared_ones(self):
        # the two-place variant has the same single-state graph, and its
        # interleavings swap forever just the same
        net = corpus_load("fig7_right").net
        verdict = lasso_equiv_at_depth(net, Lasso((), ("a", "b")),
                                       Lasso((), ("b", "a")), depth=10)
        assert verdict.status == "equivalent-at-depth"

    def test_prefix_count_mismatch_is_not_equivalent(self, fig6):
        # dropping the y changes the finite part of the signature
        with_y = Lasso(("y",), seq("x a c"))
        without = Lasso((), seq("x a c"))
        verdict = lasso_equiv_at_depth(fig6, with_y, without, depth=6)
        assert verdict.status == "not-equivalent"
        assert "signatures" in verdict.reason


class TestSearchEquivalentLasso:
    def test_fig8_found(self):
        net = corpus_load("fig8_variant").net
        result = search_persistent_equivalent_lasso(net, Lasso((), seq("c d a e")))
        assert result.status == "found"
        assert result.lasso == Lasso((), seq("c a d e"))

    def test_fig14_none(self, fig14):
        result = search_persistent_equivalent_lasso(
            net=fig14, lasso=Lasso(("y",), seq("x a1 a2 b c")),
            max_prefix=4, max_cycle=10, depth=8)
        assert result.status == "none-within-bounds"

    def test_fig6_none(self, fig6):
        result = search_persistent_equivalent_lasso(fig6, Lasso(("y",), seq("x a c")))
        assert result.status == "none-within-bounds"

    def test_persistent_input_returned(self, fig5):
        lasso = Lasso((), seq("a c b c"))
        result = search_persistent_equivalent_lasso(fig5, lasso)
        assert result.status == "found" and result.lasso == lasso

    def test_found_lassos_are_persistent_and_equivalent(self):
        net = corpus_load("fig8_variant").net
        lasso = Lasso((), seq("d c a e"))
        result = search_persistent_equivalent_lasso(net, lasso)
        assert result.status == "found"
        assert lasso_persistence(net, result.lasso).persistent
        assert lasso_equiv_at_depth(net, lasso, result.lasso, depth=8)


class TestDisjointSumFairness:
    def test_lemma_witness_finite_regime(self):
        # under finite-is-fair the sum run is unfair while both projections
        # are fair; under maximal-finite-is-fair the asymmetry disappears
        s = corpus_load("fig15_sum").net
        run = Lasso((), ("a",))
        assert not fairness_classify(s, run, FINITE_IS_FAIR).strongly_fair
        left = corpus_load("fig15_a_star").net
        right = corpus_load("fig15_b").net
        pa = project_sequence(s, run, "l")
        pb = project_sequence(s, run, "r")
        assert isinstance(pa, Lasso) and pb == ()
        assert fairness_classify(left, pa, FINITE_IS_FAIR).strongly_fair
        assert fairness_classify(right, pb, FINITE_IS_FAIR).strongly_fair
        assert not fairness_classify(right, pb, MAXIMAL_FINITE_IS_FAIR).strongly_fair

    def test_maximal_regime_compositional(self):
        # fairness of a sum run equals fairness of both projections
        import random

        rng = random.Random(3)
        checked = 0
        for s in range(40):
            a = gen_random_net(GenConfig(seed=s, places=3, transitions=2,
                                         token_budget=2))
            b = gen_random_net(GenConfig(seed=1000 + s, places=3, transitions=2,
                                         token_budget=2))
            total = disjoint_sum(a, b)
            run = _random_finite_run(total, rng, 6)
            whole = fairness_classify(total, run, MAXIMAL_FINITE_IS_FAIR)
            # ids are renamed apart in the sum, so classify the projections
            # on the restricted sub-nets, which keep the renamed ids
            left = pn.restrict_to_component(total, "l")
            right = pn.restrict_to_component(total, "r")
            pa = fairness_classify(left, project_sequence(total, run, "l"),
                                   MAXIMAL_FINITE_IS_FAIR)
            pb = fairness_classify(right, project_sequence(total, run, "r"),
                                   MAXIMAL_FINITE_IS_FAIR)
            assert whole.strongly_fair == (pa.strongly_fair and pb.strongly_fair)
            checked += 1
        assert checked == 40


def _random_finite_run(net, rng, max_len):
    word, m = [], net.initial
    for _ in range(rng.randint(0, max_len)):
        en = pn.enabled_transitions(net, m)
        if not en:
            break
        t = rng.choice(en)
        word.append(t)
        m = pn.fire(net, m, t)
    return tuple(word)


class TestProbeMatrix:
    def test_fig6(self, fig6):
        matrix = pe_probe_matrix(fig6, [Lasso(("y",), seq("x a c"))])
        assert matrix.spe.status == "holds-up-to-bound"
        row = matrix.probes[0]
        assert not row.fair and row.just and not row.persistent
        assert row.equivalent == "none-within-bounds"

    def test_fig10(self):
        net = corpus_load("fig10_fpe_not_spe").net
        probes = [seq("y b"), seq("x y z a c"), seq("x a z d y"), seq("z d y b x")]
        matrix = pe_probe_matrix(net, probes)
        assert matrix.spe.refuted
        fair_rows = [r for r in matrix.probes if r.fair]
        assert fair_rows and all(r.equivalent == "found" for r in fair_rows)
        yb = matrix.probes[0]
        assert not yb.fair and yb.equivalent == "none"

    def test_fig14(self, fig14):
        matrix = pe_probe_matrix(fig14, [Lasso(("y",), seq("x a1 a2 b c"))])
        assert matrix.spe.status == "holds-up-to-bound"
        row = matrix.probes[0]
        assert row.fair and row.equivalent == "none-within-bounds"

    def test_fig5_all_found(self, fig5):
        matrix = pe_probe_matrix(fig5, [Lasso((), seq("a c b c")), seq("a c")])
        assert all(r.equivalent == "found" for r in matrix.probes)
