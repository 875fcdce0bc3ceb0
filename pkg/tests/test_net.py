import pytest

import persinet as pn
from persinet import (
    GenConfig,
    InputError,
    Net,
    NotEnabledError,
    UnknownIdError,
    UnsupportedClassError,
    classify_structure,
    concurrently_enables,
    corpus_load,
    disjoint_sum,
    enabled,
    enabled_transitions,
    fire,
    fire_sequence,
    gen_random_net,
    parse_lasso,
    project_sequence,
    reverse_dual,
)
from persinet.net import replay_class_witness


def seq(text):
    return tuple(text.split())


class TestFiringRule:
    def test_enabled_at_initial(self, fig1):
        assert fig1.initial == (1, 1, 0, 1, 0)
        assert enabled(fig1, fig1.initial, "c")
        assert not enabled(fig1, fig1.initial, "a")

    def test_zero_marking_enables_nothing(self, fig1):
        zero = (0,) * 5
        assert enabled_transitions(fig1, zero) == ()

    def test_unknown_transition(self, fig1):
        with pytest.raises(UnknownIdError):
            enabled(fig1, fig1.initial, "zz")

    def test_fire(self, fig1):
        assert fire(fig1, fig1.initial, "c") == (0, 1, 1, 1, 0)

    def test_fire_weighted(self):
        net = corpus_load("fig2_confuse").net
        assert net.initial == (2,)
        assert fire(net, net.initial, "y") == (1,)
        assert not enabled(net, (1,), "y")

    def test_fire_disabled_names_place(self, fig1):
        with pytest.raises(NotEnabledError) as err:
            fire(fig1, fig1.initial, "a")
        assert err.value.place == "p2"

    def test_side_condition_loop_is_identity(self):
        net = Net("loop", ["p"], ["t"], [("p", "t", 1), ("t", "p", 1)], {"p": 1})
        assert fire(net, net.initial, "t") == net.initial

    def test_fire_sequence_reaches_m6(self, fig1):
        m6 = (0, 0, 0, 0, 1)
        assert fire_sequence(fig1, fig1.initial, seq("c d a")) == m6
        assert fire_sequence(fig1, fig1.initial, seq("d c a")) == m6
        assert fire_sequence(fig1, fig1.initial, seq("c a d")) == m6

    def test_fire_sequence_empty(self, fig1):
        assert fire_sequence(fig1, fig1.initial, ()) == fig1.initial

    def test_fire_sequence_error_index(self, fig1):
        with pytest.raises(NotEnabledError) as err:
            fire_sequence(fig1, fig1.initial, seq("a"))
        assert err.value.index == 0
        with pytest.raises(NotEnabledError) as err:
            fire_sequence(fig1, fig1.initial, seq("c d a a"))
        assert err.value.index == 3

    def test_enabling_monotone_random(self):
        for s in range(40):
            net = gen_random_net(GenConfig(seed=s, token_budget=4))
            m = net.initial
            bigger = tuple(x + 1 for x in m)
            for t in net.transitions:
                if enabled(net, m, t):
                    assert enabled(net, bigger, t)

    def test_determinism_parikh(self):
        # equal multisets of fired transitions land on the same marking
        import random

        from persinet.sequences import _markings_along, _swap_neighbours

        for s in range(40):
            net = gen_random_net(GenConfig(seed=s, token_budget=4))
            rng = random.Random(s)
            word, m = [], net.initial
            for _ in range(rng.randint(1, 8)):
                en = enabled_transitions(net, m)
                if not en:
                    break
                t = rng.choice(en)
                word.append(t)
                m = fire(net, m, t)
            cur = tuple(word)
            for _ in range(4):
                opts = _swap_neighbours(net, net.initial, cur,
                                        _markings_along(net, net.initial, cur))
                if not opts:
                    break
                cur = rng.choice(opts)
            assert fire_sequence(net, net.initial, cur) == \
                fire_sequence(net, net.initial, tuple(word))


class TestClassification:
    def test_fig1(self, fig1):
        r = classify_structure(fig1)
        assert (r.plain, r.pure) == (True, True)
        assert not r.choice_free and not r.free_choice and not r.equal_conflict
        assert r.dissymmetric_choice is False
        assert r.witnesses["dissymmetric_choice"] == ("a", "b")
        assert r.asymmetric_choice is True
        assert r.dc_tilde is False

    def test_fig5_witness_is_p(self, fig5):
        r = classify_structure(fig5)
        assert r.asymmetric_choice and r.dissymmetric_choice is False
        assert not r.free_choice and not r.choice_free
        assert r.witnesses["choice_free"] == ("p", "a", "b")

    def test_fig16(self):
        r = classify_structure(corpus_load("fig16_appendix").net)
        assert r.asymmetric_choice and r.dissymmetric_choice and r.dc_tilde
        assert not r.free_choice

    def test_non_plain_flags_not_applicable(self):
        r = classify_structure(corpus_load("fig2_confuse").net)
        assert not r.plain and not r.pure
        assert r.dissymmetric_choice is None
        assert r.asymmetric_choice is None
        assert r.dc_tilde is None

    def test_fc_implies_ec_and_dc(self):
        for s in range(30):
            net = gen_random_net(GenConfig(seed=s, class_constraint=("FC",)))
            r = classify_structure(net)
            assert r.free_choice and r.equal_conflict and r.dissymmetric_choice

    def test_plain_ec_equals_fc(self):
        for s in range(40):
            net = gen_random_net(GenConfig(seed=s))
            r = classify_structure(net)
            if r.plain:
                assert r.equal_conflict == r.free_choice

    def test_witnesses_replay(self):
        nets = [corpus_load(n).net for n in
                ("fig1_basic", "fig2_confuse", "fig5_acbc", "fig14_counterexample")]
        nets += [gen_random_net(GenConfig(seed=s, max_weight=2)) for s in range(30)]
        for net in nets:
            r = classify_structure(net)
            for flag, witness in r.witnesses.items():
                assert replay_class_witness(net, flag, witness), (net.name, flag)


class TestConstructions:
    def test_reverse_dual_involution(self, fig1):
        twice = reverse_dual(reverse_dual(fig1))
        assert twice.places == fig1.places
        assert twice.transitions == fig1.transitions
        assert twice.structurally_equal(fig1)

    def test_reverse_dual_swaps_ac_dc(self, fig1):
        r = classify_structure(fig1)
        rd = classify_structure(reverse_dual(fig1))
        assert rd.dissymmetric_choice == r.asymmetric_choice is True
        assert rd.asymmetric_choice == r.dissymmetric_choice is False

    def test_reverse_dual_of_fc_is_fc(self):
        for s in range(20):
            net = gen_random_net(GenConfig(seed=s, class_constraint=("FC",)))
            assert classify_structure(reverse_dual(net)).free_choice

    def test_reverse_dual_rejects_behaviour(self, fig1):
        rd = reverse_dual(fig1)
        assert rd.structural_only
        with pytest.raises(UnsupportedClassError):
            enabled(rd, rd.initial, "p0")

    def test_disjoint_sum_components(self):
        s = corpus_load("fig15_sum").net
        assert set(s.transitions) == {"a", "b"}
        assert s.components == {"sa": "l", "a": "l", "sb": "r", "b": "r"}

    def test_disjoint_sum_renames_collisions(self, fig1):
        s = disjoint_sum(fig1, fig1)
        assert set(s.transitions) == {f"l.{t}" for t in "abcd"} | \
            {f"r.{t}" for t in "abcd"}

    def test_sum_with_empty_net_is_identity(self, fig1):
        empty = Net("nil", ["z"], [], [], {})
        s = disjoint_sum(fig1, empty)
        assert s.places == fig1.places + ("z",)
        assert s.transitions == fig1.transitions

    def test_sum_rg_is_product(self):
        for sa, sb in ((1, 2), (3, 4), (5, 6)):
            a = gen_random_net(GenConfig(seed=sa, places=3, transitions=2, token_budget=2))
            b = gen_random_net(GenConfig(seed=sb, places=3, transitions=2, token_budget=2))
            _, ra = pn.build_rg(a)
            _, rb = pn.build_rg(b)
            _, rs = pn.build_rg(disjoint_sum(a, b))
            assert rs.state_count == ra.state_count * rb.state_count

    def test_project_sequence(self):
        s = corpus_load("fig15_sum").net
        lasso = parse_lasso(" ; a", s)
        assert project_sequence(s, lasso, "r") == ()
        assert project_sequence(s, lasso, "l") == lasso
        assert project_sequence(s, ("a", "a"), "r") == ()

    def test_project_untagged_rejected(self, fig1):
        with pytest.raises(InputError):
            project_sequence(fig1, ("a",), "l")


class TestConcurrentEnabling:
    def test_fig1_examples(self, fig1):
        assert concurrently_enables(fig1, fig1.initial, "c", "d")
        m4 = fire_sequence(fig1, fig1.initial, seq("c d"))
        assert not concurrently_enables(fig1, m4, "a", "b")

    def test_fig15_sum(self):
        s = corpus_load("fig15_sum").net
        assert concurrently_enables(s, s.initial, "a", "b")

    def test_errors(self, fig1):
        with pytest.raises(InputError):
            concurrently_enables(fig1, fig1.initial, "c", "c")
        weighted = corpus_load("fig2_confuse").net
        with pytest.raises(UnsupportedClassError):
            concurrently_enables(weighted, weighted.initial, "x", "y")

    def test_implies_both_orders(self):
        for s in range(40):
            net = gen_random_net(GenConfig(seed=s, token_budget=4))
            if not classify_structure(net).plain:
                continue
            m = net.initial
            en = enabled_transitions(net, m)
            for t in en:
                for u in en:
                    if t != u and concurrently_enables(net, m, t, u):
                        assert enabled(net, fire(net, m, t), u)
