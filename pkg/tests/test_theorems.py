import pytest

import persinet as pn
from persinet import (
    GenConfig,
    InputError,
    Lasso,
    check_theorem,
    classify_structure,
    corpus_load,
    gen_random_net,
    implication_matrix,
    oracle_spe_check,
    spe_check,
)
from persinet.theorems import run_theorem_suite


def seq(text):
    return tuple(text.split())


class TestGenerator:
    def test_deterministic(self):
        cfg = GenConfig(seed=42, places=5, transitions=4, token_budget=3)
        assert gen_random_net(cfg) == gen_random_net(cfg)

    def test_choice_free(self):
        for s in range(30):
            net = gen_random_net(GenConfig(seed=s, class_constraint=("CF",)))
            assert classify_structure(net).choice_free
            assert all(len(net.place_postset(p)) <= 1 for p in net.places)

    def test_free_choice(self):
        for s in range(30):
            net = gen_random_net(GenConfig(seed=s, class_constraint=("FC",)))
            r = classify_structure(net)
            assert r.free_choice and r.plain

    def test_equal_conflict_weighted(self):
        for s in range(30):
            net = gen_random_net(GenConfig(seed=s, max_weight=3,
                                           class_constraint=("EC",)))
            assert classify_structure(net).equal_conflict

    def test_pure_plain(self):
        for s in range(30):
            net = gen_random_net(GenConfig(seed=s, class_constraint=("pure", "plain")))
            r = classify_structure(net)
            assert r.pure and r.plain

    def test_pps(self):
        for s in range(15):
            net = gen_random_net(GenConfig(seed=s, class_constraint=("pps",)))
            r = classify_structure(net)
            assert r.pure and r.plain
            _, rep = pn.build_rg(net)
            assert rep.safe

    def test_always_bounded(self):
        for s in range(30):
            net = gen_random_net(GenConfig(seed=s, token_budget=5))
            _, rep = pn.build_rg(net, 4000)
            assert rep.status == "bounded"

    def test_config_validation(self):
        with pytest.raises(InputError):
            GenConfig(class_constraint=("FC",), max_weight=2)
        with pytest.raises(InputError):
            GenConfig(class_constraint=("XX",))
        with pytest.raises(InputError):
            GenConfig(arc_density=2.0)


class TestCheckTheorem:
    def test_cf_persistent_on_samples(self):
        rep = run_theorem_suite("CF-persistent",
                                GenConfig(class_constraint=("CF",)), range(50))
        assert rep.ok and rep.confirmations == 50

    def test_ec_main_on_samples(self):
        rep = run_theorem_suite("EC-main", GenConfig(class_constraint=("EC",)),
                                range(50))
        assert rep.ok and rep.confirmations == 50

    def test_dc_main_on_fig1(self, fig1):
        rep = check_theorem("DC-main", fig1)
        assert rep.ok and rep.confirmations == 1

    def test_dc_main_on_samples(self):
        rep = run_theorem_suite("DC-main",
                                GenConfig(class_constraint=("pure", "plain")),
                                range(50))
        assert rep.ok

    def test_skips_record_reasons(self, fig14):
        rep = check_theorem("CF-persistent", fig14)
        assert rep.instances == 0
        assert rep.skips and "choice-free" in rep.skips[0][0]

    def test_spe_implies_fpe_probe_fig14(self, fig14):
        rep = check_theorem("spe-implies-fpe-probe", fig14)
        assert rep.ok
        outcome = dict(rep.skips).get("probe outcome")
        assert outcome is not None
        assert outcome["search"] == "none-within-bounds"

    def test_unknown_theorem(self, fig1):
        with pytest.raises(InputError):
            check_theorem("nope", fig1)


def _comparable_conflict_net():
    """A pure plain DC net that is nonpersistent yet fully permutable.

    The conflict t1/t2 has comparable presets (shared place p2), so the
    net is dissymmetric choice; p2 starts with two tokens, so t1 only
    disables t2 where p2 is down to one token, and every Parikh vector is
    also realised by a persistent route through a two-token marking.  The
    p3 -> t3 -> p0 indirection keeps t1 disabled along the all-t2 runs.
    """
    return pn.Net(
        "comparable-conflict",
        ["p0", "p2", "p3", "p5"], ["t1", "t2", "t3"],
        [("p0", "t1", 1), ("p2", "t1", 1), ("p5", "t1", 1), ("t1", "p3", 1),
         ("p2", "t2", 1), ("t2", "p5", 1),
         ("p3", "t3", 1), ("t3", "p0", 1)],
        {"p2": 2, "p3": 1, "p5": 1})


def _complete_language(net):
    out, stack = [], [((), net.initial)]
    while stack:
        word, m = stack.pop()
        out.append(word)
        assert len(out) < 10000, "not a finite-language net"
        for t in net.transitions:
            if pn.enabled(net, m, t):
                stack.append((word + (t,), pn.fire(net, m, t)))
    return out


class TestDcMainGenuineViolation:
    """The DC-main implication genuinely fails on multi-token comparable
    conflicts; the checker must escalate that as a violation, not mask it."""

    def test_net_satisfies_every_premise_yet_is_dc(self):
        net = _comparable_conflict_net()
        cls = classify_structure(net)
        assert cls.pure and cls.plain
        assert cls.dissymmetric_choice is True
        rg, rep = pn.build_rg(net)
        assert not pn.persistence_check(rg).persistent
        # the complete language is tiny; check permutability exactly
        language = _complete_language(net)
        assert 4 <= max(map(len, language)) <= 6
        for word in language:
            if word and not pn.sequence_persistence(net, net.initial, word).persistent:
                assert pn.persistent_perm_equivalent(net, net.initial, word), word
        # so even the exact (unbounded) checks can never refute
        assert not spe_check(net, 12, pn.SPE).refuted
        assert not spe_check(net, 12, pn.SPE_PARIKH).refuted

    def test_pattern_genuinely_absent(self):
        net = _comparable_conflict_net()
        rg, _ = pn.build_rg(net)
        assert pn.find_embedding(pn.builtin_pattern("nonDC"), rg) is None
        with pytest.raises(pn.PreconditionError):
            pn.derive_nonDC_embedding(net, spe_bound=10)

    def test_checker_escalates(self):
        net = _comparable_conflict_net()
        rep = check_theorem("DC-main", net)
        assert len(rep.violations) == 1
        assert "DC net" in rep.violations[0]["reason"]
        assert "document" in rep.violations[0]  # replayable witness


class TestOracleEquivalence:
    def test_small_nets_agree(self):
        agree = 0
        for s in range(120):
            net = gen_random_net(GenConfig(seed=s, places=3, transitions=3,
                                           token_budget=2))
            _, rep = pn.build_rg(net, 200)
            if rep.status != "bounded" or rep.state_count > 9:
                continue
            bound = min(rep.state_count + 1, 6)
            for mode in (pn.SPE, pn.SPE_PARIKH):
                fast = spe_check(net, bound, mode)
                slow = oracle_spe_check(net, bound, mode)
                assert fast.status == slow.status, (net.name, mode)
                assert fast.counterexample == slow.counterexample, (net.name, mode)
            agree += 1
        assert agree >= 60

    def test_corpus_agree(self):
        for name, bound in (("fig1_basic", 5), ("fig10_fpe_not_spe", 3),
                            ("fig12_spar", 4), ("fig4_perslocal", 3)):
            net = corpus_load(name).net
            for mode in (pn.SPE, pn.SPE_PARIKH):
                fast = spe_check(net, bound, mode)
                slow = oracle_spe_check(net, bound, mode)
                assert fast.status == slow.status
                assert fast.counterexample == slow.counterexample


class TestImplicationMatrix:
    def test_fig6(self, fig6):
        result = implication_matrix(fig6, [Lasso(("y",), seq("x a c"))])
        assert result.evidence["SPE"] == "holds-evidence"
        assert result.evidence["JPE"] == "refuted-within-bounds"
        assert result.evidence["APE"] == "refuted-within-bounds"
        assert result.evidence["FPE"] == "holds-evidence"
        assert not result.violations

    def test_fig10(self):
        net = corpus_load("fig10_fpe_not_spe").net
        probes = [seq("y b"), seq("x y z a c"), seq("x a z d y"),
                  seq("z d y b x")]
        result = implication_matrix(net, probes)
        assert result.evidence["SPE"] == "refuted"
        assert result.evidence["APE"] == "refuted"
        assert result.evidence["FPE"] == "holds-evidence"
        assert result.evidence["JPE"] == "holds-evidence"
        assert not result.violations

    def test_fig14(self, fig14):
        result = implication_matrix(fig14, [Lasso(("y",), seq("x a1 a2 b c"))])
        assert result.evidence["SPE"] == "holds-evidence"
        assert result.evidence["FPE"] == "refuted-within-bounds"
        assert not result.violations

    def test_fig5_all_hold(self, fig5):
        result = implication_matrix(fig5, [Lasso((), seq("a c b c")), seq("a")])
        assert all(v == "holds-evidence" for v in result.evidence.values())
        assert not result.violations
