import pytest

from persinet import UnknownIdError, corpus_load, corpus_names, verify_corpus


def test_names_cover_the_figures():
    names = corpus_names()
    assert len(names) == 17
    for expected in ("fig1_basic", "fig2_confuse", "fig4_perslocal", "fig5_acbc",
                     "fig6_unfair", "fig7_left", "fig7_right", "fig8_variant",
                     "fig10_fpe_not_spe", "fig12_spar", "fig13_impure_diamond",
                     "fig14_counterexample", "fig15_a_star", "fig15_b",
                     "fig15_sum", "fig15_choice", "fig16_appendix"):
        assert expected in names


def test_unknown_entry():
    with pytest.raises(UnknownIdError):
        corpus_load("fig99")


def test_entries_parse_and_carry_manifests():
    for name in corpus_names():
        entry = corpus_load(name)
        assert entry.net is not None
        assert entry.manifest, f"{name} has no manifest"


def test_companion_lts_present_where_expected():
    assert corpus_load("fig1_basic").lts is not None
    assert corpus_load("fig2_confuse").lts is not None
    assert corpus_load("fig14_counterexample").lts is not None
    assert corpus_load("fig5_acbc").lts is None


def test_fig15_sum_is_tagged():
    entry = corpus_load("fig15_sum")
    assert entry.net.components is not None


def test_every_manifest_claim_passes():
    results = verify_corpus()
    failures = [r for r in results if not r.ok]
    assert not failures, failures
    assert len(results) > 100
