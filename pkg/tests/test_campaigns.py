import pytest

from entropic_bell import campaigns
from entropic_bell.campaigns import CampaignSpec, run_campaign
from entropic_bell.errors import UsageError


@pytest.mark.parametrize("kind", campaigns.KINDS)
def test_every_kind_runs_clean(kind):
    result = run_campaign(CampaignSpec(kind, 50, 3))
    assert result.ok, result.failures
    assert result.summary["trials"] == 50
    assert result.worst and all(r.must_hold for r in result.worst)


def test_quantum_configs():
    for config in ("product", "bell"):
        assert run_campaign(CampaignSpec("quantum-bell", 40, 1, {"config": config})).ok
    general = run_campaign(CampaignSpec("quantum-bell", 40, 1, {"config": "general"}))
    # general states are evaluated but nothing is asserted on them
    stats = general.summary["by_name"]["cerf_adami_quantum"]
    assert stats["evaluated"] == 40 and stats["asserted"] == 0


def test_workers_match_serial():
    spec = CampaignSpec("projective-second-law", 60, 11)
    serial = run_campaign(spec)
    parallel = run_campaign(spec, workers=2)
    assert serial.summary == parallel.summary
    assert [r.to_dict() for r in serial.worst] == [r.to_dict() for r in parallel.worst]


def test_same_seed_same_result():
    a = run_campaign(CampaignSpec("classical-bell", 30, 5))
    b = run_campaign(CampaignSpec("classical-bell", 30, 5))
    assert a.summary == b.summary


def test_keep_all():
    result = run_campaign(CampaignSpec("thermo-mixing", 10, 0), keep_all=True)
    assert len(result.all_reports) == 30


@pytest.mark.parametrize("kwargs", [
    dict(kind="nope", trials=1, seed=0),
    dict(kind="mixing-order", trials=0, seed=0),
    dict(kind="mixing-order", trials=1, seed=-1),
    dict(kind="mixing-order", trials=1, seed=0, params={"dims": [1]}),
    dict(kind="quantum-bell", trials=1, seed=0, params={"config": "ghz"}),
    dict(kind="povm-positivity", trials=1, seed=0, params={"max_outcomes": 0}),
])
def test_invalid_spec(kwargs):
    with pytest.raises(UsageError):
        CampaignSpec(**kwargs)


def test_failure_is_recorded_with_trial(monkeypatch):
    def boom(rng, params, tol):
        raise ArithmeticError("injected")

    monkeypatch.setitem(campaigns._TRIALS, "mixing-order", boom)
    result = run_campaign(CampaignSpec("mixing-order", 3, 0))
    assert not result.ok and result.summary["failure_count"] == 3
    assert result.failures[1] == {"trial": 1, "error": "ArithmeticError: injected"}
