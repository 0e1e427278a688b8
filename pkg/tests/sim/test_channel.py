from cogmac.sim import *

def test_nothing_transmitted_gives_no_outcome():
    assert arbitrate_decode(False, False, SimConfig(), RngStream(0)) == (None, None)

def test_degenerate_probabilities():
    cfg = SimConfig(rho=0.0, rho_star=1.0, nu=0.0, nu_star=0.0)
    rng = RngStream(0)
    for _ in range(100):
        assert arbitrate_decode(True, True, cfg, rng) == (False, True)
        assert arbitrate_decode(True, False, cfg, rng) == (True, None)

def test_solo_primary_success_rate():
    cfg = SimConfig(rho=0.2, rho_star=0.5)
    rng = RngStream(11)
    n = 20_000
    ok = sum(arbitrate_decode(True, False, cfg, rng)[0] for _ in range(n))
    # 0.8 +- 3.5 standard errors
    assert abs(ok / n - 0.8) < 0.01

def test_overlap_flags_override_default():
    cfg = SimConfig(rho=0.0, rho_star=1.0, nu=0.0, nu_star=1.0)
    rng = RngStream(0)
    # a multi-slot primary packet overlapped earlier fails even if the secondary finished before
    assert arbitrate_decode(True, False, cfg, rng, primary_overlapped=True) == (False, None)
    assert arbitrate_decode(False, True, cfg, rng, secondary_overlapped=False) == (None, True)

def test_channel_busy():
    assert channel_busy(True, False)
    assert channel_busy(False, True)
    assert not channel_busy(False, False)

def test_secondary_outcomes_ignore_primary_traffic():
    cfg = SimConfig(nu=0.3, nu_star=0.3)
    busy = RngStream(5)
    quiet = RngStream(5)
    with_primary = [arbitrate_decode(i % 3 == 0, True, cfg, busy)[1] for i in range(1000)]
    alone = [arbitrate_decode(False, True, cfg, quiet)[1] for _ in range(1000)]
    assert with_primary == alone
