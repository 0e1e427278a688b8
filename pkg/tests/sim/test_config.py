import pytest
from cogmac.sim import *

def test_defaults_match_evaluation_setup():
    cfg = SimConfig()
    assert cfg.buffer_b == 4
    assert cfg.max_retry_m == 4
    assert cfg.windows == (4, 6, 8, 10)
    assert cfg.ws == 3
    assert (cfg.rho, cfg.rho_star, cfg.nu, cfg.nu_star) == (0.2, 0.5, 0.3, 0.3)
    assert cfg.lambda1 == 0.05
    assert cfg.gamma1 == 0.04
    assert cfg.constraint_mode == ConstraintMode.THROUGHPUT_LOSS
    assert cfg.window(1) == 4
    assert cfg.window(4) == 10

def test_windows_must_match_retry_limit():
    with pytest.raises(InvalidConfigError):
        make_config(max_retry_m=3, windows=(4, 6, 8, 10))
    cfg = make_config(max_retry_m=3, windows=(4, 6, 8))
    assert cfg.window(3) == 8

def test_overlap_failure_cannot_be_below_solo_failure():
    with pytest.raises(InvalidConfigError):
        make_config(rho=0.5, rho_star=0.2)
    with pytest.raises(InvalidConfigError):
        make_config(nu=0.4, nu_star=0.3)

def test_rejects_out_of_range_and_unknown_values():
    with pytest.raises(InvalidConfigError):
        make_config(rho=1.5)
    with pytest.raises(InvalidConfigError):
        make_config(lambda1=-0.1)
    with pytest.raises(InvalidConfigError):
        make_config(buffer_size=4)

def test_config_is_frozen():
    cfg = SimConfig()
    with pytest.raises(Exception):
        cfg.lambda1 = 0.1

def test_with_updates_validates():
    cfg = SimConfig().with_updates(lambda1=0.1, seed=3)
    assert cfg.lambda1 == 0.1
    assert cfg.seed == 3
    with pytest.raises(InvalidConfigError):
        SimConfig().with_updates(windows=(1, 2))

def test_config_id_is_stable_and_sensitive():
    a = SimConfig()
    b = make_config(**a.model_dump())
    assert config_id(a) == config_id(b)
    assert len(config_id(a)) == 64
    assert config_id(a) != config_id(a.with_updates(seed=1))

def test_configs_are_hashable():
    assert hash(SimConfig()) == hash(SimConfig())
    assert len({SimConfig(), SimConfig(), SimConfig(seed=1)}) == 2
