import pytest

from hermitime.config import EXPERIMENTS, parse_config, parse_pairs
from hermitime.errors import ConfigError


def test_minimal_massless():
    cfg = parse_config("experiment=massless\nm=0\np=1")
    assert cfg.experiment == "massless" and cfg.m == 0 and cfg.p == 1
    r = cfg.resolved()
    assert r.a == 0 and r.b == 4 and r.topology == "closed"


def test_unknown_experiment_lists_valid_names():
    with pytest.raises(ConfigError) as exc:
        parse_config("experiment=unknown_name")
    msg = str(exc.value)
    assert "unknown_name" in msg
    for name in EXPERIMENTS:
        assert name in msg


def test_convergence_study_needs_headroom():
    with pytest.raises(ConfigError) as exc:
        parse_config("experiment=convergence_study\nn=3")
    assert exc.value.key == "n" and "minimum is 16" in str(exc.value)


def test_missing_experiment_names_key():
    with pytest.raises(ConfigError) as exc:
        parse_config("m=1")
    assert exc.value.key == "experiment" and "experiment" in str(exc.value)


def test_unknown_key_is_error_with_line():
    with pytest.raises(ConfigError) as exc:
        parse_config("experiment=massless\n# note\nmass=0")
    assert exc.value.line == 3 and "mass" in str(exc.value)


def test_parse_error_line_number():
    with pytest.raises(ConfigError) as exc:
        parse_config("experiment=massless\n\njunk line")
    assert exc.value.line == 3


def test_bad_number():
    with pytest.raises(ConfigError) as exc:
        parse_config("experiment=correspondence\nn=12.5")
    assert exc.value.key == "n"
    with pytest.raises(ConfigError):
        parse_config("experiment=correspondence\nm=nan")


def test_sections_and_comments():
    src = """
    experiment = correspondence   # default run
    [grid]
    a = 0
    b = 8
    n = 256
    [particle]
    m = 2
    p = 4
    [tolerance]
    expectation = 5e-3
    """
    cfg = parse_config(src)
    assert (cfg.b, cfg.n, cfg.m, cfg.p) == (8.0, 256, 2.0, 4.0)
    assert cfg.tolerance("expectation") == 5e-3
    assert cfg.tolerance("order") == 0.2


def test_key_in_wrong_section():
    with pytest.raises(ConfigError) as exc:
        parse_config("experiment=correspondence\n[grid]\nm=2")
    assert exc.value.key == "m"
    with pytest.raises(ConfigError):
        parse_config("experiment=correspondence\n[physics]\nm=2")


def test_duplicate_key():
    with pytest.raises(ConfigError) as exc:
        parse_config("experiment=massless\np=1\np=2")
    assert exc.value.line == 3


def test_overrides_win():
    cfg = parse_config("experiment=correspondence\nn=256", {"n": "128", "tol.order": "0.3"})
    assert cfg.n == 128 and cfg.tolerance("order") == 0.3


def test_tolerances_positive_and_known():
    with pytest.raises(ConfigError):
        parse_config("experiment=correspondence\ntol.order=0")
    with pytest.raises(ConfigError) as exc:
        parse_config("experiment=massless\ntol.expectation=1e-3")
    assert "none" in str(exc.value)


@pytest.mark.parametrize(
    "src",
    [
        "experiment=massless\nm=1",
        "experiment=correspondence\np=0",
        "experiment=correspondence\nn=32\nrefinements=3",
        "experiment=heisenberg_flow\ntopology=closed",
        "experiment=negative_mass\nv=0",
        "experiment=oscillator_expectation\nm=-1",
        "experiment=correspondence\nb=-1",
        "experiment=correspondence\nformat=xml",
        "experiment=free_particle_divergence\ndoublings=1",
        "experiment=jump_time\nomega=-2",
    ],
)
def test_validation_errors(src):
    with pytest.raises(ConfigError):
        parse_config(src)


def test_inputs_only_echo_read_groups():
    cfg = parse_config("experiment=jump_time").resolved()
    inputs = cfg.inputs()
    assert "omega" in inputs and "a" not in inputs and "n" not in inputs


def test_parse_pairs_records_lines():
    pairs = parse_pairs("\n\nexperiment=massless\n")
    assert pairs == {"experiment": ("massless", 3)}
