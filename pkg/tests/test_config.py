import json

import numpy as np
import pytest

from dbog import config
from dbog.calculus import Cochain
from dbog.lattice import FREE, Lattice
from dbog.sampling import random_connection, random_higgs


def sample(rng, lat=None):
    lat = lat or Lattice((2, 3, 2))
    return config.FieldConfig(lat, random_connection(lat, rng), random_higgs(lat, rng), {"seed": 4})


def test_round_trip_is_bit_exact(rng, tmp_path):
    cfg = sample(rng)
    path = tmp_path / "a.json"
    config.write_config(path, cfg)
    first = path.read_bytes()
    back = config.read_config(path)
    assert np.array_equal(back.A.values, cfg.A.values)
    assert np.array_equal(back.Phi.values, cfg.Phi.values)
    assert back.lattice == cfg.lattice
    config.write_config(path, back)
    assert path.read_bytes() == first


def test_round_trip_keeps_awkward_floats(tmp_path):
    lat = Lattice((2, 2, 2))
    vals = np.zeros((2, 2, 2, 3, 2, 2), dtype=complex)
    vals[0, 0, 0, 0, 0, 1] = complex(-0.0, 1e-300)
    vals[1, 1, 1, 2, 1, 0] = complex(0.1 + 0.2, -5e-324)
    cfg = config.FieldConfig(lat, Cochain(lat, 1, vals), Cochain.zeros(lat, 0))
    back = config.loads(config.dumps(cfg))
    assert np.array_equal(back.A.values.view(float), vals.view(float))
    assert np.signbit(back.A.values[0, 0, 0, 0, 0, 1].real)
    assert config.dumps(back) == config.dumps(cfg)


def test_layout_is_site_major(rng):
    cfg = sample(rng)
    data = config.to_json(cfg)
    assert list(data) == ["lattice", "A", "Phi", "metadata"]
    assert data["metadata"]["site_order"] == config.SITE_ORDER
    assert len(data["A"]) == 12 and len(data["A"][0]) == 3
    site = np.ravel_multi_index((1, 2, 0), (2, 3, 2))
    m = np.asarray(data["A"][site][1])
    assert np.array_equal(m[..., 0] + 1j * m[..., 1], cfg.A[(1, 2, 0), (1,)])


def test_free_boundary_descriptor(rng):
    cfg = sample(rng, Lattice((3, 3, 3), ("periodic", FREE, "periodic")))
    assert config.loads(config.dumps(cfg)).lattice == cfg.lattice


def corrupt(rng, mutate):
    data = config.to_json(sample(rng))
    mutate(data)
    return json.dumps(data)


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d["A"][3][1][0].__setitem__(1, "x"), "$.A[3][1][0][1]"),
    (lambda d: d["A"][3].pop(), "$.A[3]"),
    (lambda d: d["Phi"].pop(), "$.Phi"),
    (lambda d: d["Phi"][0].__setitem__(0, [1.0, 2.0]), "$.Phi[0][0][0]"),
    (lambda d: d["A"][0][0][1][1].__setitem__(0, True), "$.A[0][0][1][1]"),
    (lambda d: d.pop("Phi"), "$"),
    (lambda d: d["lattice"].__setitem__("n", 4), "$.lattice"),
])
def test_parse_errors_carry_location(rng, mutate, where):
    with pytest.raises(config.ConfigError) as info:
        config.loads(corrupt(rng, mutate))
    assert info.value.where == where


def test_truncated_file(rng):
    text = config.dumps(sample(rng))
    with pytest.raises(config.ConfigError, match="line 1 column"):
        config.loads(text[: len(text) // 2])
