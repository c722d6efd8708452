import json

import pytest

from matgeom import config
from matgeom.errors import MatGeomError
from matgeom.fields import gf


def test_defaults():
    cfg = config.get()
    assert cfg.seed == 0 and cfg.jobs == 1


def test_load_overrides_field(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"fields": {"4": "field p=2 k=2 poly=1,1,1"}, "seed": 7, "jobs": 2}))
    cfg = config.load(path)
    assert cfg.seed == 7 and cfg.jobs == 2
    assert gf(4).poly == (1, 1, 1)


@pytest.mark.parametrize("bad", [{"enumeration_cap": 0}, {"search_budget": -1}, {"jobs": 0}])
def test_rejects_nonsense(tmp_path, bad):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(bad))
    with pytest.raises(MatGeomError):
        config.load(path)
