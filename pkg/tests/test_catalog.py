import pytest

from udfq.catalog import available, load_group, load_json, load_lie, load_sla, load_triple, parse_lie_text, parse_sla_text


def test_bundled_files():
    names = available()
    for f in ("heisenberg.lie", "r_x_r2.grp", "rank1.tri", "rank1.sla", "rank1_wkb.json"):
        assert f in names


@pytest.mark.parametrize("name", [n[:-4] for n in available(".grp")])
def test_groups_load(name):
    G = load_group(name)
    assert all(G.check_laws().values())


@pytest.mark.parametrize("name", [n[:-4] for n in available(".lie")])
def test_lie_algebras_valid(name):
    load_lie(name).validate()


def test_sla_and_json():
    d = load_sla("diag")
    assert d["d"] == 2 and len(d["rho"]) == 2
    cfg = load_json("rank1_wkb")
    assert cfg["hbars"] == [0.05, 0.1, 0.15, 0.2, 0.3]
    assert load_triple("rank1").name == "rank1"


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_lie_text("dim 2\n1 2 5 1\n")
    with pytest.raises(ValueError):
        parse_sla_text("d 1\nrho 1 2\n")
