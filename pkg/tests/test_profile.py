"""Verification profiles."""

import json

import pytest

from dunkl_besov import DomainError, load_profile
from dunkl_besov.profile import CHECKS, base_id, cell_id


def test_default_profile():
    prof = load_profile()
    assert prof.alpha_set == [-0.25, 0.0, 0.5, 1.5]
    assert prof.n == 2048 and prof.radius == 20.0
    assert all(base_id(k) in CHECKS for k in prof.tolerances)


def test_ceiling_lookup():
    prof = load_profile()
    assert prof.ceiling("S1.plancherel[a=0,f=gaussian]") == prof.tolerances["S1.plancherel"]
    cid = cell_id("S6.thm2", a=0.5, p=2.0, q=2.0, b=0.5)
    assert cid == "S6.thm2[a=0.5,p=2,q=2,b=0.5]"
    assert prof.ceiling(cid) == prof.tolerances[cid]
    with pytest.raises(DomainError):
        prof.with_overrides(tolerances={}).ceiling("S1.plancherel")


def test_rejections(tmp_path):
    prof = load_profile()
    with pytest.raises(DomainError):
        prof.with_overrides(alpha_set=[-0.6])
    with pytest.raises(DomainError):
        prof.with_overrides(tolerances={"S9.nothing": 1.0})
    with pytest.raises(DomainError):
        prof.with_overrides(tolerances={"S1.plancherel": -1.0})
    with pytest.raises(DomainError):
        prof.with_overrides(suites=["S7"])
    with pytest.raises(DomainError):
        prof.with_overrides(p_set=[0.5])
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"alpha_set": [0.0]}))
    with pytest.raises(DomainError):
        load_profile(bad)


def test_digest_and_overrides(tmp_path):
    prof = load_profile()
    path = tmp_path / "p.json"
    path.write_text(json.dumps(prof.to_dict()))
    assert load_profile(path).digest() == prof.digest()
    small = prof.with_overrides(n=512, alpha_set=[0.5])
    assert small.n == 512 and small.alpha_set == [0.5]
    assert small.digest() != prof.digest()
    assert prof.n == 2048
