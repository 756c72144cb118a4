import pytest
from hypothesis import given
from hypothesis import strategies as st

from rstids.errors import FormatVersionError
from rstids.masks import FeatureMask, diff_report
from rstids.rough_set import reference_mask


def test_invariants():
    with pytest.raises(ValueError):
        FeatureMask((0, 1))
    with pytest.raises(ValueError):
        FeatureMask((3, 2))
    with pytest.raises(ValueError):
        FeatureMask((1, 42))
    with pytest.raises(ValueError):
        FeatureMask((1,), "mystery")


def test_full_mask():
    m = FeatureMask.full()
    assert len(m) == 41 and m.columns()[0] == 0 and m.names()[-1] == "dst_host_srv_rerror_rate"


def test_dumps_with_comments(tmp_path):
    m = FeatureMask.of([5, 1, 3], "entropy")
    m.save(tmp_path / "m.txt", ["seed=4"])
    text = (tmp_path / "m.txt").read_text()
    assert text == "# provenance=entropy\n# seed=4\n1,3,5\n"
    assert FeatureMask.load(tmp_path / "m.txt") == m


def test_loads_requires_header():
    with pytest.raises(FormatVersionError):
        FeatureMask.loads("1,2,3\n")


def test_reference_diff_against_itself():
    report = diff_report(reference_mask(), reference_mask())
    assert report.splitlines()[0] == "29 common, 0 added, 0 removed"


def test_diff_sets():
    d = FeatureMask.of([1, 3, 4]).diff(FeatureMask.of([1, 2, 3]))
    assert d == {"common": [1, 3], "added": [4], "removed": [2]}


@given(st.sets(st.integers(1, 41)), st.sampled_from(["reduct", "entropy", "full", "reference"]))
def test_roundtrip(indices, provenance):
    m = FeatureMask.of(indices, provenance)
    assert FeatureMask.loads(m.dumps(["x=1"])) == m
