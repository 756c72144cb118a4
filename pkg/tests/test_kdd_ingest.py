import gzip
import subprocess
from collections import Counter
from importlib import resources

import numpy as np
import pytest
from conftest import GUESS, KDD_LINES, NEPTUNE, SMURF
from hypothesis import given
from hypothesis import strategies as st

from rstids.errors import (
    EmptyClassError,
    FieldCountError,
    NumericParseError,
    UnknownAttackError,
    UnknownSymbolError,
)
from rstids.kdd_ingest import (
    ATTACK_CLASSES,
    CLASSES,
    SAMPLE_TEST_COUNTS,
    SAMPLE_TRAIN_COUNTS,
    SAMPLE_TRAIN_RATIOS,
    NumericInstance,
    SymbolMaps,
    allocate_counts,
    attack_class,
    load_dataset,
    parse_line,
    stratified_sample,
    to_arrays,
    transform,
)


def test_parse_first_record():
    rec = parse_line(KDD_LINES[0])
    assert rec.fields[0] == 0
    assert (rec.protocol, rec.service, rec.flag) == ("tcp", "http", "SF")
    assert rec.fields[4] == 181 and rec.fields[5] == 5450
    assert rec.label == "normal"


def test_parse_second_record():
    rec = parse_line(KDD_LINES[1])
    assert rec.fields[4] == 239 and rec.fields[5] == 486


def test_field_count_error_carries_line_number():
    short = KDD_LINES[0].rsplit(",", 2)[0] + ",normal."
    with pytest.raises(FieldCountError, match="line 7"):
        parse_line(short, 7)


@pytest.mark.parametrize("bad", ["x", "-1", "nan", "inf"])
def test_numeric_field_rejected(bad):
    parts = KDD_LINES[0].split(",")
    parts[4] = bad
    with pytest.raises(NumericParseError):
        parse_line(",".join(parts))


def test_whitespace_and_missing_period():
    rec = parse_line("  " + KDD_LINES[0].replace(",normal.", ", normal ") + " \n")
    assert rec.label == "normal"


def test_transform_symbolic_fields(maps):
    inst = transform(parse_line(KDD_LINES[0]), maps)
    assert inst.features[1:4].tolist() == [3, 19, 10]
    assert inst.decision == 0 and inst.attack_class == "Normal"


def test_transform_keeps_numeric_fields_bit_exact(maps):
    rec = parse_line(KDD_LINES[0])
    inst = transform(rec, maps)
    raw = KDD_LINES[0].split(",")[:41]
    for pos in range(41):
        if pos in (1, 2, 3):
            continue
        assert inst.features[pos] == float(raw[pos])
        assert np.float64(raw[pos]).tobytes() == inst.features[pos].tobytes()


@pytest.mark.parametrize("line, decision, cls", [
    (SMURF, 1, "DoS"), (NEPTUNE, 1, "DoS"), (GUESS, 1, "R2L"), (KDD_LINES[2], 0, "Normal"),
])
def test_transform_labels(maps, line, decision, cls):
    inst = transform(parse_line(line), maps)
    assert (inst.decision, inst.attack_class) == (decision, cls)


def test_unknown_symbol_strict_and_lenient(maps):
    rec = parse_line(KDD_LINES[0].replace(",http,", ",gopherx,"))
    with pytest.raises(UnknownSymbolError):
        transform(rec, maps, strict=True)
    assert transform(rec, maps, strict=False).features[2] == 0


def test_unknown_attack():
    with pytest.raises(UnknownAttackError, match="line 3"):
        transform(parse_line(KDD_LINES[0].replace("normal.", "zeroday."), 3), SymbolMaps.default())


def test_symbol_maps_contents(maps):
    assert maps.protocol_map == {"tcp": 3, "udp": 7, "icmp": 9}
    assert len(maps.flag_map) == 11
    assert maps.flag_map["oth"] == 1 and maps.flag_map["sh"] == 11 and maps.flag_map["sf"] == 10
    assert maps.service_map["http"] == 19
    assert len(set(maps.service_map.values())) == len(maps.service_map)
    assert 0 not in maps.service_map.values()


def test_service_codes_alphabetical_around_http(maps):
    ordered = sorted(maps.service_map, key=maps.service_map.get)
    assert [s for s in ordered if s != "http"] == sorted(s for s in ordered if s != "http")
    assert sorted(maps.service_map.values()) == list(range(1, len(maps.service_map) + 1))


def test_symbol_maps_roundtrip(maps):
    assert SymbolMaps.parse(maps.dump()) == maps


def test_symbol_maps_reject_duplicate_service_codes():
    with pytest.raises(ValueError):
        SymbolMaps({"tcp": 3}, {"SF": 10}, {"http": 19, "ftp": 19})


@pytest.mark.parametrize("alias, canonical", [
    ("netune", "neptune"), ("lpsweep", "ipsweep"), ("httpunnel", "httptunnel"),
])
def test_aliases_share_class(alias, canonical):
    assert attack_class(alias) == attack_class(canonical)


def test_satan_is_probe():
    assert attack_class("satan.") == "Probe"


def test_attack_dictionary_covers_classes():
    assert set(ATTACK_CLASSES.values()) == set(CLASSES)


def test_numeric_instance_invariants():
    with pytest.raises(ValueError):
        NumericInstance(np.zeros(40), 0, "Normal")
    with pytest.raises(ValueError):
        NumericInstance(np.zeros(41), 1, "Normal")


def test_load_dataset_first_three(tmp_path, maps):
    path = tmp_path / "three.txt"
    path.write_text("\n".join(KDD_LINES) + "\n")
    data, report = load_dataset(path, maps)
    assert len(data) == 3 and all(d.attack_class == "Normal" for d in data)
    assert report.accepted == 3 and report.total == 3


def test_load_dataset_empty(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    data, report = load_dataset(path)
    assert data == [] and report.total == 0
    assert "Total" in report.table()


def test_load_dataset_gz_and_order(tmp_path, kdd_file):
    gz = tmp_path / "mini.txt.gz"
    with gzip.open(gz, "wt") as fh:
        fh.write(kdd_file.read_text())
    plain, _ = load_dataset(kdd_file)
    zipped, _ = load_dataset(gz)
    assert plain == zipped
    assert [d.attack_class for d in plain] == ["Normal"] * 3 + ["DoS", "DoS", "R2L"]


def test_lenient_skips_strict_raises(tmp_path):
    path = tmp_path / "dirty.txt"
    path.write_text(KDD_LINES[0] + "\ngarbage line\n" + KDD_LINES[1] + "\n")
    data, report = load_dataset(path)
    assert len(data) == 2 and report.skipped == 1 and "line 2" in report.errors[0]
    with pytest.raises(FieldCountError):
        load_dataset(path, strict=True)


def test_report_table_layout(kdd_file):
    _, report = load_dataset(kdd_file)
    rows = report.table().splitlines()
    assert [r.split()[0] for r in rows[1:7]] == list(CLASSES) + ["Total"]


def test_allocate_counts_normalised_reference_sample():
    ratios = {c: n / 24698 for c, n in SAMPLE_TRAIN_COUNTS.items()}
    assert allocate_counts(ratios, 24698) == SAMPLE_TRAIN_COUNTS
    assert allocate_counts(SAMPLE_TRAIN_RATIOS, 24698) == SAMPLE_TRAIN_COUNTS


def test_allocate_counts_printed_ratios():
    # percentages as printed, at the printed total; frozen from a hand-run
    # largest-remainder apportionment
    printed = {"Normal": .1969, "Probe": .0083, "DoS": .7924, "U2R": .0001, "R2L": .0023}
    assert allocate_counts(printed, 24701) == {
        "Normal": 4864, "Probe": 205, "DoS": 19573, "U2R": 2, "R2L": 57}


def test_allocate_counts_rejects_bad_ratios():
    with pytest.raises(ValueError):
        allocate_counts({"Normal": 0.5, "DoS": 0.4}, 10)


@given(st.lists(st.integers(1, 1000), min_size=1, max_size=6), st.integers(0, 5000))
def test_allocate_counts_properties(weights, total):
    ratios = {f"c{i}": w / sum(weights) for i, w in enumerate(weights)}
    counts = allocate_counts(ratios, total)
    assert sum(counts.values()) == total
    for c, r in ratios.items():
        assert abs(counts[c] - r * total) < 1.0 + 1e-9


def _pool(n_per_class):
    out = []
    for k, cls in enumerate(CLASSES):
        for i in range(n_per_class):
            f = np.zeros(41)
            f[0] = k * 1000 + i
            out.append(NumericInstance(f, int(cls != "Normal"), cls))
    return out


def test_stratified_sample_exact_histogram_and_order():
    data = _pool(300)
    ratios = {"Normal": .2, "Probe": .1, "DoS": .5, "U2R": .05, "R2L": .15}
    sample = stratified_sample(data, ratios, 400, seed=3)
    assert Counter(d.attack_class for d in sample) == allocate_counts(ratios, 400)
    keys = [d.features[0] for d in sample]
    assert keys == sorted(keys)


def test_stratified_sample_deterministic_and_empty():
    data = _pool(50)
    ratios = dict(SAMPLE_TRAIN_RATIOS)
    assert stratified_sample(data, ratios, 100, 9) == stratified_sample(data, ratios, 100, 9)
    assert stratified_sample(data, ratios, 0, 9) == []


def test_stratified_sample_shortfall():
    data = [d for d in _pool(10) if d.attack_class != "U2R"]
    ratios = {"Normal": .25, "Probe": .25, "DoS": .25, "U2R": .25}
    sample = stratified_sample(data, ratios, 20, 0)
    assert len(sample) == 15
    with pytest.raises(EmptyClassError):
        stratified_sample(data, ratios, 20, 0, report_shortfall=False)


def test_to_arrays(kdd_file):
    data, _ = load_dataset(kdd_file)
    X, y = to_arrays(data)
    assert X.shape == (6, 41) and y.tolist() == [0, 0, 0, 1, 1, 1]


def _data_file(name):
    return resources.files("rstids").joinpath(f"data/{name}")


@pytest.mark.parametrize("split", ["train", "test"])
def test_desk_sample_matches_manifest(split):
    """Recount classes of the bundled sample with grep/awk and compare to the manifest."""
    manifest = {}
    for line in _data_file("desk_manifest.txt").read_text().splitlines():
        if line.startswith(f"{split}.") and "=" in line:
            key, value = line[len(split) + 1:].split("=")
            manifest[key] = int(value)
    path = str(_data_file(f"desk_{split}.txt"))
    out = subprocess.run(["awk", "-F,", "{sub(/\\.$/, \"\", $42); print $42}", path],
                         capture_output=True, text=True, check=True).stdout.split()
    labels = Counter(out)
    recount = Counter()
    for label, n in labels.items():
        recount[ATTACK_CLASSES[label]] += n
    assert sum(labels.values()) == manifest["Total"]
    for cls in CLASSES:
        assert recount.get(cls, 0) == manifest[cls], cls
    _, report = load_dataset(path, strict=True)
    assert dict(report.class_counts) == {c: n for c, n in recount.items() if n}


def test_desk_sample_proportions_follow_reference_counts():
    for split, counts in (("train", SAMPLE_TRAIN_COUNTS), ("test", SAMPLE_TEST_COUNTS)):
        _, report = load_dataset(str(_data_file(f"desk_{split}.txt")))
        total = report.total
        ratios = {c: n / sum(counts.values()) for c, n in counts.items()}
        assert dict(report.class_counts) == {c: n for c, n in allocate_counts(ratios, total).items() if n}
