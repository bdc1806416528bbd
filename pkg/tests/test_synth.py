import pytest

from crossindex.errors import InvalidParams
from crossindex.ingest import SourceConfig, load_sources
from crossindex.synth import DEFECTS, GeneratorParams, generate, load_truth


def read_all(files):
    return {f.name: f.read_bytes() for f in files}


class TestDeterminism:
    def test_same_seed_byte_identical(self, tmp_path):
        params = GeneratorParams(count=100, seed=7, fids=4)
        a = generate(params, tmp_path / "a")
        b = generate(params, tmp_path / "b")
        assert read_all(a.files) == read_all(b.files)
        assert a.truth_file.read_bytes() == b.truth_file.read_bytes()

    def test_different_seed_differs(self, tmp_path):
        a = generate(GeneratorParams(count=100, seed=1, fids=4), tmp_path / "a")
        b = generate(GeneratorParams(count=100, seed=2, fids=4), tmp_path / "b")
        assert read_all(a.files) != read_all(b.files)


class TestNoDefectIdentity:
    def test_corpus_equals_truth(self, tmp_path):
        params = GeneratorParams(
            count=200, seed=3, fids=4, missing_country_rate=0.0,
            missing_field_rate=0.0, typo_rate=0.0, abbreviation_variant_rate=0.0,
            transposition_rate=0.0, duplicate_rate=0.0, incoherent_address_rate=0.0,
        )
        report = generate(params, tmp_path)
        dirty = load_sources(SourceConfig.load(report.config_file))
        truth = load_truth(report.truth_file)
        assert sorted(r.key for r in dirty) == sorted(r.key for r, _ in truth)
        clean_by_key = {r.key: r for r, _ in truth}
        for record in dirty:
            assert record == clean_by_key[record.key]
        assert all(dup == "" for _, dup in truth)


class TestShape:
    def test_record_and_file_counts(self, tmp_path):
        report = generate(GeneratorParams(count=3200, seed=5, fids=16), tmp_path)
        assert len(report.files) == 16
        records = load_sources(SourceConfig.load(report.config_file))
        assert len(records) == 3200

    def test_all_records_parseable_and_unique(self, tmp_path):
        report = generate(GeneratorParams(count=500, seed=6, fids=8), tmp_path)
        records = load_sources(SourceConfig.load(report.config_file))
        keys = [r.key for r in records]
        assert len(set(keys)) == len(keys) == 500

    def test_truth_marks_duplicates(self, tmp_path):
        report = generate(GeneratorParams(count=300, seed=8, fids=4,
                                          duplicate_rate=0.2), tmp_path)
        truth = load_truth(report.truth_file)
        marked = [dup for _, dup in truth if dup]
        assert len(marked) == report.applied["duplicate"] > 0
        keys = {f"{r.fid}:{r.cid}" for r, _ in truth}
        assert all(dup in keys for dup in marked)


class TestRates:
    def test_rates_within_two_points(self, tmp_path):
        params = GeneratorParams(count=10_000, seed=9, fids=8)
        report = generate(params, tmp_path)
        requested = {
            "missing_field": params.missing_field_rate,
            "typo": params.typo_rate,
            "abbreviation_variant": params.abbreviation_variant_rate,
            "transposition": params.transposition_rate,
            "duplicate": params.duplicate_rate,
            "incoherent_address": params.incoherent_address_rate,
        }
        for defect in DEFECTS:
            realized = report.rate(defect)
            assert abs(realized - requested[defect]) <= 0.02, (defect, realized)


class TestValidation:
    @pytest.mark.parametrize("kw", [
        {"count": 0},
        {"count": 10, "typo_rate": 1.5},
        {"count": 10, "duplicate_rate": -0.1},
        {"count": 10, "fids": 0},
    ])
    def test_invalid_params(self, tmp_path, kw):
        with pytest.raises(InvalidParams):
            generate(GeneratorParams(**kw), tmp_path)
