import numpy as np
import pytest
from PIL import Image

import naive
import synth
from regiongem.errors import EmptyQuerySet
from regiongem.evaluation import (
    evaluate,
    format_comparison,
    load_external_results,
    render_contact_sheet,
    write_report,
)
from regiongem.features import describe
from regiongem.imaging import decode_image
from regiongem.index import build_index
from regiongem.ingest import Manifest, ManifestRecord, scan_class_folders
from regiongem.similarity import rank


@pytest.fixture(scope="module")
def uniform_corpus(tmp_path_factory):
    """Four classes, each one distinct uniform color, 4 images per class."""
    root = tmp_path_factory.mktemp("uniform")
    colors = {"red": (200, 30, 30), "green": (30, 200, 30), "blue": (30, 30, 200), "gold": (210, 180, 40)}
    for label, rgb in colors.items():
        d = root / label
        d.mkdir()
        for i in range(4):
            Image.fromarray(synth.solid_image(*rgb, 24, 24)).save(d / f"{i}.png")
    return root


class TestEvaluate:
    def test_uniform_colors_top1_perfect(self, uniform_corpus):
        manifest = scan_class_folders(uniform_corpus)
        # Index 3 per class, query the held-out one per class.
        train_ids = {r.image_id for r in manifest.records if not r.image_id.endswith("3.png")}
        test_ids = {r.image_id for r in manifest.records} - train_ids
        index, _ = build_index(manifest.subset(train_ids, "train"))
        report = evaluate(index, manifest.subset(test_ids, "test"), k_max=5)
        assert report.accuracies[1] == 1.0
        assert report.accuracies[5] == 1.0
        assert all(o.hit_rank == 1 for o in report.per_query)

    def test_matches_rank_oracle_per_query(self, corpus_train_index, corpus_manifest, corpus_split):
        test = corpus_manifest.subset(corpus_split.test_ids, "test")
        small = Manifest(test.dataset_name, test.records[:6])
        report = evaluate(corpus_train_index, small, k_max=20)
        entries = [
            (e.image_id, e.feature.values.tolist())
            for e in corpus_train_index.entries
        ]
        labels = {e.image_id: e.class_label for e in corpus_train_index.entries}
        for outcome, record in zip(report.per_query, small.records):
            with open(record.path, "rb") as fh:
                feature = describe(decode_image(fh.read()))
            order = naive.rank_oracle(feature.values.tolist(), entries)[:20]
            expected = next(
                (pos for pos, iid in enumerate(order, 1) if labels[iid] == record.class_label),
                None,
            )
            assert outcome.hit_rank == expected

    def test_accuracies_monotone_and_consistent(self, corpus_train_index, corpus_manifest, corpus_split):
        test = corpus_manifest.subset(corpus_split.test_ids, "test")
        report = evaluate(corpus_train_index, test, k_max=20)
        ks = report.k_values
        assert ks == sorted(ks)
        for k1, k2 in zip(ks, ks[1:]):
            assert report.accuracies[k1] <= report.accuracies[k2]
        n = len(report.per_query)
        for k in ks:
            hits = sum(1 for o in report.per_query if o.hit_rank is not None and o.hit_rank <= k)
            assert report.accuracies[k] == hits / n

    def test_deterministic_apart_from_wall_time(self, corpus_train_index, corpus_manifest, corpus_split):
        test = corpus_manifest.subset(corpus_split.test_ids, "test")
        small = Manifest(test.dataset_name, test.records[:5])
        a = evaluate(corpus_train_index, small, k_max=10)
        b = evaluate(corpus_train_index, small, k_max=10)
        assert a.accuracies == b.accuracies
        assert a.per_query == b.per_query

    def test_self_retrieval_is_perfect(self, mini_index, mini_manifest):
        report = evaluate(mini_index, mini_manifest, k_max=5)
        assert report.accuracies[1] == 1.0

    def test_label_mismatch_counts_as_miss(self, mini_index, mini_manifest):
        record = mini_manifest.records[0]
        queries = Manifest("odd", [ManifestRecord(record.image_id, "no-such-class", record.path)])
        report = evaluate(mini_index, queries, k_max=5)
        assert report.label_mismatches == [record.image_id]
        assert report.per_query[0].hit_rank is None
        assert report.accuracies[5] == 0.0

    def test_undecodable_query_skipped(self, mini_index, mini_manifest, tmp_path):
        bad = tmp_path / "bad.png"
        bad.write_bytes(b"nope")
        records = [mini_manifest.records[0], ManifestRecord("bad.png", "x", str(bad))]
        report = evaluate(mini_index, Manifest("m", records), k_max=5)
        assert len(report.per_query) == 1
        assert len(report.skipped) == 1

    def test_empty_query_set(self, mini_index):
        with pytest.raises(EmptyQuerySet):
            evaluate(mini_index, Manifest("e", []), k_max=5)


class TestReportIo:
    def test_write_report_format(self, mini_index, mini_manifest, tmp_path):
        report = evaluate(mini_index, mini_manifest, k_max=5)
        out = tmp_path / "report.txt"
        write_report(report, out)
        text = out.read_text().splitlines()
        assert text[0].startswith("dataset: ")
        assert any(line.startswith("seed: ") for line in text)
        query_lines = [l for l in text if l.startswith("query\t")]
        top_lines = [l for l in text if l.startswith("top\t")]
        assert len(query_lines) == len(report.per_query)
        assert len(top_lines) == len(report.k_values)
        k, acc = top_lines[0].split("\t")[1:]
        assert int(k) == report.k_values[0]
        assert float(acc) == pytest.approx(report.accuracies[report.k_values[0]])

    def test_external_results_round(self, tmp_path, mini_index, mini_manifest):
        csv_path = tmp_path / "ext.csv"
        csv_path.write_text(
            "method,k,accuracy\nbaselineA,1,15.22\nbaselineA,5,39.13\nbaselineB,1,26.74\n"
        )
        external = load_external_results(csv_path)
        assert external["baselineA"][5] == 39.13
        report = evaluate(mini_index, mini_manifest, k_max=5)
        table = format_comparison(report, external)
        assert "baselineA" in table and "ours" in table


class TestContactSheet:
    def test_borders_follow_class_match(self, mini_index, mini_manifest, tmp_path):
        record = mini_manifest.records[0]
        with open(record.path, "rb") as fh:
            feature = describe(decode_image(fh.read()))
        result = rank(feature, mini_index, 5, query_id=record.image_id)
        out = tmp_path / "sheet.png"
        render_contact_sheet(
            record.path, result, mini_index, out, query_label=record.class_label
        )
        sheet = np.asarray(Image.open(out).convert("RGB"))
        cell, border, gap = 128, 5, 10
        tile_w = cell + 2 * border
        assert sheet.shape[0] == tile_w
        assert sheet.shape[1] == tile_w * 6 + gap
        for pos, hit in enumerate(result.hits):
            x0 = (pos + 1) * tile_w + gap
            expected = (46, 160, 67) if hit.class_label == record.class_label else (208, 58, 58)
            assert tuple(sheet[2, x0 + 2]) == expected

    def test_empty_results_rejected(self, mini_index, mini_manifest, tmp_path):
        from regiongem.similarity import RankedResult

        with pytest.raises(ValueError):
            render_contact_sheet(
                mini_manifest.records[0].path,
                RankedResult("q", ()),
                mini_index,
                tmp_path / "x.png",
            )
