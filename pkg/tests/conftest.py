from __future__ import annotations

import pytest

import synth
from regiongem.index import build_index, save_index
from regiongem.ingest import scan_class_folders, split_manifest


@pytest.fixture(scope="session")
def corpus_root(tmp_path_factory):
    """Desk-scale synthetic corpus: 8 hue-band classes x 30 images."""
    root = tmp_path_factory.mktemp("corpus")
    return synth.write_corpus(root, n_classes=8, per_class=30, size=96, seed=7)


@pytest.fixture(scope="session")
def corpus_manifest(corpus_root):
    return scan_class_folders(corpus_root, "synthetic")


@pytest.fixture(scope="session")
def corpus_split(corpus_manifest):
    return split_manifest(corpus_manifest, ratio=0.9, seed=42)


@pytest.fixture(scope="session")
def corpus_train_index(corpus_manifest, corpus_split):
    train = corpus_manifest.subset(corpus_split.train_ids, "train")
    index, skipped = build_index(train)
    assert not skipped
    return index


@pytest.fixture(scope="session")
def mini_root(tmp_path_factory):
    """Small corpus for CLI and service tests: 3 classes x 4 images."""
    root = tmp_path_factory.mktemp("mini")
    return synth.write_corpus(root, n_classes=3, per_class=4, size=32, seed=11)


@pytest.fixture(scope="session")
def mini_manifest(mini_root):
    return scan_class_folders(mini_root, "mini")


@pytest.fixture(scope="session")
def mini_index(mini_manifest):
    index, skipped = build_index(mini_manifest)
    assert not skipped
    return index


@pytest.fixture(scope="session")
def mini_index_path(mini_index, tmp_path_factory):
    path = tmp_path_factory.mktemp("idx") / "mini.idx"
    save_index(mini_index, path)
    return path
