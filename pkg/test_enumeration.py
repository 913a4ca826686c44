"""Тесты перебора цилиндров и таблиц частичных сумм."""

import math

import numpy as np
import pytest

from reverse_hub.core.exceptions import ResourceLimitError
from reverse_hub.core.reverse_cfa import branch_product, cylinder_data
from reverse_hub.enumeration.config import EnumerationConfig
from reverse_hub.enumeration.runner import TERM_ERROR, EnumerationRunner
from reverse_hub.enumeration.storage import PartialSumsWriter
from reverse_hub.enumeration.traversal import (
    SortedTraversal,
    UnsortedTraversal,
    get_traversal,
)


def _leaf_areas(config):
    traversal = get_traversal(config)
    areas = []
    for prefix in traversal.prefixes():
        products, doublings, _ = traversal.leaf_products(prefix)
        areas.extend(traversal.leaf_geometry(products, doublings).area.tolist())
    return areas


# --- Конфигурация ---


def test_config_defaults(settings):
    config = EnumerationConfig(n=5)
    assert config.norm == settings.get("NORM")
    assert config.split_depth == 3
    assert config.leaf_batch_depth == 9
    assert config.alphabet == "1234"
    assert EnumerationConfig(n=5, variant="sorted").alphabet == "abcd"


def test_config_validation():
    with pytest.raises(ResourceLimitError):
        EnumerationConfig(n=1)
    with pytest.raises(ResourceLimitError):
        EnumerationConfig(n=15)
    with pytest.raises(ResourceLimitError):
        EnumerationConfig(n=14, variant="sorted")
    with pytest.raises(ValueError):
        EnumerationConfig(n=5, variant="shuffled")
    with pytest.raises(ValueError):
        EnumerationConfig(n=5, density="middle")
    with pytest.raises(ValueError):
        EnumerationConfig(n=5, norm="spectral")
    with pytest.raises(ValueError):
        EnumerationConfig(n=5, threads=0)
    with pytest.raises(ValueError):
        EnumerationConfig(n="5")


def test_prefix_depth():
    assert EnumerationConfig(n=2).prefix_depth == 2
    assert EnumerationConfig(n=5).prefix_depth == 3
    assert EnumerationConfig(n=14).prefix_depth == 5
    assert EnumerationConfig(n=6, split_depth=1, leaf_batch_depth=2).prefix_depth == 4


def test_config_to_dict():
    data = EnumerationConfig(n=4, variant="sorted").to_dict()
    assert data["n"] == 4
    assert data["variant"] == "sorted"
    assert data["threads"] == 1


# --- Поддеревья ---


def test_traversal_factory():
    assert isinstance(get_traversal(EnumerationConfig(n=4)), UnsortedTraversal)
    assert isinstance(
        get_traversal(EnumerationConfig(n=4, variant="sorted")), SortedTraversal
    )


def test_prefixes_are_canonical():
    prefixes = get_traversal(EnumerationConfig(n=5)).prefixes()
    assert len(prefixes) == 4**3
    assert prefixes[:3] == ["111", "112", "113"]
    assert prefixes == sorted(prefixes)


def test_leaf_products_match_exact_products():
    traversal = get_traversal(EnumerationConfig(n=4))
    products, doublings, mask = traversal.leaf_products("421")
    assert products.shape == (4, 3, 3)
    for symbol, product, doubling in zip("1234", products, doublings):
        word = "421" + symbol
        assert np.array_equal(product, branch_product(word).to_numpy())
        assert doubling == word.count("4")
    assert mask.all()


def test_leaf_mask_excludes_constant_words():
    traversal = get_traversal(EnumerationConfig(n=5))
    for letter in "123":
        products, _, mask = traversal.leaf_products(letter * 3)
        assert mask.sum() == 15
        excluded = products[~mask][0]
        assert np.array_equal(excluded, branch_product(letter * 5).to_numpy())

    _, _, mask = traversal.leaf_products("444")
    assert mask.all()


def test_leaf_areas_match_cylinders():
    traversal = get_traversal(EnumerationConfig(n=4))
    products, doublings, _ = traversal.leaf_products("42")
    geometry = traversal.leaf_geometry(products, doublings)
    words = ["42" + a + b for a in "1234" for b in "1234"]
    expected = [cylinder_data(word).leb_area for word in words]
    assert geometry.area.tolist() == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("variant, n", [("unsorted", 4), ("sorted", 3)])
def test_leaf_areas_partition_the_domain(variant, n):
    areas = _leaf_areas(EnumerationConfig(n=n, variant=variant))
    assert len(areas) == 4**n
    assert math.fsum(areas) == pytest.approx(0.5, abs=1e-12)


# --- Сведение сумм ---


def test_runner_word_counts():
    result = EnumerationRunner(EnumerationConfig(n=4)).run()
    assert len(result.subtrees) == 4**3
    assert result.word_count == 4**4 - 3
    assert result.total == pytest.approx(result.positive + result.negative)
    assert result.wall_time >= 0


def test_density_modes_are_ordered():
    upper = EnumerationRunner(EnumerationConfig(n=4)).run().total
    lower = EnumerationRunner(EnumerationConfig(n=4, density="lower")).run().total
    assert lower <= upper


def test_entrywise_norm_dominates_induced():
    induced = EnumerationRunner(EnumerationConfig(n=4)).run().total
    entrywise = EnumerationRunner(EnumerationConfig(n=4, norm="entrywise")).run()
    assert entrywise.total >= induced


def test_accumulated_error_is_conservative():
    result = EnumerationRunner(EnumerationConfig(n=5)).run()
    assert result.accumulated_error >= result.word_count * TERM_ERROR
    assert result.accumulated_error < 1e-9


def test_split_does_not_change_sum():
    coarse = EnumerationRunner(EnumerationConfig(n=5, split_depth=1)).run()
    fine = EnumerationRunner(
        EnumerationConfig(n=5, split_depth=1, leaf_batch_depth=1)
    ).run()
    assert len(coarse.subtrees) == 4**1
    assert len(fine.subtrees) == 4**4
    assert fine.total == pytest.approx(coarse.total, abs=1e-14)


# --- Таблица частичных сумм ---


def test_partial_sums_table(tmp_path):
    result = EnumerationRunner(EnumerationConfig(n=4)).run()
    path = tmp_path / "tables" / "sums.csv"
    writer = PartialSumsWriter(str(path))
    writer.write(result)

    rows = writer.read()
    assert len(rows) == len(result.subtrees)
    assert [row["prefix"] for row in rows] == [s.prefix for s in result.subtrees]
    assert sum(row["words"] for row in rows) == result.word_count
    assert math.fsum(row["total"] for row in rows) == pytest.approx(
        result.total, abs=1e-14
    )
    for row in rows:
        assert row["positive_words"] + row["negative_words"] == row["words"]
    assert not (tmp_path / "tables" / "sums.csv.tmp").exists()
