import json
import math
import os
import unittest

import pandas as pd
import pytest

from ..context import online_risk_control  # noqa: F401
from online_risk_control.experiments import ConfigError, rank_grid, sweep
from .documents import tiny_document


class RankGridTests(unittest.TestCase):

    def test_lowest_score_first(self):
        self.assertEqual(rank_grid([(0.1, 2.0), (0.2, 1.0)]), [(0.2, 1.0), (0.1, 2.0)])

    def test_ties_go_to_the_smaller_value(self):
        ranking = rank_grid([(0.1, 1.0), (0.05, 1.0), (0.3, 0.5)])

        self.assertEqual(ranking, [(0.3, 0.5), (0.05, 1.0), (0.1, 1.0)])

    def test_nan_scores_rank_last(self):
        ranking = rank_grid([(0.2, math.nan), (0.4, 3.0)])

        self.assertEqual(ranking[0], (0.4, 3.0))
        self.assertEqual(ranking[1][0], 0.2)


class TestSweep:
    def test_single_value_grid(self, tmp_path):
        document = tiny_document(tmp_path, trials=1)

        result = sweep(document, "controller.gamma", [0.05])

        assert result.selected == 0.05
        assert result.passed
        assert list(result.ranking["rank"]) == [1]
        assert os.path.exists(tmp_path / "controller.gamma=0.05" / "summary.json")
        assert len(pd.read_csv(tmp_path / "ranking.csv")) == 1
        with open(tmp_path / "sweep.json", "r") as file:
            assert json.load(file) == {"parameter": "controller.gamma", "grid": [0.05], "selected": 0.05}

    def test_every_value_is_ranked(self, tmp_path):
        result = sweep(tiny_document(trials=1), "controller.gamma", [0.01, 0.1], output=str(tmp_path))

        assert sorted(result.ranking["value"]) == [0.01, 0.1]
        assert result.selected == result.ranking["value"].iloc[0]

    def test_empty_grid(self, tmp_path):
        with pytest.raises(ConfigError, match="grid is empty"):
            sweep(tiny_document(tmp_path), "controller.gamma", [])

    def test_invalid_grid_value(self, tmp_path):
        with pytest.raises(ConfigError) as raised:
            sweep(tiny_document(tmp_path, trials=1), "controller.gamma", [-0.1])

        assert raised.value.path == "controller.gamma"
