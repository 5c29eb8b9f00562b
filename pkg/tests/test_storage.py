import json

import numpy as np
import pytest

from project.api.exceptions import SpecParseError
from project.storage import (
    dumps,
    load_spec,
    read_correspondence,
    read_sampled_csv,
    sampled_spec_document,
    write_correspondence,
    write_curve_csv,
    write_json,
)


class TestCurveCsv:
    def test_written_values_read_back_bit_identical(self, tmp_path, mannheim3_pair):
        _, beta, _ = mannheim3_pair
        path = write_curve_csv(tmp_path / "partner.csv", beta)
        params, points = read_sampled_csv(path, 3)
        assert np.array_equal(np.array(params), beta.s_grid)
        assert np.array_equal(np.array(points), beta.points)

    def test_written_spec_loads_with_its_own_domain(self, tmp_path, mannheim3_pair):
        _, beta, _ = mannheim3_pair
        write_curve_csv(tmp_path / "partner.csv", beta)
        write_json(tmp_path / "partner_spec.json", sampled_spec_document(beta, "partner.csv"))
        spec = load_spec(tmp_path / "partner_spec.json")
        assert spec.domain[1] == spec.curve.params[-1] == float(beta.s_grid[-1])
        assert spec.samples == beta.size

    def test_missing_column(self, tmp_path):
        (tmp_path / "curve.csv").write_text("t,x,y\n0,0,0\n", encoding="utf-8")
        with pytest.raises(SpecParseError, match="missing columns z"):
            read_sampled_csv(tmp_path / "curve.csv", 3)


class TestCorrespondenceCsv:
    def test_round_trip_is_bit_identical(self, tmp_path, mannheim3_pair):
        _, _, cmap = mannheim3_pair
        back = read_correspondence(write_correspondence(tmp_path / "map.csv", cmap))
        assert np.array_equal(back.s, cmap.s)
        assert np.array_equal(back.s_star, cmap.s_star)

    def test_decreasing_map_rejected(self, tmp_path):
        (tmp_path / "map.csv").write_text("s,s_star\n0,1\n1,0\n", encoding="utf-8")
        with pytest.raises(SpecParseError):
            read_correspondence(tmp_path / "map.csv")


class TestJson:
    def test_non_finite_values_become_null(self):
        doc = json.loads(dumps({"b": float("nan"), "a": np.array([1.0, np.inf])}))
        assert doc == {"a": [1.0, None], "b": None}

    def test_keys_are_sorted(self):
        assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')
