import json

import numpy as np
import pytest

from nnscontrol import InputError, generate_system, parse_system_file, system_file_dict
from nnscontrol.fixtures import fixture_path
from nnscontrol.systemio import dump_system_file


class TestParseSystemFile:
    def test_parses_bundled_fixture(self):
        parsed = parse_system_file(fixture_path("cob_system.json"))
        assert parsed.system.n == 3
        assert parsed.system.m == 4
        assert parsed.s == 1
        assert parsed.name == "change-of-basis-example"
        np.testing.assert_array_equal(parsed.system.A, np.diag([-1.0, -1.0, 0.0]))

    def test_parses_raw_json_text(self):
        parsed = parse_system_file('{"A": [[0.5]], "B": [[1, -1]]}')
        assert parsed.system.n == 1
        assert parsed.s is None

    def test_missing_b_names_the_key(self):
        with pytest.raises(InputError, match='"B"'):
            parse_system_file('{"A": [[1]]}')

    def test_ragged_row_reports_location(self):
        with pytest.raises(InputError, match="row 2"):
            parse_system_file('{"A": [[1, 2], [3]], "B": [[1], [1]]}')

    def test_non_numeric_entry_reports_location(self):
        with pytest.raises(InputError, match="row 1, column 2"):
            parse_system_file('{"A": [[1, "x"], [0, 1]], "B": [[1], [1]]}')

    def test_nonsquare_a(self):
        with pytest.raises(InputError, match="square"):
            parse_system_file('{"A": [[1, 2]], "B": [[1]]}')

    def test_row_count_mismatch(self):
        with pytest.raises(InputError, match="rows"):
            parse_system_file('{"A": [[1]], "B": [[1], [2]]}')

    def test_s_bounds(self):
        with pytest.raises(InputError, match='"s"'):
            parse_system_file('{"A": [[1]], "B": [[1, 2]], "s": 3}')
        with pytest.raises(InputError, match='"s"'):
            parse_system_file('{"A": [[1]], "B": [[1, 2]], "s": 0}')

    def test_missing_path(self):
        with pytest.raises(InputError, match="not found"):
            parse_system_file("/nonexistent/system.json")

    def test_extra_keys_preserved(self):
        parsed = parse_system_file('{"A": [[1]], "B": [[1]], "planted": {"lambda": 1}}')
        assert parsed.extra["planted"] == {"lambda": 1}


class TestRoundTrip:
    def test_generated_systems_round_trip(self):
        for seed in range(5):
            gen = generate_system("random_nonsingular_paired", 2, 4, seed)
            text = dump_system_file(gen.to_file_dict())
            parsed = parse_system_file(text)
            np.testing.assert_array_equal(parsed.system.A, gen.system.A)
            np.testing.assert_array_equal(parsed.system.B, gen.system.B)
            assert parsed.name == gen.name

    def test_dict_serialization_is_stable(self):
        gen = generate_system("planted_rank_deficient", 3, 2, 4)
        once = dump_system_file(gen.to_file_dict())
        twice = dump_system_file(json.loads(once))
        assert once == twice

    def test_system_file_dict_shape(self):
        gen = generate_system("random_nonsingular_paired", 2, 2, 0)
        data = system_file_dict(gen.system, s=1, name="x")
        assert set(data) == {"A", "B", "s", "name"}
