import math

import pytest
from hypothesis import given, strategies as st

from steerlab.angles import format_angle, parse_angle


class TestParse:
    @pytest.mark.parametrize("text, value", [
        ("7pi/36", 7 * math.pi / 36),
        ("-pi/12", -math.pi / 12),
        ("2*pi/9", 2 * math.pi / 9),
        ("pi", math.pi),
        ("π/4", math.pi / 4),
        ("max", math.pi / 4),
        ("MAX", math.pi / 4),
        ("0.3", 0.3),
        (" 10PI/37 ", 10 * math.pi / 37),
        (1.25, 1.25),
    ])
    def test_values(self, text, value):
        assert parse_angle(text) == pytest.approx(value, abs=1e-15)

    @pytest.mark.parametrize("text", ["", "pi/0", "foo", "7pi/", "nan", "inf", "pi pi"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            parse_angle(text)


class TestFormat:
    @pytest.mark.parametrize("value, text", [
        (math.pi / 4, "pi/4"), (7 * math.pi / 36, "7pi/36"), (-math.pi / 12, "-pi/12"),
        (0.0, "0"), (math.pi, "pi"), (0.3, "0.300000"),
    ])
    def test_canonical(self, value, text):
        assert format_angle(value) == text

    @given(st.integers(-200, 200), st.integers(1, 720))
    def test_round_trip(self, num, den):
        value = num * math.pi / den
        assert parse_angle(format_angle(value)) == pytest.approx(value, abs=1e-12)
