import numpy as np
import pytest

from zipfks.distribution import RandomStream, Support, ZipfModel, sample
from zipfks.observations import (
    ObservationParseError,
    parse_observations,
    write_observations,
)


def test_reads_whitespace_separated_values(tmp_path):
    path = tmp_path / "obs.txt"
    path.write_text("1 2 3\n4")
    assert parse_observations(path).observations.tolist() == [1, 2, 3, 4]


def test_mixed_whitespace_and_blank_lines(tmp_path):
    path = tmp_path / "obs.txt"
    path.write_text("  7\t8\n\n9  \n")
    assert parse_observations(path).observations.tolist() == [7, 8, 9]


def test_zero_rejected_with_location(tmp_path):
    path = tmp_path / "obs.txt"
    path.write_text("1 0 2")
    with pytest.raises(ObservationParseError, match=r"line 1, token 2"):
        parse_observations(path)


@pytest.mark.parametrize("token", ["-3", "2.5", "abc", "1e3", "0x10"])
def test_non_positive_integer_tokens_rejected(tmp_path, token):
    path = tmp_path / "obs.txt"
    path.write_text(f"5\n{token} 7")
    with pytest.raises(ObservationParseError, match="line 2, token 1"):
        parse_observations(path)


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "obs.txt"
    path.write_text("\n  \n")
    with pytest.raises(ObservationParseError, match="no observations"):
        parse_observations(path)


def test_large_sample_round_trip(tmp_path):
    model = ZipfModel(2.0, Support.finite(100))
    drawn = sample(model, 50000, RandomStream.for_replicate(21, 0, 0))
    path = tmp_path / "big.txt"
    write_observations(drawn, path)
    back = parse_observations(path)
    np.testing.assert_array_equal(back.observations, drawn.observations)
