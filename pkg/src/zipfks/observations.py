"""Observation files: whitespace-separated positive integers, UTF-8, no header."""
from __future__ import annotations

import os

import numpy as np

from .distribution import Sample


class ObservationParseError(ValueError):
    """Malformed observation file; the message names line and token."""


def parse_observations(path: str | os.PathLike) -> Sample:
    """Read every integer in file order, rejecting anything non-positive."""
    values: list[int] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            for token_no, token in enumerate(line.split(), start=1):
                if not token.isdigit():
                    raise ObservationParseError(
                        f"{path}: line {line_no}, token {token_no}: "
                        f"{token!r} is not a positive integer"
                    )
                value = int(token)
                if value < 1:
                    raise ObservationParseError(
                        f"{path}: line {line_no}, token {token_no}: "
                        f"{token!r} is not a positive integer"
                    )
                values.append(value)
    if not values:
        raise ObservationParseError(f"{path}: no observations found")
    return Sample(np.asarray(values, dtype=np.int64))


def write_observations(sample: Sample, path: str | os.PathLike) -> None:
    """One observation per line; the format parse_observations reads back."""
    with open(path, "w", encoding="utf-8") as handle:
        for value in sample.observations:
            handle.write(f"{int(value)}\n")
