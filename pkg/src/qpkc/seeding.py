"""Labelled RNG streams derived from one run seed."""
from __future__ import annotations

import zlib

import numpy as np


def fork(seed: int, label: str) -> np.random.Generator:
    """Independent generator for ``label``; adding draws to one label never shifts another."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(zlib.crc32(label.encode()),)))
