"""Named, reproducible random substreams derived from one 64-bit seed."""

import hashlib

import numpy as np


def _tag_entropy(tag):
    digest = hashlib.sha256(str(tag).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def rng_stream(seed, *tags):
    """Generator for the substream named by ``tags`` under ``seed``.

    Same (seed, tags) always yields the same stream; distinct tags give
    independent streams, so e.g. structure generation and sampling stay
    reproducible in isolation.
    """
    entropy = [int(seed)] + [_tag_entropy(t) for t in tags]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derive_seed(seed, *tags):
    """Deterministic 63-bit integer seed for the substream named by ``tags``."""
    return int(rng_stream(seed, *tags).integers(1 << 63))
