"""Embedding-benchmark harness: registries, deterministic evaluation, leaderboard."""

__version__ = "1.0.0"
