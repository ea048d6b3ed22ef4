"""Bundled example networks in the text format."""

from __future__ import annotations

from importlib import resources

from ..network import ReactionNetwork, parse_network


def names() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files(__name__).iterdir() if p.name.endswith(".crn"))


def text(name: str) -> str:
    return resources.files(__name__).joinpath(f"{name}.crn").read_text(encoding="utf-8")


def load(name: str, rate_prefix: str = "k") -> ReactionNetwork:
    return parse_network(text(name), rate_prefix)
