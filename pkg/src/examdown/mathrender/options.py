"""Rendering options shared by the three output targets."""

from __future__ import annotations

from dataclasses import dataclass

TARGETS = ("latex", "spacemath", "mathml-html")


@dataclass(frozen=True)
class RenderOptions:
    target: str = "latex"
    display_mode: bool = False
    show_apply_distinction: bool = False

    def __post_init__(self) -> None:
        if self.target not in TARGETS:
            raise ValueError(f"unknown render target {self.target!r}")
