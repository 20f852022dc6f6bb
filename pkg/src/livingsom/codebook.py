"""Item catalog for binary living-conditions questionnaires."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DataValidationError

DEFAULT_DOMAINS = (
    "dwelling-comfort",
    "dwelling-problems",
    "environment",
    "durables",
    "deprivations",
)


@dataclass(frozen=True)
class Item:
    """One binary item. The negative modality is always coded 1."""

    code: str
    domain: str
    negative_label: str
    neutral_label: str

    def __post_init__(self):
        if not self.code:
            raise DataValidationError("item code must be a non-empty string")
        if self.negative_label == self.neutral_label:
            raise DataValidationError(
                f"item {self.code}: negative and neutral labels must differ")


@dataclass(frozen=True)
class Codebook:
    items: tuple[Item, ...]
    domains: tuple[str, ...]

    def __post_init__(self):
        codes = [it.code for it in self.items]
        if len(set(codes)) != len(codes):
            dup = sorted({c for c in codes if codes.count(c) > 1})
            raise DataValidationError(f"duplicate item codes: {dup}")
        if len(set(self.domains)) != len(self.domains):
            raise DataValidationError("duplicate domain names")
        for it in self.items:
            if it.domain not in self.domains:
                raise DataValidationError(
                    f"item {it.code}: unknown domain {it.domain!r}")

    @property
    def codes(self) -> list[str]:
        return [it.code for it in self.items]

    @property
    def n_items(self) -> int:
        return len(self.items)

    @property
    def n_modalities(self) -> int:
        return 2 * len(self.items)

    def index(self, code: str) -> int:
        for i, it in enumerate(self.items):
            if it.code == code:
                return i
        raise KeyError(code)

    def modality_labels(self) -> list[str]:
        """Column labels of the indicator matrix: ``CLB0, CLB1, CLE0, ...``."""
        out = []
        for it in self.items:
            out.extend((f"{it.code}0", f"{it.code}1"))
        return out

    def modality_polarity(self) -> np.ndarray:
        """1 for negative modality columns, 0 for neutral ones."""
        return np.tile(np.array([0, 1], dtype=np.int8), self.n_items)

    def domain_of_items(self) -> np.ndarray:
        """Domain index of every item, in item order."""
        lookup = {d: k for k, d in enumerate(self.domains)}
        return np.array([lookup[it.domain] for it in self.items], dtype=np.intp)

    def domain_sizes(self) -> tuple[int, ...]:
        idx = self.domain_of_items()
        return tuple(int((idx == k).sum()) for k in range(len(self.domains)))

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "items": [
                {"code": it.code, "domain": it.domain,
                 "negative_label": it.negative_label,
                 "neutral_label": it.neutral_label}
                for it in self.items
            ],
            "domains": list(self.domains),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Codebook":
        if not isinstance(doc, dict) or "items" not in doc or "domains" not in doc:
            raise DataValidationError("codebook must have 'items' and 'domains'")
        items = []
        for raw in doc["items"]:
            extra = set(raw) - {"code", "domain", "negative_label", "neutral_label"}
            if extra:
                raise DataValidationError(f"unknown codebook item keys: {sorted(extra)}")
            try:
                items.append(Item(raw["code"], raw["domain"],
                                  raw["negative_label"], raw["neutral_label"]))
            except KeyError as exc:
                raise DataValidationError(f"codebook item missing key {exc}") from None
        return cls(tuple(items), tuple(doc["domains"]))

    @classmethod
    def from_json(cls, path: str | Path) -> "Codebook":
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DataValidationError(f"cannot read codebook {path}: {exc}") from exc
        return cls.from_dict(doc)

    @classmethod
    def default(cls) -> "Codebook":
        """The 26-item, 5-domain ECHP living-conditions codebook."""
        text = resources.files("livingsom").joinpath("data/codebook.json").read_text("utf-8")
        return cls.from_dict(json.loads(text))
