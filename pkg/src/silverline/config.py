"""Run configuration: a key=value file, overridden by command-line flags."""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path

FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class RunConfig:
    precision_width: Fraction = Fraction(1, 10**20)
    degree_bounds: dict = field(default_factory=lambda: {"dichotomy": 10, "scan": 10})
    tile_counts: int = 50
    output_format: str = "text"
    digits: int = 12

    def __post_init__(self):
        if self.precision_width <= 0:
            raise ValueError("precision_width must be positive")
        if any(int(v) < 1 for v in self.degree_bounds.values()):
            raise ValueError("degree bounds must be >= 1")
        if self.tile_counts < 1:
            raise ValueError("tile_counts must be >= 1")
        if self.output_format not in FORMATS:
            raise ValueError(f"output_format must be one of {FORMATS}")
        if self.digits < 0:
            raise ValueError("digits must be >= 0")

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        """Parse ``key = value`` lines; ``#`` starts a comment.

        ``degree_bound.<op> = n`` sets one entry of ``degree_bounds``.
        """
        kw, bounds = {}, dict(cls().degree_bounds)
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key.startswith("degree_bound."):
                bounds[key.split(".", 1)[1]] = int(value)
            elif key == "precision_width":
                kw[key] = Fraction(value)
            elif key in ("tile_counts", "digits"):
                kw[key] = int(value)
            elif key == "output_format":
                kw[key] = value
            else:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
        return cls(degree_bounds=bounds, **kw)

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.from_text(Path(path).read_text())

    def override(self, **flags) -> "RunConfig":
        """Return a copy with every non-None flag applied (flags win over the file)."""
        changes = {}
        bounds = dict(self.degree_bounds)
        for k, v in flags.items():
            if v is None:
                continue
            if k.startswith("degree_bound."):
                bounds[k.split(".", 1)[1]] = int(v)
            elif k in {f.name for f in fields(self)}:
                changes[k] = v
            else:
                raise KeyError(k)
        return replace(self, degree_bounds=bounds, **changes)
