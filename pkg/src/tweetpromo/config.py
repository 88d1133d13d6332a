"""Pipeline configuration read from an INI file."""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from .cleanse import DEFAULT_SHORTENERS, TIMEOUT_ENV, FixtureResolver, LiveResolver
from .corpus import data_path
from .intent import RuleWeights


@dataclass(frozen=True)
class PipelineConfig:
    lexicon: Path = field(default_factory=lambda: data_path("lexicon/default.lex"))
    resolver_mode: str = "fixture"
    resolver_fixture: Path = field(default_factory=lambda: data_path("resolver.tsv"))
    resolver_timeout: float = 5.0
    max_inflight: int = 4
    shorteners: frozenset = DEFAULT_SHORTENERS
    weights: RuleWeights = RuleWeights()
    english_threshold: float = 0.08
    folds: int = 10
    seed: int = 1
    model: Path = Path("model.nb")

    def make_resolver(self):
        if self.resolver_mode == "live":
            # the environment variable beats the file so one run can be tuned without editing config
            timeout = float(os.environ.get(TIMEOUT_ENV, self.resolver_timeout))
            return LiveResolver(timeout=timeout, max_inflight=self.max_inflight)
        return FixtureResolver.from_file(self.resolver_fixture)


def _path(value: str, base: Path, default: Path) -> Path:
    value = value.strip()
    if not value:
        return default
    p = Path(value).expanduser()
    return p if p.is_absolute() else base / p


def load_config(path=None) -> PipelineConfig:
    """Read settings from ``path`` layered over the bundled defaults."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";",))
    parser.read(data_path("default.ini"), encoding="utf-8")
    base = Path.cwd()
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(f"config file not found: {path}")
        parser.read(path, encoding="utf-8")
        base = path.resolve().parent
    defaults = PipelineConfig()
    mode = parser.get("resolver", "mode").strip()
    if mode not in ("fixture", "live"):
        raise ValueError(f"resolver mode must be 'fixture' or 'live', got {mode!r}")
    weights = RuleWeights(**{f.name: parser.getfloat("weights", f.name) for f in fields(RuleWeights)})
    cfg = PipelineConfig(
        lexicon=_path(parser.get("pipeline", "lexicon"), base, defaults.lexicon),
        resolver_mode=mode,
        resolver_fixture=_path(parser.get("resolver", "fixture"), base, defaults.resolver_fixture),
        resolver_timeout=parser.getfloat("resolver", "timeout"),
        max_inflight=parser.getint("resolver", "max_inflight"),
        shorteners=frozenset(parser.get("resolver", "shorteners").split()),
        weights=weights,
        english_threshold=parser.getfloat("pipeline", "english_threshold"),
        folds=parser.getint("crossval", "folds"),
        seed=parser.getint("crossval", "seed"),
        model=_path(parser.get("pipeline", "model"), base, defaults.model),
    )
    if not cfg.lexicon.is_file():
        raise FileNotFoundError(f"lexicon file not found: {cfg.lexicon}")
    if cfg.resolver_mode == "fixture" and not cfg.resolver_fixture.is_file():
        raise FileNotFoundError(f"resolver fixture not found: {cfg.resolver_fixture}")
    return cfg


def parse_resolver_flag(flag: str) -> tuple[str, Optional[Path]]:
    """Parse ``fixture:<path>`` or ``live``."""
    if flag == "live":
        return "live", None
    if flag.startswith("fixture:") and len(flag) > len("fixture:"):
        return "fixture", Path(flag[len("fixture:"):])
    if flag == "fixture":
        return "fixture", None
    raise ValueError(f"--resolver expects 'fixture:<path>' or 'live', got {flag!r}")
