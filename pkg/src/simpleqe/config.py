"""TOML run configuration.

All run parameters live in one file; relative paths resolve against the
file's directory. Example::

    seed = 13
    jobs = 1

    [data]
    judgments = "judgments.jsonl"
    frequency_table = "unigrams.tsv"

    [encoder]
    name = "stub"
    dimension = 64
    max_units = 512

    [head]
    mode = "M3"
    dual_encoder = true
    use_features = false
    d_f = 32

    [train]
    epochs = 30
    batch_size = 32
    lr = 0.01
    seed = 13

    [eval]
    mode = "qe"          # qe | complexity | transfer
    k = 10
    checkpoint = "out/checkpoint.zip"
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from .corpus import QUALITIES
from .encoders import EncoderSpec
from .errors import ValidationError
from .qemodel.heads import DEFAULT_FEATURE_DIM, HeadConfig
from .qemodel.training import TrainConfig

EVAL_MODES = ("qe", "complexity", "transfer")
_PATH_KEYS = {
    "data": ("judgments", "corpus_dir", "wiki_simple", "wiki_standard", "frequency_table",
             "references", "sentences", "parses", "documents"),
    "eval": ("checkpoint",),
    "metrics": ("source", "candidate", "references"),
}


@dataclass
class RunConfig:
    path: Path
    config_hash: str
    seed: int = 0
    jobs: int = 1
    data: dict = field(default_factory=dict)
    encoder: EncoderSpec = field(default_factory=EncoderSpec)
    head: HeadConfig = field(default_factory=HeadConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    eval: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    chunk: dict = field(default_factory=dict)

    def require(self, section: str, key: str):
        value = getattr(self, section).get(key)
        if value is None:
            raise ValidationError(f"[{section}] {key} is required for this subcommand")
        return value

    def stamp(self) -> dict:
        return {"config_hash": self.config_hash, "seed": self.seed}


def _resolve(base: Path, value):
    if isinstance(value, list):
        return [_resolve(base, v) for v in value]
    p = Path(value)
    return p if p.is_absolute() else base / p


def _table(raw, name):
    value = raw.get(name, {})
    if not isinstance(value, dict):
        raise ValidationError(f"[{name}] must be a table")
    return dict(value)


def _typed(section, key, value, kind):
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ValidationError(f"[{section}] {key} must be an integer")
    if kind is float and (isinstance(value, bool) or not isinstance(value, (int, float))):
        raise ValidationError(f"[{section}] {key} must be a number")
    if kind is bool and not isinstance(value, bool):
        raise ValidationError(f"[{section}] {key} must be true or false")
    if kind is str and not isinstance(value, str):
        raise ValidationError(f"[{section}] {key} must be a string")
    return float(value) if kind is float else value


def _pick(section, table, spec):
    unknown = sorted(set(table) - set(spec))
    if unknown:
        raise ValidationError(f"[{section}] unknown key(s): {', '.join(unknown)}")
    return {k: _typed(section, k, table[k], spec[k]) for k in spec if k in table}


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        raw_bytes = path.read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        raw = tomli.loads(raw_bytes.decode("utf-8"))
    except (tomli.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ValidationError(f"invalid TOML in {path}: {exc}") from None
    base = path.resolve().parent

    known = {"seed", "jobs", "data", "encoder", "head", "train", "eval", "metrics", "chunk"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ValidationError(f"unknown top-level key(s): {', '.join(unknown)}")
    seed = _typed("top", "seed", raw.get("seed", 0), int)
    jobs = _typed("top", "jobs", raw.get("jobs", 1), int)

    sections = {name: _table(raw, name) for name in ("data", "eval", "metrics", "chunk")}
    for name, keys in _PATH_KEYS.items():
        for key in keys:
            if key in sections[name]:
                sections[name][key] = _resolve(base, sections[name][key])

    enc = _pick("encoder", _table(raw, "encoder"),
                {"name": str, "dimension": int, "max_units": int, "endpoint": str})
    head_raw = _pick("head", _table(raw, "head"),
                     {"mode": str, "dual_encoder": bool, "use_features": bool, "d_f": int,
                      "qualities": list})
    train_raw = _pick("train", _table(raw, "train"),
                      {"epochs": int, "batch_size": int, "lr": float, "seed": int})

    qualities = tuple(head_raw.get("qualities", QUALITIES))
    bad = [q for q in qualities if q not in QUALITIES]
    if bad:
        raise ValidationError(f"[head] unknown qualities {bad}")
    head = HeadConfig(
        mode=head_raw.get("mode", "M3"),
        qualities=qualities,
        dual_encoder=head_raw.get("dual_encoder", True),
        use_features=head_raw.get("use_features", False),
        feature_dim=head_raw.get("d_f", DEFAULT_FEATURE_DIM),
    )
    train = TrainConfig(**{**{"seed": seed}, **train_raw})

    ev = sections["eval"]
    if "mode" in ev and ev["mode"] not in EVAL_MODES:
        raise ValidationError(f"[eval] mode must be one of {EVAL_MODES}")
    if jobs < 1:
        raise ValidationError("jobs must be >= 1")
    return RunConfig(
        path=path,
        config_hash=hashlib.sha256(raw_bytes).hexdigest(),
        seed=seed,
        jobs=jobs,
        data=sections["data"],
        encoder=EncoderSpec(**enc),
        head=head,
        train=train,
        eval=ev,
        metrics=sections["metrics"],
        chunk=sections["chunk"],
    )
