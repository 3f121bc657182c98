"""Checkpoint archives.

A checkpoint is a zip archive (stored, fixed timestamps) with two members:

``manifest.json``
    head config, encoder spec and seed, model seed, run metadata, and for every
    array its name, shape, and element offset into ``weights.bin``.
``weights.bin``
    all arrays back to back as little-endian float64, row-major.

An S1 ensemble stores one entry per quality under ``members``.
"""
from __future__ import annotations

import io
import json
import zipfile

import numpy as np

from ..encoders import EncoderSpec, make_encoder
from ..errors import ValidationError
from .ensemble import S1Ensemble
from .heads import Featurizer, HeadConfig, QEModel

FORMAT = "simpleqe-checkpoint"
VERSION = 1
_EPOCH = (1980, 1, 1, 0, 0, 0)


def _model_arrays(model: QEModel) -> dict[str, np.ndarray]:
    arrays = {f"param.{k}": v for k, v in sorted(model.params.items())}
    arrays["feature.mean"] = model.feature_mean
    arrays["feature.scale"] = model.feature_scale
    return arrays


def checkpoint_bytes(model: QEModel | S1Ensemble, encoder_seed: int = 0, meta: dict | None = None) -> bytes:
    members = list(model.models.values()) if isinstance(model, S1Ensemble) else [model]
    blob = io.BytesIO()
    offset = 0
    entries = []
    for m in members:
        arrays = []
        for name, arr in _model_arrays(m).items():
            data = np.ascontiguousarray(arr, dtype="<f8")
            blob.write(data.tobytes(order="C"))
            arrays.append({"name": name, "shape": list(data.shape), "offset": offset})
            offset += data.size
        entries.append({"head": m.config.to_dict(), "seed": m.seed, "arrays": arrays})
    spec = members[0].encoder.spec
    manifest = {
        "format": FORMAT,
        "version": VERSION,
        "kind": "s1_ensemble" if isinstance(model, S1Ensemble) else "model",
        "encoder": {"name": spec.name, "dimension": spec.dimension,
                    "max_units": spec.max_units, "endpoint": spec.endpoint, "seed": encoder_seed},
        "members": entries,
        "meta": meta or {},
    }
    out = io.BytesIO()
    with zipfile.ZipFile(out, "w", zipfile.ZIP_STORED) as zf:
        for name, payload in (("manifest.json", json.dumps(manifest, indent=2, sort_keys=True).encode()),
                              ("weights.bin", blob.getvalue())):
            info = zipfile.ZipInfo(name, date_time=_EPOCH)
            info.external_attr = 0o644 << 16
            zf.writestr(info, payload)
    return out.getvalue()


def save_checkpoint(path, model, encoder_seed: int = 0, meta: dict | None = None) -> None:
    with open(path, "wb") as fh:
        fh.write(checkpoint_bytes(model, encoder_seed, meta))


def read_manifest(path) -> dict:
    with zipfile.ZipFile(path) as zf:
        return json.loads(zf.read("manifest.json"))


def load_checkpoint(path, featurizer: Featurizer | None = None, table=None):
    """Rebuild a QEModel or S1Ensemble; the encoder is re-created from its spec."""
    try:
        with zipfile.ZipFile(path) as zf:
            manifest = json.loads(zf.read("manifest.json"))
            raw = zf.read("weights.bin")
    except (zipfile.BadZipFile, KeyError, json.JSONDecodeError) as exc:
        raise ValidationError(f"{path} is not a checkpoint archive: {exc}") from None
    if manifest.get("format") != FORMAT or manifest.get("version") != VERSION:
        raise ValidationError(f"{path}: unsupported checkpoint format")
    flat = np.frombuffer(raw, dtype="<f8")
    enc = dict(manifest["encoder"])
    encoder_seed = enc.pop("seed", 0)
    encoder = make_encoder(EncoderSpec(**enc), seed=encoder_seed, table=table)
    models = []
    for entry in manifest["members"]:
        arrays = {}
        for a in entry["arrays"]:
            size = int(np.prod(a["shape"], dtype=np.int64))
            arrays[a["name"]] = flat[a["offset"]:a["offset"] + size].reshape(a["shape"]).copy()
        head = HeadConfig(**{**entry["head"], "qualities": tuple(entry["head"]["qualities"])})
        params = {k[len("param."):]: v for k, v in arrays.items() if k.startswith("param.")}
        models.append(QEModel(head, encoder, params, arrays["feature.mean"], arrays["feature.scale"],
                              featurizer, entry["seed"]))
    if manifest["kind"] == "s1_ensemble":
        return S1Ensemble({m.qualities[0]: m for m in models})
    return models[0]
