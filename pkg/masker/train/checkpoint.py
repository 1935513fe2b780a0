import dataclasses
import json
import logging
import os
from typing import Any, Dict, Optional, Tuple

import torch
from safetensors import safe_open
from safetensors.torch import load_file, save_file

from masker.encoder.encoder import EncoderConfig
from masker.model import DomainMasker, ModelConfig
from masker.train.config import TrainConfig

FORMAT_VERSION = "2"
# One metadata key; safetensors writes several keys in no fixed order.
HEADER_KEY = "header"


class CheckpointError(Exception):
    pass


def save_checkpoint(model: DomainMasker, config: TrainConfig, path: str):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    tensors = {
        name: tensor.detach().cpu().contiguous().clone()
        for name, tensor in model.state_dict().items()
    }
    header = {
        "format_version": FORMAT_VERSION,
        "model_config": model.config.to_dict(encode_json=True),
        "train_config": config.to_dict(encode_json=True),
    }
    save_file(tensors, path, metadata={HEADER_KEY: json.dumps(header, sort_keys=True)})
    logging.debug("Saved checkpoint with %s tensors to %s", len(tensors), path)


def read_header(path: str) -> Dict[str, Any]:
    if not os.path.isfile(path):
        raise CheckpointError(f"Checkpoint not found: {path}")
    try:
        with safe_open(path, framework="pt") as file:
            metadata = file.metadata()
    except Exception as exc:
        raise CheckpointError(f"Corrupt checkpoint {path}: {exc}") from exc
    if metadata is None or HEADER_KEY not in metadata:
        raise CheckpointError(f"Checkpoint {path} has no config header")
    try:
        header = json.loads(metadata[HEADER_KEY])
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"Invalid config header in {path}: {exc}") from exc
    if not isinstance(header, dict):
        raise CheckpointError(f"Invalid config header in {path}: expected an object")
    return header


def stored_encoder_shape(tensors: Dict[str, torch.Tensor]) -> Dict[str, int]:
    """Encoder config fields as implied by the stored parameter shapes."""
    token_embedding = tensors["encoder.token_embedding.weight"]
    layer_indices = {
        int(name.split(".")[3])
        for name in tensors
        if name.startswith("encoder.layers.layers.")
    }
    return {
        "vocab_size": token_embedding.shape[0],
        "hidden_dim": token_embedding.shape[1],
        "max_len": tensors["encoder.position_embedding.weight"].shape[0],
        "ff_dim": tensors["encoder.layers.layers.0.linear1.weight"].shape[0],
        "layers": len(layer_indices),
    }


def check_encoder_config(
    config: EncoderConfig, expected: Dict[str, object], source: str
):
    for name, value in expected.items():
        actual = getattr(config, name)
        if actual != value:
            raise CheckpointError(
                f"Encoder config mismatch in field {name}: checkpoint has {actual}, {source} has {value}"
            )


def load_checkpoint(
    path: str, expected: Optional[EncoderConfig] = None
) -> Tuple[DomainMasker, TrainConfig]:
    """Rebuilds the model stored at `path`. With `expected`, every encoder
    config field must match it."""
    header = read_header(path)
    version = header.get("format_version")
    if version != FORMAT_VERSION:
        raise CheckpointError(
            f"Unsupported checkpoint format version {version}, expected {FORMAT_VERSION}"
        )

    try:
        model_config = ModelConfig.from_dict(header["model_config"])
        train_config = TrainConfig.from_dict(header["train_config"])
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CheckpointError(f"Invalid config header in {path}: {exc}") from exc

    try:
        tensors = load_file(path)
    except Exception as exc:
        raise CheckpointError(f"Corrupt checkpoint {path}: {exc}") from exc

    try:
        check_encoder_config(model_config.encoder, stored_encoder_shape(tensors), "stored parameters")
    except KeyError as exc:
        raise CheckpointError(f"Checkpoint {path} is missing parameter {exc}") from exc
    if expected is not None:
        check_encoder_config(
            model_config.encoder,
            {field.name: getattr(expected, field.name) for field in dataclasses.fields(expected)},
            "the expected config",
        )

    model = DomainMasker(model_config)
    try:
        model.load_state_dict(tensors, strict=True)
    except RuntimeError as exc:
        raise CheckpointError(f"Parameters in {path} do not match the model: {exc}") from exc
    model.eval()
    logging.debug("Loaded checkpoint from %s", path)
    return model, train_config
