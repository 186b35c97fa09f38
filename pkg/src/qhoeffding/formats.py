"""File formats: state/channel/classical-pair JSON and CSV tables with a metadata header."""

import csv
import io
import json
import math
import os
import tempfile
from typing import Iterable, Sequence

import numpy as np

from .channels import KrausChannel
from .errors import ValidationError
from .functionals import StatePair
from .nussbaum_szkola import ClassicalPair

FLOAT_FORMAT = ".10g"


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"dim": a.shape[0], "re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    """Parse ``{"dim": d, "re": [[...]], "im": [[...]]}``; ``im`` defaults to zero."""
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix JSON: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValidationError(f"matrix JSON declares dim {dim} but has shapes {re.shape}, {im.shape}")
    return re + 1j * im


def _read_json(path) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def state_pair_to_json(pair: StatePair) -> dict:
    return {"rho": matrix_to_json(pair.rho), "sigma": matrix_to_json(pair.sigma)}


def state_pair_from_json(obj) -> StatePair:
    if not isinstance(obj, dict) or "rho" not in obj or "sigma" not in obj:
        raise ValidationError('states file needs top-level "rho" and "sigma" entries')
    return StatePair(matrix_from_json(obj["rho"]), matrix_from_json(obj["sigma"]))


def load_state_pair(path) -> StatePair:
    return state_pair_from_json(_read_json(path))


def load_classical_pair(path) -> ClassicalPair:
    return ClassicalPair.from_json(_read_json(path))


def load_channels(path) -> list:
    """One channel object, a list of them, or ``{"channels": [...]}``."""
    obj = _read_json(path)
    if isinstance(obj, dict) and "channels" in obj:
        obj = obj["channels"]
    if isinstance(obj, dict):
        obj = [obj]
    if not isinstance(obj, list):
        raise ValidationError(f"{path}: expected a channel object or a list of them")
    return [KrausChannel.from_json(item) for item in obj]


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x + 0.0, FLOAT_FORMAT)
    return str(x)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence], metadata: dict = None) -> str:
    """CSV text: ``# key=value`` header lines, a column header, then the rows."""
    buf = io.StringIO()
    for key, value in (metadata or {}).items():
        buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(x) for x in row])
    return buf.getvalue()


def read_csv(text: str) -> tuple:
    """Parse :func:`render_csv` output into ``(metadata, columns, rows)``; values stay strings."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        elif line:
            body.append(line)
    parsed = list(csv.reader(body))
    return meta, parsed[0], parsed[1:]


def atomic_write(path, text: str) -> None:
    """Write via a temporary file in the target directory and rename into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def to_jsonable(x):
    if isinstance(x, dict):
        return {k: to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x
