"""Model definition files and factual dataset CSVs.

Model files are JSON documents with an explicit schema version and four
sections: units, noises, variables and functions.  Unknown keys are
rejected with their location so typos fail loudly instead of silently
skewing a model.  Probabilities may be written as numbers or as exact
"p/q" strings.  Datasets are CSV files with header ``unit,t,y``; an
empty outcome field marks the unobserved arm of that row.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path
from typing import Optional, Sequence

from .errors import (
    BadHeaderError,
    ModelSyntaxError,
    OutOfDomainError,
    TypeMismatchError,
    UnknownKeyError,
)
from .model import DiscoModel, build_model, to_spec

SCHEMA_VERSION = 1

_TOP_KEYS = {"schema", "units", "noises", "variables", "functions"}
_UNIT_KEYS = {"names", "weights"}
_NOISE_KEYS = {"name", "domain", "pmf"}
_VARIABLE_KEYS = {"name", "domain"}
_FUNCTION_KEYS = {"target", "parents", "noise", "table"}
_ROW_KEYS = {"unit", "parents", "noise", "value"}


@dataclass(frozen=True)
class ModelSpecDocument:
    """A parsed, key-checked model description ready for building."""

    data: dict

    def build(self) -> DiscoModel:
        return build_model(self.data)


@dataclass(frozen=True)
class DatasetDocument:
    """Factual rows (unit, t, y); y is None for a missing arm."""

    rows: tuple[tuple, ...]

    def observed(self) -> list[tuple]:
        return [row for row in self.rows if row[2] is not None]

    def arm_means(self) -> dict:
        from fractions import Fraction

        arms: dict = {}
        for _, t, y in self.observed():
            arms.setdefault(t, []).append(y)
        return {
            t: Fraction(sum(values), len(values))
            for t, values in sorted(arms.items(), key=lambda kv: repr(kv[0]))
        }


def _locate(text: str, key: str) -> str:
    """Best-effort line/column of a key's first occurrence."""
    needle = f'"{key}"'
    index = text.find(needle)
    if index < 0:
        return "unknown location"
    line = text.count("\n", 0, index) + 1
    column = index - (text.rfind("\n", 0, index) + 1) + 1
    return f"line {line}, column {column}"


def _check_keys(obj, allowed: set, where: str, text: str) -> None:
    if not isinstance(obj, dict):
        raise TypeMismatchError(f"{where} must be an object, got "
                                f"{type(obj).__name__}")
    for key in obj:
        if key not in allowed:
            raise UnknownKeyError(
                f"unknown key {key!r} in {where} ({_locate(text, key)})")


def parse_model_file(text: str) -> ModelSpecDocument:
    """Parse model JSON, rejecting unknown keys and bad schema versions."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc
    _check_keys(data, _TOP_KEYS, "the document root", text)
    if data.get("schema") != SCHEMA_VERSION:
        raise TypeMismatchError(
            f"model files must declare \"schema\": {SCHEMA_VERSION}")
    units = data.get("units")
    if isinstance(units, dict):
        _check_keys(units, _UNIT_KEYS, "units", text)
    for section, keys in (("noises", _NOISE_KEYS),
                          ("variables", _VARIABLE_KEYS),
                          ("functions", _FUNCTION_KEYS)):
        entries = data.get(section, [])
        if not isinstance(entries, list):
            raise TypeMismatchError(f"{section} must be a list")
        for entry in entries:
            _check_keys(entry, keys, f"a {section} entry", text)
            if section == "functions":
                for row in entry.get("table", []):
                    _check_keys(row, _ROW_KEYS, "a table row", text)
    payload = {k: v for k, v in data.items() if k != "schema"}
    return ModelSpecDocument(payload)


def load_model(path: str) -> DiscoModel:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_model_file(handle.read()).build()


def format_model(model: DiscoModel) -> str:
    """Serialize a model to file text; parsing it back rebuilds the model."""
    document = {"schema": SCHEMA_VERSION}
    document.update(to_spec(model))
    return json.dumps(document, indent=2) + "\n"


def _parse_cell(raw: str):
    raw = raw.strip()
    if raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        try:
            return float(raw)
        except ValueError:
            return raw


def parse_dataset_csv(text: str, t_domain: Sequence = (0, 1),
                      y_domain: Optional[Sequence] = (0, 1)) -> DatasetDocument:
    """Parse factual rows, typing cells and flagging missing arms."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise BadHeaderError("dataset is empty; expected header unit,t,y")
    if [h.strip() for h in header] != ["unit", "t", "y"]:
        raise BadHeaderError(
            f"expected header unit,t,y, got {','.join(header)!r}")
    rows: list[tuple] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise TypeMismatchError(
                f"line {lineno}: expected 3 fields, got {len(row)}")
        unit = _parse_cell(row[0])
        t = _parse_cell(row[1])
        y = _parse_cell(row[2])
        if t is None or (t_domain is not None and t not in tuple(t_domain)):
            raise OutOfDomainError(
                f"line {lineno}: treatment {row[1]!r} is outside "
                f"{tuple(t_domain)!r}")
        if y is not None and y_domain is not None \
                and y not in tuple(y_domain):
            raise OutOfDomainError(
                f"line {lineno}: outcome {row[2]!r} is outside "
                f"{tuple(y_domain)!r}")
        rows.append((unit, t, y))
    units = [row[0] for row in rows]
    if len(set(units)) != len(units):
        raise TypeMismatchError("unit ids repeat across rows")
    return DatasetDocument(tuple(rows))


def load_dataset(path: str, t_domain: Sequence = (0, 1),
                 y_domain: Optional[Sequence] = (0, 1)) -> DatasetDocument:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_dataset_csv(handle.read(), t_domain, y_domain)


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture (models and datasets shipped for demos)."""
    return Path(str(files("discoscm").joinpath("fixtures", name)))
