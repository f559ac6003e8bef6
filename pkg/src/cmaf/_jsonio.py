"""JSON loading/dumping and small schema helpers used by the document parsers."""

from __future__ import annotations

import json
from typing import Any

from .errors import DocumentSyntaxError, SchemaError


def loads(text: str | bytes, source: str | None = None) -> Any:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"invalid UTF-8: {exc.reason}", 1, exc.start + 1, source) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno, source) from None


def dumps(obj: Any) -> str:
    """Canonical text form: 2-space indent, UTF-8 kept literal, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


_TYPE_NAMES = {str: "string", int: "integer", list: "array", dict: "object", bool: "boolean"}


def field(obj: dict, key: str, kind: type, path: str, *, required: bool = True, default: Any = None) -> Any:
    if key not in obj:
        if required:
            raise SchemaError(f"{path}.{key}", "required field missing")
        return default
    value = obj[key]
    # bool is an int subclass; never accept it where an integer is expected
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise SchemaError(f"{path}.{key}", f"expected {_TYPE_NAMES.get(kind, kind.__name__)}")
    return value


def expect_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(path, "expected object")
    return value


def reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise SchemaError(f"{path}.{extra[0]}", "unknown field")
