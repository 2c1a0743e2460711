"""On-disk cache for large computed polynomials.

Every entry is a polynomial text file plus a ``.key`` sidecar holding the
digest it was computed from.  Writes go through a temporary file and
``os.replace`` so concurrent writers never leave a torn file behind.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

from xraypent.polycore import MultiPoly, format_poly, parse_poly

ENV_VAR = "XRAYPENT_CACHE"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "xraypent"


def resolve_cache_dir(cache: str | os.PathLike | None) -> Path:
    return Path(cache) if cache is not None else default_cache_dir()


def digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\0")
    return h.hexdigest()


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def load(cache_dir: Path, name: str, key: str) -> MultiPoly | None:
    poly_path = cache_dir / name
    key_path = cache_dir / (name + ".key")
    try:
        stored = key_path.read_text(encoding="ascii").strip()
        if stored != key:
            return None
        return parse_poly(poly_path.read_text(encoding="ascii"))
    except (FileNotFoundError, ValueError):
        return None


def store(cache_dir: Path, name: str, key: str, poly: MultiPoly) -> None:
    # Poly first: a reader that sees the new key will also see the new poly.
    atomic_write_text(cache_dir / name, format_poly(poly) + "\n")
    atomic_write_text(cache_dir / (name + ".key"), key + "\n")
