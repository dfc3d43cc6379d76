"""On-disk cache of bar complexes and computed homology groups.

One JSON file per key.  A key is the sha256 of (artifact kind, group table
hash, parameters); each file carries the tool version and is ignored when
the version differs or the file does not parse.  Writes go to a temporary
file in the same directory followed by ``os.replace``.
"""

from __future__ import annotations

import contextlib
import hashlib
import json
import logging
import os
import tempfile
from contextvars import ContextVar
from pathlib import Path
from typing import Any, Iterator

from . import __version__

log = logging.getLogger(__name__)

ENV_VAR = "SCHURCONE_CACHE_DIR"
FORMAT = 1


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "schurcone"


class DiskCache:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.hits = 0
        self.misses = 0

    def _path(self, kind: str, parts: tuple) -> Path:
        blob = json.dumps([kind, *parts], sort_keys=True, default=str)
        h = hashlib.sha256(blob.encode()).hexdigest()
        return self.root / kind / f"{h[:40]}.json"

    def get(self, kind: str, *parts) -> Any | None:
        p = self._path(kind, parts)
        try:
            with open(p, encoding="utf-8") as fh:
                data = json.load(fh)
        except FileNotFoundError:
            self.misses += 1
            return None
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable cache entry %s (%s)", p, exc)
            self.misses += 1
            return None
        if (not isinstance(data, dict) or data.get("version") != __version__
                or data.get("format") != FORMAT or data.get("key") != [kind, *map(_plain, parts)]):
            self.misses += 1
            return None
        self.hits += 1
        return data.get("payload")

    def put(self, kind: str, *parts, payload: Any) -> None:
        p = self._path(kind, parts)
        p.parent.mkdir(parents=True, exist_ok=True)
        record = {"version": __version__, "format": FORMAT, "key": [kind, *map(_plain, parts)], "payload": payload}
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(record, fh, separators=(",", ":"))
            os.replace(tmp, p)
        except BaseException:
            with contextlib.suppress(OSError):
                os.unlink(tmp)
            raise


def _plain(x):
    # keys round-trip through JSON, so compare them in JSON form
    return json.loads(json.dumps(x, default=str))


_ACTIVE: ContextVar[DiskCache | None] = ContextVar("schurcone_cache", default=None)


def active() -> DiskCache | None:
    return _ACTIVE.get()


@contextlib.contextmanager
def using(cache: DiskCache | None) -> Iterator[DiskCache | None]:
    token = _ACTIVE.set(cache)
    try:
        yield cache
    finally:
        _ACTIVE.reset(token)


# -- typed helpers ----------------------------------------------------------


def load_bar(g, n_max: int):
    """Boundary matrices of a cached bar complex, or ``None``."""
    c = active()
    if c is None:
        return None
    payload = c.get("bar", g.key, n_max)
    if payload is None:
        return None
    from .intmat import SparseIntMatrix

    try:
        ranks = payload["ranks"]
        mats = [SparseIntMatrix.zeros(0, ranks[0])]
        for k, triples in enumerate(payload["boundary"], start=1):
            cols: dict[int, dict[int, int]] = {}
            for i, j, v in triples:
                cols.setdefault(j, {})[i] = v
            mats.append(SparseIntMatrix(ranks[k - 1], ranks[k], cols))
        return mats
    except (KeyError, TypeError, ValueError) as exc:
        log.warning("ignoring malformed bar complex cache entry (%s)", exc)
        return None


def store_bar(g, n_max: int, cx) -> None:
    c = active()
    if c is None:
        return
    boundary = []
    for k in range(1, cx.top_degree + 1):
        boundary.append([[i, j, v] for j, col in sorted(cx.boundary[k].column_dicts().items())
                         for i, v in sorted(col.items())])
    c.put("bar", g.key, n_max, payload={"ranks": list(cx.ranks), "boundary": boundary,
                                        "group": g.to_json()})


def cached_value(kind: str, parts: tuple, compute):
    """Look up a JSON-serialisable result, computing and storing it on a miss."""
    c = active()
    if c is None:
        return compute()
    hit = c.get(kind, *parts)
    if hit is not None:
        return hit
    value = compute()
    c.put(kind, *parts, payload=value)
    return value
