"""Bundled example profiles.

Each ``.profile`` file may carry metadata comments such as ``# seats: 3``
or ``# reduction: simple`` ahead of the profile proper.
"""

from __future__ import annotations

from importlib import resources

from ..profile import Profile, parse_profile


def names() -> list:
    return sorted(
        p.name[: -len(".profile")]
        for p in resources.files(__name__).iterdir()
        if p.name.endswith(".profile")
    )


def _file(name: str):
    f = resources.files(__name__).joinpath(f"{name}.profile")
    if not f.is_file():
        raise KeyError(f"no fixture {name!r}; have {', '.join(names())}")
    return f


def text(name: str) -> str:
    return _file(name).read_text()


def metadata(name: str) -> dict:
    meta = {}
    for line in text(name).splitlines():
        line = line.strip()
        if line.startswith("#") and ":" in line:
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
    return meta


def load(name: str) -> Profile:
    return parse_profile(text(name))


def seats(name: str) -> int:
    return int(metadata(name)["seats"])


def path(name: str):
    """Filesystem path of a fixture (for CLI examples)."""
    return _file(name)
