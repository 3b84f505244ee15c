"""Finite certificates for reflections of finite categories and presheaves.

Reports are plain dicts following ``schema/report.schema.json``.
"""

import json as _json

from . import _core

SCHEMA_VERSION = _core.SCHEMA_VERSION
ParseError = _core.ParseError
fixture_names = _core.fixture_names
fixture_text = _core.fixture_text

_DEFAULTS = {
    "document": "",
    "names": {},
    "presheaves": [],
    "maps": [],
    "bound": 2,
    "max_vertices": 4,
    "max_edges": 8,
    "max_elements": 3,
    "budget": 0,
    "jobs": 1,
    "fast": False,
    "graphs": False,
}


def run(*path, fixture=None, **options):
    """Run a subcommand, e.g. ``run("check", "sle", fixture="m3")``."""
    unknown = set(options) - set(_DEFAULTS)
    if unknown:
        raise TypeError(f"unknown options: {sorted(unknown)}")
    inv = dict(_DEFAULTS, **options, path=list(path))
    if fixture is not None:
        inv["fixture"] = fixture
    return _json.loads(_core.run(_json.dumps(inv)))


def check(prop, fixture=None, **options):
    return run("check", prop, fixture=fixture, **options)


def search(kind, **options):
    return run("search", kind, **options)


def replay(report):
    return _json.loads(_core.replay(_json.dumps(report)))


def parse(text):
    return _json.loads(_core.parse(text))


def report_digest(report):
    return _core.report_digest(_json.dumps(report))


__all__ = [
    "SCHEMA_VERSION",
    "ParseError",
    "check",
    "fixture_names",
    "fixture_text",
    "parse",
    "replay",
    "report_digest",
    "run",
    "search",
]
