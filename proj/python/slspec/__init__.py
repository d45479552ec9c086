"""Asymptotic eigenvalues and eigenfunctions of -y'' + u'y on [0, pi], with a numerical oracle."""

from ._core import *  # noqa: F401,F403
from ._core import Command, EigenKind, Method, OutputFormat, RunConfig, run

__version__ = "0.1.0"


def command(name, potential_path, **options):
    """Build a RunConfig from keyword options and return the command output text.

    Enum-valued options (method, kind, format) accept their names as strings.
    """
    cfg = RunConfig()
    cfg.command = getattr(Command, name)
    cfg.potential_path = str(potential_path)
    enums = {"method": Method, "kind": EigenKind, "format": OutputFormat}
    for key, value in options.items():
        if key in enums and isinstance(value, str):
            value = getattr(enums[key], value)
        if not hasattr(cfg, key):
            raise TypeError(f"unknown option {key!r}")
        setattr(cfg, key, value)
    return run(cfg)
