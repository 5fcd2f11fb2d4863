"""
Output directory of one experiment run: CSV tables, SVG plots and the manifest.

Data files never contain wall-clock information, so identical configurations give identical
CSV files. The manifest lists every file written through the writer.
"""

from __future__ import annotations

import csv
import json
import logging
import platform
from importlib import metadata
from pathlib import Path
from typing import Any, Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
_VERSIONED_PACKAGES = ("numpy", "scipy", "matplotlib", "pydantic")

plt.rcParams["svg.hashsalt"] = "impact-twist"


def format_cell(value) -> str:
    """Shortest round-trip text of a CSV cell; None becomes an empty cell."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def package_versions() -> dict[str, str]:
    from .. import __version__

    versions = {"impact_twist": __version__, "python": platform.python_version()}
    for name in _VERSIONED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


class ArtifactWriter:
    """
    Writes the artifacts of one run into a directory and keeps track of them.

    :param directory: Output directory, created on demand
    :param formats: Enabled formats among "csv" and "svg"
    """

    def __init__(self, directory, formats: Sequence[str] = ("csv", "svg")):
        self.directory = Path(directory)
        self.formats = set(formats)
        self.files: list[str] = []

    def _path(self, name: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / name
        if name not in self.files:
            self.files.append(name)
        return path

    def write_csv(
        self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> None:
        if "csv" not in self.formats:
            return
        path = self._path(name)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_cell(value) for value in row])
        logger.info("Wrote %s", path)

    def write_svg(self, name: str, figure) -> None:
        """Save and close a matplotlib figure."""
        try:
            if "svg" not in self.formats:
                return
            path = self._path(name)
            figure.savefig(path, format="svg", metadata={"Date": None})
            logger.info("Wrote %s", path)
        finally:
            plt.close(figure)

    def write_manifest(self, data: dict) -> Path:
        path = self._path(MANIFEST_NAME)
        with open(path, "w", encoding="utf-8") as f:
            json.dump({**data, "files": list(self.files)}, f, indent=2)
        logger.info("Wrote %s", path)
        return path
