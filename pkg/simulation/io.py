"""Dump and load ObservationSet files.

CSV layout: a `# config: {json}` line, a header `t,X1..Xn,XD1..XDn,D1..Dn` with
`dB1..dBn` appended when the Brownian increments were kept, then one row per
time point with 17 significant digits. Row j >= 1 carries the increment over
(t_{j-1}, t_j]; the dB cells of row 0 are empty. NPZ keeps the same arrays and
the config JSON.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from .models import ObservationSet, SimulationConfig

logger = logging.getLogger(__name__)

CONFIG_PREFIX = "# config: "

_OPTIONAL_ARRAYS = ("brownian", "drift_values")


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def _site_columns(prefix: str, n: int) -> List[str]:
    return [f"{prefix}{i}" for i in range(1, n + 1)]


def dump_observations(obs: ObservationSet, path: Union[str, Path]) -> Path:
    """Write `obs` as CSV or NPZ depending on the suffix of `path`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    config_json = obs.config.model_dump_json()
    if path.suffix == ".npz":
        arrays = dict(
            times=obs.times,
            values=obs.values,
            laplacian_values=obs.laplacian_values,
            config=np.array(config_json),
        )
        for name in _OPTIONAL_ARRAYS:
            if getattr(obs, name) is not None:
                arrays[name] = getattr(obs, name)
        with open(path, "wb") as fh:
            np.savez(fh, **arrays)
    else:
        n = obs.site_count
        header = ["t"] + _site_columns("X", n) + _site_columns("XD", n)
        if obs.has_drift:
            header += _site_columns("D", n)
        if obs.has_brownian:
            header += _site_columns("dB", n)
        with open(path, "w", newline="") as fh:
            fh.write(CONFIG_PREFIX + config_json + "\n")
            writer = csv.writer(fh)
            writer.writerow(header)
            for j, t in enumerate(obs.times):
                row = [t, *obs.values[:, j], *obs.laplacian_values[:, j]]
                if obs.has_drift:
                    row.extend(obs.drift_values[:, j])
                cells = [format_float(x) for x in row]
                if obs.has_brownian:
                    cells.extend([""] * n if j == 0 else [format_float(x) for x in obs.brownian[:, j - 1]])
                writer.writerow(cells)
    logger.info("Wrote observations (n=%d, N_t=%d) to %s", obs.site_count, obs.time_steps, path)
    return path


def _site_block(rows: List[List[str]], columns: Dict[str, int], prefix: str, n: int, path: Path) -> np.ndarray:
    names = _site_columns(prefix, n)
    missing = [name for name in names if name not in columns]
    if missing:
        raise ValueError(f"{path} lacks column(s) {', '.join(missing)}")
    index = [columns[name] for name in names]
    return np.array([[float(row[c]) for c in index] for row in rows]).T.copy()


def load_observations(path: Union[str, Path]) -> ObservationSet:
    """Read a file written by `dump_observations`."""
    path = Path(path)
    if path.suffix == ".npz":
        with np.load(path) as data:
            config = SimulationConfig.model_validate_json(str(data["config"]))
            optional = {name: data[name].copy() for name in _OPTIONAL_ARRAYS if name in data.files}
            return ObservationSet(
                times=data["times"].copy(),
                values=data["values"].copy(),
                laplacian_values=data["laplacian_values"].copy(),
                config=config,
                **optional,
            )

    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith(CONFIG_PREFIX):
            raise ValueError(f"{path} has no config header")
        config = SimulationConfig.model_validate(json.loads(first[len(CONFIG_PREFIX):]))
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path} has no observation rows")
    n = config.grid.n
    columns = {name: idx for idx, name in enumerate(header)}
    if "t" not in columns:
        raise ValueError(f"{path} lacks the time column t")
    return ObservationSet(
        times=np.array([float(row[columns["t"]]) for row in rows]),
        values=_site_block(rows, columns, "X", n, path),
        laplacian_values=_site_block(rows, columns, "XD", n, path),
        config=config,
        brownian=_site_block(rows[1:], columns, "dB", n, path) if "dB1" in columns else None,
        drift_values=_site_block(rows, columns, "D", n, path) if "D1" in columns else None,
    )
