"""Seeded experiment grids over p/q ratios and embedding dimensions."""
from __future__ import annotations

import csv
import io as _io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from .errors import BadParams
from .generators import MetaTemplate, parse_template, sbm_meta, template_from_dict
from .metagraph import graph_eigen
from .metrics import accuracy, pair_indices, symdiff_volume
from .pipeline import spectral_cluster

SCHEMA = 1
METRICS = ("accuracy", "rand", "ari", "nmi", "symdiff_volume")
HEADER = ("kind", "ratio", "trial", "seed", "k", "l") + METRICS


@dataclass(frozen=True)
class ExperimentConfig:
    template: dict
    n_per_cluster: int
    p: float
    ratios: tuple
    l_values: tuple
    trials: int = 10
    seed: int = 0
    restarts: int = 10
    workers: int | None = None
    out: str | None = None
    schema: int = field(default=SCHEMA)

    def __post_init__(self):
        if self.schema != SCHEMA:
            raise BadParams(f"unsupported config schema {self.schema!r}; expected {SCHEMA}")
        t = self.meta_template()
        object.__setattr__(self, "ratios", tuple(float(r) for r in self.ratios))
        object.__setattr__(self, "l_values", tuple(int(l) for l in self.l_values))
        if self.trials < 1:
            raise BadParams("trials must be >= 1")
        if not self.ratios or any(r < 1 for r in self.ratios):
            raise BadParams("ratios must be a non-empty list of values >= 1")
        if not self.l_values or any(not 1 <= l <= t.k for l in self.l_values):
            raise BadParams(f"every l must lie in [1, k={t.k}]")
        if not 0 < self.p <= 1:
            raise BadParams("p must lie in (0, 1]")
        if self.restarts < 1:
            raise BadParams("restarts must be >= 1")
        if self.workers is not None and self.workers < 1:
            raise BadParams("workers must be >= 1")

    def meta_template(self) -> MetaTemplate:
        if isinstance(self.template, str):
            return parse_template(self.template)
        return template_from_dict(self.template)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        if "schema" not in d:
            raise BadParams("config needs a 'schema' field")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise BadParams(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise BadParams(str(exc)) from None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ratios"] = list(self.ratios)
        d["l_values"] = list(self.l_values)
        return d


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BadParams(f"{path}:{exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise BadParams(f"{path}: config must be a JSON object")
    return ExperimentConfig.from_dict(data)


def trial_seed(master: int, trial: int) -> int:
    """Seed for trial ``trial``; depends only on ``(master, trial)``."""
    ss = np.random.SeedSequence(master, spawn_key=(trial,))
    return int(ss.generate_state(1, np.uint32)[0])


def run_trial(config: ExperimentConfig, ratio: float, trial: int) -> list:
    """Rows (as dicts) for every ``l`` on one generated instance."""
    template = config.meta_template()
    seed = trial_seed(config.seed, trial)
    inst = sbm_meta(template, config.n_per_cluster, config.p, config.p / ratio, seed=seed)
    G, truth = inst.graph, inst.truth
    eigen = graph_eigen(G, max(config.l_values), seed=seed)
    rows = []
    for l in config.l_values:
        out = spectral_cluster(G, template.k, l, seed=seed, restarts=config.restarts, eigen=eigen)
        rand, ari, nmi = pair_indices(out, truth)
        rows.append({"kind": "trial", "ratio": ratio, "trial": trial, "seed": seed,
                     "k": template.k, "l": l, "accuracy": accuracy(out, truth),
                     "rand": rand, "ari": ari, "nmi": nmi,
                     "symdiff_volume": symdiff_volume(out, truth, G)})
    return rows


def _task(args):
    return run_trial(*args)


def run_sweep(config: ExperimentConfig, workers: int | None = None) -> list:
    """All trial rows ordered by (ratio, l, trial), then one mean row per (ratio, l)."""
    tasks = [(config, r, t) for r in config.ratios for t in range(config.trials)]
    workers = workers or config.workers or os.cpu_count() or 1
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    rows = [row for batch in results for row in batch]
    order = {r: i for i, r in enumerate(config.ratios)}
    lorder = {l: i for i, l in enumerate(config.l_values)}
    rows.sort(key=lambda r: (order[r["ratio"]], lorder[r["l"]], r["trial"]))
    summary = []
    for ratio in config.ratios:
        for l in config.l_values:
            group = [r for r in rows if r["ratio"] == ratio and r["l"] == l]
            mean = {m: float(np.mean([r[m] for r in group])) for m in METRICS}
            summary.append({"kind": "summary", "ratio": ratio, "trial": "", "seed": "",
                            "k": group[0]["k"], "l": l, **mean})
    return rows + summary


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows, timestamp: str | None = None) -> str:
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    buf = _io.StringIO()
    buf.write(f"# generated {timestamp}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow([_fmt(r[h]) for h in HEADER])
    return buf.getvalue()


def read_results(path) -> list:
    """Parse a results CSV back into dicts (timestamp line skipped)."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [l for l in fh if not l.startswith("#")]
    return list(csv.DictReader(lines))
