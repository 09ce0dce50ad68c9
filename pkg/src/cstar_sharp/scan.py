"""Bulk property scan over a (k, n) grid of random module vectors."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from typing import Optional

import numpy as np

from .algebra import DEFAULT_TOL, ToleranceConfig, loewner_leq, loewner_margin
from .ensembles import make_rng, random_module_vector
from .errors import NotInvertible
from .exact_constant import verify_thm22
from .modulus_search import SearchConfig, search_min_distance
from .module_space import ell1_side, ell2_side

STATUSES = ("ok", "skipped_singular", "tolerance_violation")
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class ScanConfig:
    k_list: tuple = (1, 2, 3, 4, 8)
    n_list: tuple = (1, 2, 3, 5, 16)
    trials: int = 10
    seed: int = 0
    tol: ToleranceConfig = DEFAULT_TOL
    output_path: str = "scan.json"
    format: str = "json"
    search: Optional[SearchConfig] = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "k_list", tuple(int(k) for k in self.k_list))
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if not self.k_list or not self.n_list:
            raise ValueError("k_list and n_list must be nonempty")
        if any(k < 1 for k in self.k_list) or any(n < 1 for n in self.n_list):
            raise ValueError("k and n values must be positive")
        if isinstance(self.trials, bool) or int(self.trials) < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.seed <= _U64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be 'json' or 'csv'")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass
class ScanRow:
    k: int
    n: int
    trial: int
    seed_used: int
    cx_norm: Optional[float] = None
    residual_thm22: Optional[float] = None
    residual_defs_match: Optional[float] = None
    ineq_margin: Optional[float] = None
    search_distance: Optional[float] = None
    bound_sqrt_cx_norm: Optional[float] = None
    status: str = "ok"


COLUMNS = [f.name for f in fields(ScanRow)]


def instance_seed(seed: int, k: int, n: int, trial: int) -> int:
    """64-bit seed of the stream for grid point ``(k, n)`` and ``trial``."""
    state = np.random.SeedSequence([seed, k, n, trial]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def scan_instance(k: int, n: int, trial: int, cfg: ScanConfig) -> ScanRow:
    seed_used = instance_seed(cfg.seed, k, n, trial)
    x = random_module_vector(make_rng(seed_used), n, k)
    row = ScanRow(k=k, n=n, trial=trial, seed_used=seed_used)
    tol = cfg.tol

    lhs, rhs = ell1_side(x, tol), ell2_side(x, tol)
    row.ineq_margin = loewner_margin(lhs, rhs, tol)
    violated = not loewner_leq(lhs, rhs, tol)

    try:
        report = verify_thm22(x, tol)
    except NotInvertible:
        row.status = "tolerance_violation" if violated else "skipped_singular"
        return row
    row.cx_norm = report.c_x_norm
    row.residual_thm22 = report.residual_thm22_i
    row.residual_defs_match = report.residual_defs_match
    row.bound_sqrt_cx_norm = report.upper_bound_sqrt_cx_norm
    violated = violated or report.status != "ok"

    if cfg.search is not None:
        scfg = cfg.search
        result = search_min_distance(x, replace(scfg, witness_seed=None), tol)
        row.search_distance = result.best_distance
        violated = violated or result.best_distance > report.upper_bound_sqrt_cx_norm + tol.eq_tol

    if violated:
        row.status = "tolerance_violation"
    return row


def run_scan(cfg: ScanConfig) -> list:
    """All rows, sorted by ``(k, n, trial)`` regardless of ``cfg.workers``."""
    tasks = [
        (k, n, t)
        for k in sorted(set(cfg.k_list))
        for n in sorted(set(cfg.n_list))
        for t in range(cfg.trials)
    ]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(lambda task: scan_instance(*task, cfg), tasks))
    else:
        rows = [scan_instance(*task, cfg) for task in tasks]
    rows.sort(key=lambda r: (r.k, r.n, r.trial))
    return rows


def summarize(rows) -> dict:
    counts = {s: 0 for s in STATUSES}
    for r in rows:
        counts[r.status] += 1

    def extreme(fn, attr):
        vals = [getattr(r, attr) for r in rows if getattr(r, attr) is not None]
        return fn(vals) if vals else None

    return {
        "rows": len(rows),
        "counts": counts,
        "max_residual_thm22": extreme(max, "residual_thm22"),
        "max_residual_defs_match": extreme(max, "residual_defs_match"),
        "min_ineq_margin": extreme(min, "ineq_margin"),
    }


def config_to_dict(cfg: ScanConfig) -> dict:
    d = {
        "k_list": list(cfg.k_list),
        "n_list": list(cfg.n_list),
        "trials": cfg.trials,
        "seed": cfg.seed,
        "tol": asdict(cfg.tol),
        "format": cfg.format,
    }
    if cfg.search is not None:
        s = asdict(cfg.search)
        s.pop("workers")
        d["search"] = s
    return d


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(rows, cfg: ScanConfig) -> str:
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in rows:
            writer.writerow([_cell(getattr(r, c)) for c in COLUMNS])
        return buf.getvalue()
    doc = {
        "config": config_to_dict(cfg),
        "rows": [asdict(r) for r in rows],
        "summary": summarize(rows),
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def read_rows(path: str, fmt: str) -> list:
    """Load rows back from a scan file (used by tests and scripts)."""
    with open(path, newline="") as fh:
        if fmt == "json":
            return [ScanRow(**r) for r in json.load(fh)["rows"]]
        out = []
        for rec in csv.DictReader(fh):
            kw = {}
            for name in COLUMNS:
                raw = rec[name]
                if name in ("k", "n", "trial", "seed_used"):
                    kw[name] = int(raw)
                elif name == "status":
                    kw[name] = raw
                else:
                    kw[name] = float(raw) if raw else None
            out.append(ScanRow(**kw))
        return out
