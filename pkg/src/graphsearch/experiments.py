"""Parameter sweeps: build a reduction, run Plank, and tabulate length against the lower bound."""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from itertools import product
from statistics import mean
from typing import Iterator, TextIO

from .decomposition import decompose
from .dynamics import loss_of, lower_bound, simulate
from .generators import gen_ba_dag, gen_ordered_er
from .graph import DirectedGraph, is_acyclic, largest_weak_component, load_edge_list
from .plank import search_digraph

CSV_VERSION = 1
COLUMNS = ("graph", "row", "seed", "n", "m", "s", "k", "fvs_size", "hubset_size",
           "strategy_length", "lower_bound", "ratio", "total_loss", "peak_searchers",
           "f_o", "bound", "bound_ok", "error")


@dataclass
class SweepConfig:
    """One sweep. Grids are crossed; every cell is run once per seed.

    ``graph`` is ``er``, ``ba`` or ``file``. Searcher counts come from
    ``s`` (absolute) or ``s_percent`` (of the node count before any
    reduction); hubset sizes likewise from ``k`` or ``k_percent``.
    """

    graph: str = "er"
    n: list[int] = field(default_factory=lambda: [1000])
    p_scale: float = 1.0  # ordered-ER edge probability is p_scale / n
    m_links: int = 2
    m0: int = 2
    path: str = ""
    reverse: bool = False
    lcc: bool = False
    s: list[int] = field(default_factory=list)
    s_percent: list[float] = field(default_factory=list)
    k: list[int] = field(default_factory=lambda: [0])
    k_percent: list[float] = field(default_factory=list)
    seeds: list[int] = field(default_factory=lambda: [0])
    workers: int = 1

    def __post_init__(self):
        if self.graph not in ("er", "ba", "file"):
            raise ValueError(f"unknown graph source {self.graph!r}")
        if self.graph == "file" and not self.path:
            raise ValueError("graph=file needs a path")
        if bool(self.s) == bool(self.s_percent):
            raise ValueError("give exactly one of s and s_percent")
        if self.k and self.k_percent and self.k != [0]:
            raise ValueError("give at most one of k and k_percent")
        if not self.seeds:
            raise ValueError("at least one seed is required")


def _convert(kind, raw: str):
    raw = raw.strip()
    text = str(kind)
    if text.startswith("list"):
        item = float if "float" in text else int
        return [item(x) for x in raw.split(",") if x.strip()]
    if kind in (bool, "bool"):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if kind in (int, "int"):
        return int(raw)
    if kind in (float, "float"):
        return float(raw)
    return raw


def parse_config(text: str) -> SweepConfig:
    """Read a flat ``key = value`` file; lists are comma separated, ``#`` starts a comment."""
    types = {f.name: f.type for f in fields(SweepConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, raw = (x.strip() for x in line.split("=", 1))
        if key not in types:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _convert(types[key], raw)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if "k_percent" in values and "k" not in values:
        values["k"] = []
    return SweepConfig(**values)


def load_config(path: str | os.PathLike) -> SweepConfig:
    with open(path) as fh:
        return parse_config(fh.read())


@dataclass
class SweepRow:
    graph: str
    row: str  # "cell" or "mean"
    seed: str
    n: float
    m: float
    s: int
    k: int
    fvs_size: float = 0
    hubset_size: float = 0
    strategy_length: float = 0
    lower_bound: float = 0
    ratio: float = math.nan
    total_loss: float = 0
    peak_searchers: float = 0
    f_o: float = 0.0
    bound: float = math.nan
    bound_ok: str = ""
    error: str = ""

    def as_csv(self) -> list[str]:
        out = []
        for name in COLUMNS:
            v = getattr(self, name)
            if isinstance(v, float):
                v = "" if math.isnan(v) else (str(int(v)) if v.is_integer() else f"{v:.6f}")
            out.append(str(v))
        return out


def _graph_for(cfg: SweepConfig, n: int, seed: int) -> tuple[str, DirectedGraph]:
    if cfg.graph == "er":
        g = gen_ordered_er(n, min(1.0, cfg.p_scale / n), seed)
        label = f"er(n={n},p={cfg.p_scale}/n)"
    elif cfg.graph == "ba":
        g = gen_ba_dag(n, cfg.m_links, cfg.m0, seed)
        label = f"ba(n={n},m={cfg.m_links},m0={cfg.m0})"
    else:
        g, _ = load_edge_list(cfg.path, reverse=cfg.reverse)
        label = os.path.basename(cfg.path) + (" reversed" if cfg.reverse else "")
    if cfg.lcc:
        g, _ = largest_weak_component(g)
        label += " lcc"
    return label, g


def _grid(values: list[int], percents: list[float], n: int, floor: int) -> list[int]:
    if values:
        return list(values)
    return [max(floor, round(pc * n / 100)) for pc in percents]


def _cells(cfg: SweepConfig) -> list[tuple]:
    sizes = cfg.n if cfg.graph != "file" else [0]
    cells = []
    for n, seed in product(sizes, cfg.seeds):
        cells.append((cfg, n, seed))
    return cells


def _run_graph(job) -> list[SweepRow]:
    """All (s, k) cells for one generated graph."""
    cfg, n, seed = job
    try:
        label, g = _graph_for(cfg, n, seed)
    except Exception as exc:  # noqa: BLE001 - recorded per cell
        return [SweepRow(f"{cfg.graph}(n={n})", "cell", str(seed), n, 0, s, k, error=_msg(exc))
                for s in _grid(cfg.s, cfg.s_percent, n or 1, 2) for k in _grid(cfg.k, cfg.k_percent, n or 1, 0)]
    rows = []
    acyclic = is_acyclic(g)
    for s in _grid(cfg.s, cfg.s_percent, g.n, 2):
        for k in _grid(cfg.k, cfg.k_percent, g.n, 0):
            rows.append(run_cell(g, s, k, seed=seed, label=label, acyclic=acyclic))
    return rows


def _msg(exc: BaseException) -> str:
    return f"{type(exc).__name__}: {exc}".replace("\n", " ")


def run_cell(g: DirectedGraph, s: int, k: int, seed: int | str = "", label: str = "",
             acyclic: bool | None = None) -> SweepRow:
    """One pipeline run: reduction, Plank, validation, loss, bound, sliding schedule.

    The lower bound uses the nodes the moving searchers must visit, i.e.
    the non-isolated part of the reduced DAG (plus nodes stranded next to
    a guard). On DAG inputs the row also carries the ``(2 + f_o)`` bound.
    """
    row = SweepRow(label, "cell", str(seed), g.n, g.m, s, k)
    try:
        res = search_digraph(g, s, k)
        plan = res.plan
        row.fvs_size = plan.fvs_size
        row.hubset_size = k
        t = res.strategy.length
        row.strategy_length = t
        pop = res.population
        lb = lower_bound(pop, s) if pop else 0
        row.lower_bound = lb
        row.ratio = t / lb if lb else math.nan
        dag_trace = simulate(plan.dag, res.dag_strategy)
        row.total_loss = loss_of(dag_trace, res.dag_strategy).total_loss
        row.peak_searchers = res.schedule.peak_concurrent
        row.f_o = decompose(plan.dag).overlap_factor
        if acyclic if acyclic is not None else is_acyclic(g):
            row.bound = 2 + row.f_o
            row.bound_ok = "yes" if not lb or row.ratio <= row.bound else "no"
    except Exception as exc:  # noqa: BLE001 - a failed cell must not stop the sweep
        row.error = _msg(exc)
    return row


def _aggregate(rows: list[SweepRow]) -> list[SweepRow]:
    groups: dict[tuple, list[SweepRow]] = {}
    for r in rows:
        if not r.error:
            groups.setdefault((r.graph, r.s, r.k), []).append(r)
    out = []
    for (graph, s, k), rs in groups.items():
        agg = SweepRow(graph, "mean", f"mean of {len(rs)}", mean(r.n for r in rs),
                       mean(r.m for r in rs), s, k)
        for name in ("fvs_size", "hubset_size", "strategy_length", "lower_bound", "ratio",
                     "total_loss", "peak_searchers", "f_o"):
            setattr(agg, name, float(mean(getattr(r, name) for r in rs)))
        if all(r.bound_ok for r in rs):
            agg.bound_ok = "yes" if all(r.bound_ok == "yes" for r in rs) else "no"
        out.append(agg)
    return out


def iter_sweep(cfg: SweepConfig) -> Iterator[SweepRow]:
    """Per-seed rows in cell order, then one mean row per (graph, s, k)."""
    jobs = _cells(cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            batches = list(pool.map(_run_graph, jobs))
    else:
        batches = [_run_graph(j) for j in jobs]
    rows = [r for b in batches for r in b]
    yield from rows
    yield from _aggregate(rows)


def run_sweep(cfg: SweepConfig, out: TextIO | None = None) -> list[SweepRow]:
    """Run ``cfg`` and write CSV to ``out``; returns the rows written."""
    rows = list(iter_sweep(cfg))
    if out is not None:
        write_csv(rows, out)
    return rows


def write_csv(rows: list[SweepRow], out: TextIO) -> None:
    out.write(f"# graphsearch sweep v{CSV_VERSION}: {','.join(COLUMNS)}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(r.as_csv())


def sweep_csv(cfg: SweepConfig) -> str:
    buf = io.StringIO()
    run_sweep(cfg, buf)
    return buf.getvalue()


def read_rows(path: str | os.PathLike) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))
