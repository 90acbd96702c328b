from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Sequence


class StrategyFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SearchStrategy:
    """Placements ``V_1..V_t`` for a budget of ``searchers``.

    Nodes inside a step keep construction order; the trailing removal-only
    move is implicit and not stored.
    """

    steps: tuple[tuple[int, ...], ...]
    searchers: int

    def __post_init__(self):
        if self.searchers < 1:
            raise ValueError("searchers must be positive")

    @classmethod
    def of(cls, steps: Sequence[Sequence[int]], searchers: int) -> SearchStrategy:
        return cls(tuple(tuple(s) for s in steps), searchers)

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def width(self) -> int:
        return max((len(set(s)) for s in self.steps), default=0)

    def relabel(self, mapping: Callable[[int], int] | Sequence[int], searchers: int | None = None) -> SearchStrategy:
        f = mapping if callable(mapping) else mapping.__getitem__
        return SearchStrategy(tuple(tuple(f(v) for v in step) for step in self.steps),
                              self.searchers if searchers is None else searchers)

    def with_permanent(self, guards: Sequence[int]) -> SearchStrategy:
        """Every step unioned with ``guards``; the budget grows by ``len(guards)``."""
        extra = tuple(sorted(guards))
        steps = tuple(step + tuple(g for g in extra if g not in step) for step in self.steps)
        return SearchStrategy(steps, self.searchers + len(extra))


def format_strategy(strategy: SearchStrategy, label: Callable[[int], int] = int) -> str:
    lines = [f"s={strategy.searchers} t={strategy.length}"]
    for step in strategy.steps:
        lines.append(" ".join(str(x) for x in sorted(label(v) for v in step)) or "-")
    return "\n".join(lines) + "\n"


def parse_strategy(text: str, resolve: Callable[[int], int] = int, strict: bool = False) -> SearchStrategy:
    """Inverse of :func:`format_strategy`; ``resolve`` maps labels back to ids.

    The step lines are authoritative. A header ``t`` that disagrees with them
    is only an error when ``strict``.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise StrategyFormatError("empty strategy file")
    header = dict(tok.split("=", 1) for tok in lines[0].split() if "=" in tok)
    try:
        s, t = int(header["s"]), int(header["t"])
    except (KeyError, ValueError):
        raise StrategyFormatError(f"bad header {lines[0]!r}, want 's=<s> t=<t>'") from None
    body = lines[1:]
    if strict and len(body) != t:
        raise StrategyFormatError(f"header says t={t} but {len(body)} steps follow")
    try:
        steps = [tuple(resolve(int(tok)) for tok in ln.split() if tok != "-") for ln in body]
    except ValueError as exc:
        raise StrategyFormatError(str(exc)) from None
    return SearchStrategy.of(steps, s)


def read_strategy(path: str | os.PathLike, resolve: Callable[[int], int] = int) -> SearchStrategy:
    with open(path) as fh:
        return parse_strategy(fh.read(), resolve)


def write_strategy(path: str | os.PathLike, strategy: SearchStrategy, label: Callable[[int], int] = int) -> None:
    with open(path, "w") as fh:
        fh.write(format_strategy(strategy, label))
