"""Line-oriented problem files.

::

    n 1 m 1
    X whole 1
    f0 poly 1:0 1:2          # 1 + x^2
    F1 poly 9:0 -6:1 1:2
    h nonpos 1
    anchor 1
    box -10 10               # optional solver window, pairs l_i u_i
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .composite import CompositeProblem, Rockafellian, SolverCfg
from .monitoring import format_monitoring, parse_monitoring
from .polymap import PolyMap, parse_terms
from .sets import format_set, parse_set


@dataclass
class ProblemFile:
    problem: CompositeProblem
    anchor: np.ndarray
    box: Optional[tuple] = None

    @property
    def rockafellian(self) -> Rockafellian:
        return Rockafellian(self.problem, self.anchor)

    def solver_cfg(self, **kw) -> SolverCfg:
        if self.box is None:
            raise ValueError("problem file has no 'box' line; pass bounds explicitly")
        return SolverCfg(self.box[0], self.box[1], **kw)


def parse_problem(text: str) -> ProblemFile:
    n = m = None
    X = f0 = h = anchor = box = None
    outs = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        tok = rest.split()
        try:
            if key == "n":
                if len(tok) != 3 or tok[1] != "m":
                    raise ValueError("expected 'n <dim> m <dim>'")
                n, m = int(tok[0]), int(tok[2])
            elif key == "X":
                X = parse_set(rest)
            elif key == "f0":
                if tok[0] != "poly":
                    raise ValueError("f0 must be 'poly'")
                f0 = parse_terms(n, tok[1:])
            elif key.startswith("F") and key[1:].isdigit():
                if tok[0] not in ("poly", "invpoly"):
                    raise ValueError("F_i must be 'poly' or 'invpoly'")
                outs[int(key[1:])] = (tok[0], parse_terms(n, tok[1:]))
            elif key == "h":
                h = parse_monitoring(rest)
            elif key == "anchor":
                anchor = np.array([float(v) for v in tok])
            elif key == "box":
                vals = [float(v) for v in tok]
                if len(vals) % 2:
                    raise ValueError("box needs pairs l_i u_i")
                box = (tuple(vals[0::2]), tuple(vals[1::2]))
            else:
                raise ValueError(f"unknown key {key!r}")
        except (ValueError, IndexError, TypeError) as exc:
            raise ValueError(f"line {ln}: {exc}") from None
    if None in (n, m, X, f0, h):
        raise ValueError("problem file needs n/m, X, f0 and h lines")
    if sorted(outs) != list(range(1, m + 1)):
        raise ValueError(f"expected F1..F{m}")
    F = PolyMap(n, tuple(outs[i][1] for i in range(1, m + 1)),
                tuple(outs[i][0] for i in range(1, m + 1)))
    P = CompositeProblem(X, PolyMap(n, (f0,)), F, h)
    return ProblemFile(P, np.zeros(m) if anchor is None else anchor, box)


def format_problem(pf: ProblemFile) -> str:
    P = pf.problem
    f0_terms = " ".join(f"{c!r}:" + ",".join(map(str, ex)) for c, ex in P.f0.outputs[0])
    lines = [f"n {P.n} m {P.m}", f"X {format_set(P.X)}", f"f0 poly {f0_terms}".rstrip()]
    lines += [f"F{i + 1} {P.F.format_output(i)}" for i in range(P.m)]
    lines.append(f"h {format_monitoring(P.h)}")
    lines.append("anchor " + " ".join(repr(float(v)) for v in pf.anchor))
    if pf.box is not None:
        lines.append("box " + " ".join(f"{a!r} {b!r}" for a, b in zip(*pf.box)))
    return "\n".join(lines) + "\n"


def load_problem(path) -> ProblemFile:
    with open(path) as fh:
        return parse_problem(fh.read())
