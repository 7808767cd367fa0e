"""Command-line front end.

Input files hold a body spec (or ``{"body": spec, ...}`` with extra fields
``direction``, ``w`` or ``vector`` for the diagnostic commands).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .bodies import Ball, Body, Sliced, SlicedBall, VPolytope
from .closure import (
    DEFAULT_BUDGET,
    ClosureResult,
    brute_force_closure,
    cg_closure,
    lift_cut,
    separate_irrational,
)
from .errors import BudgetExhausted, CGError, UnsupportedDirection
from .exact import Scalar, format_scalar, scalar_from_json
from .lattice import normalize_direction
from .polyhedra import RationalPolyhedron

COMMANDS = ("closure", "oracle", "lift", "normalize", "separate", "compare")
FORMATS = ("json", "csv", "svg")

EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_UNSUPPORTED = 4


class SpecError(ValueError):
    """Malformed input file."""


@dataclass(frozen=True)
class JobConfig:
    command: str
    spec: dict
    bound: int = 4
    budget: int = DEFAULT_BUDGET
    output: str = "json"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise SpecError(f"unknown command {self.command!r}")
        if self.output not in FORMATS:
            raise SpecError(f"unknown output format {self.output!r}")
        if self.bound < 1 or self.budget < 1:
            raise SpecError("bound and budget must be positive")


# -- parsing ------------------------------------------------------------------


def _scalars(values: Any) -> tuple[Scalar, ...]:
    if not isinstance(values, list):
        raise SpecError(f"expected a list of scalars, got {values!r}")
    return tuple(scalar_from_json(x) for x in values)


def _rational(x: Any) -> Fraction:
    s = scalar_from_json(x)
    if not s.is_rational():
        raise SpecError(f"expected a rational, got {x!r}")
    return s.to_fraction()


def parse_body(spec: Any) -> Body:
    """Build a body from its JSON spec."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise SpecError("a body spec is an object with exactly one key")
    kind, data = next(iter(spec.items()))
    try:
        if kind == "vpolytope":
            verts = [_scalars(v) for v in data["vertices"]]
            if not verts or len({len(v) for v in verts}) != 1:
                raise SpecError("vertices must be a non-empty list of equal-length points")
            return VPolytope(verts)
        if kind == "ball":
            return Ball([_rational(x) for x in data["center"]], _rational(data["radius"]))
        if kind == "sliced":
            base = parse_body(data["base"])
            hs = []
            for h in data["halfspaces"]:
                a = [int(x) for x in h["a"]]
                hs.append((a, _rational(h["b"])))
            return Sliced(base, hs)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"bad {kind} spec: {exc}") from exc
    raise SpecError(f"unknown body kind {kind!r}")


def _split_input(doc: Any) -> tuple[Any, dict]:
    if isinstance(doc, dict) and ("body" in doc or "vector" in doc):
        return doc.get("body"), doc
    return doc, {}


# -- output -------------------------------------------------------------------


def _cuts_json(result: ClosureResult) -> list[dict]:
    return [{"a": list(c.a), "b": str(c.rhs)} for c in result.generating_cuts]


def _closure_json(result: ClosureResult) -> dict:
    out = result.polyhedron.to_json()
    out["empty"] = result.empty
    out["cuts"] = _cuts_json(result)
    t = result.trace
    out["trace"] = {
        "delta": format_scalar(t.delta),
        "R": format_scalar(t.R),
        "enumerated_w_count": t.enumerated_w_count,
        "recursion_depth": t.recursion_depth,
    }
    return out


def _angle_sorted(points: Sequence[Sequence[float]]) -> list[tuple[float, float]]:
    if not points:
        return []
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(((p[0], p[1]) for p in points), key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def render_svg(K: Body, P: RationalPolyhedron) -> str:
    """K's outline and the closure polygon, y axis pointing up."""
    if K.n != 2:
        raise SpecError("svg output needs a 2-dimensional body")
    r = float(K.radius_bound()) + 0.5
    scale = 200 / r
    size = 2 * r * scale

    def xy(p: Sequence[float]) -> str:
        return f"{(p[0] + r) * scale:.3f},{(r - p[1]) * scale:.3f}"

    def shape(points: list[tuple[float, float]], style: str) -> str:
        if len(points) == 1:
            x, y = xy(points[0]).split(",")
            return f'<circle cx="{x}" cy="{y}" r="3" {style}/>'
        tag = "polyline" if len(points) == 2 else "polygon"
        return f'<{tag} points="{" ".join(xy(p) for p in points)}" {style}/>'

    items = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}">']
    ball = K.ball if isinstance(K, SlicedBall) else K if isinstance(K, Ball) else None
    if ball is not None:
        cx, cy = xy([float(c) for c in ball.center]).split(",")
        items.append(f'<circle cx="{cx}" cy="{cy}" r="{float(ball.radius) * scale:.3f}" fill="none" stroke="black"/>')
        if isinstance(K, SlicedBall):
            items.append(f"<!-- sliced by {len(K.halfspaces)} halfspaces -->")
    elif isinstance(K, VPolytope):
        pts = _angle_sorted([[float(x) for x in v] for v in K.vertices])
        items.append(shape(pts, 'fill="none" stroke="black"'))
    closure_pts = _angle_sorted([[float(x) for x in v] for v in P.vertices])
    if closure_pts:
        items.append(shape(closure_pts, 'fill="steelblue" fill-opacity="0.4" stroke="steelblue"'))
    items.append("</svg>")
    return "\n".join(items) + "\n"


def _emit(payload: Any, config: JobConfig, K: Body | None, P: RationalPolyhedron | None) -> str:
    if config.output == "svg":
        if K is None or P is None:
            raise SpecError("svg output needs a closure result")
        return render_svg(K, P)
    if config.output == "csv":
        if P is None:
            raise SpecError("csv output needs a closure result")
        return P.to_csv()
    return json.dumps(payload, indent=2) + "\n"


# -- dispatch -------------------------------------------------------------------


def smallest_matching_bound(K: Body, P: RationalPolyhedron, max_bound: int) -> int | None:
    for B in range(1, max_bound + 1):
        if brute_force_closure(K, B).polyhedron.equals(P):
            return B
    return None


def run(config: JobConfig) -> str:
    """Execute one job and return its serialized output."""
    body_spec, extra = _split_input(config.spec)
    if config.command == "normalize":
        v = _scalars(extra.get("vector", body_spec if isinstance(body_spec, list) else None))
        nd = normalize_direction(v)
        payload = {
            "t": nd.t,
            "s": nd.s,
            "r": nd.r,
            "D": nd.rational_dim,
            "canonical": [format_scalar(x) for x in nd.canonical],
            "lambda": format_scalar(nd.lam),
            "T": nd.T.matrix,
        }
        return _emit(payload, config, None, None)

    K = parse_body(body_spec)
    if config.command == "closure":
        res = cg_closure(K, config.budget)
        return _emit(_closure_json(res), config, K, res.polyhedron)
    if config.command == "oracle":
        res = brute_force_closure(K, config.bound)
        return _emit(_closure_json(res), config, K, res.polyhedron)
    if config.command == "compare":
        res = cg_closure(K, config.budget)
        B = smallest_matching_bound(K, res.polyhedron, config.bound)
        payload = _closure_json(res)
        payload["verdict"] = f"equal at B={B}" if B else f"no match up to B={config.bound}"
        payload["matching_bound"] = B
        return _emit(payload, config, K, res.polyhedron)

    if "direction" not in extra:
        raise SpecError(f"{config.command} needs a 'direction' field")
    v = _scalars(extra["direction"])
    if len(v) != K.n:
        raise SpecError("direction has the wrong length")
    if config.command == "separate":
        cert = separate_irrational(K, v, config.budget)
        payload = {
            "cut_vectors": [list(a) for a in cert.cut_vectors],
            "rhs": [str(c.rhs) for c in cert.cuts(K)],
            "lambdas": [format_scalar(x) for x in cert.lambdas],
            "multiple": format_scalar(cert.multiple),
            "strict": cert.strict,
            "kronecker_indices": list(cert.trace.indices),
        }
        return _emit(payload, config, None, None)
    if "w" not in extra:
        raise SpecError("lift needs a 'w' field")
    w = [int(x) for x in extra["w"]]
    wit = lift_cut(K, v, w, config.budget)
    payload = {
        "w_prime": list(wit.w_prime),
        "n_dirichlet": wit.n_dirichlet,
        "epsilon": format_scalar(wit.epsilon),
        "vacuous": wit.vacuous,
    }
    return _emit(payload, config, None, None)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cgclosure", description="Exact Chvátal-Gomory closures of convex bodies.")
    p.add_argument("--input", required=True, metavar="FILE", help="JSON body spec")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--bound", type=int, default=4, metavar="B", help="oracle truncation ||a||_inf <= B")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, metavar="N", help="search budget")
    p.add_argument("--output", choices=FORMATS, default="json")
    p.add_argument("--out", metavar="FILE", help="write here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="reserved; all algorithms are deterministic")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
        config = JobConfig(args.command, doc, args.bound, args.budget, args.output, args.seed)
        text = run(config)
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UnsupportedDirection as exc:
        print(f"unsupported direction: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (OSError, ValueError) as exc:
        # json, spec and scalar parse failures are all ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
