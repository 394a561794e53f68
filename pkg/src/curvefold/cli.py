"""Command-line front end: analysis, words, norms, decompositions, SVG.

All numeric output is exact: rationals are serialized as decimal strings
when they terminate and as "p/q" otherwise, never as floats.  Identical
input files produce byte-identical output.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from typing import Optional

import click

from .arrangement import (Arrangement, CurveError, PlaneCurve, build_arrangement,
                          fraction_str, parse_curve, rotation_number, tree_cotree)
from .decomposition import (ContractStep, CutStep, curve_subcurve, homotopy_trace,
                            min_area_sod, sod_oracle, sod_to_folding)
from .folding import (CapExceeded, Folding, cancellation_norm, is_self_overlapping,
                      norm_bruteforce, positively_foldable,
                      positively_foldable_bruteforce)
from .words import (CyclicWord, blank_word, build_cable_system, combined_word,
                    cyclic_equal, derive_flattening, letter_str, nie_word,
                    word_to_json)

EXIT_INPUT_ERROR = 2
EXIT_INVARIANT_ERROR = 3


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _emit(doc) -> None:
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


def _fail(exit_code: int, code: str, message: str) -> None:
    _emit({"error": {"code": code, "message": message}})
    sys.exit(exit_code)


def _load_curve(path: str, weights_mode: str) -> PlaneCurve:
    try:
        with open(path, "rb") as fh:
            doc = json.loads(fh.read())
    except OSError as exc:
        raise CliError("unreadable_input", str(exc))
    except json.JSONDecodeError as exc:
        raise CliError("invalid_json", str(exc))
    curve = parse_curve(doc)
    if weights_mode == "file":
        if curve.weights is None:
            raise CliError("missing_weights",
                           "--weights file needs a 'weights' object in the input")
        return curve
    if weights_mode == "unit":
        probe = build_arrangement(PlaneCurve(curve.points))
        unit = {f.id: Fraction(1) for f in probe.faces[1:]}
        return PlaneCurve(curve.points, unit)
    return PlaneCurve(curve.points)      # "area": geometric face areas


def _folding_json(folding: Folding) -> dict:
    return {
        "pairings": sorted([p.i, p.j] for p in folding.pairings),
        "area": fraction_str(folding.area),
    }


def _faces_json(arr: Arrangement) -> list[dict]:
    out = []
    for f in arr.faces[1:]:
        out.append({
            "id": f.id,
            "area": fraction_str(f.signed_area),
            "winding": f.winding,
            "depth": f.depth,
        })
    return out


def _word_pipeline(curve: PlaneCurve):
    arr = build_arrangement(curve)
    tc = tree_cotree(arr)
    cables = build_cable_system(arr, tc)
    word = blank_word(arr, cables)
    return arr, tc, cables, word


WEIGHTS = click.option("--weights", "weights_mode",
                       type=click.Choice(["unit", "area", "file"]),
                       default="area", show_default=True,
                       help="Letter weights: all ones, face areas, or the "
                            "input file's weights object.")
INPUT = click.option("--input", "path", required=True,
                     type=click.Path(), help="Curve JSON file.")
SEED = click.option("--seed", type=int, default=0, show_default=True,
                    help="Seed for randomized cross-checks.")
ORACLE = click.option("--oracle", is_flag=True,
                      help="Cross-check against the exponential oracle.")


@click.group()
def main() -> None:
    """Exact analysis of closed curves in the plane."""


def _command(fn):
    """Wrap a subcommand with the error-to-exit-code policy."""

    def wrapper(*args, **kwargs):
        try:
            fn(*args, **kwargs)
        except (CliError,) as exc:
            _fail(EXIT_INPUT_ERROR, exc.code, str(exc))
        except CurveError as exc:
            _fail(EXIT_INPUT_ERROR, type(exc).__name__, str(exc))
        except AssertionError as exc:
            _fail(EXIT_INVARIANT_ERROR, "invariant_violation", str(exc))
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@main.command()
@INPUT
@WEIGHTS
@_command
def analyze(path: str, weights_mode: str) -> None:
    """Faces, winding numbers, depths, areas, rotation number."""
    curve = _load_curve(path, weights_mode)
    arr = build_arrangement(curve)
    weights = arr.face_weights()
    area_w = sum((abs(f.winding) * weights[f.id] for f in arr.faces[1:]),
                 Fraction(0))
    area_d = sum((f.depth * weights[f.id] for f in arr.faces[1:]), Fraction(0))
    _emit({
        "faces": _faces_json(arr),
        "vertices": len(arr.vertices),
        "rotation_number": rotation_number(curve),
        "winding_area": fraction_str(area_w),
        "depth_area": fraction_str(area_d),
    })


@main.command()
@INPUT
@WEIGHTS
@_command
def word(path: str, weights_mode: str) -> None:
    """Face word of the curve, three ways, with equality checks."""
    curve = _load_curve(path, weights_mode)
    arr, tc, cables, bw = _word_pipeline(curve)
    nw = nie_word(arr, tc, derive_flattening(cables))
    cw = combined_word(arr, cables)
    assert cyclic_equal(bw, nw), "word constructions must agree"
    _emit({
        "blank_word": word_to_json(bw),
        "nie_word": word_to_json(nw),
        "combined_word": [
            tok if isinstance(tok, str) else
            (f"v{tok[1]}.{tok[2]}" if tok[0] == "v" else letter_str(tok))
            for tok in cw.tokens
        ],
        "cable_order": list(cables.ordering),
    })


@main.command()
@INPUT
@WEIGHTS
@ORACLE
@SEED
@_command
def norm(path: str, weights_mode: str, oracle: bool, seed: int) -> None:
    """Cancellation norm of the face word, with witness folding."""
    curve = _load_curve(path, weights_mode)
    _, _, _, w = _word_pipeline(curve)
    value, witness = cancellation_norm(w)
    doc = {
        "word": word_to_json(w),
        "norm": fraction_str(value),
        "witness": _folding_json(witness),
    }
    if oracle:
        try:
            brute = norm_bruteforce(w)
        except CapExceeded as exc:
            raise CliError("oracle_cap", str(exc))
        assert brute == value, "norm oracle disagrees with the DP"
        doc["oracle"] = fraction_str(brute)
    _emit(doc)


@main.command()
@INPUT
@WEIGHTS
@ORACLE
@SEED
@_command
def selfoverlap(path: str, weights_mode: str, oracle: bool, seed: int) -> None:
    """Is the curve the boundary of an immersed disk?"""
    curve = _load_curve(path, weights_mode)
    verdict, cert = is_self_overlapping(curve)
    doc: dict = {"self_overlapping": verdict}
    if verdict:
        doc["rotation_number"] = cert["rotation_number"]
        doc["word"] = word_to_json(cert["word"])
        doc["witness"] = _folding_json(cert["witness"])
    else:
        doc["reason"] = cert["reason"]
        if "word" in cert:
            doc["word"] = word_to_json(cert["word"])
    if oracle and "word" in cert:
        w = cert["word"]
        try:
            ok = positively_foldable_bruteforce(w)
        except CapExceeded as exc:
            raise CliError("oracle_cap", str(exc))
        fast, _ = positively_foldable(w)
        assert ok == fast, "positive-foldability oracle disagrees"
        doc["oracle"] = ok
    _emit(doc)


def _pieces_json(sod) -> list[dict]:
    out = []
    for piece in sod.subcurves:
        out.append({
            "word": [letter_str(l) for l in piece.letters()],
            "rotation": piece.rotation,
            "area": fraction_str(piece.area_w()),
        })
    return out


@main.command()
@INPUT
@WEIGHTS
@ORACLE
@SEED
@_command
def decompose(path: str, weights_mode: str, oracle: bool, seed: int) -> None:
    """Minimum-area decomposition into immersed-disk boundaries."""
    curve = _load_curve(path, weights_mode)
    sod = min_area_sod(curve)
    doc = {
        "vertex_pairs": sorted(sod.vertex_pairs),
        "pieces": _pieces_json(sod),
        "area": fraction_str(sod.area),
    }
    if oracle:
        other = sod_oracle(curve)
        assert other.area == sod.area, "decomposition oracle disagrees"
        doc["oracle_area"] = fraction_str(other.area)
    _emit(doc)


@main.command()
@INPUT
@WEIGHTS
@_command
def homotopy(path: str, weights_mode: str) -> None:
    """Minimum-area contraction schedule for the curve."""
    curve = _load_curve(path, weights_mode)
    _, _, _, w = _word_pipeline(curve)
    value, witness = cancellation_norm(w)
    trace = homotopy_trace(witness)
    assert trace.total_area == value, "trace total must equal the norm"
    steps = []
    for step in trace.steps:
        if isinstance(step, CutStep):
            steps.append({"cut": {"face": step.face,
                                  "positions": list(step.positions)}})
        else:
            steps.append({"contract": {
                "letters": [letter_str(l) for l in step.letters],
                "area": fraction_str(step.area),
            }})
    _emit({"norm": fraction_str(value), "steps": steps,
           "total_area": fraction_str(trace.total_area)})


# ---------------------------------------------------------------------------
# SVG rendering


def _svg_num(q: Fraction) -> str:
    """Exact fixed-point decimal with three digits, trailing zeros removed."""
    q = Fraction(q)
    scaled = q * 1000
    n = scaled.numerator // scaled.denominator
    if 2 * (scaled.numerator - n * scaled.denominator) >= scaled.denominator:
        n += 1
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 1000)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{str(frac).rjust(3, '0').rstrip('0')}"


_PALETTE = ("#c0392b", "#2980b9", "#27ae60", "#8e44ad",
            "#d35400", "#16a085", "#7f8c8d", "#f39c12")


def _bbox(arr: Arrangement):
    xs = [p[0] for p in arr.curve.points]
    ys = [p[1] for p in arr.curve.points]
    return min(xs), min(ys), max(xs), max(ys)


def _face_anchor(arr: Arrangement, fid: int) -> tuple[Fraction, Fraction]:
    """A deterministic point just inside the face.

    Midpoint of the first boundary segment, nudged toward the face side
    (the left of the dart) by a fraction of the drawing size.
    """
    x0, y0, x1, y1 = _bbox(arr)
    eps = max(x1 - x0, y1 - y0) / 60
    d = arr.faces[fid].boundary[0]
    g = arr.dart_geometry(d)
    a, b = g[0], g[1]
    mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    vx, vy = b[0] - a[0], b[1] - a[1]
    norm2 = vx * vx + vy * vy
    # left normal of (vx, vy) is (-vy, vx); scale to roughly eps length
    scale = eps * eps / norm2
    k = Fraction(1)
    while k * k > scale:
        k /= 2
    return mx - vy * k, my + vx * k


def _poly_points(geom, flip) -> str:
    return " ".join(f"{_svg_num(x)},{_svg_num(flip - y)}" for x, y in geom)


def render_svg(arr: Arrangement, *, cables=None, pieces=None) -> str:
    """Deterministic SVG for a curve with optional overlays.

    Draws the curve, labels each bounded face with its winding and depth,
    and optionally cable polylines and colored decomposition pieces with
    dashed cut arcs.
    """
    x0, y0, x1, y1 = _bbox(arr)
    pad = max(x1 - x0, y1 - y0) / 10 + 1
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    flip = y0 + y1           # y -> flip - y mirrors into SVG coordinates
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_svg_num(x0)} {_svg_num(y0)} '
        f'{_svg_num(x1 - x0)} {_svg_num(y1 - y0)}">',
    ]
    pts = list(arr.curve.points) + [arr.curve.points[0]]
    out.append(f'<polyline points="{_poly_points(pts, flip)}" '
               'fill="none" stroke="#222222" stroke-width="0.35"/>')

    if cables is not None:
        base = (Fraction(x0 + x1, 2), Fraction(y0) + pad / 2)
        for fid in cables.ordering:
            path = [_face_anchor(arr, fid)]
            for eid in cables.cables[fid]:
                g = arr.edges[eid].geometry
                mid = len(g) // 2
                a, b = (g[mid - 1], g[mid]) if len(g) > 2 else (g[0], g[-1])
                path.append(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2))
            path.append(base)
            out.append(f'<polyline points="{_poly_points(path, flip)}" '
                       'fill="none" stroke="#2980b9" stroke-width="0.15" '
                       'stroke-dasharray="0.6 0.3"/>')

    if pieces is not None:
        for idx, piece in enumerate(pieces):
            color = _PALETTE[idx % len(_PALETTE)]
            for entry in piece.entries:
                if entry.dart is None:
                    continue
                g = arr.dart_geometry(arr.traversal[entry.dart])
                dash = ' stroke-dasharray="0.8 0.4"' if entry.partial else ""
                out.append(f'<polyline points="{_poly_points(g, flip)}" '
                           f'fill="none" stroke="{color}" '
                           f'stroke-width="0.6" opacity="0.55"{dash}/>')

    for f in arr.faces[1:]:
        ax, ay = _face_anchor(arr, f.id)
        out.append(f'<text x="{_svg_num(ax)}" y="{_svg_num(flip - ay)}" '
                   'font-size="1.2" fill="#c0392b">'
                   f'f{f.id} w={f.winding} d={f.depth}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


@main.command()
@INPUT
@WEIGHTS
@click.option("--format", "fmt", type=click.Choice(["svg", "json"]),
              default="svg", show_default=True)
@click.option("--cables/--no-cables", default=True, show_default=True,
              help="Overlay the managed cable system.")
@click.option("--decomposition", is_flag=True,
              help="Overlay the minimum-area decomposition pieces.")
@_command
def render(path: str, weights_mode: str, fmt: str,
           cables: bool, decomposition: bool) -> None:
    """Render the curve (SVG by default)."""
    curve = _load_curve(path, weights_mode)
    arr = build_arrangement(curve)
    cs = None
    if cables:
        tc = tree_cotree(arr)
        cs = build_cable_system(arr, tc)
    pieces = None
    if decomposition:
        pieces = min_area_sod(curve).subcurves
    svg = render_svg(arr, cables=cs, pieces=pieces)
    if fmt == "svg":
        click.echo(svg, nl=False)
    else:
        _emit({"svg": svg})


if __name__ == "__main__":
    main()
