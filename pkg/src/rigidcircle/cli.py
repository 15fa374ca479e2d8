"""Command-line entry point: ``rigidcircle <command> [options]``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input
error.  Every command writes deterministic text (sorted-key JSON or SVG) to
``--out`` or standard output.  ``--config FILE`` reads a JSON object whose
top-level scalars apply to every command and whose per-command objects
(``{"verify": {...}}``) apply to that command; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import __version__, capacity, modulus, neighbors, params, render, scene, schottky
from .report import Check, VerificationReport, status_of
from .scalar import to_json

SUITES = ("params", "scene", "neighbors", "constants", "modulus", "capacity", "schottky")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- helpers


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _plain(v):
    """JSON-ready form of numeric values inside command results."""
    if isinstance(v, Fraction) or type(v).__name__ == "LogScale":
        return to_json(v)
    if isinstance(v, float):
        return {"float": repr(float(v))}
    if isinstance(v, dict):
        return {str(k): _plain(u) for k, u in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(u) for u in v]
    return v


def _circle_json(c: schottky.Circle) -> dict:
    return {"id": c.id, "center": [_plain(c.center[0]), _plain(c.center[1])],
            "radius": _plain(c.radius)}


def _word(text: str) -> scene.Word:
    try:
        return scene.Word.parse(text)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad word {text!r}: {exc}") from None


# ---------------------------------------------------------------- suites


def suite_checks(name: str, depth: int, opts) -> list[Check]:
    if name == "params":
        return params.verify_params(max(depth, 3))
    sc = scene.generation(depth, scene.EXACT)
    if name == "scene":
        out = scene.verify_scene(sc) + scene.verify_cantor_cover(sc.params if depth >= 2
                                                                  else params.param_table(3))
        return out + scene.verify_sampled_children(sc)
    if name == "neighbors":
        return neighbors.verify_neighbors(sc, opts.synthetic)
    if name == "constants":
        sizes = [len(neighbors.neighbor_ring(sc, w).disks) for w in sc.level(1)]
        return modulus.verify_distortion_constants(sizes)
    if name == "modulus":
        out = modulus.verify_modulus(sc)
        return out + discrete_checks(opts.grid)
    if name == "capacity":
        return capacity.verify_capacity(max(depth, 2))
    if name == "schottky":
        return schottky_checks(sc)
    raise UsageError(f"unknown suite {name!r}")


def discrete_checks(n: int) -> list[Check]:
    cases = [
        ("modulus.discrete.square", "unit square modulus 1", modulus.square_modulus(n), 1.0),
        ("modulus.discrete.rect_2x1", "2 x 1 rectangle, long direction: 1/2",
         modulus.rectangle_modulus(2, 1, n), 0.5),
        ("modulus.discrete.annulus", "annulus (1, e) joining family: 2 pi",
         modulus.annulus_modulus(1.0, math.e, n), 2 * math.pi),
    ]
    return [Check(cid, anchor, status_of(abs(v - exact) <= 0.02 * exact),
                  {"estimate": v, "exact": exact, "grid": n})
            for cid, anchor, v, exact in cases]


def schottky_checks(sc: scene.SceneGraph) -> list[Check]:
    gens = schottky.generators_from_scene(sc, 1)
    m = len(gens)
    out = []
    for L in range(1, 4):
        words = schottky.enumerate_words(gens, L, min_length=L)
        want = m * (m - 1) ** (L - 1)
        out.append(Check(f"schottky.words.L{L}", "reduced words of length L: m (m-1)^(L-1)",
                         status_of(len(words) == want), {"count": len(words), "expected": want}))
    bad = 0
    for D in gens:
        for E in gens:
            if E is D:
                continue
            img = schottky.invert_disk(D, E)
            back = schottky.invert_disk(D, img)
            bad += back != E or not schottky.strictly_inside(img, D)
    out.append(Check("schottky.exact.disk_images",
                     "reflections are involutions mapping other disks strictly inside",
                     status_of(bad == 0), {"pairs": m * (m - 1), "violations": bad}))
    ids = {g.id: g for g in gens}
    seq = [ids["Le1:Le"], ids["Ri2:Ri"]]
    nest = schottky.build_nest(seq, 8)
    out.append(Check("schottky.nest.J8", "alternating nest is strictly decreasing",
                     "pass", {"generators": list(nest.generators), "error": nest.error}))
    return out


# ---------------------------------------------------------------- commands


def cmd_construct(a) -> int:
    try:
        sc = scene.generation(a.depth, a.mode)
    except scene.SceneSizeError as exc:
        raise UsageError(str(exc)) from None
    if sc.materialized_depth < sc.depth:
        sys.stderr.write(f"note: levels {sc.materialized_depth + 1}..{sc.depth} "
                         "are per-word only and not written\n")
    _emit(sc.to_json(), a.out)
    return 0


def cmd_verify(a) -> int:
    names = []
    for item in a.suites:
        for s in item.split(","):
            s = s.strip()
            if s == "all":
                names.extend(SUITES)
            elif s in SUITES:
                names.append(s)
            else:
                raise UsageError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}, all")
    names = list(dict.fromkeys(names))
    if a.depth > scene.MAX_EXACT_DEPTH:
        raise UsageError(f"verification depth is limited to {scene.MAX_EXACT_DEPTH}")
    rep = VerificationReport(",".join(names),
                             config={"depth": a.depth, "suites": names, "synthetic": a.synthetic,
                                     "grid": a.grid})
    for name in names:
        rep.add(suite_checks(name, a.depth, a))
    _emit(rep.to_json(), a.out)
    return rep.exit_code


def cmd_capacity(a) -> int:
    if a.mode == "numeric":
        tab = params.param_table(1)
        iv = capacity.removed_intervals(tab, 1)[0].intervals
        ivs = capacity.IntervalSet(iv)
        est = capacity.equilibrium_capacity(ivs, a.panels)
        bound, S = capacity.subadditive_capacity_bound(ivs)
        ok = est <= float(bound)
        doc = {"mode": "numeric", "intervals": _plain([list(x) for x in iv]),
               "estimate": _plain(est), "subadditive_bound": _plain(bound), "S": _plain(S),
               "panels": a.panels, "verdict": ok}
        _emit(_dump(doc), a.out)
        return 0 if ok else 1
    try:
        res = capacity.capacity_series(None, a.levels, a.mode)
    except params.LevelRangeError as exc:
        raise UsageError(str(exc)) from None
    doc = {k: _plain(v) for k, v in res.to_dict().items()}
    doc["S_float"] = _plain(float(res.S))
    doc["bound_float"] = _plain(float(res.bound))
    _emit(_dump(doc), a.out)
    return 0 if res.verdict else 1


def cmd_modulus(a) -> int:
    n = a.grid
    if n < 16:
        raise UsageError("--grid must be >= 16")
    if a.case == "square":
        doc = {"case": "square", "estimate": modulus.square_modulus(n), "exact": 1.0}
    elif a.case == "rect":
        if len(a.values) != 2:
            raise UsageError("rect needs WIDTH HEIGHT")
        w, h = (int(v) for v in a.values)
        if w < 1 or h < 1:
            raise UsageError("rect sides must be positive integers")
        doc = {"case": "rect", "width": w, "height": h,
               "estimate": modulus.rectangle_modulus(w, h, n), "exact": h / w}
    elif a.case == "annulus":
        if len(a.values) != 2:
            raise UsageError("annulus needs S1 S2")
        s1, s2 = (float(v) for v in a.values)
        if not 0 < s1 < s2:
            raise UsageError("annulus needs 0 < S1 < S2")
        doc = {"case": "annulus", "s1": s1, "s2": s2,
               "estimate": modulus.annulus_modulus(s1, s2, n),
               "exact": 2 * math.pi / math.log(s2 / s1)}
    else:
        doc = gamma_doc(a)
    doc["grid"] = n
    _emit(_dump(_plain(doc)), a.out)
    return 0


def gamma_doc(a) -> dict:
    if not a.word:
        raise UsageError("gamma needs --word")
    w = _word(a.word)
    if w.k != 1:
        raise UsageError("gamma is available for level-1 words")
    sc = scene.generation(1)
    fams = modulus.surrounding_families(sc, w, strict=False)
    if not 1 <= a.index <= len(fams):
        raise UsageError(f"--index must be in 1..{len(fams)}")
    fr = fams[a.index - 1]
    f = fr.family
    if f.kind == modulus.ARCS:
        est = 1 / modulus.annulus_modulus(0.75, 1.5, a.grid)
        ref = "circle family of the annulus (3r/4, 3r/2)"
    else:
        est = modulus.square_modulus(a.grid)
        ref = "segment family of a square"
    return {"case": "gamma", "word": w.label, "index": a.index, "kind": f.kind,
            "connects": list(f.connects), "bound": float(fr.bound) if f.kind == modulus.ARCS
            else fr.bound, "joins": fr.joins, "collisions": list(fr.collisions),
            "ok": fr.ok, "estimate": est, "estimate_of": ref}


def cmd_schottky(a) -> int:
    sc = scene.generation(1)
    gens = schottky.generators_from_scene(sc, 1)
    L = a.max_word_length
    if not 1 <= L <= 6:
        raise UsageError("--max-word-length must be in 1..6")
    counts = [len(schottky.enumerate_words(gens, j, min_length=j)) if j <= 4
              else schottky.word_count(len(gens), j) - schottky.word_count(len(gens), j - 1)
              for j in range(1, L + 1)]
    doc = {"generators": [_circle_json(g) for g in gens], "max_word_length": L,
           "words_by_length": counts,
           "expected": [len(gens) * (len(gens) - 1) ** (j - 1) for j in range(1, L + 1)]}
    if a.list_words:
        if L > 3:
            raise UsageError("--list-words needs --max-word-length <= 3")
        doc["words"] = [{"word": list(wi.word), "disks": [_circle_json(c) for c in wi.disks]}
                        for wi in schottky.enumerate_words(gens, L)]
    if a.nest:
        by_id = {g.id: g for g in gens}
        try:
            seq = [by_id[s.strip()] for s in a.nest.split(",")]
        except KeyError as exc:
            raise UsageError(f"unknown generator {exc}; ids look like Le1:Le") from None
        try:
            nest = schottky.build_nest(seq, a.depth)
        except schottky.SchottkyError as exc:
            raise UsageError(str(exc)) from None
        doc["nest"] = {"generators": list(nest.generators),
                       "disks": [_circle_json(c) for c in nest.disks],
                       "ratios": nest.ratios(), "limit": _plain(list(nest.limit)),
                       "error": _plain(nest.error)}
    ok = doc["words_by_length"] == doc["expected"]
    _emit(_dump(_plain(doc)), a.out)
    return 0 if ok else 1


def _window(text: str):
    try:
        vals = [Fraction(v.strip()) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad window {text!r}") from None
    if len(vals) != 4:
        raise UsageError("window is x0,y0,x1,y1")
    return tuple(vals)


def cmd_render(a) -> int:
    if not a.scene:
        raise UsageError("render needs --scene PATH")
    with open(a.scene, encoding="utf-8") as fh:
        data = json.load(fh)
    window = _window(a.window) if a.window else None
    pts = None
    if a.chain:
        w = _word(a.chain)
        depth = int(data.get("depth", 1))
        sc = scene.generation(depth, data.get("mode", scene.EXACT))
        if w.k > sc.materialized_depth:
            raise UsageError(f"chain word {w.label} is not in the rendered scene")
        try:
            pts = modulus.chain_outline(sc, w)
        except KeyError:
            raise UsageError(f"chain word {w.label} is not in the rendered scene") from None
    try:
        svg = render.render_svg(data, window, pts)
    except render.RenderError as exc:
        raise UsageError(str(exc)) from None
    _emit(svg, a.out)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    p = argparse.ArgumentParser(prog="rigidcircle", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("--out", help="output file (default stdout)")
    sub = p.add_subparsers(dest="command", required=True)
    subs = {}

    s = sub.add_parser("construct", parents=[common], help="write scene JSON")
    s.add_argument("--depth", type=int, default=1)
    s.add_argument("--mode", choices=(scene.EXACT, scene.PRESENTATION), default=scene.EXACT)
    s.set_defaults(func=cmd_construct)
    subs["construct"] = s

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--suite", dest="suites", action="append", default=None,
                   help=f"suite name or comma list ({', '.join(SUITES)}, all); repeatable")
    s.add_argument("--depth", type=int, default=1)
    s.add_argument("--synthetic", type=int, default=neighbors.SYNTHETIC_TRIPLES,
                   help="random triples for the synthetic ring test")
    s.add_argument("--grid", type=int, default=256, help="nodes per unit for discrete moduli")
    s.set_defaults(func=cmd_verify)
    subs["verify"] = s

    s = sub.add_parser("capacity", parents=[common], help="capacity series and bound")
    s.add_argument("--levels", type=int, default=2)
    s.add_argument("--mode", choices=("formula", "actual", "numeric"), default="formula")
    s.add_argument("--panels", type=int, default=512)
    s.set_defaults(func=cmd_capacity)
    subs["capacity"] = s

    s = sub.add_parser("modulus", parents=[common], help="discrete modulus and path families")
    s.add_argument("case", choices=("square", "rect", "annulus", "gamma"))
    s.add_argument("values", nargs="*", help="WIDTH HEIGHT for rect, S1 S2 for annulus")
    s.add_argument("--grid", type=int, default=64)
    s.add_argument("--word")
    s.add_argument("--index", type=int, default=1)
    s.set_defaults(func=cmd_modulus)
    subs["modulus"] = s

    s = sub.add_parser("schottky", parents=[common], help="reflection words and nests")
    s.add_argument("--max-word-length", type=int, default=3)
    s.add_argument("--nest", help="comma list of generator ids, e.g. Le1:Le,Ri2:Ri")
    s.add_argument("--depth", type=int, default=8, help="nest depth J")
    s.add_argument("--list-words", action="store_true")
    s.set_defaults(func=cmd_schottky)
    subs["schottky"] = s

    s = sub.add_parser("render", parents=[common], help="scene JSON to SVG")
    s.add_argument("--scene", help="scene JSON written by construct")
    s.add_argument("--window", help="x0,y0,x1,y1")
    s.add_argument("--chain", help="overlay the neighbour chain of this level-1 word")
    s.set_defaults(func=cmd_render)
    subs["render"] = s
    return p, subs


def _apply_config(parser, subs, argv):
    """Second parse with config values installed as subcommand defaults."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    target = subs[args.command]
    known = {act.dest for act in target._actions}
    defaults = {}
    # shared top-level keys apply where the command has them
    for key, v in cfg.items():
        if not isinstance(v, dict) and key.replace("-", "_") in known:
            defaults[key.replace("-", "_")] = v
    section = cfg.get(args.command, {})
    if not isinstance(section, dict):
        raise UsageError(f"config section {args.command!r} must be an object")
    for key, v in section.items():
        dest = key.replace("-", "_")
        if dest not in known:
            raise UsageError(f"config key {key!r} does not apply to {args.command}")
        defaults[dest] = v
    if "suites" in defaults:
        # --suite appends to its default, so config suites are kept aside
        v = defaults.pop("suites")
        defaults["config_suites"] = [v] if isinstance(v, str) else list(v)
    target.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser, subs = build_parser()
    try:
        args = _apply_config(parser, subs, argv)
        if args.command == "verify" and not args.suites:
            args.suites = getattr(args, "config_suites", None) or ["all"]
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, scene.SceneSizeError, scene.BlockError, ValueError, KeyError,
            OSError) as exc:
        sys.stderr.write(f"rigidcircle: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
