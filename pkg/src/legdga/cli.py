"""Command line interface: ``legdga <command> ...``.

Exit codes: 0 success, 1 a verdict differs from the expected one, 2 bad input,
3 an internal consistency check failed (d^2 != 0 somewhere).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__, data_path
from . import augment as au
from . import certify as ce
from . import chekanov as ch
from . import diagram as dg
from . import gluing as gl
from .ncalg import DGA, AlgebraError, Ring, check_d_squared

SCHEMA = "legdga-report/1"

OK, MISMATCH, INPUT, INTERNAL = 0, 1, 2, 3


class Mismatch(Exception):
    pass


class Internal(Exception):
    pass


# -- helpers --------------------------------------------------------------------

def _resolve(name: str) -> Path:
    """A path as given, or a bundled corpus file of that name."""
    p = Path(name)
    if p.exists():
        return p
    q = Path(str(data_path(name)))
    if q.exists():
        return q
    raise FileNotFoundError(f"no such file: {name}")


def _sha(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:16]


def _ring(text: str) -> Ring:
    try:
        return Ring.parse(text)
    except (ValueError, AlgebraError) as e:
        raise ValueError(f"bad ring {text!r}: {e}") from e


def _load_dga(path: Path, ring: Ring) -> tuple[DGA, dg.FrontDiagram | None]:
    if path.suffix == ".json":
        data = json.loads(path.read_text())
        if "eps_F" in data:
            spec = gl.load_spec(path, ring)
            return gl.build(spec), None
        return DGA.from_json(data).reduce(ring), None
    D = dg.parse(path.read_text(), name=path.stem)
    return ch.build_dga(D, ring), D


def _load_aug(ref: str, A: DGA, D: dg.FrontDiagram | None) -> au.Augmentation:
    path = _resolve(ref)
    if path.suffix == ".steps":
        eps = au.filling_augmentation(au.load_recipe(path), A.ring, A).augmentation
    else:
        eps = au.Augmentation.from_json(json.loads(path.read_text())).reduce(A.ring)
    au.check_augmentation(eps, A)
    return eps


def _dga_report(A: DGA) -> dict:
    return {
        "name": A.name,
        "ring": A.ring.name,
        "generators": [{"name": g.name, "degree": g.degree,
                        "d": A.d(g.name).to_json()} for g in A.generators],
        **({"degree_exempt": list(A.degree_exempt)} if A.degree_exempt else {}),
    }


def _dga_text(A: DGA) -> str:
    width = max((len(g.name) for g in A.generators), default=1)
    lines = [f"{A.name}  over {A.ring.name}, {len(A.generators)} generators"]
    for g in A.generators:
        lines.append(f"  {g.name:<{width}}  |{g.degree}|  d = {A.d(g.name)}")
    return "\n".join(lines)


def _require_d2(A: DGA):
    ok, bad = check_d_squared(A)
    if not ok:
        raise Internal(f"d^2 != 0 at {bad} in {A.name}")


# -- commands -------------------------------------------------------------------

def cmd_dga(args, inputs):
    path = _resolve(args.file)
    inputs.append(path)
    A, _ = _load_dga(path, _ring(args.ring))
    _require_d2(A)
    return {"dga": _dga_report(A)}, _dga_text(A)


def cmd_augs(args, inputs):
    path = _resolve(args.file)
    inputs.append(path)
    if args.fillings:
        A, _ = _load_dga(path, _ring(args.ring))
        rows, text = [], []
        for ref in args.fillings:
            rp = _resolve(ref)
            inputs.append(rp)
            res = au.filling_augmentation(au.load_recipe(rp), A.ring, A)
            eps = res.augmentation
            steps = [f"{s.kind} {s.chord or ''}".strip() for s in res.steps]
            rows.append({"recipe": rp.name, "steps": steps, "values": eps.support()})
            text.append(f"{rp.name}: {' ; '.join(steps)}\n  {eps.support()}")
        return {"ring": A.ring.name, "fillings": rows}, "\n".join(text)
    ring = _ring(f"Z/{args.field}" if args.field else args.ring)
    A, _ = _load_dga(path, ring)
    augs = au.enumerate_augmentations(A)
    vals = [e.support() for e in augs]
    text = [f"{len(vals)} augmentations over {ring.name}"] + [f"  {v}" for v in vals]
    return {"ring": ring.name, "count": len(vals), "augmentations": vals}, "\n".join(text)


def _spec(args, inputs, n=None):
    path = _resolve(args.spec)
    inputs.append(path)
    spec = gl.load_spec(path, _ring(args.ring) if args.ring else None)
    if n is not None:
        spec = gl.GluedSpec(spec.base, spec.eps_F, spec.eps_G, n, spec.name)
    return spec


def cmd_glue(args, inputs):
    spec = _spec(args, inputs)
    if spec.spin_n is not None:
        spec = gl.GluedSpec(spec.base, spec.eps_F, spec.eps_G, None, spec.name)
    A = gl.glue(spec)
    return {"dga": _dga_report(A)}, _dga_text(A)


def cmd_spin(args, inputs):
    spec = _spec(args, inputs, args.n)
    if spec.spin_n is None:
        raise ValueError("give --n or a spec with spin_n")
    A = gl.spin(spec)
    return {"dga": _dga_report(A), "spin_n": spec.spin_n}, _dga_text(A) + f"\n  (n = {spec.spin_n})"


def cmd_certify(args, inputs):
    path = _resolve(args.file)
    inputs.append(path)
    A, _ = _load_dga(path, _ring(args.ring))
    _require_d2(A)
    v = ce.certify(A, args.max_len)
    text = f"{A.name}: {v.status} ({v.reason})"
    if v.witness is not None:
        text += f"\n  witness: {v.witness.element}"
    return {"dga": A.name, **v.to_json()}, text


def cmd_linhom(args, inputs):
    path = _resolve(args.file)
    inputs.append(path)
    A, D = _load_dga(path, _ring(args.ring))
    eps = _load_aug(args.aug, A, D)
    H = ce.linearized_homology(A, eps)
    lines = [f"linearized homology of {A.name} at {eps.name or args.aug} over {A.ring.name}",
             "  degree  rank  torsion"]
    for k, r in sorted(H.ranks.items()):
        lines.append(f"  {k:>6}  {r:>4}  {H.torsion.get(k) or ''}")
    return {"dga": A.name, "augmentation": eps.support(), **H.to_json()}, "\n".join(lines)


def cmd_paper(args, inputs):
    """9_46: two fillings, then glued and spun DGAs for each pair of fillings."""
    report, text = {}, []
    kpath = _resolve(args.knot)
    inputs.append(kpath)
    D = dg.parse(kpath.read_text(), name="k946")
    K = ch.build_dga(D)
    _require_d2(K)
    chords = {}
    for c in ("c0", "c1"):
        chords[c] = {"degree": K.degree(c), "d": K.d(c).to_json()}
        if K.degree(c) != 0 or not K.d(c).is_zero():
            raise Mismatch(f"{c} should have degree 0 and dc = 0")
    report["knot"] = {"generators": len(K.generators), "contractible": chords}
    text.append(f"K: {len(K.generators)} generators; |c0| = |c1| = 0, dc0 = dc1 = 0")

    eps = {}
    for key, ref in (("eps0", args.eps0), ("eps1", args.eps1)):
        p = _resolve(ref)
        inputs.append(p)
        if p.suffix == ".steps":
            e = au.filling_augmentation(au.load_recipe(p), K.ring, K).augmentation
        else:
            e = au.Augmentation.from_json(json.loads(p.read_text()))
        au.check_augmentation(e, K)
        eps[key] = au.Augmentation(e.values, K.ring, key)
        H = ce.linearized_homology(K, eps[key])
        report[key] = {"source": p.name, "values": eps[key].support(),
                       "linearized_ranks": H.to_json()["ranks"]}
        text.append(f"{key} from {p.name}: c0 -> {eps[key]('c0')}, c1 -> {eps[key]('c1')}; "
                    f"linearized homology {H.nonzero()}")

    Darc = dg.as_arc(D)
    Aarc = ch.build_dga(Darc)
    _require_d2(Aarc)
    arc = {k: au.arc_augmentation(e, Darc) for k, e in eps.items()}

    expected = {("eps0", "eps1"): "trivial", ("eps0", "eps0"): "nontrivial",
                ("eps1", "eps1"): "nontrivial"}
    rows, bad = [], []
    for (f, g), want in expected.items():
        glued = gl.glue(gl.GluedSpec(K, eps[f], eps[g], None, f"glued({f},{g})"))
        spun = gl.spin(gl.GluedSpec(Aarc, arc[f], arc[g], args.n, f"spun({f},{g}) n={args.n}"))
        for label, A in (("glued", glued), ("spun", spun)):
            _require_d2(A)
            v = ce.certify(A, args.max_len, search_augmentations=False)
            rows.append({"pair": [f, g], "dga": label, "expected": want, **v.to_json()})
            mark = "ok" if v.status == want else "MISMATCH"
            text.append(f"{label:>5}({f},{g}): {v.status:<12} expected {want:<10} {mark}")
            if v.status != want:
                bad.append(f"{label}({f},{g})")
    report["spin_n"] = args.n
    report["verdicts"] = rows
    if bad:
        report["mismatches"] = bad
    return report, "\n".join(text), bad


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="legdga", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock time (reports are then no longer reproducible)")
    sub = ap.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add(name, **kw):
        return _add(name, parents=[common], **kw)

    p = add("dga", help="generators, degrees and differential of a front")
    p.add_argument("file")
    p.add_argument("--ring", default="Z")

    p = add("augs", help="augmentations over a finite field, or from filling recipes")
    p.add_argument("file")
    p.add_argument("--field", type=int)
    p.add_argument("--fillings", nargs="+", metavar="RECIPE")
    p.add_argument("--ring", default="Z")

    p = add("glue", help="DGA of two fillings glued along the knot")
    p.add_argument("spec")
    p.add_argument("--ring")

    p = add("spin", help="DGA of the spun sphere")
    p.add_argument("spec")
    p.add_argument("--n", type=int, help="spin dimension, overriding spin_n in the spec")
    p.add_argument("--ring")

    p = add("certify", help="trivial / nontrivial verdict for a DGA")
    p.add_argument("file", help="a .front file, a DGA .json file or a glue/spin spec")
    p.add_argument("--max-len", type=int, default=ce.DEFAULT_MAX_LEN,
                   help="longest words tried for a unit witness")
    p.add_argument("--ring", default="Z")

    p = add("linhom", help="linearized homology at an augmentation")
    p.add_argument("file")
    p.add_argument("--aug", required=True, help="augmentation .json file or filling recipe")
    p.add_argument("--ring", default="Z")

    p = add("paper", help="the 9_46 computation end to end")
    p.add_argument("--n", type=int, default=2, help="spin dimension (default 2)")
    p.add_argument("--knot", default="k946.front", help="front file of the knot")
    p.add_argument("--eps0", default="f0.steps", help="recipe or augmentation file for the first filling")
    p.add_argument("--eps1", default="f1.steps", help="recipe or augmentation file for the second filling")
    p.add_argument("--max-len", type=int, default=ce.DEFAULT_MAX_LEN,
                   help="longest words tried for a unit witness")
    return ap


COMMANDS = {"dga": cmd_dga, "augs": cmd_augs, "glue": cmd_glue, "spin": cmd_spin,
            "certify": cmd_certify, "linhom": cmd_linhom, "paper": cmd_paper}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    inputs: list[Path] = []
    t0 = time.perf_counter()
    code, bad = OK, []
    try:
        out = COMMANDS[args.command](args, inputs)
        if len(out) == 3:
            report, text, bad = out
        else:
            report, text = out
        if bad:
            code = MISMATCH
    except (Internal, ch.SignError, gl.DSquaredError) as e:
        print(f"legdga: internal consistency failure: {e}", file=sys.stderr)
        return INTERNAL
    except Mismatch as e:
        print(f"legdga: {e}", file=sys.stderr)
        return MISMATCH
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"legdga: {type(e).__name__}: {e}", file=sys.stderr)
        return INPUT
    if args.json:
        full = {"schema": SCHEMA, "version": __version__, "command": sys_argv(argv),
                "inputs": {p.name: _sha(p) for p in inputs}, **report}
        if args.timings:
            full["seconds"] = round(time.perf_counter() - t0, 3)
        print(json.dumps(full, indent=2, sort_keys=True))
    else:
        print(text)
        if args.timings:
            print(f"({time.perf_counter() - t0:.2f} s)")
    return code


def sys_argv(argv):
    return ["legdga"] + list(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
