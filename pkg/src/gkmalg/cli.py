"""Command-line front end.

Every option can also come from a flat ``key = value`` config file given by
``--config``; flags on the command line win.  Exit codes: 0 success, 1 a
verification failed or a representation was rejected, 2 usage error.
Set GKMALG_THREADS to control the number of worker threads.
"""

from __future__ import annotations

import argparse
import re
import sys
import types
from pathlib import Path

from . import io as gio

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

INT_KEYS = {"n", "cutoff", "exactness", "scan_depth", "l0", "max_triples", "round_digits", "depth", "seed"}
FLOAT_KEYS = {"tol", "node_budget"}
INT_LIST_KEYS = {"p"}
FLOAT_LIST_KEYS = {"c"}
STR_KEYS = {"manifold", "mode", "algebra", "out", "sub", "tensors", "x", "y", "format"}
ALL_KEYS = INT_KEYS | FLOAT_KEYS | INT_LIST_KEYS | FLOAT_LIST_KEYS | STR_KEYS

DEFAULTS = {
    "manifold": "s2", "n": None, "mode": None, "algebra": "su2", "cutoff": 2, "exactness": None,
    "tol": 1e-10, "out": None, "scan_depth": 10, "p": None, "c": None, "sub": None, "l0": None,
    "max_triples": 20000, "round_digits": None, "tensors": None, "x": None, "y": None,
    "node_budget": 1e7, "depth": 5, "seed": 0, "format": "table",
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration


def _convert(key: str, raw):
    if raw is None or not isinstance(raw, str):
        return raw
    text = raw.strip()
    try:
        if key in INT_KEYS:
            return int(text)
        if key in FLOAT_KEYS:
            return float(text)
        if key in INT_LIST_KEYS:
            return [int(t) for t in re.split(r"[,\s]+", text.strip("[]() ")) if t]
        if key in FLOAT_LIST_KEYS:
            return [float(t) for t in re.split(r"[,\s]+", text.strip("[]() ")) if t]
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {raw!r}") from exc
    return text


def read_config(path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file not found: {path}")
    out = {}
    for no, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in ALL_KEYS:
            raise UsageError(f"{path}:{no}: unknown key {key!r}")
        out[key] = _convert(key, val)
    return out


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(read_config(args.config))
    for key in ALL_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = _convert(key, val)
    if cfg["cutoff"] is None or cfg["cutoff"] < 0:
        raise UsageError("cutoff must be a non-negative integer")
    if cfg["manifold"] and cfg["manifold"].lower().startswith("torus") and cfg["n"] is None:
        tail = cfg["manifold"][5:]
        cfg["n"] = int(tail) if tail.isdigit() else 1
    return cfg


def _public(cfg: dict) -> dict:
    """Config entries that determine results (paths and formatting excluded)."""
    return {k: v for k, v in sorted(cfg.items()) if k not in ("out", "tensors", "format")}


def _emit(cfg: dict, text: str) -> None:
    if cfg.get("out"):
        Path(cfg["out"]).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# shared builders


def _basis(cfg: dict):
    from .harmonics import build_basis
    try:
        return build_basis(cfg["manifold"], cfg["cutoff"], n=cfg["n"], mode=cfg["mode"])
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc


def _grid(basis, degree: int, cfg: dict):
    from .manifolds import build_grid
    try:
        return build_grid(basis.manifold, degree, node_budget=int(cfg["node_budget"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _lie(cfg: dict):
    from .lie_core import build_algebra
    try:
        return build_algebra(cfg["algebra"])
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc


def _exactness(cfg: dict) -> int:
    need = 3 * cfg["cutoff"]
    ex = need if cfg["exactness"] is None else cfg["exactness"]
    if ex < need:
        raise UsageError(f"grid exactness {ex} is below 3 * cutoff = {need}")
    return ex


def _algebra(cfg: dict, basis=None):
    from .coupling import eta_pairing, structure_coefficients
    from .gkm import CocycleSpec, assemble
    basis = basis or _basis(cfg)
    lie = _lie(cfg)
    if cfg.get("tensors"):
        d = Path(cfg["tensors"])
        try:
            c = gio.read_structure_tensor(d / "c.jsonl", basis)
            eta = gio.read_eta(d / "eta.jsonl", basis)
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot load tensors from {d}: {exc}") from exc
    else:
        grid = _grid(basis, _exactness(cfg), cfg)
        c = structure_coefficients(basis, grid, cfg["cutoff"])
        eta = eta_pairing(basis, grid)
    return assemble(lie, basis, c, eta, CocycleSpec.default(basis.manifold, basis))


# ---------------------------------------------------------------------------
# commands


def cmd_basis(cfg: dict) -> int:
    basis = _basis(cfg)
    man = dict(basis.manifest)
    man["config"] = _public(cfg)
    _emit(cfg, gio.dumps(man, indent=1))
    print(f"{len(basis)} indices", file=sys.stderr)
    return EXIT_OK


def cmd_coeffs(cfg: dict) -> int:
    from .coupling import d_coefficients, eta_pairing, structure_coefficients
    basis = _basis(cfg)
    ex = _exactness(cfg)
    grid = _grid(basis, ex, cfg)
    out = Path(cfg["out"] or "coeffs")
    out.mkdir(parents=True, exist_ok=True)
    extra = {"config_hash": gio.config_hash(_public(cfg))}
    digits = cfg["round_digits"]
    c = structure_coefficients(basis, grid, cfg["cutoff"])
    eta = eta_pairing(basis, grid)
    files = {"c": gio.write_tensor(out / "c.jsonl", c, extra, digits).name,
             "eta": gio.write_tensor(out / "eta.jsonl", eta, extra, digits).name}
    for A, ax in enumerate(basis.manifold.axes):
        d = d_coefficients(basis, grid, A)
        files[f"d_{ax.name}"] = gio.write_tensor(out / f"d_{ax.name}.jsonl", d, extra, digits).name
    (out / "manifest.json").write_text(gio.dumps(basis.manifest, indent=1) + "\n", encoding="utf-8")
    summary = {"files": files, "entries": {"c": len(c), "eta": len(eta.forward)}, **extra,
               "manifest_hash": basis.manifest_hash, "degree_cap": cfg["cutoff"], "exactness": ex}
    sys.stdout.write(gio.dumps(summary) + "\n")
    return EXIT_OK


def verification_suite(cfg: dict) -> list[dict]:
    import numpy as np
    from .coupling import closure_defect, eta_from_conjugation
    from .gkm import (verify_antisymmetry, verify_cocycle, verify_grading, verify_jacobi,
                      verify_killing_invariance)
    from .harmonics import apply_cartan_exact, laplace_eigenvalue, laplacian_fd, sample_points

    tol = cfg["tol"]
    basis = _basis(cfg)
    M = basis.manifold
    sector = f"{M.name} {cfg['algebra']} cutoff {cfg['cutoff']}"
    checks = []

    def add(name, residual, ok=None, limit=tol):
        checks.append({"check": name, "sector": sector, "residual": float(residual),
                       "pass": bool(residual <= limit if ok is None else ok)})

    grid = _grid(basis, 2 * cfg["cutoff"], cfg)
    V = np.array([p.evaluate(grid.ambient) for p in basis.polys])
    G = (V.conj() * grid.weights) @ V.T
    add("orthonormality", np.abs(G - np.eye(len(basis))).max())

    pts = sample_points(M, 40)
    worst = 0.0
    for k in range(len(basis)):
        val = basis.polys[k].evaluate(M.ambient_values(pts))
        for j in range(basis.r):
            res = apply_cartan_exact(basis, basis.indices[k], j, pts) - basis.eigen[k, j] * val
            worst = max(worst, float(np.abs(res).max()))
    add("cartan_eigenvalues", worst)

    worst = 0.0
    for k in range(len(basis)):
        _, lap, val = laplacian_fd(basis, basis.indices[k])
        worst = max(worst, float(np.abs(lap - laplace_eigenvalue(basis, basis.indices[k]) * val).max()) / max(1.0, float(np.abs(val).max())))
    add("laplacian", worst, limit=1e-8)

    gkm = _algebra(cfg, basis)
    add("hermiticity", 0.0 if gkm.hermiticity.ok else 1.0)
    ref = eta_from_conjugation(basis)
    add("eta_conjugation", max(abs(gkm.eta(i, j) - v) for i, j, v in ref.entries()))

    cgrid = _grid(basis, 2 * cfg["cutoff"], cfg)
    worst = 0.0
    n = len(basis)
    for i in range(n):
        for j in range(i, n):
            if gkm.c.closed(i, j):
                worst = max(worst, closure_defect(basis, cgrid, gkm.c, i, j))
    add("closure_defect", worst)

    mt = cfg["max_triples"]
    reps = [verify_jacobi(gkm, max_triples=mt, seed=cfg["seed"]), verify_antisymmetry(gkm, max_pairs=mt),
            *verify_cocycle(gkm, max_triples=mt, seed=cfg["seed"]),
            verify_killing_invariance(gkm, max_triples=mt, seed=cfg["seed"]), verify_grading(gkm)]
    for r in reps:
        r.tol = tol
        checks.append({"check": r.check, "sector": sector, "residual": float(r.residual), "pass": r.passed})
    return checks


def cmd_verify(cfg: dict) -> int:
    checks = verification_suite(cfg)
    ok = all(c["pass"] for c in checks)
    _emit(cfg, gio.dumps({"checks": checks, "pass": ok}, indent=1))
    for c in checks:
        if not c["pass"]:
            print(f"FAIL {c['check']}: residual {c['residual']:.3e}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_roots(cfg: dict) -> int:
    from .roots import classify, is_positive, sector_roots, simple_roots
    basis = _basis(cfg)
    lie = _lie(cfg)
    view = types.SimpleNamespace(lie=lie, basis=basis, r=basis.r)
    roots = sector_roots(view)
    rows = [{"root": x.to_json(), "class": classify(x), "positive": is_positive(x, lie), "norm": x.dot(x)}
            for x in roots]
    sr = simple_roots(view, depth=cfg["depth"])
    if cfg["format"] == "json":
        _emit(cfg, gio.dumps({"roots": rows, "simple_roots": sr.to_json()}, indent=1))
        return EXIT_OK
    lines = [f"{'alpha':>16} {'n':>16} {'class':>10} {'positive':>9} {'norm':>8}"]
    for x, r in zip(roots, rows):
        a = ",".join(f"{v:g}" for v in x.alpha)
        nn = ",".join(f"{v:g}" for v in x.n)
        lines.append(f"{a:>16} {nn:>16} {r['class']:>10} {str(r['positive']):>9} {r['norm']:8.4f}")
    if sr.present:
        lines.append("simple roots: " + "  ".join(repr(s) for s in sr.roots))
        lines.append("affine Cartan matrix: " + str(sr.cartan.tolist()))
        lines.append(f"positive roots decompose over them: {sr.decompositions_ok} ({sr.checked} checked)")
    else:
        lines.append("simple roots: absent")
        lines.append("witness: " + sr.witness["reason"])
        for w in sr.witness["family"]:
            lines.append("  " + "  ".join(f"{k}=(" + ",".join(f"{round(v, 12) + 0.0:.12g}" for v in w[k]) + ")" for k in ("alpha", "c", "n")))
    _emit(cfg, "\n".join(lines))
    return EXIT_OK


def cmd_unitarity(cfg: dict) -> int:
    from .unitarity import HighestWeightSpec, level_bound, unitarity_constraints
    lie = _lie(cfg)
    p = cfg["p"] if cfg["p"] is not None else [0] * lie.rank
    c = cfg["c"] if cfg["c"] is not None else [0.0]
    try:
        hw = HighestWeightSpec(tuple(p), tuple(c))
        rep = unitarity_constraints(lie, hw, cfg["scan_depth"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = rep.to_json()
    if len(c) == 1:
        x, bound, ok = level_bound(lie, p, c[0])
        out["level"] = {"x": x, "bound": bound, "pass": ok}
    _emit(cfg, gio.dumps(out, indent=1))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_labels(cfg: dict) -> int:
    from .labels import invariant_count, missing_labels, racah_counts
    lie = _lie(cfg)
    try:
        rep = missing_labels(lie, cfg["sub"], cfg["l0"]) if cfg["sub"] else racah_counts(lie)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = rep.to_json()
    out["invariant_count"] = invariant_count(lie)
    _emit(cfg, gio.dumps(out, indent=1))
    return EXIT_OK


GEN_RE = re.compile(r"^\s*(?:T(\d+)\s*[:\[]\s*([-\d,\s]*)\]?|([Dk])(\d+))\s*$")


def parse_generator(gkm, text: str):
    m = GEN_RE.match(text or "")
    if not m:
        raise UsageError(f"cannot parse generator {text!r}; use T<a>:<labels>, D<j> or k<j>")
    if m.group(1) is not None:
        a = int(m.group(1))
        labels = tuple(int(t) for t in re.split(r"[,\s]+", m.group(2).strip()) if t)
        if not 0 <= a < gkm.lie.dim:
            raise UsageError(f"T index {a} out of range for {gkm.lie.name}")
        if labels not in gkm.basis.position:
            raise UsageError(f"no basis function with labels {list(labels)}")
        return gkm.T(a, labels)
    j = int(m.group(4)) - 1
    if not 0 <= j < gkm.r:
        raise UsageError(f"{m.group(3)}{j + 1}: this algebra has {gkm.r} charges")
    return gkm.D(j) if m.group(3) == "D" else gkm.k(j)


def cmd_bracket(cfg: dict) -> int:
    from .gkm import TruncationError
    if not cfg["x"] or not cfg["y"]:
        raise UsageError("bracket needs --x and --y")
    gkm = _algebra(cfg)
    X, Y = parse_generator(gkm, cfg["x"]), parse_generator(gkm, cfg["y"])
    try:
        Z = gkm.bracket(X, Y)
    except TruncationError as exc:
        raise UsageError(str(exc)) from exc
    _emit(cfg, gio.dumps({"x": cfg["x"], "y": cfg["y"], "bracket": Z.to_json(gkm.basis)}, indent=1))
    return EXIT_OK


COMMANDS = {"basis": cmd_basis, "coeffs": cmd_coeffs, "verify": cmd_verify, "roots": cmd_roots,
            "unitarity": cmd_unitarity, "labels": cmd_labels, "bracket": cmd_bracket}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags override it")
    common.add_argument("--manifold", help="torus, torusN, s2, s3su2, s3so4, s5, s6")
    common.add_argument("--n", help="torus dimension")
    common.add_argument("--mode", help="s3so4 basis: Phi or Ynlm")
    common.add_argument("--algebra", help="su2, su3, so4, g2")
    common.add_argument("--cutoff", help="maximal harmonic degree")
    common.add_argument("--exactness", help="quadrature exactness degree (default 3 * cutoff)")
    common.add_argument("--node-budget", dest="node_budget", help="maximal number of quadrature nodes")
    common.add_argument("--tol", help="verification tolerance")
    common.add_argument("--out", help="output file (directory for coeffs)")
    common.add_argument("--seed", help="sampling seed for large sectors")

    parser = argparse.ArgumentParser(prog="gkmalg", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("basis", parents=[common], help="export a harmonic basis manifest")
    p = sub.add_parser("coeffs", parents=[common], help="compute c, eta and d tensors")
    p.add_argument("--round-digits", dest="round_digits", help="round exported values to this many decimals")
    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--tensors", help="directory with c.jsonl and eta.jsonl to verify instead of recomputing")
    p.add_argument("--max-triples", dest="max_triples", help="sample at most this many triples")
    p = sub.add_parser("roots", parents=[common], help="classify roots and find simple roots")
    p.add_argument("--depth", help="mode range for the r >= 2 witness")
    p.add_argument("--format", choices=["table", "json"])
    p = sub.add_parser("unitarity", parents=[common], help="unitarity constraints for a highest weight")
    p.add_argument("--p", help="Dynkin labels, comma separated")
    p.add_argument("--c", help="central charge values, comma separated")
    p.add_argument("--scan-depth", dest="scan_depth", help="scan |m_i| <= depth")
    p = sub.add_parser("labels", parents=[common], help="Casimir, internal and missing label counts")
    p.add_argument("--sub", help="subalgebra: so3 (in so4), su3 (in g2), or the algebra itself")
    p.add_argument("--l0", help="override the common-invariant count")
    p = sub.add_parser("bracket", parents=[common], help="bracket of two generators")
    p.add_argument("--x", help="generator: T<a>:<labels>, D<j> or k<j>")
    p.add_argument("--y", help="second generator")
    p.add_argument("--tensors", help="directory with c.jsonl and eta.jsonl")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"gkmalg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
