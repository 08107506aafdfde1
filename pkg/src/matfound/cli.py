"""Command-line front end: ``matfound <verb> [options] <matroid>``.

Elements are numbered from 0 everywhere in the command line, in files, and
in output.  Flats on the command line are comma-separated (``0,1``); the
empty flat is written ``-`` and the ground set ``E``.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import catalog
from .constellation import (
    CutError,
    PathError,
    classify_elementary,
    constellation,
    extend_by_cut,
    find_tutte_path,
    principal_cut,
    trivial_cut,
    tutte_graph,
    validate_modular_cut,
)
from .foundation import (
    ClassificationError,
    FoundationError,
    check_R_relations,
    count_representations,
    foundation,
    sigma_orbit,
    theta,
    universal_cross_ratio,
)
from .homology import homology_in_degree, search_l3, sigma_complex
from .matroid import Matroid, MatroidError, from_bases
from .pasture import DISPLAY, PastureError, hom_count, named, parse_pasture

DOMAIN_ERRORS = (
    (CutError, "cut"),
    (PathError, "path"),
    (ClassificationError, "classification"),
    (FoundationError, "foundation"),
    (PastureError, "pasture"),
    (MatroidError, "matroid"),
)


class DomainError(click.ClickException):
    """Exit status 1 with a one-line ``error: <kind>: <message>``."""

    exit_code = 1

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind

    def show(self, file=None):
        click.echo(f"error: {self.kind}: {self.message}", err=True)


# -- text formats ------------------------------------------------------------


def format_flat(F) -> str:
    return ",".join(str(e) for e in sorted(F)) or "-"


def parse_flat(text: str, M: Matroid) -> frozenset[int]:
    text = text.strip()
    if text == "E":
        return M.ground
    if text in ("-", ""):
        return frozenset()
    try:
        F = frozenset(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise DomainError("matroid", f"bad element list {text!r}") from None
    if any(not 0 <= e < M.n for e in F):
        raise DomainError("matroid", f"element out of range in {text!r}")
    return F


def parse_matroid(text: str, name: str | None = None) -> Matroid:
    """First line ``n r``, then one basis per line (whitespace-separated elements)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise DomainError("matroid", "empty matroid file")
    try:
        n, r = (int(t) for t in lines[0].split())
        bases = [[int(t) for t in ln.replace(",", " ").split()] for ln in lines[1:]]
    except ValueError:
        raise DomainError("matroid", "malformed matroid file") from None
    if r == 0 and not bases:
        bases = [[]]
    if any(len(B) != r for B in bases):
        raise DomainError("matroid", f"every basis must have {r} elements")
    if any(not 0 <= e < n for B in bases for e in B):
        raise DomainError("matroid", "basis element out of range")
    return from_bases(n, bases, name)


def format_matroid(M: Matroid) -> str:
    lines = [f"{M.n} {M.r}"]
    lines += [" ".join(str(e) for e in B) for B in sorted(tuple(sorted(B)) for B in M.bases)]
    return "\n".join(lines)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DomainError("file", f"cannot read {path}: {exc.strerror}") from None


def load_matroid(source: str, force_file: bool = False) -> Matroid:
    if not force_file:
        try:
            return catalog.get(source)
        except KeyError:
            pass
    if not Path(source).is_file():
        raise DomainError("file", f"no catalog matroid or file named {source}")
    return parse_matroid(_read(source), Path(source).stem)


def load_cut(spec: str | None, M: Matroid):
    if spec is None or spec == "trivial":
        return trivial_cut(M)
    if spec.startswith("principal:"):
        F = parse_flat(spec[len("principal:"):], M)
        if not M.is_flat(F):
            raise DomainError("cut", f"{format_flat(F)} is not a flat")
        return principal_cut(M, F)
    flats = [parse_flat(ln, M) for ln in _data_lines(_read(spec))]
    return validate_modular_cut(M, flats)


def load_marks(path: str | None, M: Matroid) -> list[frozenset[int]]:
    if path is None:
        return []
    return [parse_flat(ln, M) for ln in _data_lines(_read(path))]


def _data_lines(text: str) -> list[str]:
    out = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            out.append(ln)
    return out


def _emit(ctx: click.Context, payload: dict, text: str) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        click.echo(text)


def _flats_json(fs) -> list[list[int]]:
    return [sorted(F) for F in fs]


# -- command group -----------------------------------------------------------


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (DomainError, click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except tuple(cls for cls, _ in DOMAIN_ERRORS) as exc:
            kind = next(k for cls, k in DOMAIN_ERRORS if isinstance(exc, cls))
            raise DomainError(kind, str(exc).splitlines()[0] if str(exc) else type(exc).__name__) from None
        except AssertionError as exc:
            raise DomainError("path", str(exc) or "assertion failed") from None


@click.group(cls=_Group, context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--json", "as_json", is_flag=True, help="Emit JSON with stable keys.")
@click.pass_context
def main(ctx, as_json):
    """Exact computations with matroids, constellations and foundations."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json


matroid_arg = click.argument("matroid")
file_opt = click.option("--file", "force_file", is_flag=True, help="Read MATROID as a file even if it names a catalog entry.")
cut_opt = click.option("--cut", "cut_spec", default=None, help="trivial, principal:<flat>, or a file with one flat per line.")
marks_opt = click.option("--marks", "marks_path", default=None, help="File with one marked corank-2 flat per line.")
json_opt = click.option("--json", "as_json", is_flag=True, help="Emit JSON with stable keys.")


def _ctx_json(ctx, as_json):
    if as_json:
        ctx.obj["json"] = True


def _tau(matroid, force_file, cut_spec, marks_path):
    M = load_matroid(matroid, force_file)
    return constellation(M, load_cut(cut_spec, M), load_marks(marks_path, M))


@main.command()
@matroid_arg
@file_opt
@json_opt
@click.pass_context
def flats(ctx, matroid, force_file, as_json):
    """List the flats by rank."""
    _ctx_json(ctx, as_json)
    M = load_matroid(matroid, force_file)
    by_rank = {k: M.flats_of_rank(k) for k in range(M.r + 1)}
    text = "\n".join(f"rank {k}: " + " ".join("{" + format_flat(F) + "}" for F in fs) for k, fs in by_rank.items())
    _emit(ctx, {"n": M.n, "r": M.r, "flats": {str(k): _flats_json(fs) for k, fs in by_rank.items()}}, text)


@main.command("tutte-graph")
@matroid_arg
@file_opt
@cut_opt
@marks_opt
@click.option("--on", "on", default=None, help="Only hyperplanes containing this flat.")
@json_opt
@click.pass_context
def tutte_graph_cmd(ctx, matroid, force_file, cut_spec, marks_path, on, as_json):
    """Hyperplanes off the cut, joined through indecomposable corank-2 flats."""
    _ctx_json(ctx, as_json)
    tau = _tau(matroid, force_file, cut_spec, marks_path)
    F = None if on is None else parse_flat(on, tau.matroid)
    G = tutte_graph(tau, F)
    comps = G.components()
    lines = [f"vertices: {len(G.vertices)}"]
    lines += [f"  {i}: {{{format_flat(H)}}}" for i, H in enumerate(G.vertices)]
    lines.append(f"edges: {len(G.edges)}")
    lines += [f"  {i} - {j} via {{{format_flat(L)}}}" for (i, j), L in sorted(G.edges.items())]
    lines.append(f"connected: {'yes' if G.connected else 'no'}")
    lines.append(f"components: {len(comps)}")
    payload = {
        "vertices": _flats_json(G.vertices),
        "edges": [[i, j, sorted(L)] for (i, j), L in sorted(G.edges.items())],
        "connected": G.connected,
        "components": [_flats_json(c) for c in comps],
    }
    _emit(ctx, payload, "\n".join(lines))


@main.command("tutte-path")
@matroid_arg
@file_opt
@cut_opt
@marks_opt
@click.option("--on", "on", default="-", show_default=True, help="Indecomposable flat contained in every hyperplane.")
@click.option("--start", "start", required=True, help="First hyperplane.")
@click.option("--end", "end", required=True, help="Last hyperplane.")
@json_opt
@click.pass_context
def tutte_path_cmd(ctx, matroid, force_file, cut_spec, marks_path, on, start, end, as_json):
    """A shortest Tutte path between two hyperplanes off the cut."""
    _ctx_json(ctx, as_json)
    tau = _tau(matroid, force_file, cut_spec, marks_path)
    M = tau.matroid
    path = find_tutte_path(tau, parse_flat(on, M), parse_flat(start, M), parse_flat(end, M))
    _emit(ctx, {"path": _flats_json(path)}, " -> ".join("{" + format_flat(H) + "}" for H in path))


@main.command("classify-path")
@matroid_arg
@file_opt
@cut_opt
@marks_opt
@click.option("--path", "path", required=True, help="Closed path, hyperplanes separated by ';'.")
@json_opt
@click.pass_context
def classify_path_cmd(ctx, matroid, force_file, cut_spec, marks_path, path, as_json):
    """Match a closed Tutte path against the elementary templates."""
    _ctx_json(ctx, as_json)
    tau = _tau(matroid, force_file, cut_spec, marks_path)
    hs = [parse_flat(h, tau.matroid) for h in path.split(";")]
    c = classify_elementary(tau, hs)
    if c is None:
        _emit(ctx, {"elementary": False}, "not elementary")
        return
    payload = {
        "elementary": True,
        "kind": c.kind,
        "type": c.type,
        "extended_type": c.extended_type,
        "bottom": sorted(c.bottom),
        "alternatives": list(c.alternatives),
    }
    text = f"type {c.type} ({c.extended_type}), kind {c.kind}, bottom {{{format_flat(c.bottom)}}}"
    if c.alternatives:
        text += "\nalso matches types " + " ".join(str(t) for t in c.alternatives)
    _emit(ctx, payload, text)


@main.command()
@matroid_arg
@file_opt
@cut_opt
@json_opt
@click.pass_context
def extend(ctx, matroid, force_file, cut_spec, as_json):
    """Single-element extension by a modular cut; prints the extended matroid."""
    _ctx_json(ctx, as_json)
    M = load_matroid(matroid, force_file)
    if cut_spec is None:
        raise click.UsageError("extend needs --cut")
    N = extend_by_cut(M, load_cut(cut_spec, M))
    _emit(ctx, {"n": N.n, "r": N.r, "bases": sorted(sorted(B) for B in N.bases)}, format_matroid(N))


@main.command()
@matroid_arg
@file_opt
@cut_opt
@marks_opt
@click.option("--sigma", "level", type=click.IntRange(0, 2), default=2, show_default=True, help="Level of the complex.")
@click.option("--top", type=click.IntRange(0), default=2, show_default=True, help="Highest degree reported.")
@json_opt
@click.pass_context
def homology(ctx, matroid, force_file, cut_spec, marks_path, level, top, as_json):
    """Integral homology of the complex of admitted subconstellations."""
    _ctx_json(ctx, as_json)
    tau = _tau(matroid, force_file, cut_spec, marks_path)
    K = sigma_complex(tau, level)
    hs = [homology_in_degree(K, k) for k in range(top + 1)]
    payload = {
        "sigma": level,
        "f_vector": K.f_vector(),
        "homology": {f"H{h.degree}": {"rank": h.rank, "torsion": list(h.torsion)} for h in hs},
    }
    _emit(ctx, payload, "\n".join(f"H{h.degree} = {h}" for h in hs))


@main.command()
@matroid_arg
@file_opt
@cut_opt
@marks_opt
@click.option("--sigma", "level", type=click.IntRange(0, 2), default=2, show_default=True, help="Level of the complex.")
@json_opt
@click.pass_context
def sigma(ctx, matroid, force_file, cut_spec, marks_path, level, as_json):
    """Faces of the complex of admitted subconstellations, one per line."""
    _ctx_json(ctx, as_json)
    tau = _tau(matroid, force_file, cut_spec, marks_path)
    K = sigma_complex(tau, level)
    faces = sorted(K.faces, key=lambda f: (len(f), f))
    payload = {"vertices": list(K.labels), "faces": [list(f) for f in faces], "f_vector": K.f_vector()}
    _emit(ctx, payload, f"f-vector: {' '.join(map(str, K.f_vector()))}\n{K.dump()}")


@main.command("search-l3")
@click.option("--max-atoms", type=click.IntRange(1, 5), default=4, show_default=True)
@json_opt
@click.pass_context
def search_l3_cmd(ctx, max_atoms, as_json):
    """Classes with nonvanishing homology below them, up to a number of atoms."""
    _ctx_json(ctx, as_json)
    found = search_l3(max_atoms)
    rows = []
    for c in found:
        m = c.template
        rows.append({
            "class": c.identifier,
            "via": c.via,
            "atoms": m.matroid.n,
            "rank": m.matroid.r,
            "h1": None if not c.homology else str(c.homology[1]),
            "h2": None if c.h2 is None else str(c.h2),
        })
    lines = []
    for row in rows:
        extra = "" if row["h2"] is None else f"  H1 = {row['h1']}  H2 = {row['h2']}"
        lines.append(f"{row['class']}  rank {row['rank']}, {row['atoms']} atoms, {row['via']}{extra}")
    _emit(ctx, {"classes": rows}, "\n".join(lines))


def _foundation_options(f):
    for opt in (
        click.option("--paranoid", is_flag=True, help="Also generate the redundant relation instances."),
        click.option("--forest", "strategy", type=click.Choice(["bfs", "dfs", "random"]), default="bfs", show_default=True),
        click.option("--seed", type=int, default=0, show_default=True, help="Seed for --forest random."),
    ):
        f = opt(f)
    return f


@main.command("foundation")
@matroid_arg
@file_opt
@_foundation_options
@json_opt
@click.pass_context
def foundation_cmd(ctx, matroid, force_file, paranoid, strategy, seed, as_json):
    """Foundation report: presentation, cross-ratios, recognition and flags."""
    _ctx_json(ctx, as_json)
    M = load_matroid(matroid, force_file)
    rep = foundation(M, strategy, seed, paranoid)
    if not ctx.obj["json"]:
        click.echo(rep.text())
        return
    P = rep.pasture
    payload = {
        "matrix": rep.matrix.text().splitlines(),
        "relations": len(rep.relations),
        "units": P.unit_group_str(),
        "pasture": P.text().splitlines(),
        "cross_ratios": _cross_ratio_rows(rep),
        "recognized": rep.recognition.name,
        "flags": rep.flags.as_dict(),
    }
    _emit(ctx, payload, "")


def _cross_ratio_rows(rep) -> list[dict]:
    out, seen = [], set()
    hs = rep.matrix.hyperplanes
    for idx in theta(rep.matroid, nondegenerate=True):
        key = sigma_orbit(idx)
        if key in seen:
            continue
        seen.add(key)
        out.append({"hyperplanes": [sorted(hs[h]) for h in key], "value": rep.pasture.word(universal_cross_ratio(rep, key))})
    return out


@main.command("cross-ratios")
@matroid_arg
@file_opt
@json_opt
@click.pass_context
def cross_ratios_cmd(ctx, matroid, force_file, as_json):
    """Universal cross-ratios, one per symmetry orbit of modular quadruples."""
    _ctx_json(ctx, as_json)
    rep = foundation(load_matroid(matroid, force_file))
    rows = _cross_ratio_rows(rep)
    text = "\n".join(
        "[{} {} | {} {}] = {}".format(*("{" + format_flat(H) + "}" for H in row["hyperplanes"]), row["value"]) for row in rows
    )
    _emit(ctx, {"cross_ratios": rows}, text or "no modular quadruples")


@main.command("check-relations")
@matroid_arg
@file_opt
@json_opt
@click.pass_context
def check_relations_cmd(ctx, matroid, force_file, as_json):
    """Verify the cross-ratio relations inside the computed foundation."""
    _ctx_json(ctx, as_json)
    res = check_R_relations(load_matroid(matroid, force_file))
    failures = sum(f for _, f in res.values())
    lines = [f"{k}: {n} instances, {f} failures" for k, (n, f) in res.items()]
    lines.append("ok" if not failures else f"FAILED: {failures}")
    _emit(ctx, {"relations": {k: {"instances": n, "failures": f} for k, (n, f) in res.items()}, "ok": not failures},
          "\n".join(lines))
    if failures:
        ctx.exit(1)


def _field(q: int):
    try:
        return named(f"F{q}")
    except (KeyError, PastureError) as exc:
        raise DomainError("pasture", f"no field with {q} elements available: {exc}") from None


@main.command("count-reps")
@matroid_arg
@file_opt
@click.option("--field", "q", type=int, required=True, help="Field size q (at most 9).")
@json_opt
@click.pass_context
def count_reps_cmd(ctx, matroid, force_file, q, as_json):
    """Rescaling classes of representations over F_q, counted two ways."""
    _ctx_json(ctx, as_json)
    M = load_matroid(matroid, force_file)
    c = count_representations(M, _field(q))
    text = f"{c.hom}\nhom count: {c.hom}\nbrute force: {c.brute_force}\nagree: {'yes' if c.agree else 'no'}"
    _emit(ctx, {"field": q, "hom": c.hom, "brute_force": c.brute_force, "agree": c.agree}, text)
    if not c.agree:
        ctx.exit(1)


@main.command("classify")
@matroid_arg
@file_opt
@json_opt
@click.pass_context
def classify_cmd(ctx, matroid, force_file, as_json):
    """Regular, binary, ternary, wlum, orientable and Dressian shape."""
    _ctx_json(ctx, as_json)
    rep = foundation(load_matroid(matroid, force_file))
    flags = rep.flags.as_dict()
    lines = [f"recognized: {rep.recognition.name}"] + [f"{k}: {_show(v)}" for k, v in flags.items()]
    _emit(ctx, {"recognized": rep.recognition.name, **flags}, "\n".join(lines))


def _show(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, dict):
        return " ".join(f"{k}={val}" for k, val in v.items())
    if isinstance(v, list):
        return " ".join(v) or "none"
    return str(v)


def load_pasture(source: str):
    """Named pasture, then the foundation of a catalog matroid, then a file."""
    try:
        return named(source)
    except KeyError:
        pass
    try:
        return foundation(catalog.get(source)).pasture
    except KeyError:
        pass
    if not Path(source).is_file():
        raise DomainError("file", f"no pasture, catalog matroid or file named {source}")
    text = _read(source)
    if any(ln.split("#", 1)[0].strip().split(":", 1)[0].strip() in ("gens", "mul", "add", "name") for ln in text.splitlines()):
        return parse_pasture(text, Path(source).stem)
    return foundation(parse_matroid(text, Path(source).stem)).pasture


@main.command("pasture-hom")
@click.argument("source")
@click.option("--target", required=True, help="Target pasture name (F2, F3, F4, ..., K, S, U, D, H, V) or file.")
@json_opt
@click.pass_context
def pasture_hom_cmd(ctx, source, target, as_json):
    """Number of pasture morphisms SOURCE -> TARGET.

    SOURCE may name a pasture, a catalog matroid (its foundation is used),
    or a file holding either.
    """
    _ctx_json(ctx, as_json)
    P, Q = load_pasture(source), load_pasture(target)
    n = hom_count(P, Q)
    label = DISPLAY.get(Q.name, Q.name) if Q.name else target
    _emit(ctx, {"source": source, "target": label, "count": n}, str(n))


def run(argv: list[str]) -> int:
    """Run one command; returns the exit status instead of exiting."""
    try:
        main.main(args=list(argv), prog_name="matfound", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
